//! Unramified parameters of general spin groups and their transfer to `GL(2n)`.
//!
//! Characters are formal: a product of named unitary characters with integer
//! exponents times `| |^s`, `s` rational.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::root_datum::{Family, RootDatum};
use crate::scalar::{ScalarError, ScalarExpr};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SatakeError {
    #[error("parameter has {got} characters, expected {want}")]
    Length { got: usize, want: usize },
    #[error("datum does not match the parameter: {0}")]
    Mismatch(String),
    #[error("bad character spec `{0}`")]
    Spec(String),
    #[error("entry {0} is zero")]
    ZeroEntry(usize),
    #[error("non-integral exponent in the cocharacter path")]
    NonIntegral,
    #[error("{0}")]
    Scalar(#[from] ScalarError),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct UnramifiedCharacter {
    pub unitary: BTreeMap<String, i64>,
    pub s: Rational64,
}

impl UnramifiedCharacter {
    pub fn trivial() -> Self {
        Self::default()
    }

    /// `| |^s`.
    pub fn abs(s: Rational64) -> Self {
        UnramifiedCharacter { unitary: BTreeMap::new(), s }
    }

    /// `sym^k | |^s`.
    pub fn new(sym: &str, k: i64, s: Rational64) -> Self {
        let mut c = Self::abs(s);
        if k != 0 {
            c.unitary.insert(sym.to_string(), k);
        }
        c
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut u = self.unitary.clone();
        for (k, v) in &o.unitary {
            let e = u.entry(k.clone()).or_insert(0);
            *e += v;
        }
        u.retain(|_, v| *v != 0);
        UnramifiedCharacter { unitary: u, s: self.s + o.s }
    }

    pub fn inverse(&self) -> Self {
        UnramifiedCharacter { unitary: self.unitary.iter().map(|(k, v)| (k.clone(), -v)).collect(), s: -self.s }
    }

    pub fn pow(&self, k: i64) -> Self {
        let mut u: BTreeMap<String, i64> = self.unitary.iter().map(|(s, v)| (s.clone(), v * k)).collect();
        u.retain(|_, v| *v != 0);
        UnramifiedCharacter { unitary: u, s: self.s * Rational64::from_integer(k) }
    }

    pub fn unitary_trivial(&self) -> bool {
        self.unitary.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.unitary.is_empty() && self.s.is_zero()
    }

    /// `∏ χ_i^{c_i}`.
    pub fn product(chars: &[Self], exps: &[i64]) -> Self {
        chars.iter().zip(exps).fold(Self::trivial(), |acc, (c, &k)| acc.mul(&c.pow(k)))
    }

    /// Parses `μ^2@5/2`, `@1/3` (no unitary part) or `μ@-3/2`.
    pub fn parse(src: &str) -> Result<Self, SatakeError> {
        let bad = || SatakeError::Spec(src.to_string());
        let (sym, s) = src.trim().split_once('@').ok_or_else(bad)?;
        let s = parse_rational(s.trim()).ok_or_else(bad)?;
        let mut c = Self::abs(s);
        for factor in sym.split('*').map(str::trim).filter(|f| !f.is_empty() && *f != "1") {
            let (name, k) = match factor.split_once('^') {
                Some((n, k)) => (n.trim(), k.trim().parse::<i64>().map_err(|_| bad())?),
                None => (factor, 1),
            };
            if name.is_empty() || !name.chars().all(|ch| ch.is_alphanumeric() || ch == '_') {
                return Err(bad());
            }
            c = c.mul(&Self::new(name, k, Rational64::zero()));
        }
        Ok(c)
    }
}

pub fn parse_rational(s: &str) -> Option<Rational64> {
    match s.split_once('/') {
        Some((p, q)) => {
            let q: i64 = q.trim().parse().ok()?;
            if q == 0 {
                return None;
            }
            Some(Rational64::new(p.trim().parse().ok()?, q))
        }
        None => Some(Rational64::from_integer(s.trim().parse().ok()?)),
    }
}

impl fmt::Display for UnramifiedCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let u: Vec<String> = self
            .unitary
            .iter()
            .map(|(k, v)| if *v == 1 { k.clone() } else { format!("{k}^{v}") })
            .collect();
        write!(f, "{}@{}", u.join("*"), self.s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParameterFamily {
    Odd,
    Even,
}

impl ParameterFamily {
    pub fn datum_family(self) -> Family {
        match self {
            ParameterFamily::Odd => Family::GspinOdd,
            ParameterFamily::Even => Family::GspinEven,
        }
    }
}

/// `χ_0, χ_1, …, χ_n`; `χ_0` is the central character.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GSpinParameter {
    pub family: ParameterFamily,
    pub n: usize,
    pub chars: Vec<UnramifiedCharacter>,
}

impl GSpinParameter {
    pub fn new(family: ParameterFamily, n: usize, chars: Vec<UnramifiedCharacter>) -> Result<Self, SatakeError> {
        if chars.len() != n + 1 {
            return Err(SatakeError::Length { got: chars.len(), want: n + 1 });
        }
        Ok(GSpinParameter { family, n, chars })
    }

    /// Comma-separated characters, `χ_0` first.
    pub fn parse(family: ParameterFamily, n: usize, spec: &str) -> Result<Self, SatakeError> {
        let chars = spec.split(',').map(UnramifiedCharacter::parse).collect::<Result<Vec<_>, _>>()?;
        Self::new(family, n, chars)
    }
}

/// A multiset of characters.
#[derive(Clone, Debug)]
pub struct GLParameter {
    pub entries: Vec<UnramifiedCharacter>,
}

impl PartialEq for GLParameter {
    fn eq(&self, o: &Self) -> bool {
        let mut a = self.entries.clone();
        let mut b = o.entries.clone();
        a.sort();
        b.sort();
        a == b
    }
}

impl Eq for GLParameter {}

impl GLParameter {
    pub fn central_character(&self) -> UnramifiedCharacter {
        self.entries.iter().fold(UnramifiedCharacter::trivial(), |a, c| a.mul(c))
    }
}

#[derive(Clone, Debug)]
pub struct Transfer {
    pub satake_diag: Vec<UnramifiedCharacter>,
    pub gl: GLParameter,
    pub central: UnramifiedCharacter,
}

/// `(χ_1, …, χ_n, χ_0 χ_n⁻¹, …, χ_0 χ_1⁻¹)` and `ω_Π = χ_0^n`.
pub fn transfer(p: &GSpinParameter) -> Transfer {
    let chi0 = &p.chars[0];
    let mut diag: Vec<UnramifiedCharacter> = p.chars[1..].to_vec();
    diag.extend(p.chars[1..].iter().rev().map(|c| chi0.mul(&c.inverse())));
    Transfer { gl: GLParameter { entries: diag.clone() }, satake_diag: diag, central: chi0.pow(p.n as i64) }
}

/// `{ω χ⁻¹ : χ ∈ gl} = gl` as multisets.
pub fn twist_dual_check(gl: &GLParameter, omega: &UnramifiedCharacter) -> bool {
    let twisted = GLParameter { entries: gl.entries.iter().map(|c| omega.mul(&c.inverse())).collect() };
    twisted == *gl
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericityWitness {
    pub root: usize,
    pub coroot: Vec<i64>,
    pub rendered: String,
}

/// Fails exactly when `χ(α∨(ϖ)) = |ϖ|` for some root `α`.
pub fn is_generic_unramified(d: &RootDatum, p: &GSpinParameter) -> Result<(bool, Vec<GenericityWitness>), SatakeError> {
    if d.family != p.family.datum_family() || d.n != p.n || d.dim_x != p.chars.len() {
        return Err(SatakeError::Mismatch(format!("{} n={} against {:?} n={}", d.family, d.n, p.family, p.n)));
    }
    let rs = d.root_system().map_err(|e| SatakeError::Mismatch(e.to_string()))?;
    let mut wit = Vec::new();
    for (i, r) in rs.all().iter().enumerate() {
        let c = UnramifiedCharacter::product(&p.chars, &r.coroot);
        if c.unitary_trivial() && c.s == Rational64::one() {
            wit.push(GenericityWitness { root: i, coroot: r.coroot.clone(), rendered: d.render_cocharacter(&r.coroot) });
        }
    }
    Ok((wit.is_empty(), wit))
}

/// No two entries (at distinct positions) differ by `| |^{±1}`.
pub fn gl_full_induced_generic(gl: &GLParameter) -> bool {
    let e = &gl.entries;
    for i in 0..e.len() {
        for j in 0..e.len() {
            if i != j && e[i].unitary == e[j].unitary && (e[i].s - e[j].s).abs() == Rational64::one() {
                return false;
            }
        }
    }
    true
}

/// Pairwise products `a_i a_j` in the basis order `12, 13, 23, 14, 24, 34` of `∧²`.
pub const WEDGE_PATH_ORDER: [(usize, usize); 6] = [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)];
/// The order `12, 13, 23, 24, 14, 34` as printed with the identity.
pub const WEDGE_PRINTED_ORDER: [(usize, usize); 6] = [(0, 1), (0, 2), (1, 2), (1, 3), (0, 3), (2, 3)];

#[derive(Clone, Debug)]
pub struct ExteriorSquareReport {
    /// `ι ∘ φ̂ (diag(a))` through the cocharacter path.
    pub lhs: Vec<ScalarExpr>,
    /// `∧² diag(a)` in [`WEDGE_PATH_ORDER`].
    pub rhs: Vec<ScalarExpr>,
    /// `∧² diag(a)` in [`WEDGE_PRINTED_ORDER`].
    pub rhs_printed: Vec<ScalarExpr>,
    pub multiset_equal: bool,
    pub entrywise_equal: bool,
    pub printed_entrywise_equal: bool,
}

type Exps = [Rational64; 4];

fn exps_add(a: &Exps, b: &Exps, k: i64) -> Exps {
    let mut o = *a;
    for i in 0..4 {
        o[i] += b[i] * Rational64::from_integer(k);
    }
    o
}

/// `diag(a1, …, a4) ∈ GL4` through `GSO(6)` into `GL6`, exponents of `δ = (a1a2a3a4)^{1/4}` kept in `Q`.
pub fn exterior_square_check(a: &[ScalarExpr; 4]) -> Result<ExteriorSquareReport, SatakeError> {
    if let Some(i) = a.iter().position(ScalarExpr::is_zero) {
        return Err(SatakeError::ZeroEntry(i + 1));
    }
    let z = Rational64::zero();
    let unit = |i: usize| {
        let mut v = [z; 4];
        v[i] = Rational64::one();
        v
    };
    let delta: Exps = [Rational64::new(1, 4); 4];
    let partial = |k: usize| (0..k).fold([z; 4], |acc, i| exps_add(&acc, &unit(i), 1));
    // A = δ · β̄2∨(a1/δ) β̄1∨(a1a2/δ²) β̄3∨(a1a2a3/δ³), GL4 simple coroots ordered (β̄2, β̄1, β̄3).
    let gl4 = RootDatum::build(Family::Gl, 4).expect("gl4");
    let values: Vec<Exps> = (1..=3).map(|k| exps_add(&partial(k), &delta, -(k as i64))).collect();
    let mut check = [delta; 4];
    for (j, v) in values.iter().enumerate() {
        for (i, c) in check.iter_mut().enumerate() {
            *c = exps_add(c, v, gl4.simple_coroots[j][i]);
        }
    }
    debug_assert!((0..4).all(|i| check[i] == unit(i)));
    // φ̂: δ ↦ e0*(δ⁴) e1*(δ²) e2*(δ²) e3*(δ²); β̄_i∨ ↦ α_i∨ with β̄2 ↔ α2, β̄1 ↔ α1, β̄3 ↔ α3.
    let gso = RootDatum::build(Family::Gso, 3).expect("gso6");
    let target_simple = [1usize, 0, 2];
    let mut coords: Vec<Exps> = [4i64, 2, 2, 2].iter().map(|&k| exps_add(&[z; 4], &delta, k)).collect();
    for (j, v) in values.iter().enumerate() {
        let cor = &gso.simple_coroots[target_simple[j]];
        for (k, c) in coords.iter_mut().enumerate() {
            *c = exps_add(c, v, cor[k]);
        }
    }
    // ι: e0*(z0) e_i*(z_i) ↦ diag(z1, z2, z3, z0/z3, z0/z2, z0/z1).
    let mut diag: Vec<Exps> = coords[1..].to_vec();
    diag.extend(coords[1..].iter().rev().map(|c| exps_add(&coords[0], c, -1)));
    let to_expr = |e: &Exps| -> Result<ScalarExpr, SatakeError> {
        let mut acc = ScalarExpr::one();
        for (i, k) in e.iter().enumerate() {
            if !k.is_integer() {
                return Err(SatakeError::NonIntegral);
            }
            acc = acc.mul(&a[i].pow(k.to_integer())?);
        }
        Ok(acc)
    };
    let lhs = diag.iter().map(to_expr).collect::<Result<Vec<_>, _>>()?;
    let pairs = |order: &[(usize, usize); 6]| order.iter().map(|&(i, j)| a[i].mul(&a[j])).collect::<Vec<_>>();
    let rhs = pairs(&WEDGE_PATH_ORDER);
    let rhs_printed = pairs(&WEDGE_PRINTED_ORDER);
    let sorted = |v: &[ScalarExpr]| {
        let mut s: Vec<String> = v.iter().map(|e| e.to_string()).collect();
        s.sort();
        s
    };
    Ok(ExteriorSquareReport {
        multiset_equal: sorted(&lhs) == sorted(&rhs),
        entrywise_equal: lhs == rhs,
        printed_entrywise_equal: lhs == rhs_printed,
        lhs,
        rhs,
        rhs_printed,
    })
}

// JSON shapes.

#[derive(Serialize, Deserialize)]
struct CharJson {
    unitary: BTreeMap<String, i64>,
    s: String,
}

impl Serialize for UnramifiedCharacter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CharJson { unitary: self.unitary.clone(), s: format!("{}/{}", self.s.numer(), self.s.denom()) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for UnramifiedCharacter {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = CharJson::deserialize(d)?;
        let s = parse_rational(&j.s).ok_or_else(|| serde::de::Error::custom(format!("bad exponent `{}`", j.s)))?;
        let mut unitary = j.unitary;
        unitary.retain(|_, v| *v != 0);
        Ok(UnramifiedCharacter { unitary, s })
    }
}

impl Serialize for GSpinParameter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("GSpinParameter", 3)?;
        st.serialize_field("family", &self.family)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("chars", &self.chars)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for GSpinParameter {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            family: ParameterFamily,
            n: usize,
            chars: Vec<UnramifiedCharacter>,
        }
        let r = Raw::deserialize(d)?;
        GSpinParameter::new(r.family, r.n, r.chars).map_err(serde::de::Error::custom)
    }
}

/// The even-center fixture with `χ2 = μ(1/2)`; `printed` gives the variant `χ2 = μ(1/5)`.
pub fn even_center_fixture(printed: bool) -> GSpinParameter {
    let mu = |k: i64, p: i64, q: i64| UnramifiedCharacter::new("μ", k, Rational64::new(p, q));
    let chi2 = if printed { mu(1, 1, 5) } else { mu(1, 1, 2) };
    GSpinParameter::new(ParameterFamily::Even, 3, vec![mu(2, 0, 1), mu(1, 5, 2), chi2, mu(1, -3, 2)]).expect("length 4")
}
