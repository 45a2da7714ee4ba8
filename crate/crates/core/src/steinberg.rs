//! Words in the Steinberg generators `u_α(x)`, torus elements and Weyl
//! representatives `ẇ_i = u_{α_i}(1) u_{-α_i}(-1) u_{α_i}(1)`, with collection
//! into the Bruhat form `u · t · ẇ · u″` and an adjoint-representation oracle.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::chevalley::{ChevalleyError, StructureConstants};
use crate::lattice;
use crate::root_datum::{Family, RootDatum, RootSystem};
use crate::scalar::{ScalarError, ScalarExpr};
use crate::weyl::{self, WeylElement, WeylError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SteinbergError {
    #[error("degenerate cell at {0}")]
    Degenerate(String),
    #[error("{0}")]
    Scalar(#[from] ScalarError),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("denominator vanishes at atom {index} ({atom})")]
    Vanishing { index: usize, atom: String },
    #[error("word parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("measure-zero locus: {0}")]
    MeasureZero(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("{0}")]
    Chevalley(#[from] ChevalleyError),
    #[error("{0}")]
    Weyl(#[from] WeylError),
}

type Result<T> = std::result::Result<T, SteinbergError>;

/// `∏ e_k*(v_k)` over the cocharacter basis; entries equal to 1 are omitted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct TorusMonomial {
    entries: BTreeMap<usize, ScalarExpr>,
}

impl TorusMonomial {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn single(k: usize, v: ScalarExpr) -> Self {
        let mut t = Self::identity();
        t.set(k, v);
        t
    }

    fn set(&mut self, k: usize, v: ScalarExpr) {
        if v.is_one() {
            self.entries.remove(&k);
        } else {
            self.entries.insert(k, v);
        }
    }

    /// `λ(v)` for a cocharacter `λ` given in basis coordinates.
    pub fn cocharacter(lambda: &[i64], v: &ScalarExpr) -> Result<Self> {
        let mut t = Self::identity();
        for (k, &c) in lambda.iter().enumerate() {
            if c != 0 {
                t.set(k, v.pow(c)?);
            }
        }
        Ok(t)
    }

    pub fn get(&self, k: usize) -> ScalarExpr {
        self.entries.get(&k).cloned().unwrap_or_else(ScalarExpr::one)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, &ScalarExpr)> {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    pub fn is_identity(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn mul(&self, o: &TorusMonomial) -> TorusMonomial {
        let mut t = self.clone();
        for (k, v) in &o.entries {
            let nv = t.get(*k).mul(v);
            t.set(*k, nv);
        }
        t
    }

    pub fn inverse(&self) -> Result<TorusMonomial> {
        let mut t = Self::identity();
        for (k, v) in &self.entries {
            t.set(*k, v.inv()?);
        }
        Ok(t)
    }

    /// `χ(t) = ∏ v_k^{χ_k}`.
    pub fn character(&self, chi: &[i64]) -> Result<ScalarExpr> {
        let mut acc = ScalarExpr::one();
        for (k, v) in &self.entries {
            if chi[*k] != 0 {
                acc = acc.mul(&v.pow(chi[*k])?);
            }
        }
        Ok(acc)
    }

    /// `ẇ t ẇ⁻¹`.
    pub fn conjugate(&self, w: &WeylElement) -> Result<TorusMonomial> {
        let mut t = Self::identity();
        for (k, v) in &self.entries {
            let col: Vec<i64> = w.action_xdual.iter().map(|row| row[*k]).collect();
            t = t.mul(&Self::cocharacter(&col, v)?);
        }
        Ok(t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    Unipotent { root: usize, value: ScalarExpr },
    Torus(TorusMonomial),
    /// `ẇ_i` or its inverse, 0-based simple index.
    Weyl { index: usize, inverse: bool },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GroupWord {
    pub atoms: Vec<Atom>,
}

impl GroupWord {
    pub fn identity() -> Self {
        Self::default()
    }

    /// Appends an atom, eliding `u_α(0)` and the trivial torus element.
    pub fn push(&mut self, a: Atom) {
        match &a {
            Atom::Unipotent { value, .. } if value.is_zero() => {}
            Atom::Torus(t) if t.is_identity() => {}
            _ => self.atoms.push(a),
        }
    }

    pub fn u(root: usize, value: ScalarExpr) -> Self {
        let mut w = Self::identity();
        w.push(Atom::Unipotent { root, value });
        w
    }

    pub fn torus(t: TorusMonomial) -> Self {
        let mut w = Self::identity();
        w.push(Atom::Torus(t));
        w
    }

    pub fn weyl(index: usize, inverse: bool) -> Self {
        GroupWord { atoms: vec![Atom::Weyl { index, inverse }] }
    }

    /// `ẇ_{i1} ẇ_{i2} …` or, with `inverse`, `ẇ_{i1}⁻¹ ẇ_{i2}⁻¹ …`.
    pub fn weyl_word(word: &[usize], inverse: bool) -> Self {
        GroupWord { atoms: word.iter().map(|&index| Atom::Weyl { index, inverse }).collect() }
    }

    pub fn then(mut self, o: &GroupWord) -> Self {
        for a in &o.atoms {
            self.push(a.clone());
        }
        self
    }

    pub fn inverse(&self) -> Result<GroupWord> {
        let mut w = Self::identity();
        for a in self.atoms.iter().rev() {
            w.push(match a {
                Atom::Unipotent { root, value } => Atom::Unipotent { root: *root, value: value.neg() },
                Atom::Torus(t) => Atom::Torus(t.inverse()?),
                Atom::Weyl { index, inverse } => Atom::Weyl { index: *index, inverse: !inverse },
            });
        }
        Ok(w)
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Text form accepted by [`parse_word`].
    pub fn render(&self, d: &RootDatum) -> String {
        if self.atoms.is_empty() {
            return "1".into();
        }
        let rs = d.roots();
        self.atoms.iter().map(|a| render_atom(a, d, &rs)).collect::<Vec<_>>().join(" * ")
    }
}

fn render_atom(a: &Atom, d: &RootDatum, rs: &RootSystem) -> String {
    match a {
        Atom::Unipotent { root, value } => {
            format!("u[{}]({})", RootDatum::render_coords(&rs.root(*root).coords).replace('α', "a"), value)
        }
        Atom::Torus(t) => {
            let parts: Vec<String> = t.entries().map(|(k, v)| format!("{}^:{}", d.basis_labels[k], v)).collect();
            format!("t[{}]", parts.join(", "))
        }
        Atom::Weyl { index, inverse } => {
            if *inverse {
                format!("w[{}]^-1", index + 1)
            } else {
                format!("w[{}]", index + 1)
            }
        }
    }
}

/// `u · t · ẇ · u″`: `u` over all positive roots, `u″` over positive roots that `w` makes negative,
/// both in the fixed root order; `ẇ` along the reduced word of `w` that peels the smallest right descent.
#[derive(Clone, Debug)]
pub struct BruhatForm {
    pub u: Vec<(usize, ScalarExpr)>,
    pub t: TorusMonomial,
    pub w: WeylElement,
    pub u_right: Vec<(usize, ScalarExpr)>,
}

impl PartialEq for BruhatForm {
    fn eq(&self, o: &Self) -> bool {
        self.u == o.u && self.t == o.t && self.w.word == o.w.word && self.u_right == o.u_right
    }
}

impl Eq for BruhatForm {}

impl BruhatForm {
    pub fn to_word(&self) -> GroupWord {
        let mut g = GroupWord::identity();
        for (r, v) in &self.u {
            g.push(Atom::Unipotent { root: *r, value: v.clone() });
        }
        g.push(Atom::Torus(self.t.clone()));
        for &i in &self.w.word {
            g.push(Atom::Weyl { index: i, inverse: false });
        }
        for (r, v) in &self.u_right {
            g.push(Atom::Unipotent { root: *r, value: v.clone() });
        }
        g
    }
}

struct State {
    u: Vec<(usize, ScalarExpr)>,
    t: TorusMonomial,
    w: WeylElement,
    word: Vec<usize>,
    u2: Vec<(usize, ScalarExpr)>,
}

/// Rewriting engine over a fixed structure-constant table.
pub struct Engine<'a> {
    table: &'a StructureConstants,
    rs: &'a RootSystem,
    fixed: Vec<usize>,
    simple_of: HashMap<usize, usize>,
    budget: std::cell::Cell<usize>,
}

const COMMUTATOR_SHAPES: [(u32, u32); 7] = [(1, 1), (2, 1), (1, 2), (3, 1), (1, 3), (3, 2), (2, 3)];
const STEP_BUDGET: usize = 50_000_000;

fn ipow(x: &ScalarExpr, k: u32) -> ScalarExpr {
    let mut acc = ScalarExpr::one();
    for _ in 0..k {
        acc = acc.mul(x);
    }
    acc
}

impl<'a> Engine<'a> {
    pub fn new(table: &'a StructureConstants) -> Self {
        let rs = table.roots();
        let r = table.datum().rank();
        Engine {
            table,
            rs,
            fixed: (0..rs.positive_count()).collect(),
            simple_of: (0..r).map(|i| (rs.simple(i), i)).collect(),
            budget: std::cell::Cell::new(STEP_BUDGET),
        }
    }

    fn tick(&self) -> Result<()> {
        let b = self.budget.get();
        if b == 0 {
            return Err(SteinbergError::Unsupported("rewriting did not terminate".into()));
        }
        self.budget.set(b - 1);
        Ok(())
    }

    /// Commutator terms in `u_b(y) u_a(x) = u_a(x) u_b(y) ∏ u_{ia+jb}(c_{a,b;i,j} (-x)^i y^j)`.
    fn swap_terms(&self, a: usize, b: usize, x: &ScalarExpr, y: &ScalarExpr) -> Result<Vec<(usize, ScalarExpr)>> {
        let ca = &self.rs.root(a).coords;
        let cb = &self.rs.root(b).coords;
        let mx = x.neg();
        let mut out = Vec::new();
        for (i, j) in COMMUTATOR_SHAPES {
            let v = lattice::axpy(&lattice::scale(i as i64, ca), j as i64, cb);
            if let Some(r) = self.rs.index_of_coords(&v) {
                let c = self.table.c(a, b, i, j).ok_or_else(|| {
                    SteinbergError::Unsupported(format!("commutator constant c_{{{i},{j}}} outside types B, C, D"))
                })?;
                let c = BigRational::new((*c.numer()).into(), (*c.denom()).into());
                out.push((r, ipow(&mx, i).mul(&ipow(y, j)).scale(&c)));
            }
        }
        Ok(out)
    }

    /// Right-multiplies an ordered product of positive root elements by `u_a(x)`.
    fn collect(&self, list: &mut Vec<(usize, ScalarExpr)>, a: usize, x: ScalarExpr, key: &[usize]) -> Result<()> {
        self.tick()?;
        if x.is_zero() {
            return Ok(());
        }
        match list.last() {
            None => list.push((a, x)),
            Some((b, _)) if *b == a => {
                let (_, y) = list.pop().expect("nonempty");
                let s = y.add(&x);
                if !s.is_zero() {
                    list.push((a, s));
                }
            }
            Some((b, _)) if key[*b] < key[a] => list.push((a, x)),
            Some(_) => {
                let (b, y) = list.pop().expect("nonempty");
                let terms = self.swap_terms(a, b, &x, &y)?;
                self.collect(list, a, x, key)?;
                self.collect(list, b, y, key)?;
                for (r, v) in terms {
                    self.collect(list, r, v, key)?;
                }
            }
        }
        Ok(())
    }

    fn recollect(&self, items: &[(usize, ScalarExpr)], key: &[usize]) -> Result<Vec<(usize, ScalarExpr)>> {
        let mut out = Vec::new();
        for (r, v) in items {
            self.collect(&mut out, *r, v.clone(), key)?;
        }
        Ok(out)
    }

    /// `ẇ u_β(x) ẇ⁻¹` (or `ẇ⁻¹ u_β(x) ẇ` with `inverse`) for `ẇ` along `word`.
    pub fn conjugate_root(&self, word: &[usize], beta: usize, x: &ScalarExpr, inverse: bool) -> (usize, ScalarExpr) {
        let mut b = beta;
        let mut sign = 1i64;
        let mut step = |i: usize, b: &mut usize| {
            let s = self.rs.simple(i);
            let a = if inverse { self.rs.negate(s) } else { s };
            sign *= self.table.d(a, *b);
            *b = self.table.reflect(a, *b);
        };
        if inverse {
            for &i in word {
                step(i, &mut b);
            }
        } else {
            for &i in word.iter().rev() {
                step(i, &mut b);
            }
        }
        (b, x.scale_int(sign))
    }

    fn image_positive(&self, w: &WeylElement, root: usize) -> bool {
        let v = w.apply(&self.rs.root(root).vector);
        self.rs.is_positive(self.rs.index_of_vector(&v).expect("root"))
    }

    fn set_w(&self, st: &mut State, w: WeylElement) {
        let red = w.reduced(self.table.datum());
        st.word = red.word.clone();
        st.w = red;
    }

    /// Moves the part of `u″` that `w` keeps positive across `t ẇ`.
    fn reduce(&self, st: &mut State) -> Result<()> {
        let p = self.rs.positive_count();
        let key: Vec<usize> = (0..p).map(|b| if self.image_positive(&st.w, b) { b } else { p + b }).collect();
        let list = self.recollect(&st.u2, &key)?;
        let mut rest = Vec::new();
        for (b, x) in list {
            if key[b] < p {
                let (g, s) = self.conjugate_root(&st.word, b, &x, false);
                let val = st.t.character(&self.rs.root(g).vector)?.mul(&s);
                self.collect(&mut st.u, g, val, &self.fixed)?;
            } else {
                rest.push((b, x));
            }
        }
        st.u2 = rest;
        Ok(())
    }

    fn rmul_torus(&self, st: &mut State, s: &TorusMonomial) -> Result<()> {
        st.t = st.t.mul(&s.conjugate(&st.w)?);
        for (b, x) in st.u2.iter_mut() {
            *x = x.div(&s.character(&self.rs.root(*b).vector)?)?;
        }
        Ok(())
    }

    fn coroot_torus(&self, w: &WeylElement, root: usize, v: &ScalarExpr) -> Result<TorusMonomial> {
        TorusMonomial::cocharacter(&w.apply_dual(&self.rs.root(root).coroot), v)
    }

    fn rmul_weyl(&self, st: &mut State, i: usize, inverse: bool) -> Result<()> {
        self.tick()?;
        let a = self.rs.simple(i);
        if inverse {
            self.rmul_weyl(st, i, false)?;
            let t = TorusMonomial::cocharacter(&self.rs.root(a).coroot, &ScalarExpr::int(-1))?;
            return self.rmul_torus(st, &t);
        }
        let s_i = WeylElement::simple(self.table.datum(), i)?;
        let w_next = st.w.compose(&s_i);
        if self.image_positive(&st.w, a) {
            let conj: Vec<(usize, ScalarExpr)> = st.u2.iter().map(|(b, x)| self.conjugate_root(&[i], *b, x, true)).collect();
            self.set_w(st, w_next);
            st.u2 = self.recollect(&conj, &self.fixed)?;
            return self.reduce(st);
        }
        // w = w′ s_i with l(w′) < l(w); bring u_{α_i} to the front of u″.
        let key: Vec<usize> = (0..self.rs.positive_count()).map(|b| if b == a { 0 } else { b + 1 }).collect();
        let mut list = self.recollect(&st.u2, &key)?;
        let c = if list.first().map(|(b, _)| *b) == Some(a) { Some(list.remove(0).1) } else { None };
        let conj: Vec<(usize, ScalarExpr)> = list.iter().map(|(b, x)| self.conjugate_root(&[i], *b, x, true)).collect();
        let w_prev = w_next.reduced(self.table.datum());
        match c {
            None => {
                let t = self.coroot_torus(&w_prev, a, &ScalarExpr::int(-1))?;
                st.t = st.t.mul(&t);
                self.set_w(st, w_prev);
                st.u2 = self.recollect(&conj, &self.fixed)?;
            }
            Some(c) => {
                // ẇ_i u_{α_i}(c) ẇ_i = u_{α_i}(z) α_i∨(z) ẇ_i u_{α_i}(z), z = -1/c.
                let z = c.inv().map_err(|_| SteinbergError::Degenerate(format!("u_{{α{}}}", i + 1)))?.neg();
                let (g, s) = self.conjugate_root(&w_prev.word, a, &z, false);
                let val = st.t.character(&self.rs.root(g).vector)?.mul(&s);
                self.collect(&mut st.u, g, val, &self.fixed)?;
                let t = self.coroot_torus(&w_prev, a, &z)?;
                st.t = st.t.mul(&t);
                let mut items = vec![(a, z)];
                items.extend(conj);
                st.u2 = self.recollect(&items, &self.fixed)?;
            }
        }
        self.reduce(st)
    }

    fn rmul_u(&self, st: &mut State, root: usize, x: ScalarExpr) -> Result<()> {
        self.tick()?;
        if x.is_zero() {
            return Ok(());
        }
        if self.rs.is_positive(root) {
            self.collect(&mut st.u2, root, x, &self.fixed)?;
            return self.reduce(st);
        }
        let a = self.rs.negate(root);
        if let Some(&i) = self.simple_of.get(&a) {
            // u_{-α}(y) = u_α(1/y) α∨(-1/y) ẇ_α u_α(1/y)
            let inv = x.inv().map_err(|_| SteinbergError::Degenerate(format!("u_{{-α{}}}", i + 1)))?;
            self.rmul_u(st, a, inv.clone())?;
            let t = TorusMonomial::cocharacter(&self.rs.root(a).coroot, &inv.neg())?;
            self.rmul_torus(st, &t)?;
            self.rmul_weyl(st, i, false)?;
            return self.rmul_u(st, a, inv);
        }
        let j = (0..self.table.datum().rank())
            .find(|&j| self.table.pairing(a, self.rs.simple(j)) > 0)
            .expect("a non-simple positive root pairs positively with some simple coroot");
        // u_{-α}(x) = ẇ_j⁻¹ (ẇ_j u_{-α}(x) ẇ_j⁻¹) ẇ_j
        let (b, y) = self.conjugate_root(&[j], root, &x, false);
        self.rmul_weyl(st, j, true)?;
        self.rmul_u(st, b, y)?;
        self.rmul_weyl(st, j, false)
    }

    pub fn bruhat(&self, word: &GroupWord) -> Result<BruhatForm> {
        let d = self.table.datum();
        let mut st = State { u: Vec::new(), t: TorusMonomial::identity(), w: WeylElement::identity(d), word: Vec::new(), u2: Vec::new() };
        for a in &word.atoms {
            match a {
                Atom::Unipotent { root, value } => {
                    if *root >= self.rs.len() {
                        return Err(SteinbergError::Invalid(format!("root index {root} out of range")));
                    }
                    self.rmul_u(&mut st, *root, value.clone())?
                }
                Atom::Torus(t) => {
                    if t.entries().any(|(k, _)| k >= d.dim_x) {
                        return Err(SteinbergError::Invalid("torus entry outside the cocharacter basis".into()));
                    }
                    self.rmul_torus(&mut st, t)?
                }
                Atom::Weyl { index, inverse } => {
                    if *index >= d.rank() {
                        return Err(WeylError::BadIndex(index + 1).into());
                    }
                    self.rmul_weyl(&mut st, *index, *inverse)?
                }
            }
        }
        Ok(BruhatForm { u: st.u, t: st.t, w: st.w, u_right: st.u2 })
    }
}

/// Bruhat form of a word.
pub fn bruhat(word: &GroupWord, table: &StructureConstants) -> Result<BruhatForm> {
    Engine::new(table).bruhat(word)
}

/// The canonical word `u · t · ẇ · u″`.
pub fn normalize(word: &GroupWord, table: &StructureConstants) -> Result<GroupWord> {
    Ok(bruhat(word, table)?.to_word())
}

pub fn words_equal(a: &GroupWord, b: &GroupWord, table: &StructureConstants) -> Result<bool> {
    let e = Engine::new(table);
    Ok(e.bruhat(a)? == e.bruhat(b)?)
}

pub type RatMatrix = Vec<Vec<BigRational>>;
type SparseOp = Vec<Vec<(usize, BigRational)>>;

/// Image of a word in the adjoint representation on `g = ⊕ g_α ⊕ X∨ ⊗ Q`, basis as in
/// [`crate::chevalley::LieAlgebra`].
pub fn adjoint_eval(word: &GroupWord, table: &StructureConstants, point: &HashMap<String, BigRational>) -> Result<RatMatrix> {
    let lie = crate::chevalley::LieAlgebra::new(table);
    let dim = lie.dim();
    let rs = table.roots();
    let nr = rs.len();
    let ev = |i: usize, a: &Atom, e: &ScalarExpr| -> Result<BigRational> {
        e.eval(point).map_err(|err| match err {
            ScalarError::VanishingDenominator => {
                SteinbergError::Vanishing { index: i, atom: render_atom(a, table.datum(), rs) }
            }
            other => other.into(),
        })
    };
    let exp_op = |root: usize, x: &BigRational| -> SparseOp {
        let mut rows: SparseOp = vec![Vec::new(); dim];
        for j in 0..dim {
            let mut acc: BTreeMap<usize, BigRational> = BTreeMap::new();
            acc.insert(j, BigRational::one());
            let mut v: Vec<(usize, BigRational)> = vec![(j, BigRational::one())];
            let mut coef = BigRational::one();
            let mut k = 1i64;
            loop {
                let mut next: BTreeMap<usize, BigRational> = BTreeMap::new();
                for (b, c) in &v {
                    for (r, n) in lie.bracket_basis(root, *b) {
                        *next.entry(r).or_insert_with(BigRational::zero) += c * BigRational::from_integer(n.into());
                    }
                }
                next.retain(|_, c| !c.is_zero());
                if next.is_empty() {
                    break;
                }
                coef = coef * x / BigRational::from_integer(k.into());
                for (r, c) in &next {
                    *acc.entry(*r).or_insert_with(BigRational::zero) += &coef * c;
                }
                v = next.into_iter().collect();
                k += 1;
            }
            for (r, c) in acc {
                if !c.is_zero() {
                    rows[r].push((j, c));
                }
            }
        }
        rows
    };
    let apply = |op: &SparseOp, m: &RatMatrix| -> RatMatrix {
        op.iter()
            .map(|row| {
                let mut out = vec![BigRational::zero(); dim];
                for (k, c) in row {
                    for (o, x) in out.iter_mut().zip(&m[*k]) {
                        if !x.is_zero() {
                            *o += c * x;
                        }
                    }
                }
                out
            })
            .collect()
    };
    let mut m: RatMatrix = (0..dim).map(|i| (0..dim).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect()).collect();
    for (i, a) in word.atoms.iter().enumerate().rev() {
        let ops: Vec<SparseOp> = match a {
            Atom::Unipotent { root, value } => vec![exp_op(*root, &ev(i, a, value)?)],
            Atom::Torus(t) => {
                let vals: Vec<(usize, BigRational)> = t.entries().map(|(k, v)| Ok((k, ev(i, a, v)?))).collect::<Result<_>>()?;
                if vals.iter().any(|(_, v)| v.is_zero()) {
                    return Err(SteinbergError::Vanishing { index: i, atom: render_atom(a, table.datum(), rs) });
                }
                let mut rows: SparseOp = vec![Vec::new(); dim];
                for (j, row) in rows.iter_mut().enumerate() {
                    let mut c = BigRational::one();
                    if j < nr {
                        for (k, v) in &vals {
                            c *= v.pow(rs.root(j).vector[*k] as i32);
                        }
                    }
                    row.push((j, c));
                }
                vec![rows]
            }
            Atom::Weyl { index, inverse } => {
                let s = rs.simple(*index);
                let one = if *inverse { -BigRational::one() } else { BigRational::one() };
                vec![exp_op(s, &one), exp_op(rs.negate(s), &-one.clone()), exp_op(s, &one)]
            }
        };
        for op in ops.iter().rev() {
            m = apply(op, &m);
        }
    }
    Ok(m)
}

/// Parses `u[a1+2a2](x) * w[2] * w[1]^-1 * t[e0^:3, a1^:x]`; `1` is the empty word.
/// In `t[…]` a name is a cocharacter basis label or `a<i>` for the simple coroot `α_i∨`.
pub fn parse_word(src: &str, d: &RootDatum) -> Result<GroupWord> {
    let rs = d.root_system().map_err(|e| SteinbergError::Invalid(e.to_string()))?;
    let mut word = GroupWord::identity();
    let trimmed = src.trim();
    if trimmed.is_empty() || trimmed == "1" {
        return Ok(word);
    }
    let err = |pos: usize, msg: &str| SteinbergError::Parse { pos, msg: msg.to_string() };
    let bytes = src.as_bytes();
    let mut pos = 0;
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    // Byte offset of the bracket closing the one opened just before `start`.
    let closing = |start: usize, open: u8, close: u8| -> Option<usize> {
        let mut depth = 1;
        for (k, &b) in bytes.iter().enumerate().skip(start) {
            if b == open {
                depth += 1;
            } else if b == close {
                depth -= 1;
                if depth == 0 {
                    return Some(k);
                }
            }
        }
        None
    };
    loop {
        skip_ws(&mut pos);
        let kind = *bytes.get(pos).ok_or_else(|| err(pos, "expected an atom"))?;
        pos += 1;
        skip_ws(&mut pos);
        if bytes.get(pos) != Some(&b'[') {
            return Err(err(pos, "expected `[`"));
        }
        let end = closing(pos + 1, b'[', b']').ok_or_else(|| err(pos, "unclosed `[`"))?;
        let inner = &src[pos + 1..end];
        let inner_pos = pos + 1;
        pos = end + 1;
        match kind {
            b'u' => {
                let coords = parse_root_coords(inner, d.rank()).map_err(|m| err(inner_pos, &m))?;
                let root = rs.index_of_coords(&coords).ok_or_else(|| err(inner_pos, "not a root"))?;
                skip_ws(&mut pos);
                if bytes.get(pos) != Some(&b'(') {
                    return Err(err(pos, "expected `(`"));
                }
                let close = closing(pos + 1, b'(', b')').ok_or_else(|| err(pos, "unclosed `(`"))?;
                let value = ScalarExpr::parse(&src[pos + 1..close])
                    .map_err(|e| err(pos + 1, &e.to_string()))?;
                pos = close + 1;
                word.push(Atom::Unipotent { root, value });
            }
            b'w' => {
                let i: usize = inner.trim().parse().map_err(|_| err(inner_pos, "expected a simple index"))?;
                if i == 0 || i > d.rank() {
                    return Err(err(inner_pos, "simple index out of range"));
                }
                let mut inverse = false;
                let rest = &src[pos..];
                let stripped = rest.trim_start();
                if let Some(after) = stripped.strip_prefix("^-1") {
                    inverse = true;
                    pos = src.len() - after.len();
                }
                word.push(Atom::Weyl { index: i - 1, inverse });
            }
            b't' => {
                let mut t = TorusMonomial::identity();
                let mut offset = inner_pos;
                for part in split_top_level(inner) {
                    let (name, value) = part.split_once("^:").ok_or_else(|| err(offset, "expected `name^:value`"))?;
                    let name = name.trim();
                    let value = ScalarExpr::parse(value).map_err(|e| err(offset, &e.to_string()))?;
                    let cochar = if let Some(k) = d.basis_labels.iter().position(|l| l == name) {
                        lattice::unit_vec(d.dim_x, k)
                    } else if let Some(i) = simple_label(name) {
                        d.simple_coroots.get(i).cloned().ok_or_else(|| err(offset, "simple index out of range"))?
                    } else {
                        return Err(err(offset, &format!("unknown cocharacter `{name}`")));
                    };
                    t = t.mul(&TorusMonomial::cocharacter(&cochar, &value)?);
                    offset += part.len() + 1;
                }
                word.push(Atom::Torus(t));
            }
            _ => return Err(err(pos - 1, "expected `u`, `w` or `t`")),
        }
        skip_ws(&mut pos);
        if pos >= bytes.len() {
            break;
        }
        if bytes[pos] != b'*' {
            return Err(err(pos, "expected `*`"));
        }
        pos += 1;
    }
    Ok(word)
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (k, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..k]);
                start = k + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn simple_label(name: &str) -> Option<usize> {
    let rest = name.strip_prefix('a').or_else(|| name.strip_prefix('α'))?;
    let i: usize = rest.parse().ok()?;
    i.checked_sub(1)
}

/// `a1+2a2-a3` (or with `α`) into Δ-coordinates.
pub fn parse_root_coords(s: &str, rank: usize) -> std::result::Result<Vec<i64>, String> {
    let mut coords = vec![0i64; rank];
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err("empty root".into());
    }
    let mut rest = compact.as_str();
    let mut first = true;
    while !rest.is_empty() {
        let mut sign = 1;
        if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        } else if let Some(r) = rest.strip_prefix('-') {
            sign = -1;
            rest = r;
        } else if !first {
            return Err("expected `+` or `-`".into());
        }
        first = false;
        let digits = rest.chars().take_while(|c| c.is_ascii_digit()).count();
        let k: i64 = if digits == 0 { 1 } else { rest[..digits].parse().map_err(|_| "bad coefficient")? };
        rest = rest[digits..].strip_prefix('a').or_else(|| rest[digits..].strip_prefix('α')).ok_or("expected `a<i>`")?;
        let idx_len = rest.chars().take_while(|c| c.is_ascii_digit()).count();
        let i: usize = rest[..idx_len].parse().map_err(|_| "expected a simple index")?;
        if i == 0 || i > rank {
            return Err(format!("simple index {i} out of range"));
        }
        coords[i - 1] += sign * k;
        rest = &rest[idx_len..];
    }
    Ok(coords)
}

/// Distinguished pieces of the ambient group: `α1`, the highest root `γ`, the sign `d`, and the
/// words `w′ = ẇ_2⁻¹ … ẇ_l⁻¹ … ẇ_2⁻¹`, `w0 = ẇ_1 w′⁻¹ ẇ_1`.
pub struct Ambient<'a> {
    pub table: &'a StructureConstants,
    pub alpha1: usize,
    pub gamma: usize,
    pub d: i64,
    pub w_prime_word: Vec<usize>,
}

impl<'a> Ambient<'a> {
    pub fn new(table: &'a StructureConstants) -> Result<Self> {
        let d = table.datum();
        let chain = weyl::beta_chain(d)?;
        Ok(Ambient {
            table,
            alpha1: table.roots().simple(0),
            gamma: *chain.last().expect("nonempty chain"),
            d: table.w_gamma_sign()?,
            w_prime_word: weyl::w_prime_word(d)?,
        })
    }

    pub fn w_prime(&self) -> GroupWord {
        GroupWord::weyl_word(&self.w_prime_word, true)
    }

    pub fn w_prime_inverse(&self) -> GroupWord {
        let rev: Vec<usize> = self.w_prime_word.iter().rev().copied().collect();
        GroupWord::weyl_word(&rev, false)
    }

    pub fn w0(&self) -> GroupWord {
        GroupWord::weyl(0, false).then(&self.w_prime_inverse()).then(&GroupWord::weyl(0, false))
    }

    fn coroot_torus(&self, root: usize, v: &ScalarExpr) -> Result<TorusMonomial> {
        TorusMonomial::cocharacter(&self.table.roots().root(root).coroot, v)
    }

    /// `w_β(λ) = u_β(λ) u_{-β}(-1/λ) u_β(λ)`.
    pub fn w_root(&self, root: usize, lambda: &ScalarExpr) -> Result<GroupWord> {
        let neg = self.table.roots().negate(root);
        Ok(GroupWord::u(root, lambda.clone())
            .then(&GroupWord::u(neg, lambda.inv()?.neg()))
            .then(&GroupWord::u(root, lambda.clone())))
    }

    /// Cocharacter index used for `e1*` (or `E1*` for the connected-center form).
    pub fn e1_index(&self) -> Result<usize> {
        e1_index(self.table.datum())
    }

    /// Roots of `N`: positive roots with `α1`-coefficient 1.
    pub fn radical_roots(&self) -> Vec<usize> {
        let rs = self.table.roots();
        (0..rs.positive_count()).filter(|&r| rs.root(r).coords[0] == 1).collect()
    }

    /// Positive roots of the Levi `M`, `θ = Δ ∖ {α1}`.
    pub fn levi_positive(&self) -> Vec<usize> {
        let rs = self.table.roots();
        (0..rs.positive_count()).filter(|&r| rs.root(r).coords[0] == 0).collect()
    }
}

pub fn e1_index(d: &RootDatum) -> Result<usize> {
    let label = match d.family {
        Family::WgspinEven => "E1",
        _ => "e1",
    };
    d.basis_labels
        .iter()
        .position(|l| l == label)
        .ok_or_else(|| SteinbergError::Unsupported(format!("no {label} in the cocharacter basis")))
}

#[derive(Clone, Debug)]
pub struct MnnReport {
    pub d: i64,
    pub m: GroupWord,
    pub n_prime: GroupWord,
    pub n_bar: GroupWord,
    /// `w0⁻¹ u_{α1}(1) u_γ(x)` before normalization.
    pub lhs_word: GroupWord,
    pub lhs: GroupWord,
    pub rhs: GroupWord,
    pub equal: bool,
    pub alternate_equal: bool,
    pub w_gamma_equal: bool,
    /// `e1*`-coordinate of `α1∨(d/x)`.
    pub gl1_coordinate: ScalarExpr,
}

impl MnnReport {
    pub fn holds(&self) -> bool {
        self.equal && self.alternate_equal && self.w_gamma_equal
    }
}

/// `w0⁻¹ u_{α1}(1) u_γ(x) = m n′ n̄` with `m = w′ γ∨(d/x)`, `n′ = u_γ(-x) u_{α1}(-1)`,
/// `n̄ = u_{-γ}(1/x) u_{-α1}(1)`.
pub fn bruhat_mnn(table: &StructureConstants, x: &ScalarExpr) -> Result<MnnReport> {
    if x.is_zero() {
        return Err(SteinbergError::MeasureZero("x must be nonzero".into()));
    }
    let amb = Ambient::new(table)?;
    let e = Engine::new(table);
    let rs = table.roots();
    let (a1, g) = (amb.alpha1, amb.gamma);
    let d = ScalarExpr::int(amb.d);
    let d_over_x = d.div(x)?;
    let m = amb.w_prime().then(&GroupWord::torus(amb.coroot_torus(g, &d_over_x)?));
    let n_prime = GroupWord::u(g, x.neg()).then(&GroupWord::u(a1, ScalarExpr::int(-1)));
    let n_bar = GroupWord::u(rs.negate(g), x.inv()?).then(&GroupWord::u(rs.negate(a1), ScalarExpr::one()));
    let lhs_word = amb
        .w0()
        .inverse()?
        .then(&GroupWord::u(a1, ScalarExpr::one()))
        .then(&GroupWord::u(g, x.clone()));
    let rhs_word = m.clone().then(&n_prime).then(&n_bar);
    let lhs = e.bruhat(&lhs_word)?;
    let rhs = e.bruhat(&rhs_word)?;
    let alt_torus = amb.coroot_torus(a1, &d_over_x)?;
    let alt = GroupWord::torus(alt_torus.clone()).then(&amb.w_prime());
    let alternate_equal = e.bruhat(&alt)? == e.bruhat(&m)?;
    // γ∨(d) w_γ = w_γ(d) = w′⁻¹ ẇ_1 w′
    let spell_a = GroupWord::torus(amb.coroot_torus(g, &d)?).then(&amb.w_root(g, &ScalarExpr::one())?);
    let spell_b = amb.w_root(g, &d)?;
    let spell_c = amb.w_prime_inverse().then(&GroupWord::weyl(0, false)).then(&amb.w_prime());
    let (fa, fb, fc) = (e.bruhat(&spell_a)?, e.bruhat(&spell_b)?, e.bruhat(&spell_c)?);
    Ok(MnnReport {
        d: amb.d,
        equal: lhs == rhs,
        lhs_word,
        m,
        n_prime,
        n_bar,
        lhs: lhs.to_word(),
        rhs: rhs.to_word(),
        alternate_equal,
        w_gamma_equal: fa == fb && fb == fc,
        gl1_coordinate: alt_torus.get(amb.e1_index()?),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerReport {
    /// Roots of `Σ(θ)⁺` whose root group centralizes `n = u_{α1}(1) u_γ(q)`.
    pub left: Vec<usize>,
    /// Roots of `Σ(θ)⁺` kept positive by `w′`.
    pub right: Vec<usize>,
    /// `Σ(Ω)⁺`, `Ω = Δ ∖ {α1, α2}`.
    pub target: Vec<usize>,
}

impl StabilizerReport {
    pub fn holds(&self) -> bool {
        self.left == self.target && self.right == self.target
    }

    /// The two stabilizer sets coincide, whatever they are.
    pub fn sides_agree(&self) -> bool {
        self.left == self.right
    }
}

pub fn stabilizer_roots(table: &StructureConstants) -> Result<StabilizerReport> {
    let amb = Ambient::new(table)?;
    let e = Engine::new(table);
    let rs = table.roots();
    let q = ScalarExpr::var("q");
    let x = ScalarExpr::var("x");
    let n = GroupWord::u(amb.alpha1, ScalarExpr::one()).then(&GroupWord::u(amb.gamma, q));
    let n_form = e.bruhat(&n)?;
    let wp = WeylElement::from_word(table.datum(), &amb.w_prime_word)?;
    let mut left = Vec::new();
    let mut right = Vec::new();
    for b in amb.levi_positive() {
        let conj = GroupWord::u(b, x.clone()).then(&n).then(&GroupWord::u(b, x.neg()));
        if e.bruhat(&conj)? == n_form {
            left.push(b);
        }
        let img = rs.index_of_vector(&wp.apply(&rs.root(b).vector)).expect("root");
        if rs.is_positive(img) {
            right.push(b);
        }
    }
    let target = (0..rs.positive_count()).filter(|&r| rs.root(r).coords[0] == 0 && rs.root(r).coords.get(1).copied().unwrap_or(0) == 0).collect();
    Ok(StabilizerReport { left, right, target })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EStarReport {
    pub label: String,
    pub alpha1_pairing: i64,
    /// Roots of `Σ(θ)` with nonzero pairing, and that pairing.
    pub failures: Vec<(usize, i64)>,
}

impl EStarReport {
    pub fn holds(&self) -> bool {
        self.alpha1_pairing == 1 && self.failures.is_empty()
    }
}

/// `⟨α1, e1*⟩ = 1` and `⟨β, e1*⟩ = 0` on `Σ(θ)`; `basis` overrides the cocharacter tested.
pub fn e_star_check(d: &RootDatum, basis: Option<usize>) -> Result<EStarReport> {
    let k = match basis {
        Some(k) if k < d.dim_x => k,
        Some(k) => return Err(SteinbergError::Invalid(format!("basis index {k} out of range"))),
        None => e1_index(d)?,
    };
    let rs = d.root_system().map_err(|e| SteinbergError::Invalid(e.to_string()))?;
    let failures = rs
        .all()
        .iter()
        .enumerate()
        .filter(|(_, r)| r.coords[0] == 0 && r.vector[k] != 0)
        .map(|(i, r)| (i, r.vector[k]))
        .collect();
    Ok(EStarReport { label: d.basis_labels[k].clone(), alpha1_pairing: d.simple_roots[0][k], failures })
}

#[derive(Clone, Debug)]
pub struct OrbitReduction {
    /// `c` with `c · reduced · c⁻¹ = input`.
    pub conjugator: GroupWord,
    pub reduced: GroupWord,
    pub a: ScalarExpr,
    pub x: ScalarExpr,
}

/// Conjugates a product over `R(N)` by `U_M` into `u_{α1}(a) u_γ(x)`, killing one coordinate per
/// root `α′ = α1 + β` in increasing height.
pub fn orbit_reduce(table: &StructureConstants, input: &GroupWord) -> Result<OrbitReduction> {
    let amb = Ambient::new(table)?;
    let e = Engine::new(table);
    let rnroots = amb.radical_roots();
    let rs = table.roots();
    let form = e.bruhat(input)?;
    if !form.t.is_identity() || !form.w.word.is_empty() || !form.u_right.is_empty() || form.u.iter().any(|(r, _)| !rnroots.contains(r)) {
        return Err(SteinbergError::Invalid("input is not an element of N".into()));
    }
    let coeff = |f: &BruhatForm, r: usize| f.u.iter().find(|(b, _)| *b == r).map(|(_, v)| v.clone()).unwrap_or_else(ScalarExpr::zero);
    let a = coeff(&form, amb.alpha1);
    if a.is_zero() {
        return Err(SteinbergError::MeasureZero("the α1-coordinate vanishes".into()));
    }
    let mut cur = form.to_word();
    let mut g = GroupWord::identity();
    for &ap in &rnroots {
        if ap == amb.alpha1 || ap == amb.gamma {
            continue;
        }
        let f = e.bruhat(&cur)?;
        let xa = coeff(&f, ap);
        if xa.is_zero() {
            continue;
        }
        let beta_coords = lattice::sub(&rs.root(ap).coords, &rs.root(amb.alpha1).coords);
        let beta = rs.index_of_coords(&beta_coords).ok_or_else(|| SteinbergError::Invalid("α′ - α1 is not a root".into()))?;
        let c = table.n(beta, amb.alpha1);
        let y = xa.neg().div(&a.scale_int(c))?;
        let step = GroupWord::u(beta, y.clone());
        cur = e.bruhat(&step.clone().then(&cur).then(&GroupWord::u(beta, y.neg())))?.to_word();
        g = step.then(&g);
    }
    let f = e.bruhat(&cur)?;
    if f.u.iter().any(|(r, _)| *r != amb.alpha1 && *r != amb.gamma) {
        return Err(SteinbergError::Invalid("reduction left extra coordinates".into()));
    }
    let x = coeff(&f, amb.gamma);
    let reduced = GroupWord::u(amb.alpha1, a.clone()).then(&GroupWord::u(amb.gamma, x.clone()));
    Ok(OrbitReduction { conjugator: g.inverse()?, reduced, a, x })
}

/// Conjugation by `e1*(1/a)`: `u_{α1}(a) u_γ(x) ↦ u_{α1}(1) u_γ(x/a)`. Returns the torus element and the image.
pub fn central_scaling(table: &StructureConstants, a: &ScalarExpr, x: &ScalarExpr) -> Result<(TorusMonomial, GroupWord)> {
    let amb = Ambient::new(table)?;
    let t = TorusMonomial::single(amb.e1_index()?, a.inv()?);
    let word = GroupWord::torus(t.clone())
        .then(&GroupWord::u(amb.alpha1, a.clone()))
        .then(&GroupWord::u(amb.gamma, x.clone()))
        .then(&GroupWord::torus(t.inverse()?));
    Ok((t, normalize(&word, table)?))
}

impl fmt::Display for TorusMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.entries.iter().map(|(k, v)| format!("[{k}]^:{v}")).collect();
        f.write_str(&parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley::build_table;

    fn table(f: Family, n: usize) -> StructureConstants {
        build_table(&RootDatum::build(f, n).unwrap()).unwrap()
    }

    fn point(x: i64) -> HashMap<String, BigRational> {
        [("x".to_string(), BigRational::from_integer(x.into()))].into_iter().collect()
    }

    #[test]
    fn additivity() {
        let t = table(Family::GspinOdd, 3);
        let w = GroupWord::u(0, ScalarExpr::var("x")).then(&GroupWord::u(0, ScalarExpr::var("y")));
        let want = GroupWord::u(0, ScalarExpr::parse("x+y").unwrap());
        assert_eq!(normalize(&w, &t).unwrap(), want);
    }

    #[test]
    fn weyl_square_is_coroot_at_minus_one() {
        let t = table(Family::GspinOdd, 3);
        let d = t.datum();
        for i in 0..3 {
            let w = GroupWord::weyl(i, false).then(&GroupWord::weyl(i, false));
            let want = GroupWord::torus(TorusMonomial::cocharacter(&d.simple_coroots[i], &ScalarExpr::int(-1)).unwrap());
            assert_eq!(normalize(&w, &t).unwrap(), want);
        }
    }

    #[test]
    fn torus_conjugation() {
        let t = table(Family::GspinEven, 3);
        let tm = TorusMonomial::single(1, ScalarExpr::var("s")).mul(&TorusMonomial::single(0, ScalarExpr::int(3)));
        let r = 4;
        let w = GroupWord::torus(tm.clone()).then(&GroupWord::u(r, ScalarExpr::var("x"))).then(&GroupWord::torus(tm.inverse().unwrap()));
        let chi = tm.character(&t.roots().root(r).vector).unwrap();
        assert_eq!(normalize(&w, &t).unwrap(), GroupWord::u(r, chi.mul(&ScalarExpr::var("x"))));
    }

    #[test]
    fn negative_root_round_trip_matches_oracle() {
        let t = table(Family::GspinOdd, 3);
        let rs = t.roots();
        for r in 0..rs.len() {
            let w = GroupWord::u(r, ScalarExpr::var("x"));
            let n = normalize(&w, &t).unwrap();
            assert_eq!(adjoint_eval(&w, &t, &point(3)).unwrap(), adjoint_eval(&n, &t, &point(3)).unwrap(), "root {r}");
        }
    }

    #[test]
    fn d_matches_adjoint() {
        let t = table(Family::GspinOdd, 3);
        let rs = t.roots();
        let one = point(1);
        for i in 0..3 {
            for b in 0..rs.len() {
                let lhs = GroupWord::weyl(i, false).then(&GroupWord::u(b, ScalarExpr::var("x"))).then(&GroupWord::weyl(i, true));
                let a = rs.simple(i);
                let rhs = GroupWord::u(t.reflect(a, b), ScalarExpr::var("x").scale_int(t.d(a, b)));
                assert_eq!(adjoint_eval(&lhs, &t, &one).unwrap(), adjoint_eval(&rhs, &t, &one).unwrap());
                assert!(words_equal(&lhs, &rhs, &t).unwrap());
            }
        }
    }

    #[test]
    fn parse_and_render() {
        let d = RootDatum::build(Family::GspinOdd, 3).unwrap();
        let w = parse_word("u[a1+2a2](x) * w[2] * w[1]^-1 * t[e0^:3, a1^:x]", &d);
        assert!(w.is_err(), "a1+2a2 is not a root of B3");
        let w = parse_word("u[a2+2a3](x) * w[2] * w[1]^-1 * t[e0^:3, a1^:x]", &d).unwrap();
        assert_eq!(w.len(), 4);
        assert_eq!(parse_word(&w.render(&d), &d).unwrap(), w);
        assert_eq!(parse_word("1", &d).unwrap(), GroupWord::identity());
    }

    #[test]
    fn mnn_rank_three() {
        let t = table(Family::GspinOdd, 3);
        let r = bruhat_mnn(&t, &ScalarExpr::var("x")).unwrap();
        assert!(r.equal && r.alternate_equal && r.w_gamma_equal);
        assert_eq!(r.gl1_coordinate, ScalarExpr::int(r.d).div(&ScalarExpr::var("x")).unwrap());
        let p = point(5);
        let lhs = Ambient::new(&t).unwrap().w0().inverse().unwrap()
            .then(&GroupWord::u(0, ScalarExpr::one()))
            .then(&GroupWord::u(Ambient::new(&t).unwrap().gamma, ScalarExpr::var("x")));
        let rhs = r.m.clone().then(&r.n_prime).then(&r.n_bar);
        assert_eq!(adjoint_eval(&lhs, &t, &p).unwrap(), adjoint_eval(&rhs, &t, &p).unwrap());
        assert!(bruhat_mnn(&t, &ScalarExpr::zero()).is_err());
    }

    #[test]
    fn stabilizer_rank_three_and_two() {
        let t = table(Family::GspinOdd, 3);
        let s = stabilizer_roots(&t).unwrap();
        assert!(s.holds());
        assert_eq!(s.target, vec![t.roots().simple(2)]);
        let s = stabilizer_roots(&table(Family::GspinOdd, 2)).unwrap();
        assert!(s.holds() && s.target.is_empty());
    }

    #[test]
    fn e_star() {
        assert!(e_star_check(&RootDatum::build(Family::GspinOdd, 3).unwrap(), None).unwrap().holds());
        assert!(e_star_check(&RootDatum::build(Family::WgspinEven, 4).unwrap(), None).unwrap().holds());
        let r = e_star_check(&RootDatum::build(Family::GspinOdd, 3).unwrap(), Some(2)).unwrap();
        assert!(!r.holds());
        assert_eq!(r.alpha1_pairing, -1);
    }

    #[test]
    fn orbit_reduce_all_ones() {
        let t = table(Family::GspinOdd, 3);
        let amb = Ambient::new(&t).unwrap();
        let mut input = GroupWord::identity();
        for r in amb.radical_roots() {
            input = input.then(&GroupWord::u(r, ScalarExpr::one()));
        }
        assert_eq!(amb.radical_roots().len(), 5);
        let red = orbit_reduce(&t, &input).unwrap();
        assert_eq!(red.a, ScalarExpr::one());
        let back = red.conjugator.clone().then(&red.reduced).then(&red.conjugator.inverse().unwrap());
        assert!(words_equal(&back, &input, &t).unwrap());
        let already = red.reduced.clone();
        let again = orbit_reduce(&t, &already).unwrap();
        assert!(again.conjugator.is_empty());
        let (_, scaled) = central_scaling(&t, &ScalarExpr::int(3), &ScalarExpr::var("x")).unwrap();
        let want = GroupWord::u(amb.alpha1, ScalarExpr::one()).then(&GroupWord::u(amb.gamma, ScalarExpr::var("x").div(&ScalarExpr::int(3)).unwrap()));
        assert_eq!(scaled, want);
    }
}
