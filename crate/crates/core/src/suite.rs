//! The full verification table run by `gspin verify`.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::chevalley::{build_table, expected_w_gamma_sign, LieAlgebra, StructureConstants};
use crate::lattice;
use crate::root_datum::{datum_isomorphic, Family, RootDatum};
use crate::satake::{self, GSpinParameter, ParameterFamily, UnramifiedCharacter};
use crate::scalar::ScalarExpr;
use crate::steinberg::{self, adjoint_eval, Ambient, GroupWord};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckRow {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl CheckRow {
    pub fn render(&self) -> String {
        let status = if self.pass { "PASS" } else { "FAIL" };
        format!("[{:>2}] {}: {}  ({})", self.id, self.name, status, self.detail)
    }
}

pub const CHECK_NAMES: [&str; 12] = [
    "root datum axioms and positive root counts",
    "duality GSpin ↔ GSp/GSO and GSpin5 ≅ GSp4",
    "centers of GSpin, its maximal Levis, GSp and GSO",
    "structure constants: Jacobi, d_{-α,β}, d_{α,β}d_{α,s_α β}, chain table",
    "w_γ sign d and D·d = 1",
    "Bruhat decomposition w0⁻¹ n = m n′ n̄",
    "stabilizer U_{M,n} = U′_{M,m} and e1* pairing",
    "orbit representatives in N and central scaling",
    "Satake parameter shape, central character, twisted self-duality",
    "unramified genericity and full induction",
    "exterior square GSpin6 → GL6",
    "verification table complete",
];

fn row(id: u8, pass: bool, detail: String) -> CheckRow {
    CheckRow { id, name: CHECK_NAMES[id as usize - 1], pass, detail }
}

fn datum(f: Family, n: usize) -> RootDatum {
    RootDatum::build(f, n).expect("built-in family")
}

/// Ambient data the Bruhat checks run on: odd ranks `2..=max`, even ranks `3..=max`.
pub fn ambient_data(max_rank: usize) -> Vec<RootDatum> {
    let mut v: Vec<RootDatum> = (2..=max_rank).map(|n| datum(Family::GspinOdd, n)).collect();
    v.extend((3..=max_rank).map(|n| datum(Family::GspinEven, n)));
    v
}

/// Roots obtained by closing the simple roots under simple reflections.
pub fn reflection_closure(d: &RootDatum) -> HashSet<Vec<i64>> {
    let mut seen: HashSet<Vec<i64>> = d.simple_roots.iter().cloned().collect();
    let mut stack: Vec<Vec<i64>> = seen.iter().cloned().collect();
    while let Some(v) = stack.pop() {
        for (a, c) in d.simple_roots.iter().zip(&d.simple_coroots) {
            let w = lattice::axpy(&v, -lattice::dot(&v, c), a);
            if seen.insert(w.clone()) {
                stack.push(w);
            }
        }
    }
    seen
}

/// Positive-root count by Cartan type of the family.
pub fn expected_positive_count(f: &Family, n: usize) -> usize {
    match f {
        Family::GspinOdd | Family::Gsp => n * n,
        Family::GspinEven | Family::WgspinEven | Family::Gso => n * (n - 1),
        Family::Gl => n * (n - 1) / 2,
        Family::Derived(_) => 0,
    }
}

pub fn check_axioms(max_n: usize) -> CheckRow {
    let mut bad = Vec::new();
    let mut count = 0;
    for f in Family::BUILT {
        for n in 2..=max_n {
            let d = datum(f.clone(), n);
            let v = d.validate();
            let closure = reflection_closure(&d).len();
            let pos = d.roots().positive_count();
            if !v.is_empty() || closure != 2 * pos || pos != expected_positive_count(&f, n) {
                bad.push(format!("{f} n={n}"));
            }
            count += 1;
        }
    }
    row(1, bad.is_empty(), if bad.is_empty() { format!("{count} data, 2 ≤ n ≤ {max_n}") } else { bad.join(", ") })
}

pub fn check_duality(max_n: usize) -> CheckRow {
    let mut bad = Vec::new();
    for n in 1..=max_n {
        if datum_isomorphic(&datum(Family::GspinOdd, n).dual(), &datum(Family::Gsp, n)).is_none() {
            bad.push(format!("odd n={n}"));
        }
        if n >= 2 && datum_isomorphic(&datum(Family::GspinEven, n).dual(), &datum(Family::Gso, n)).is_none() {
            bad.push(format!("even n={n}"));
        }
    }
    let iso = datum_isomorphic(&datum(Family::GspinOdd, 2), &datum(Family::Gsp, 2));
    if iso.is_none() {
        bad.push("GSpin5 ≇ GSp4".into());
    }
    row(2, bad.is_empty(), if bad.is_empty() { format!("n ≤ {max_n}, GSpin5 ≅ GSp4") } else { bad.join(", ") })
}

fn same_lattice(a: &[Vec<i64>], b: &[Vec<i64>]) -> bool {
    lattice::row_hnf(a) == lattice::row_hnf(b)
}

/// Whether `c(-1)` agrees with some element of `extra(-1) · A` (2-torsion classes modulo the identity component).
fn same_component(c: &[i64], extra: &[Vec<i64>], identity: &[Vec<i64>]) -> bool {
    let mut gens: Vec<Vec<i64>> = identity.to_vec();
    gens.extend(extra.iter().cloned());
    let dim = c.len();
    for k in 0..dim {
        gens.push(lattice::scale(2, &lattice::unit_vec(dim, k)));
    }
    let mut with = gens.clone();
    with.push(c.to_vec());
    let merged = lattice::row_hnf(&with);
    merged == lattice::row_hnf(&gens) && !extra.is_empty()
}

pub fn check_centers(max_n: usize) -> CheckRow {
    let mut bad = Vec::new();
    for n in 2..=max_n {
        for f in [Family::GspinOdd, Family::GspinEven] {
            let d = datum(f.clone(), n);
            let dim = d.dim_x;
            let e = |i: usize| lattice::unit_vec(dim, i);
            let even = f == Family::GspinEven;
            let c = d.center();
            let zeta0: Vec<i64> = (0..dim).map(|i| i64::from(i >= 1)).collect();
            let ok = same_lattice(&c.identity_component, &[e(0)])
                && if even { c.extra_components.len() == 1 && same_component(&zeta0, &c.extra_components, &c.identity_component) } else { c.extra_components.is_empty() };
            if !ok {
                bad.push(format!("Z({f} {n})"));
            }
            for k in 1..=n {
                if even && k == n - 1 {
                    continue;
                }
                let m = d.maximal_levi(k, false).expect("maximal Levi").levi;
                let cm = m.center();
                let ak: Vec<i64> = (0..dim).map(|i| i64::from((1..=k).contains(&i))).collect();
                let zk: Vec<i64> = (0..dim).map(|i| i64::from(i > k)).collect();
                let ident_ok = same_lattice(&cm.identity_component, &[e(0), ak]);
                let extra_ok = if even && k < n {
                    cm.extra_components.len() == 1 && same_component(&zk, &cm.extra_components, &cm.identity_component)
                } else {
                    cm.extra_components.is_empty()
                };
                if !(ident_ok && extra_ok) {
                    bad.push(format!("Z_M({f} {n}, k={k})"));
                }
            }
        }
        for f in [Family::Gsp, Family::Gso] {
            let d = datum(f.clone(), n);
            let c = d.center();
            let z: Vec<i64> = (0..d.dim_x).map(|i| if i == 0 { 2 } else { 1 }).collect();
            if !(same_lattice(&c.identity_component, &[z]) && c.extra_components.is_empty()) {
                bad.push(format!("Z({f} {n})"));
            }
        }
    }
    for n in [4usize, 6, 8] {
        if n <= max_n.max(8) && !datum(Family::GspinEven, n).even_center_identity_holds() {
            bad.push(format!("lattice identity n={n}"));
        }
    }
    row(3, bad.is_empty(), if bad.is_empty() { format!("n ≤ {max_n}; identity for n = 4, 6, 8") } else { bad.join(", ") })
}

/// Expected chain values: the first `k` entries are -1, the rest +1.
pub fn expected_chain(d: &RootDatum) -> Vec<i64> {
    let l = d.rank();
    let n = l - 1;
    let len = if d.family == Family::GspinOdd { 2 * (l - 2) + 1 } else { 2 * (l - 3) + 2 };
    let neg = if d.family == Family::GspinOdd { n } else { n - 1 };
    (0..len).map(|i| if i < neg { -1 } else { 1 }).collect()
}

pub fn structure_failures(t: &StructureConstants) -> Vec<String> {
    let mut bad = Vec::new();
    if !LieAlgebra::new(t).jacobi_failures().is_empty() {
        bad.push("Jacobi".to_string());
    }
    let rs = t.roots();
    for a in 0..rs.len() {
        for b in 0..rs.len() {
            if a == b || rs.negate(a) == b {
                continue;
            }
            let sign = if t.pairing(b, a).rem_euclid(2) == 0 { 1 } else { -1 };
            if t.d(rs.negate(a), b) != sign * t.d(a, b) {
                bad.push(format!("d_{{-α,β}} at ({a},{b})"));
            }
            if t.d(a, b) * t.d(a, t.reflect(a, b)) != sign {
                bad.push(format!("d_{{α,β}}d_{{α,s_α β}} at ({a},{b})"));
            }
        }
    }
    bad
}

pub fn check_structure(max_rank: usize) -> CheckRow {
    let mut bad = Vec::new();
    for f in [Family::GspinOdd, Family::GspinEven, Family::Gsp, Family::Gso] {
        for n in 2..=max_rank {
            let t = StructureConstants::new(&datum(f.clone(), n)).expect("table");
            bad.extend(structure_failures(&t).into_iter().map(|s| format!("{f} {n}: {s}")));
        }
    }
    for d in ambient_data(max_rank + 1) {
        if d.rank() < 3 {
            continue;
        }
        let t = build_table(&d).expect("table");
        let got: Vec<i64> = t.chain_table().expect("chain").iter().map(|e| e.value.to_integer()).collect();
        if got != expected_chain(&d) {
            bad.push(format!("chain {} {}: {:?}", d.family, d.rank(), got));
        }
    }
    row(4, bad.is_empty(), if bad.is_empty() { format!("rank ≤ {max_rank}; chain tables for ambient ranks 3–{}", max_rank + 1) } else { bad.join(", ") })
}

pub fn check_w_gamma(max_rank: usize) -> CheckRow {
    let mut bad = Vec::new();
    for d in ambient_data(max_rank + 1) {
        let t = build_table(&d).expect("table");
        let s = t.w_gamma_sign().expect("sign");
        if s != expected_w_gamma_sign(&d) || t.dd_check().expect("D") != 1 {
            bad.push(format!("{} {}", d.family, d.rank()));
        }
    }
    row(5, bad.is_empty(), if bad.is_empty() { format!("ambient ranks 2–{}", max_rank + 1) } else { bad.join(", ") })
}

fn random_rational(rng: &mut StdRng) -> BigRational {
    loop {
        let p: i64 = rng.random_range(-9..=9);
        let q: i64 = rng.random_range(1..=7);
        if p != 0 {
            return BigRational::new(BigInt::from(p), BigInt::from(q));
        }
    }
}

pub fn check_mnn(max_rank: usize, points: usize, seed: u64) -> CheckRow {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut bad = Vec::new();
    let x = ScalarExpr::var("x");
    for d in ambient_data(max_rank) {
        let t = build_table(&d).expect("table");
        let rep = match steinberg::bruhat_mnn(&t, &x) {
            Ok(r) => r,
            Err(e) => {
                bad.push(format!("{} {}: {e}", d.family, d.rank()));
                continue;
            }
        };
        if !rep.holds() {
            bad.push(format!("{} {} symbolic", d.family, d.rank()));
        }
        let rhs = rep.m.clone().then(&rep.n_prime).then(&rep.n_bar);
        for _ in 0..points {
            let p: HashMap<String, BigRational> = [("x".to_string(), random_rational(&mut rng))].into_iter().collect();
            let a = adjoint_eval(&rep.lhs_word, &t, &p);
            let b = adjoint_eval(&rhs, &t, &p);
            let c = adjoint_eval(&rep.lhs, &t, &p);
            if a.is_err() || a != b || a != c {
                bad.push(format!("{} {} oracle", d.family, d.rank()));
                break;
            }
        }
    }
    row(6, bad.is_empty(), if bad.is_empty() { format!("ambient ranks 2–{max_rank}, {points} oracle points each") } else { bad.join(", ") })
}

pub fn check_stabilizer(max_rank: usize) -> CheckRow {
    let mut bad = Vec::new();
    for d in ambient_data(max_rank) {
        let t = build_table(&d).expect("table");
        match steinberg::stabilizer_roots(&t) {
            Ok(r) if r.holds() => {}
            Ok(r) => {
                let show = |v: &[usize]| v.iter().map(|&i| RootDatum::render_coords(&t.roots().root(i).coords)).collect::<Vec<_>>().join(" ");
                bad.push(format!(
                    "stabilizer {} {}: left {{{}}} right {{{}}} expected {{{}}}",
                    d.family,
                    d.rank(),
                    show(&r.left),
                    show(&r.right),
                    show(&r.target)
                ))
            }
            Err(e) => bad.push(format!("stabilizer {} {}: {e}", d.family, d.rank())),
        }
    }
    let mut estar: Vec<RootDatum> = (2..=max_rank).map(|n| datum(Family::GspinOdd, n)).collect();
    estar.extend((3..=max_rank).map(|n| datum(Family::WgspinEven, n)));
    for d in estar {
        if !steinberg::e_star_check(&d, None).map(|r| r.holds()).unwrap_or(false) {
            bad.push(format!("e* {} {}", d.family, d.rank()));
        }
    }
    row(7, bad.is_empty(), if bad.is_empty() { format!("ambient ranks 2–{max_rank}") } else { bad.join(", ") })
}

/// A random element of `N` with nonzero `α1`-coordinate, atoms in a shuffled order.
pub fn random_radical_word(amb: &Ambient, rng: &mut StdRng) -> GroupWord {
    let mut roots = amb.radical_roots();
    for i in (1..roots.len()).rev() {
        let j = rng.random_range(0..=i);
        roots.swap(i, j);
    }
    let mut w = GroupWord::identity();
    for r in roots {
        let v = if r == amb.alpha1 {
            ScalarExpr::rational(random_rational(rng))
        } else {
            match rng.random_range(0..4) {
                0 => ScalarExpr::zero(),
                _ => ScalarExpr::rational(random_rational(rng)),
            }
        };
        w = w.then(&GroupWord::u(r, v));
    }
    w
}

pub fn check_orbits(max_rank: usize, samples: usize, seed: u64) -> CheckRow {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut bad = Vec::new();
    for d in ambient_data(max_rank) {
        let t = build_table(&d).expect("table");
        let amb = Ambient::new(&t).expect("ambient");
        for _ in 0..samples {
            let input = random_radical_word(&amb, &mut rng);
            let ok = (|| -> Result<bool, steinberg::SteinbergError> {
                let red = steinberg::orbit_reduce(&t, &input)?;
                let back = red.conjugator.clone().then(&red.reduced).then(&red.conjugator.inverse()?);
                let (_, scaled) = steinberg::central_scaling(&t, &red.a, &red.x)?;
                let want = GroupWord::u(amb.alpha1, ScalarExpr::one()).then(&GroupWord::u(amb.gamma, red.x.div(&red.a)?));
                Ok(steinberg::words_equal(&back, &input, &t)? && steinberg::words_equal(&scaled, &want, &t)?)
            })();
            if !matches!(ok, Ok(true)) {
                bad.push(format!("{} {}", d.family, d.rank()));
                break;
            }
        }
    }
    row(8, bad.is_empty(), if bad.is_empty() { format!("{samples} inputs per ambient rank ≤ {max_rank}") } else { bad.join(", ") })
}

pub fn random_character(rng: &mut StdRng) -> UnramifiedCharacter {
    let s = Rational64::new(rng.random_range(-12..=12), rng.random_range(1..=6));
    match rng.random_range(0..3) {
        0 => UnramifiedCharacter::abs(s),
        1 => UnramifiedCharacter::new("μ", rng.random_range(-2..=2), s),
        _ => UnramifiedCharacter::new("ν", 1, s).mul(&UnramifiedCharacter::new("μ", rng.random_range(-1..=1), Rational64::from_integer(0))),
    }
}

pub fn random_parameter(family: ParameterFamily, n: usize, rng: &mut StdRng) -> GSpinParameter {
    GSpinParameter::new(family, n, (0..=n).map(|_| random_character(rng)).collect()).expect("length")
}

pub fn check_transfer(max_n: usize, samples: usize, seed: u64) -> CheckRow {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut bad = Vec::new();
    for family in [ParameterFamily::Odd, ParameterFamily::Even] {
        let lo = if family == ParameterFamily::Even { 2 } else { 1 };
        for n in lo..=max_n {
            for _ in 0..samples {
                let p = random_parameter(family, n, &mut rng);
                let t = satake::transfer(&p);
                let chi0 = &p.chars[0];
                let shape = t.satake_diag.len() == 2 * n
                    && (0..n).all(|i| t.satake_diag[i] == p.chars[i + 1] && t.satake_diag[2 * n - 1 - i] == chi0.mul(&p.chars[i + 1].inverse()));
                if !(shape && t.central == chi0.pow(n as i64) && t.gl.central_character() == t.central && satake::twist_dual_check(&t.gl, chi0)) {
                    bad.push(format!("{family:?} n={n}"));
                    break;
                }
            }
        }
    }
    row(9, bad.is_empty(), if bad.is_empty() { format!("{samples} parameters per family and n ≤ {max_n}") } else { bad.join(", ") })
}

/// Rationals `p/q` with `q ≤ 6` and `|p/q| ≤ 1`.
pub fn exponent_grid() -> Vec<Rational64> {
    let mut v: Vec<Rational64> = Vec::new();
    for q in 1..=6i64 {
        for p in -q..=q {
            v.push(Rational64::new(p, q));
        }
    }
    v.sort();
    v.dedup();
    v
}

/// Odd-case grid: genericity of the GSpin parameter implies full induction of its transfer.
pub fn genericity_grid(max_n: usize) -> (usize, Vec<GSpinParameter>) {
    let grid = exponent_grid();
    let mut checked = 0;
    let mut bad = Vec::new();
    for n in 1..=max_n {
        let d = datum(Family::GspinOdd, n);
        let mut idx = vec![0usize; n + 1];
        loop {
            let chars = idx.iter().map(|&i| UnramifiedCharacter::abs(grid[i])).collect();
            let p = GSpinParameter::new(ParameterFamily::Odd, n, chars).expect("length");
            let (g, _) = satake::is_generic_unramified(&d, &p).expect("matching datum");
            if g && !satake::gl_full_induced_generic(&satake::transfer(&p).gl) {
                bad.push(p);
            }
            checked += 1;
            let mut k = 0;
            while k <= n {
                idx[k] += 1;
                if idx[k] < grid.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k > n {
                break;
            }
        }
    }
    (checked, bad)
}

pub fn check_genericity(max_n: usize) -> CheckRow {
    let mut bad = Vec::new();
    let fixture = satake::even_center_fixture(false);
    let (g, wit) = satake::is_generic_unramified(&datum(Family::GspinEven, 3), &fixture).expect("matching datum");
    if g || !wit.iter().any(|w| w.coroot == vec![-1, 1, 0, 1]) {
        bad.push("even-center fixture".to_string());
    }
    let (checked, fails) = genericity_grid(max_n.min(3));
    if !fails.is_empty() {
        bad.push(format!("{} grid failures", fails.len()));
    }
    row(10, bad.is_empty(), if bad.is_empty() { format!("fixture non-generic via e1*+e3*-e0*; {checked} grid parameters") } else { bad.join(", ") })
}

pub fn check_exterior_square(points: usize, seed: u64) -> CheckRow {
    let mut rng = StdRng::seed_from_u64(seed);
    let vars = ["a1", "a2", "a3", "a4"].map(ScalarExpr::var);
    let mut ok = satake::exterior_square_check(&vars).map(|r| r.multiset_equal && r.entrywise_equal).unwrap_or(false);
    for _ in 0..points {
        let a = [(); 4].map(|_| ScalarExpr::rational(random_rational(&mut rng)));
        ok &= satake::exterior_square_check(&a).map(|r| r.multiset_equal && r.entrywise_equal).unwrap_or(false);
    }
    row(11, ok, format!("symbolic and {points} rational points; ∧² basis order 12,13,23,14,24,34"))
}

/// All rows; bounds are capped by `max_rank` (chain tables and signs reach `max_rank + 1`).
pub fn run(max_rank: usize) -> Vec<CheckRow> {
    let max_rank = max_rank.max(2);
    let mut rows = vec![
        check_axioms(max_rank),
        check_duality(max_rank),
        check_centers(max_rank),
        check_structure(max_rank),
        check_w_gamma(max_rank),
        check_mnn(max_rank, 2, 6),
        check_stabilizer(max_rank),
        check_orbits(max_rank, 5, 8),
        check_transfer(max_rank, 25, 9),
        check_genericity(max_rank),
        check_exterior_square(10, 11),
    ];
    let complete = rows.iter().map(|r| r.id).collect::<Vec<_>>() == (1..=11).collect::<Vec<u8>>();
    rows.push(row(12, complete, "rows 1–11 present".into()));
    rows
}
