//! Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.
//! Expected values come from oracles written here, not from the library's own checks.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use gspin::chevalley::{build_table, StructureConstants};
use gspin::lattice::{self, IMat};
use gspin::satake::{self, GSpinParameter, ParameterFamily, UnramifiedCharacter};
use gspin::steinberg::{self, adjoint_eval, Ambient, Atom, GroupWord};
use gspin::weyl::{self, WeylElement};
use gspin::{datum_isomorphic, suite, Family, RootDatum, ScalarExpr};

fn report(id: u8, name: &str, pass: bool, detail: &str) {
    println!("criterion {id:>2} {name}: {}  ({detail})", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {id} failed: {detail}");
}

fn datum(f: Family, n: usize) -> RootDatum {
    RootDatum::build(f, n).unwrap()
}

/// Ambient data of the Bruhat computations: odd ranks `lo..=hi`, even ranks `max(lo,3)..=hi`.
fn ambients(lo: usize, hi: usize) -> Vec<RootDatum> {
    let mut v: Vec<RootDatum> = (lo..=hi).map(|n| datum(Family::GspinOdd, n)).collect();
    v.extend((lo.max(3)..=hi).map(|n| datum(Family::GspinEven, n)));
    v
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn random_rat(rng: &mut StdRng) -> BigRational {
    loop {
        let p = rng.random_range(-11i64..=11);
        if p != 0 {
            return rat(p, rng.random_range(1..=8));
        }
    }
}

/// Brute-force root set: close the simple roots under `s_i(v) = v - ⟨v, α_i∨⟩ α_i`.
fn closure(d: &RootDatum) -> HashSet<Vec<i64>> {
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut todo: Vec<Vec<i64>> = d.simple_roots.clone();
    while let Some(v) = todo.pop() {
        if !seen.insert(v.clone()) {
            continue;
        }
        for (a, c) in d.simple_roots.iter().zip(&d.simple_coroots) {
            let k = dot(&v, c);
            todo.push(v.iter().zip(a).map(|(x, y)| x - k * y).collect());
        }
    }
    seen
}

#[test]
fn criterion_01_root_datum_axioms_and_counts() {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut count = 0;
    for f in Family::BUILT {
        for n in 2..=8usize {
            let d = datum(f.clone(), n);
            let expected = match f {
                Family::GspinOdd | Family::Gsp => n * n,
                Family::GspinEven | Family::WgspinEven | Family::Gso => n * (n - 1),
                Family::Gl => n * (n - 1) / 2,
                Family::Derived(_) => unreachable!(),
            };
            let brute = closure(&d);
            let rs = d.roots();
            let listed: HashSet<Vec<i64>> = rs.all().iter().map(|r| r.vector.clone()).collect();
            let cartan_ok = (0..d.rank()).all(|i| dot(&d.simple_roots[i], &d.simple_coroots[i]) == 2);
            if !d.validate().is_empty() || brute.len() != 2 * expected || listed != brute || rs.positive_count() != expected || !cartan_ok {
                bad.push(format!("{f} {n}"));
            }
            count += 1;
        }
    }
    let t = start.elapsed();
    let pass = bad.is_empty() && t < Duration::from_secs(5);
    report(1, "root datum axioms, positive root counts", pass, &format!("{count} data in {:.2?}; failures: {bad:?}", t));
}

/// Checks that `m` is a root-datum isomorphism `d1 → d2`.
fn is_datum_iso(m: &IMat, d1: &RootDatum, d2: &RootDatum) -> bool {
    let det = lattice::det(m);
    if det.abs() != 1 {
        return false;
    }
    let mt = lattice::transpose(m);
    let inv_t = match lattice::unimodular_inverse(&mt) {
        Some(x) => x,
        None => return false,
    };
    (0..d1.rank()).all(|i| {
        let img = lattice::mat_vec(m, &d1.simple_roots[i]);
        let co = lattice::mat_vec(&inv_t, &d1.simple_coroots[i]);
        d2.simple_roots.iter().zip(&d2.simple_coroots).any(|(a, c)| *a == img && *c == co)
    })
}

#[test]
fn criterion_02_duality_and_gspin5_gsp4() {
    let start = Instant::now();
    let mut bad = Vec::new();
    for n in 1..=5usize {
        let mut pairs = vec![(datum(Family::GspinOdd, n).dual(), datum(Family::Gsp, n))];
        if n >= 2 {
            pairs.push((datum(Family::GspinEven, n).dual(), datum(Family::Gso, n)));
        }
        for (a, b) in pairs {
            match datum_isomorphic(&a, &b) {
                Some(m) if is_datum_iso(&m, &a, &b) => {}
                _ => bad.push(format!("{} {n}", b.family)),
            }
        }
    }
    let (g5, sp4) = (datum(Family::GspinOdd, 2), datum(Family::Gsp, 2));
    match datum_isomorphic(&g5, &sp4) {
        Some(m) if is_datum_iso(&m, &g5, &sp4) => {}
        _ => bad.push("GSpin5 ≇ GSp4".into()),
    }
    let t = start.elapsed();
    report(2, "duality and GSpin5 ≅ GSp4", bad.is_empty() && t < Duration::from_secs(2), &format!("n ≤ 5 in {t:.2?}; failures: {bad:?}"));
}

/// Rational rank of a list of integer vectors.
fn rank_q(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows.iter().map(|r| r.iter().map(|&x| rat(x, 1)).collect()).collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(rank, p);
        for i in 0..m.len() {
            if i != rank && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[rank][c];
                let pivot = m[rank].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn det_i(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..].iter().map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, &x)| x).collect()).collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * m[0][j] * det_i(&minor)
        })
        .sum()
}

/// Order of the torsion of `X / ZΔ`: gcd of the maximal minors of the simple roots.
fn torsion_order(d: &RootDatum) -> i64 {
    let r = d.rank();
    if r == 0 {
        return 1;
    }
    let cols: Vec<usize> = (0..d.dim_x).collect();
    let mut g = 0;
    let mut pick = vec![0usize; r];
    fn rec(k: usize, start: usize, cols: &[usize], pick: &mut Vec<usize>, d: &RootDatum, g: &mut i64) {
        if k == pick.len() {
            let m: Vec<Vec<i64>> = d.simple_roots.iter().map(|a| pick.iter().map(|&c| a[c]).collect()).collect();
            *g = gcd(*g, det_i(&m));
            return;
        }
        for c in start..cols.len() {
            pick[k] = cols[c];
            rec(k + 1, c + 1, cols, pick, d, g);
        }
    }
    rec(0, 0, &cols, &mut pick, d, &mut g);
    g
}

/// Identity component `{c : ⟨α, c⟩ = 0 ∀α}` and torsion representatives, checked against the oracle.
fn center_ok(d: &RootDatum, torsion_rep: Option<&[i64]>, identity_expected: &[Vec<i64>]) -> bool {
    let c = d.center();
    let kernel_dim = d.dim_x - rank_q(&d.simple_roots);
    let in_kernel = |v: &[i64]| d.simple_roots.iter().all(|a| dot(a, v) == 0);
    let ident_ok = c.identity_component.len() == kernel_dim
        && c.identity_component.iter().all(|v| in_kernel(v))
        && rank_q(&c.identity_component) == kernel_dim
        && identity_expected.iter().all(|v| in_kernel(v))
        && rank_q(&[c.identity_component.clone(), identity_expected.to_vec()].concat()) == kernel_dim;
    let order = torsion_order(d);
    let extra_ok = match torsion_rep {
        None => order == 1 && c.extra_components.is_empty(),
        Some(z) => {
            // z(-1) central: every simple root pairs evenly with z; not in the identity component modulo 2.
            let central = d.simple_roots.iter().all(|a| dot(a, z).rem_euclid(2) == 0);
            let mut span = c.identity_component.clone();
            span.extend((0..d.dim_x).map(|k| lattice::scale(2, &lattice::unit_vec(d.dim_x, k))));
            let mut with = span.clone();
            with.push(z.to_vec());
            let nontrivial = lattice::row_hnf(&with) != lattice::row_hnf(&span);
            let mut with_extra = span.clone();
            with_extra.extend(c.extra_components.iter().cloned());
            let same = lattice::row_hnf(&with_extra) == lattice::row_hnf(&with);
            order == 2 && c.extra_components.len() == 1 && central && nontrivial && same
        }
    };
    ident_ok && extra_ok
}

#[test]
fn criterion_03_centers() {
    let mut bad = Vec::new();
    for n in 2..=6usize {
        for f in [Family::GspinOdd, Family::GspinEven, Family::WgspinEven] {
            let d = datum(f.clone(), n);
            let dim = d.dim_x;
            let even = f == Family::GspinEven;
            let e0 = lattice::unit_vec(dim, 0);
            let zeta0: Vec<i64> = (0..dim).map(|i| i64::from(i >= 1)).collect();
            if f != Family::WgspinEven && !center_ok(&d, even.then_some(&zeta0[..]), std::slice::from_ref(&e0)) {
                bad.push(format!("Z({f} {n})"));
            }
            if f == Family::WgspinEven && !center_ok(&d, None, &[]) {
                bad.push(format!("Z({f} {n})"));
            }
            if f == Family::WgspinEven {
                continue;
            }
            for k in 1..=n {
                if even && k == n - 1 {
                    continue;
                }
                let m = d.maximal_levi(k, false).unwrap().levi;
                let ak: Vec<i64> = (0..dim).map(|i| i64::from((1..=k).contains(&i))).collect();
                let zk: Vec<i64> = (0..dim).map(|i| i64::from(i > k)).collect();
                let torsion = (even && k < n).then_some(&zk[..]);
                if !center_ok(&m, torsion, &[e0.clone(), ak]) {
                    bad.push(format!("Z_M({f} {n}, k={k})"));
                }
            }
        }
        for f in [Family::Gsp, Family::Gso] {
            let d = datum(f.clone(), n);
            let z: Vec<i64> = (0..d.dim_x).map(|i| if i == 0 { 2 } else { 1 }).collect();
            let c = d.center();
            if !center_ok(&d, None, std::slice::from_ref(&z)) || lattice::row_hnf(&c.identity_component) != lattice::row_hnf(&[z]) {
                bad.push(format!("Z({f} {n})"));
            }
        }
    }
    // e1*+…+en* = Σ_{j≤n-2} j α_j∨ + (n/2-1) α_{n-1}∨ + (n/2) α_n∨ + (n/2) e0*, doubled.
    for n in [4usize, 6, 8] {
        let d = datum(Family::GspinEven, n);
        let mut rhs = vec![0i64; d.dim_x];
        for j in 1..=n - 2 {
            rhs = lattice::axpy(&rhs, 2 * j as i64, &d.simple_coroots[j - 1]);
        }
        rhs = lattice::axpy(&rhs, n as i64 - 2, &d.simple_coroots[n - 2]);
        rhs = lattice::axpy(&rhs, n as i64, &d.simple_coroots[n - 1]);
        rhs[0] += n as i64;
        let lhs: Vec<i64> = (0..d.dim_x).map(|i| if i == 0 { 0 } else { 2 }).collect();
        if lhs != rhs || !d.even_center_identity_holds() {
            bad.push(format!("lattice identity n={n}"));
        }
    }
    report(3, "centers, torsion parts, even lattice identity", bad.is_empty(), &format!("n ≤ 6; failures: {bad:?}"));
}

/// Independent Jacobi check on the Chevalley basis `e_α`, `h_k`.
fn jacobi_fails(t: &StructureConstants) -> usize {
    let rs = t.roots();
    let nr = rs.len();
    let dim = nr + t.datum().dim_x;
    let br = |x: usize, y: usize| -> Vec<(usize, i64)> {
        let root_h = |r: usize, k: usize| vec![(r, rs.root(r).vector[k])];
        match (x < nr, y < nr) {
            (false, false) => vec![],
            (false, true) => root_h(y, x - nr),
            (true, false) => root_h(x, y - nr).into_iter().map(|(i, c)| (i, -c)).collect(),
            (true, true) => {
                if rs.negate(x) == y {
                    rs.root(x).coroot.iter().enumerate().map(|(k, &c)| (nr + k, c)).collect()
                } else if let Some(s) = rs.index_of_vector(&lattice::add(&rs.root(x).vector, &rs.root(y).vector)) {
                    vec![(s, t.n(x, y))]
                } else {
                    vec![]
                }
            }
        }
    };
    let table: Vec<Vec<Vec<(usize, i64)>>> = (0..dim).map(|i| (0..dim).map(|j| br(i, j)).collect()).collect();
    let mut fails = 0;
    let mut acc = vec![0i64; dim];
    for x in 0..nr {
        for y in x + 1..dim {
            for z in y + 1..dim {
                acc.iter_mut().for_each(|a| *a = 0);
                for (p, q, r) in [(x, y, z), (y, z, x), (z, x, y)] {
                    for &(j, b) in &table[q][r] {
                        for &(k, c) in &table[p][j] {
                            acc[k] += b * c;
                        }
                    }
                }
                if acc.iter().any(|&a| a != 0) {
                    fails += 1;
                }
            }
        }
    }
    fails
}

/// `Ad(u_α(1) u_{-α}(-1) u_α(1)) e_β = d_{α,β} e_{s_α β}` read off the adjoint oracle.
fn d_from_adjoint(t: &StructureConstants, a: usize) -> Vec<Option<i64>> {
    let rs = t.roots();
    let w = GroupWord::u(a, ScalarExpr::one()).then(&GroupWord::u(rs.negate(a), ScalarExpr::int(-1))).then(&GroupWord::u(a, ScalarExpr::one()));
    let m = adjoint_eval(&w, t, &HashMap::new()).unwrap();
    let s = weyl::reflection(t.datum(), &rs.root(a).vector).unwrap();
    (0..rs.len())
        .map(|b| {
            let img = rs.index_of_vector(&s.apply(&rs.root(b).vector))?;
            let v = &m[img][b];
            (v.is_integer() && v.abs().is_one()).then(|| v.to_integer().try_into().unwrap())
        })
        .collect()
}

#[test]
fn criterion_04_structure_constants() {
    let mut bad = Vec::new();
    let mut tables: Vec<(String, StructureConstants)> = Vec::new();
    for f in [Family::GspinOdd, Family::GspinEven, Family::Gsp, Family::Gso] {
        for n in 2..=5usize {
            tables.push((format!("{f} {n}"), StructureConstants::new(&datum(f.clone(), n)).unwrap()));
        }
    }
    for d in ambients(2, 5) {
        tables.push((format!("ambient {} {}", d.family, d.rank()), build_table(&d).unwrap()));
    }
    for (name, t) in &tables {
        if jacobi_fails(t) != 0 {
            bad.push(format!("{name}: Jacobi"));
        }
        let rs = t.roots();
        for a in 0..rs.len() {
            let adj = d_from_adjoint(t, a);
            for b in 0..rs.len() {
                if b == a || b == rs.negate(a) {
                    continue;
                }
                let p = dot(&rs.root(b).vector, &rs.root(a).coroot);
                let sign = if p.rem_euclid(2) == 0 { 1 } else { -1 };
                if t.d(rs.negate(a), b) != sign * t.d(a, b) {
                    bad.push(format!("{name}: d_(-α,β) ({a},{b})"));
                }
                let sb = rs.index_of_vector(&lattice::axpy(&rs.root(b).vector, -p, &rs.root(a).vector)).unwrap();
                if t.d(a, b) * t.d(a, sb) != sign {
                    bad.push(format!("{name}: d_(α,β) d_(α,sβ) ({a},{b})"));
                }
                if adj[b] != Some(t.d(a, b)) {
                    bad.push(format!("{name}: d vs adjoint ({a},{b})"));
                }
            }
        }
    }
    // Chain table: c-constants along β1 → … → γ; the first n (odd) or n-1 (even) are -1, the rest +1.
    for d in ambients(3, 6) {
        let t = build_table(&d).unwrap();
        let n = d.rank() - 1;
        let neg = if d.family == Family::GspinOdd { n } else { n - 1 };
        let chain = weyl::beta_chain(&d).unwrap();
        let entries = t.chain_table().unwrap();
        let values: Vec<i64> = entries.iter().map(|e| e.value.to_integer()).collect();
        let expected: Vec<i64> = (0..entries.len()).map(|i| if i < neg { -1 } else { 1 }).collect();
        let len_ok = entries.len() == chain.len() - 1 && entries.len() == if d.family == Family::GspinOdd { 2 * n - 1 } else { 2 * n - 2 };
        let consistent = entries.iter().all(|e| t.c(d.roots().simple(e.simple), e.beta, e.i, 1) == Some(e.value) && e.value.is_integer());
        if values != expected || !len_ok || !consistent {
            bad.push(format!("chain {} {}: {values:?}", d.family, d.rank()));
        }
    }
    bad.truncate(12);
    report(4, "structure constants: Jacobi, sign rules, chain table", bad.is_empty(), &format!("{} tables; chains for ambient ranks 3–6; failures: {bad:?}", tables.len()));
}

#[test]
fn criterion_05_w_gamma_sign_and_dd() {
    let mut bad = Vec::new();
    for d in ambients(2, 6) {
        let t = build_table(&d).unwrap();
        let n = d.rank() as u32 - 1;
        let want = if d.family == Family::GspinOdd { (-1i64).pow(n) } else { (-1i64).pow(n - 1) };
        // Oracle: the product of d along the chain, each read from the adjoint representation.
        let refl = weyl::beta_reflections(&d).unwrap();
        let chain = weyl::beta_chain(&d).unwrap();
        let rs = t.roots();
        let mut adj_sign = 1;
        let mut adj_big_d = 1;
        for (i, &j) in refl.iter().enumerate() {
            adj_sign *= d_from_adjoint(&t, rs.simple(j))[chain[i]].unwrap();
            adj_big_d *= d_from_adjoint(&t, rs.negate(rs.simple(j)))[chain[i + 1]].unwrap();
        }
        let s = t.w_gamma_sign().unwrap();
        if s != want || adj_sign != want || t.dd_check().unwrap() != 1 || adj_sign * adj_big_d != 1 {
            bad.push(format!("{} {}: d = {s}, expected {want}", d.family, d.rank()));
        }
    }
    report(5, "w_γ sign and D·d = 1", bad.is_empty(), &format!("ambient ranks 2–6; failures: {bad:?}"));
}

#[test]
fn criterion_06_bruhat_mnn() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x6);
    let mut bad = Vec::new();
    let x = ScalarExpr::var("x");
    for d in ambients(2, 5) {
        let t = build_table(&d).unwrap();
        let rep = steinberg::bruhat_mnn(&t, &x).unwrap();
        let sign = t.w_gamma_sign().unwrap();
        let gl1_ok = rep.gl1_coordinate == ScalarExpr::int(sign).div(&x).unwrap();
        if !rep.equal || !rep.holds() || !gl1_ok {
            bad.push(format!("{} {} symbolic", d.family, d.rank()));
        }
        let rhs = rep.m.clone().then(&rep.n_prime).then(&rep.n_bar);
        for _ in 0..5 {
            let p: HashMap<String, BigRational> = [("x".to_string(), random_rat(&mut rng))].into();
            let a = adjoint_eval(&rep.lhs_word, &t, &p).unwrap();
            if a != adjoint_eval(&rhs, &t, &p).unwrap() || a != adjoint_eval(&rep.lhs, &t, &p).unwrap() {
                bad.push(format!("{} {} at x = {}", d.family, d.rank(), p["x"]));
            }
        }
    }
    let el = start.elapsed();
    report(6, "Bruhat decomposition w0⁻¹ n = m n′ n̄", bad.is_empty() && el < Duration::from_secs(30), &format!("ambient ranks 2–5, 5 points each, {el:.2?}; failures: {bad:?}"));
}

#[test]
fn criterion_07_stabilizer_and_e_star() {
    let mut bad = Vec::new();
    let mut notes = Vec::new();
    for d in ambients(2, 5) {
        let t = build_table(&d).unwrap();
        let rs = t.roots();
        let amb = Ambient::new(&t).unwrap();
        let wp = WeylElement::from_word(&d, &amb.w_prime_word).unwrap();
        let levi: Vec<usize> = (0..rs.positive_count()).filter(|&r| rs.root(r).coords[0] == 0).collect();
        // Σ(Ω)⁺ for Ω = Δ ∖ {α1, α2}.
        let target: Vec<usize> = levi.iter().copied().filter(|&r| rs.root(r).coords[1] == 0).collect();
        let right_oracle: Vec<usize> = levi.iter().copied().filter(|&r| rs.is_positive(rs.index_of_vector(&wp.apply(&rs.root(r).vector)).unwrap())).collect();
        let rep = steinberg::stabilizer_roots(&t).unwrap();
        if rep.left != target || rep.right != target || right_oracle != target {
            let show = |v: &[usize]| v.iter().map(|&i| RootDatum::render_coords(&rs.root(i).coords)).collect::<Vec<_>>().join(" ");
            bad.push(format!("{} {}: left {{{}}} right {{{}}} target {{{}}}", d.family, d.rank(), show(&rep.left), show(&rep.right), show(&target)));
            if rep.left == rep.right {
                notes.push(format!("{} {}: the two stabilizer sets agree", d.family, d.rank()));
            }
        }
    }
    let mut estar: Vec<RootDatum> = (2..=5).map(|n| datum(Family::GspinOdd, n)).collect();
    estar.extend((3..=5).map(|n| datum(Family::WgspinEven, n)));
    for d in estar {
        let label = if d.family == Family::GspinOdd { "e1" } else { "E1" };
        let k = d.basis_labels.iter().position(|l| l == label).unwrap();
        let rs = d.roots();
        let oracle = d.simple_roots[0][k] == 1 && rs.all().iter().filter(|r| r.coords[0] == 0).all(|r| r.vector[k] == 0);
        let module = steinberg::e_star_check(&d, None).unwrap().holds();
        if !(oracle && module) {
            bad.push(format!("e* {} {}", d.family, d.rank()));
        }
    }
    report(7, "stabilizer sets equal Σ(Ω)⁺, e1* pairing", bad.is_empty(), &format!("ambient ranks 2–5; failures: {bad:?}; {notes:?}"));
}

fn random_n_element(amb: &Ambient, rng: &mut StdRng) -> GroupWord {
    let mut roots = amb.radical_roots();
    for i in (1..roots.len()).rev() {
        roots.swap(i, rng.random_range(0..=i));
    }
    roots.into_iter().fold(GroupWord::identity(), |w, r| {
        let v = if r == amb.alpha1 || rng.random_bool(0.7) { ScalarExpr::rational(random_rat(rng)) } else { ScalarExpr::zero() };
        w.then(&GroupWord::u(r, v))
    })
}

#[test]
fn criterion_08_orbit_reduction() {
    let mut rng = StdRng::seed_from_u64(0x8);
    let mut bad = Vec::new();
    let mut total = 0;
    for d in ambients(2, 4) {
        let t = build_table(&d).unwrap();
        let amb = Ambient::new(&t).unwrap();
        let none = HashMap::new();
        for _ in 0..20 {
            let input = random_n_element(&amb, &mut rng);
            let red = steinberg::orbit_reduce(&t, &input).unwrap();
            let shape = matches!(&red.reduced.atoms[..], [Atom::Unipotent { root: r1, .. }, Atom::Unipotent { root: r2, .. }] if *r1 == amb.alpha1 && *r2 == amb.gamma)
                || matches!(&red.reduced.atoms[..], [Atom::Unipotent { root: r1, .. }] if *r1 == amb.alpha1);
            let in_levi_unipotent = red.conjugator.atoms.iter().all(|a| matches!(a, Atom::Unipotent { root, .. } if amb.levi_positive().contains(root)));
            let back = red.conjugator.clone().then(&red.reduced).then(&red.conjugator.inverse().unwrap());
            let round_trip = adjoint_eval(&back, &t, &none).unwrap() == adjoint_eval(&input, &t, &none).unwrap()
                && steinberg::words_equal(&back, &input, &t).unwrap();
            let (torus, scaled) = steinberg::central_scaling(&t, &red.a, &red.x).unwrap();
            let want = GroupWord::u(amb.alpha1, ScalarExpr::one()).then(&GroupWord::u(amb.gamma, red.x.div(&red.a).unwrap()));
            let conj = GroupWord::torus(torus.clone()).then(&red.reduced).then(&GroupWord::torus(torus.inverse().unwrap()));
            let scaled_ok = adjoint_eval(&conj, &t, &none).unwrap() == adjoint_eval(&want, &t, &none).unwrap() && steinberg::words_equal(&scaled, &want, &t).unwrap();
            if !(shape && in_levi_unipotent && round_trip && scaled_ok) {
                bad.push(format!("{} {}: {}", d.family, d.rank(), input.render(&d)));
            }
            total += 1;
        }
    }
    report(8, "orbit representatives and central scaling", bad.is_empty(), &format!("{total} inputs; failures: {bad:?}"));
}

/// Characters as (unitary exponents, real exponent), with arithmetic written out here.
type Ch = (BTreeMap<String, i64>, Rational64);

fn ch(c: &UnramifiedCharacter) -> Ch {
    (c.unitary.clone(), c.s)
}

fn ch_mul(a: &Ch, b: &Ch, k: i64) -> Ch {
    let mut u = a.0.clone();
    for (s, e) in &b.0 {
        *u.entry(s.clone()).or_insert(0) += k * e;
    }
    u.retain(|_, e| *e != 0);
    (u, a.1 + b.1 * k)
}

fn sorted(mut v: Vec<Ch>) -> Vec<Ch> {
    v.sort();
    v
}

fn random_char(rng: &mut StdRng) -> UnramifiedCharacter {
    let s = Rational64::new(rng.random_range(-15..=15), rng.random_range(1..=7));
    let mut c = UnramifiedCharacter::abs(s);
    for sym in ["μ", "ν"] {
        let k = rng.random_range(-2..=2);
        if k != 0 {
            c = c.mul(&UnramifiedCharacter::new(sym, k, Rational64::from_integer(0)));
        }
    }
    c
}

#[test]
fn criterion_09_satake_transfer() {
    let mut rng = StdRng::seed_from_u64(0x9);
    let mut bad = Vec::new();
    let unit: Ch = (BTreeMap::new(), Rational64::from_integer(0));
    for fam in [ParameterFamily::Odd, ParameterFamily::Even] {
        for i in 0..100 {
            let n = if fam == ParameterFamily::Odd { 1 + i % 4 } else { 2 + i % 3 };
            let chars: Vec<UnramifiedCharacter> = (0..=n).map(|_| random_char(&mut rng)).collect();
            let p = GSpinParameter::new(fam, n, chars.clone()).unwrap();
            let t = satake::transfer(&p);
            let c: Vec<Ch> = chars.iter().map(ch).collect();
            let mut expected: Vec<Ch> = c[1..].to_vec();
            expected.extend(c[1..].iter().rev().map(|x| ch_mul(&c[0], x, -1)));
            let got: Vec<Ch> = t.satake_diag.iter().map(ch).collect();
            let central = (0..n).fold(unit.clone(), |acc, _| ch_mul(&acc, &c[0], 1));
            let product = got.iter().fold(unit.clone(), |acc, x| ch_mul(&acc, x, 1));
            let twisted: Vec<Ch> = got.iter().map(|x| ch_mul(&c[0], x, -1)).collect();
            let gl: Vec<Ch> = t.gl.entries.iter().map(ch).collect();
            let json_ok = serde_json::from_str::<GSpinParameter>(&serde_json::to_string(&p).unwrap()).unwrap() == p;
            let ok = got == expected
                && sorted(gl.clone()) == sorted(expected.clone())
                && ch(&t.central) == central
                && product == central
                && sorted(twisted) == sorted(gl)
                && satake::twist_dual_check(&t.gl, &chars[0])
                && json_ok;
            if !ok {
                bad.push(format!("{fam:?} n={n}"));
            }
        }
    }
    report(9, "Satake parameter shape, ω_Π = ω_π^n, twisted self-duality", bad.is_empty(), &format!("100 parameters per family, n ≤ 4; failures: {bad:?}"));
}

/// `χ ∘ α∨ = ∏ χ_i^{α∨_i}`; genericity fails when some value is `|·|^{±1}`.
fn coroot_value(chars: &[Ch], coroot: &[i64]) -> Ch {
    chars.iter().zip(coroot).fold((BTreeMap::new(), Rational64::from_integer(0)), |acc, (c, &k)| ch_mul(&acc, c, k))
}

fn is_abs_one(c: &Ch) -> bool {
    c.0.is_empty() && c.1 == Rational64::from_integer(1)
}

#[test]
fn criterion_10_genericity() {
    let start = Instant::now();
    let mut bad = Vec::new();
    // Even-center fixture on GSpin6: χ0 = μ², χ1 = μ|·|^{5/2}, χ2 = μ|·|^{1/2}, χ3 = μ|·|^{-3/2}.
    let fixture = satake::even_center_fixture(false);
    let d6 = datum(Family::GspinEven, 3);
    let chars: Vec<Ch> = fixture.chars.iter().map(ch).collect();
    // Witnesses: coroots with value exactly |·|; the inverse value sits on the negative coroot.
    let oracle_witnesses: Vec<Vec<i64>> = d6.roots().all().iter().map(|r| r.coroot.clone()).filter(|c| is_abs_one(&coroot_value(&chars, c))).collect();
    let (generic, wit) = satake::is_generic_unramified(&d6, &fixture).unwrap();
    let wset: HashSet<Vec<i64>> = wit.iter().map(|w| w.coroot.clone()).collect();
    if generic || !wset.contains(&vec![-1, 1, 0, 1]) || wset != oracle_witnesses.iter().cloned().collect() {
        bad.push(format!("fixture: generic = {generic}, witnesses {wset:?}, oracle {oracle_witnesses:?}"));
    }
    // Odd-case grid.
    let mut grid: Vec<Rational64> = (1..=6i64).flat_map(|q| (-q..=q).map(move |p| Rational64::new(p, q))).collect();
    grid.sort();
    grid.dedup();
    let mut checked = 0usize;
    let mut generic_count = 0usize;
    for n in 1..=3usize {
        let d = datum(Family::GspinOdd, n);
        let coroots: Vec<Vec<i64>> = d.roots().all().iter().map(|r| r.coroot.clone()).collect();
        let total = grid.len().pow(n as u32 + 1);
        for mut code in 0..total {
            let s: Vec<Rational64> = (0..=n)
                .map(|_| {
                    let v = grid[code % grid.len()];
                    code /= grid.len();
                    v
                })
                .collect();
            // Generic iff no coroot value is |·|^{±1}.
            let oracle_generic = coroots.iter().all(|c| (dot_r(&s, c)).abs() != Rational64::from_integer(1));
            let gl: Vec<Rational64> = s[1..].iter().copied().chain(s[1..].iter().rev().map(|x| s[0] - x)).collect();
            let oracle_gl = gl.iter().enumerate().all(|(i, a)| gl.iter().enumerate().all(|(j, b)| i == j || (*a - *b).abs() != Rational64::from_integer(1)));
            let p = GSpinParameter::new(ParameterFamily::Odd, n, s.iter().map(|&x| UnramifiedCharacter::abs(x)).collect()).unwrap();
            let (g, _) = satake::is_generic_unramified(&d, &p).unwrap();
            let glg = satake::gl_full_induced_generic(&satake::transfer(&p).gl);
            if g != oracle_generic || glg != oracle_gl || (g && !glg) {
                bad.push(format!("n={n} s={s:?}"));
            }
            generic_count += usize::from(g);
            checked += 1;
        }
    }
    bad.truncate(10);
    let el = start.elapsed();
    report(
        10,
        "genericity fixture and odd grid implication",
        bad.is_empty() && el < Duration::from_secs(60),
        &format!("{checked} grid points ({generic_count} generic) in {el:.2?}; failures: {bad:?}"),
    );
}

fn dot_r(s: &[Rational64], c: &[i64]) -> Rational64 {
    s.iter().zip(c).map(|(a, &k)| *a * k).sum()
}

#[test]
fn criterion_11_exterior_square() {
    let mut rng = StdRng::seed_from_u64(0xb);
    let mut bad = Vec::new();
    let wedge_pairs = [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)];
    let listed_pairs = [(0, 1), (0, 2), (1, 2), (1, 3), (0, 3), (2, 3)];
    let mut listed_entrywise = true;
    let mut check = |a: [ScalarExpr; 4], tag: String| {
        let rep = satake::exterior_square_check(&a).unwrap();
        let wedge: Vec<ScalarExpr> = wedge_pairs.iter().map(|&(i, j)| a[i].mul(&a[j])).collect();
        let listed: Vec<ScalarExpr> = listed_pairs.iter().map(|&(i, j)| a[i].mul(&a[j])).collect();
        let key = |v: &[ScalarExpr]| {
            let mut k: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            k.sort();
            k
        };
        listed_entrywise &= rep.lhs == listed;
        if rep.lhs != wedge || key(&rep.lhs) != key(&listed) || !rep.multiset_equal || !rep.entrywise_equal {
            bad.push(tag);
        }
    };
    check(["a1", "a2", "a3", "a4"].map(ScalarExpr::var), "symbolic".into());
    for i in 0..10 {
        check([(); 4].map(|_| ScalarExpr::rational(random_rat(&mut rng))), format!("point {i}"));
    }
    report(
        11,
        "exterior square GSpin6 → GL6",
        bad.is_empty(),
        &format!("symbolic and 10 points; image equals ∧² in basis order 12,13,23,14,24,34; entrywise in order 12,13,23,24,14,34: {listed_entrywise}; failures: {bad:?}"),
    );
}

#[test]
fn criterion_12_verify_table() {
    let out = Command::new(env!("CARGO_BIN_EXE_gspin")).args(["verify", "--max-rank", "4"]).output().unwrap();
    let stdout = String::from_utf8_lossy(&out.stdout);
    let again = Command::new(env!("CARGO_BIN_EXE_gspin")).args(["verify", "--max-rank", "4"]).output().unwrap();
    let lines: Vec<&str> = stdout.lines().collect();
    let named = suite::CHECK_NAMES.iter().enumerate().all(|(i, name)| lines.iter().any(|l| l.starts_with(&format!("[{:>2}] {name}: ", i + 1))));
    let deterministic = again.stdout == out.stdout;
    let failing: Vec<&str> = lines.iter().copied().filter(|l| l.contains(": FAIL")).collect();
    let pass = out.status.code() == Some(0) && named && deterministic && lines.len() == 12;
    report(12, "verify --max-rank 4", pass, &format!("exit {:?}, all rows named: {named}, deterministic: {deterministic}, failing rows: {failing:?}", out.status.code()));
}
