//! Chevalley structure constants `N_{α,β}`, commutator constants `c_{α,β;i,j}` and
//! conjugation signs `d_{α,β}`.
//!
//! Convention: `u_α(x) u_β(y) u_α(-x) = u_β(y) ∏ u_{iα+jβ}(c_{ij} x^i y^j)` and
//! `w_α u_β(x) w_α⁻¹ = u_{s_α β}(d_{α,β} x)` with `w_α = u_α(1) u_{-α}(-1) u_α(1)`.

use std::sync::Arc;

use num_rational::Rational64;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::lattice;
use crate::root_datum::{Family, RootDatum, RootSystem};
use crate::weyl;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChevalleyError {
    #[error("roots are proportional")]
    Proportional,
    #[error("unsupported root system: {0}")]
    Unsupported(String),
    #[error("normalization infeasible: {0}")]
    Normalization(String),
    #[error("{0}")]
    Weyl(#[from] weyl::WeylError),
}

#[derive(Clone, Debug)]
pub struct StructureConstants {
    datum: RootDatum,
    rs: Arc<RootSystem>,
    /// Doubled squared lengths, indexed by root.
    norm: Vec<i64>,
    sum: Vec<Option<usize>>,
    n: Vec<i64>,
    d: Vec<i64>,
}

/// One row of the chain table: `c_{α_j, β_i; k, 1}` with the string shape used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainEntry {
    pub simple: usize,
    pub beta: usize,
    pub string: (usize, usize),
    pub i: u32,
    pub value: Rational64,
}

impl StructureConstants {
    /// Extraspecial recursion with all extraspecial signs +1, then the sign
    /// normalization `N_{α_i,α_{i+1}} = 1` and, for a double bond at the end,
    /// `c_{α_{l-1},α_l;1,2} = -1`.
    pub fn new(datum: &RootDatum) -> Result<StructureConstants, ChevalleyError> {
        let rs = datum.root_system().map_err(|e| ChevalleyError::Unsupported(e.to_string()))?;
        let cl = datum.classify();
        if cl.components.iter().any(|(t, _)| t == "unrecognized") {
            return Err(ChevalleyError::Unsupported(cl.label));
        }
        let total = rs.len();
        let norm = root_norms(datum, &rs)?;
        let mut sum = vec![None; total * total];
        for a in 0..total {
            for b in 0..total {
                let v = lattice::add(&rs.root(a).coords, &rs.root(b).coords);
                sum[a * total + b] = rs.index_of_coords(&v);
            }
        }
        let mut t = StructureConstants { datum: datum.clone(), rs, norm, sum, n: vec![0; total * total], d: vec![0; total * total] };
        t.fill_n();
        t.normalize()?;
        t.fill_d()?;
        Ok(t)
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn roots(&self) -> &RootSystem {
        &self.rs
    }

    fn idx(&self, a: usize, b: usize) -> usize {
        a * self.rs.len() + b
    }

    pub fn sum(&self, a: usize, b: usize) -> Option<usize> {
        self.sum[self.idx(a, b)]
    }

    /// `N_{α,β}`, zero when `α+β` is not a root.
    pub fn n(&self, a: usize, b: usize) -> i64 {
        self.n[self.idx(a, b)]
    }

    /// Doubled squared length of a root.
    pub fn norm(&self, a: usize) -> i64 {
        self.norm[a]
    }

    /// Positive root of the form `k·a + b`, if any.
    fn shift(&self, b: usize, a: usize, k: i64) -> Option<usize> {
        let v = lattice::axpy(&self.rs.root(b).coords, k, &self.rs.root(a).coords);
        self.rs.index_of_coords(&v)
    }

    /// `(c, b)` such that `β-cα, …, β+bα` is the α-string through β.
    pub fn root_string(&self, a: usize, b: usize) -> Result<(usize, usize), ChevalleyError> {
        if a == b || self.rs.negate(a) == b {
            return Err(ChevalleyError::Proportional);
        }
        let mut c = 0;
        while self.shift(b, a, -(c as i64 + 1)).is_some() {
            c += 1;
        }
        let mut up = 0;
        while self.shift(b, a, up as i64 + 1).is_some() {
            up += 1;
        }
        Ok((c, up))
    }

    /// General rule for any pair, reading only positive special pairs with smaller sums.
    fn n_general(&self, pos: &[i64], x: usize, y: usize) -> Rational64 {
        let rs = &self.rs;
        let z = match self.sum(x, y) {
            None => return Rational64::zero(),
            Some(z) => z,
        };
        let (px, py) = (rs.is_positive(x), rs.is_positive(y));
        match (px, py) {
            (true, true) => {
                if x < y {
                    Rational64::from_integer(pos[self.idx(x, y)])
                } else {
                    -Rational64::from_integer(pos[self.idx(y, x)])
                }
            }
            (false, false) => -self.n_general(pos, rs.negate(x), rs.negate(y)),
            (false, true) => -self.n_general(pos, y, x),
            (true, false) => {
                // x + y + w = 0 with w = -z; N_{x,y}/(w,w) = N_{y,w}/(x,x) = N_{w,x}/(y,y).
                let w = rs.negate(z);
                let nw = Rational64::from_integer(self.norm[w]);
                if rs.is_positive(z) {
                    nw / Rational64::from_integer(self.norm[x]) * self.n_general(pos, y, w)
                } else {
                    nw / Rational64::from_integer(self.norm[y]) * self.n_general(pos, w, x)
                }
            }
        }
    }

    fn fill_n(&mut self) {
        let rs = self.rs.clone();
        let p = rs.positive_count();
        let r = self.datum.rank();
        let total = rs.len();
        let mut pos = vec![0i64; total * total];
        for xi in 0..p {
            if rs.root(xi).height() < 2 {
                continue;
            }
            // Extraspecial pair: smallest simple α_j with ξ - α_j a root.
            let (alpha, beta) = (0..r)
                .find_map(|j| {
                    let a = rs.simple(j);
                    self.shift(xi, a, -1).map(|b| (a, b))
                })
                .expect("non-simple positive root has a simple predecessor");
            let mut depth = 0;
            while self.shift(beta, alpha, -(depth + 1)).is_some() {
                depth += 1;
            }
            let (lo, hi) = if alpha < beta { (alpha, beta) } else { (beta, alpha) };
            let n_ab = depth + 1;
            pos[self.idx(lo, hi)] = if alpha < beta { n_ab } else { -n_ab };
            let n_ab = Rational64::from_integer(n_ab);
            for zeta in 0..p {
                let eta = match self.shift(xi, zeta, -1) {
                    Some(e) if rs.is_positive(e) && zeta < e => e,
                    _ => continue,
                };
                if (zeta, eta) == (lo, hi) {
                    continue;
                }
                // Jacobi on e_{-ζ}, e_α, e_β:
                // N_{α,β} N_{-ζ,ξ} = N_{-ζ,α} N_{α-ζ,β} + N_{-ζ,β} N_{α,β-ζ},
                // and N_{-ζ,ξ} = (η,η)/(ξ,ξ) N_{ζ,η}.
                let mz = rs.negate(zeta);
                let mut acc = Rational64::zero();
                if let Some(am) = self.sum(mz, alpha) {
                    acc += self.n_general(&pos, mz, alpha) * self.n_general(&pos, am, beta);
                }
                if let Some(bm) = self.sum(mz, beta) {
                    acc += self.n_general(&pos, mz, beta) * self.n_general(&pos, alpha, bm);
                }
                let val = acc * Rational64::from_integer(self.norm[xi]) / (Rational64::from_integer(self.norm[eta]) * n_ab);
                assert!(val.is_integer() && !val.is_zero(), "structure constant must be a nonzero integer");
                pos[self.idx(zeta, eta)] = val.to_integer();
            }
        }
        for a in 0..total {
            for b in 0..total {
                let v = self.n_general(&pos, a, b);
                assert!(v.is_integer());
                let k = self.idx(a, b);
                self.n[k] = v.to_integer();
            }
        }
    }

    fn apply_signs(&mut self, eps: &[i64]) {
        let total = self.rs.len();
        let p = self.rs.positive_count();
        let e = |i: usize| eps[if i < p { i } else { i - p }];
        for a in 0..total {
            for b in 0..total {
                if let Some(s) = self.sum(a, b) {
                    let k = self.idx(a, b);
                    self.n[k] *= e(a) * e(b) * e(s);
                }
            }
        }
    }

    fn normalize(&mut self) -> Result<(), ChevalleyError> {
        let rs = self.rs.clone();
        let r = self.datum.rank();
        let mut eps = vec![1i64; rs.positive_count()];
        for i in 0..r.saturating_sub(1) {
            let (a, b) = (rs.simple(i), rs.simple(i + 1));
            if let Some(s) = self.sum(a, b) {
                if self.n(a, b) < 0 {
                    eps[s] = -eps[s];
                }
            }
        }
        self.apply_signs(&eps);
        if r >= 2 {
            let (a, b) = (rs.simple(r - 2), rs.simple(r - 1));
            if let Some(ab) = self.sum(a, b) {
                if let Some(top) = self.sum(b, ab) {
                    let c12 = self.c(a, b, 1, 2).expect("defined");
                    if c12 != -Rational64::one() {
                        let mut eps = vec![1i64; rs.positive_count()];
                        eps[top] = -1;
                        self.apply_signs(&eps);
                    }
                }
            }
        }
        for i in 0..r.saturating_sub(1) {
            let (a, b) = (rs.simple(i), rs.simple(i + 1));
            if self.sum(a, b).is_some() && self.n(a, b) != 1 {
                return Err(ChevalleyError::Normalization(format!("N_{{α{},α{}}} = {}", i + 1, i + 2, self.n(a, b))));
            }
        }
        Ok(())
    }

    /// `c_{α,β;i,j}` for `i, j > 0` with `iα+jβ` a root; `c_{α,β;0,1} = 1`.
    pub fn c(&self, a: usize, b: usize, i: u32, j: u32) -> Option<Rational64> {
        if i == 0 && j == 1 {
            return Some(Rational64::one());
        }
        let target = lattice::axpy(&lattice::scale(j as i64, &self.rs.root(b).coords), i as i64, &self.rs.root(a).coords);
        self.rs.index_of_coords(&target)?;
        match (i, j) {
            (_, 1) => {
                // exp(x ad e_α) e_β expanded term by term.
                let mut acc = Rational64::one();
                let mut cur = b;
                for k in 0..i {
                    acc *= Rational64::from_integer(self.n(a, cur)) / Rational64::from_integer(k as i64 + 1);
                    cur = self.sum(a, cur)?;
                }
                Some(acc)
            }
            (1, 2) => {
                let ab = self.sum(a, b)?;
                Some(-Rational64::new(self.n(a, b) * self.n(b, ab), 2))
            }
            _ => None,
        }
    }

    fn fill_d(&mut self) -> Result<(), ChevalleyError> {
        let total = self.rs.len();
        for a in 0..total {
            for b in 0..total {
                let k = self.idx(a, b);
                if a == b || self.rs.negate(a) == b {
                    self.d[k] = -1;
                    continue;
                }
                let (c, up) = self.root_string(a, b)?;
                let ma = self.rs.negate(a);
                let mut acc = Rational64::zero();
                for i in c.saturating_sub(up)..=c {
                    let left = self.c(ma, b, i as u32, 1).expect("string root");
                    let bi = self.shift(b, a, -(i as i64)).expect("string root");
                    let right = self.c(a, bi, (i + up - c) as u32, 1).expect("reflected root");
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    acc += left * right * Rational64::from_integer(sign);
                }
                if !(acc == Rational64::one() || acc == -Rational64::one()) {
                    return Err(ChevalleyError::Unsupported(format!("d = {acc} is not a sign")));
                }
                self.d[k] = acc.to_integer();
            }
        }
        Ok(())
    }

    /// `d_{α,β}`; for `β = ±α` this is the sign in `w_α u_β(x) w_α⁻¹ = u_{-β}(-x)`.
    pub fn d(&self, a: usize, b: usize) -> i64 {
        self.d[self.idx(a, b)]
    }

    /// Image of root `b` under the reflection `s_a`.
    pub fn reflect(&self, a: usize, b: usize) -> usize {
        let ra = self.rs.root(a);
        let rb = self.rs.root(b);
        let k = lattice::dot(&rb.vector, &ra.coroot);
        self.rs.index_of_vector(&lattice::axpy(&rb.vector, -k, &ra.vector)).expect("root")
    }

    /// `<β, α∨>` for root indices.
    pub fn pairing(&self, b: usize, a: usize) -> i64 {
        lattice::dot(&self.rs.root(b).vector, &self.rs.root(a).coroot)
    }

    /// The constants `c_{α_{r_i}, β_i; k, 1}` along the chain, `k = b` of the string.
    pub fn chain_table(&self) -> Result<Vec<ChainEntry>, ChevalleyError> {
        let refl = weyl::beta_reflections(&self.datum)?;
        let chain = weyl::beta_chain(&self.datum)?;
        let mut out = Vec::new();
        for (i, &j) in refl.iter().enumerate() {
            let a = self.rs.simple(j);
            let b = chain[i];
            let string = self.root_string(a, b)?;
            let k = string.1 as u32;
            let value = self.c(a, b, k, 1).expect("string top is a root");
            out.push(ChainEntry { simple: j, beta: b, string, i: k, value });
        }
        Ok(out)
    }

    /// `d = ∏ d_{α_{r_i}, β_i}` along the chain.
    pub fn w_gamma_sign(&self) -> Result<i64, ChevalleyError> {
        let refl = weyl::beta_reflections(&self.datum)?;
        let chain = weyl::beta_chain(&self.datum)?;
        Ok(refl.iter().enumerate().map(|(i, &j)| self.d(self.rs.simple(j), chain[i])).product())
    }

    /// `D = ∏ d_{-α_{r_i}, β_{i+1}}`, the sign picked up conjugating γ back to α1 by `w′⁻¹`.
    pub fn big_d(&self) -> Result<i64, ChevalleyError> {
        let refl = weyl::beta_reflections(&self.datum)?;
        let chain = weyl::beta_chain(&self.datum)?;
        Ok(refl
            .iter()
            .enumerate()
            .map(|(i, &j)| self.d(self.rs.negate(self.rs.simple(j)), chain[i + 1]))
            .product())
    }

    /// `D·d`, expected to be 1.
    pub fn dd_check(&self) -> Result<i64, ChevalleyError> {
        Ok(self.big_d()? * self.w_gamma_sign()?)
    }
}

/// The sign `d` predicted for the ambient group: `(-1)^n` odd, `(-1)^{n-1}` even, ambient rank `n+1`.
pub fn expected_w_gamma_sign(d: &RootDatum) -> i64 {
    let n = d.rank() as i64 - 1;
    let e = match d.family {
        Family::GspinOdd => n,
        _ => n - 1,
    };
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Normalized table for an ambient datum (odd rank ≥ 2 or even rank ≥ 3).
pub fn build_table(datum: &RootDatum) -> Result<StructureConstants, ChevalleyError> {
    weyl::beta_reflections(datum)?;
    StructureConstants::new(datum)
}

fn root_norms(d: &RootDatum, rs: &RootSystem) -> Result<Vec<i64>, ChevalleyError> {
    // |α_j|² = |α_i|² A_ji / A_ij along edges; then (x,y) = Σ x_i y_j A_ij |α_j|² / 2.
    let a = d.cartan();
    let r = d.rank();
    let mut len: Vec<Option<Rational64>> = vec![None; r];
    for s in 0..r {
        if len[s].is_some() {
            continue;
        }
        len[s] = Some(Rational64::one());
        let mut stack = vec![s];
        while let Some(i) = stack.pop() {
            for j in 0..r {
                if j != i && a[i][j] != 0 && len[j].is_none() {
                    len[j] = Some(len[i].expect("set") * Rational64::new(a[j][i], a[i][j]));
                    stack.push(j);
                }
            }
        }
    }
    let den = len.iter().map(|l| *l.expect("set").denom()).fold(1i64, num_integer::lcm);
    let li: Vec<i64> = len.iter().map(|l| (l.expect("set") * Rational64::from_integer(den)).to_integer()).collect();
    for i in 0..r {
        for j in 0..r {
            if a[i][j] * li[j] != a[j][i] * li[i] {
                return Err(ChevalleyError::Unsupported("Cartan matrix is not symmetrizable".into()));
            }
        }
    }
    // Gram matrix G_ij = A_ij l_j is twice the inner product.
    Ok(rs
        .all()
        .iter()
        .map(|b| {
            let mut s = 0;
            for i in 0..r {
                for j in 0..r {
                    s += b.coords[i] * b.coords[j] * a[i][j] * li[j];
                }
            }
            s / 2
        })
        .collect())
}

/// Basis of the Lie algebra: root vectors `e_α` (by root index) then `h_k` (X∨ coordinates).
#[derive(Clone, Debug)]
pub struct LieAlgebra<'a> {
    pub table: &'a StructureConstants,
}

pub type SparseVec = Vec<(usize, i64)>;

impl<'a> LieAlgebra<'a> {
    pub fn new(table: &'a StructureConstants) -> Self {
        LieAlgebra { table }
    }

    pub fn dim(&self) -> usize {
        self.table.rs.len() + self.table.datum.dim_x
    }

    fn roots(&self) -> usize {
        self.table.rs.len()
    }

    /// Bracket of two basis elements.
    pub fn bracket_basis(&self, x: usize, y: usize) -> SparseVec {
        let nr = self.roots();
        let t = self.table;
        match (x < nr, y < nr) {
            (false, false) => Vec::new(),
            (false, true) => {
                let k = t.rs.root(y).vector[x - nr];
                if k == 0 {
                    Vec::new()
                } else {
                    vec![(y, k)]
                }
            }
            (true, false) => self.bracket_basis(y, x).into_iter().map(|(i, c)| (i, -c)).collect(),
            (true, true) => {
                if t.rs.negate(x) == y {
                    t.rs.root(x).coroot.iter().enumerate().filter(|(_, &c)| c != 0).map(|(k, &c)| (nr + k, c)).collect()
                } else {
                    match t.sum(x, y) {
                        Some(s) => vec![(s, t.n(x, y))],
                        None => Vec::new(),
                    }
                }
            }
        }
    }

    pub fn bracket(&self, u: &SparseVec, v: &SparseVec) -> SparseVec {
        let mut acc = vec![0i64; self.dim()];
        for &(i, a) in u {
            for &(j, b) in v {
                for (k, c) in self.bracket_basis(i, j) {
                    acc[k] += a * b * c;
                }
            }
        }
        acc.into_iter().enumerate().filter(|(_, c)| *c != 0).collect()
    }

    /// Basis triples on which the Jacobi identity fails.
    pub fn jacobi_failures(&self) -> Vec<(usize, usize, usize)> {
        let dim = self.dim();
        let mut bad = Vec::new();
        let cache: Vec<Vec<SparseVec>> = (0..dim).map(|i| (0..dim).map(|j| self.bracket_basis(i, j)).collect()).collect();
        let apply = |i: usize, v: &SparseVec, acc: &mut Vec<i64>, sign: i64| {
            for &(j, b) in v {
                for &(k, c) in &cache[i][j] {
                    acc[k] += sign * b * c;
                }
            }
        };
        let mut acc = vec![0i64; dim];
        for x in 0..dim {
            for y in x + 1..dim {
                for z in y + 1..dim {
                    acc.iter_mut().for_each(|a| *a = 0);
                    apply(x, &cache[y][z], &mut acc, 1);
                    apply(y, &cache[z][x], &mut acc, 1);
                    apply(z, &cache[x][y], &mut acc, 1);
                    if acc.iter().any(|&a| a != 0) {
                        bad.push((x, y, z));
                    }
                }
            }
        }
        bad
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(f: Family, n: usize) -> StructureConstants {
        build_table(&RootDatum::build(f, n).unwrap()).unwrap()
    }

    #[test]
    fn jacobi_small() {
        for (f, n) in [(Family::GspinOdd, 3), (Family::GspinEven, 4), (Family::Gsp, 3)] {
            let t = StructureConstants::new(&RootDatum::build(f.clone(), n).unwrap()).unwrap();
            assert!(LieAlgebra::new(&t).jacobi_failures().is_empty(), "{f} {n}");
        }
    }

    #[test]
    fn n_magnitude_is_string_depth_plus_one() {
        let t = table(Family::GspinOdd, 4);
        let rs = t.roots();
        for a in 0..rs.len() {
            for b in 0..rs.len() {
                if t.sum(a, b).is_some() {
                    let (c, _) = t.root_string(a, b).unwrap();
                    assert_eq!(t.n(a, b).abs(), c as i64 + 1);
                }
            }
        }
    }

    #[test]
    fn chain_signs_odd() {
        for l in 3..=5 {
            let t = table(Family::GspinOdd, l);
            let vals: Vec<i64> = t.chain_table().unwrap().iter().map(|e| e.value.to_integer()).collect();
            let n = l - 1;
            let want: Vec<i64> = (0..vals.len()).map(|i| if i < n { -1 } else { 1 }).collect();
            assert_eq!(vals, want, "rank {l}");
        }
    }

    #[test]
    fn chain_signs_even() {
        for l in 3..=5 {
            let t = table(Family::GspinEven, l);
            let vals: Vec<i64> = t.chain_table().unwrap().iter().map(|e| e.value.to_integer()).collect();
            let n = l - 1;
            let want: Vec<i64> = (0..vals.len()).map(|i| if i + 1 < n { -1 } else { 1 }).collect();
            assert_eq!(vals, want, "rank {l}");
        }
    }

    #[test]
    fn w_gamma_and_dd() {
        for l in 2..=5 {
            let t = table(Family::GspinOdd, l);
            assert_eq!(t.w_gamma_sign().unwrap(), expected_w_gamma_sign(t.datum()));
            assert_eq!(t.dd_check().unwrap(), 1);
        }
        for l in 3..=5 {
            let t = table(Family::GspinEven, l);
            assert_eq!(t.w_gamma_sign().unwrap(), expected_w_gamma_sign(t.datum()));
            assert_eq!(t.dd_check().unwrap(), 1);
        }
    }

    #[test]
    fn d_relations() {
        let t = table(Family::GspinOdd, 4);
        let rs = t.roots();
        for a in 0..rs.len() {
            for b in 0..rs.len() {
                if a == b || rs.negate(a) == b {
                    continue;
                }
                let sign = if t.pairing(b, a).rem_euclid(2) == 0 { 1 } else { -1 };
                assert_eq!(t.d(rs.negate(a), b), sign * t.d(a, b));
                assert_eq!(t.d(a, b) * t.d(a, t.reflect(a, b)), sign);
            }
        }
    }
}
