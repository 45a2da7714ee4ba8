//! Integer root data of general spin groups, their relatives and their Levi subgroups.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{self, IMat, IVec};

const MAX_ROOTS: usize = 20_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DatumError {
    #[error("unsupported family/rank pair {family} n={n}: {reason}")]
    Unsupported { family: String, n: usize, reason: String },
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("vector {0:?} is not a root")]
    NotARoot(IVec),
    #[error("root system is reducible ({0})")]
    Reducible(String),
    #[error("simple root index {0} out of range")]
    BadIndex(usize),
    #[error("Levi subgroup ruled out: {0}")]
    RuledOut(String),
    #[error("invalid root datum: {0}")]
    Invalid(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    GspinOdd,
    GspinEven,
    WgspinEven,
    Gsp,
    Gso,
    Gl,
    /// Anything built from the above (duals, Levi subgroups, hand-made data).
    Derived(String),
}

impl Family {
    pub fn as_str(&self) -> &str {
        match self {
            Family::GspinOdd => "gspin_odd",
            Family::GspinEven => "gspin_even",
            Family::WgspinEven => "wgspin_even",
            Family::Gsp => "gsp",
            Family::Gso => "gso",
            Family::Gl => "gl",
            Family::Derived(s) => s,
        }
    }

    pub fn parse(s: &str) -> Result<Family, DatumError> {
        Ok(match s {
            "gspin_odd" => Family::GspinOdd,
            "gspin_even" => Family::GspinEven,
            "wgspin_even" => Family::WgspinEven,
            "gsp" => Family::Gsp,
            "gso" => Family::Gso,
            "gl" => Family::Gl,
            _ => return Err(DatumError::UnknownFamily(s.to_string())),
        })
    }

    pub const BUILT: [Family; 6] =
        [Family::GspinOdd, Family::GspinEven, Family::WgspinEven, Family::Gsp, Family::Gso, Family::Gl];

    /// Families whose diagram is of type D (the even orthogonal-like ones).
    pub fn is_even_type(&self) -> bool {
        matches!(self, Family::GspinEven | Family::WgspinEven | Family::Gso)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A root with its coroot and coordinates in the simple roots.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Root {
    pub vector: IVec,
    pub coroot: IVec,
    pub coords: IVec,
}

impl Root {
    pub fn height(&self) -> i64 {
        self.coords.iter().sum()
    }

    pub fn is_positive(&self) -> bool {
        self.coords.iter().all(|&c| c >= 0)
    }

    pub fn negated(&self) -> Root {
        Root {
            vector: lattice::neg(&self.vector),
            coroot: lattice::neg(&self.coroot),
            coords: lattice::neg(&self.coords),
        }
    }
}

/// The full root set, indexed: positives `0..p` in the fixed order, then their negatives `p..2p`.
#[derive(Clone, Debug)]
pub struct RootSystem {
    roots: Vec<Root>,
    positive_count: usize,
    by_coords: HashMap<IVec, usize>,
    by_vector: HashMap<IVec, usize>,
}

impl RootSystem {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn positive_count(&self) -> usize {
        self.positive_count
    }

    pub fn positive(&self) -> &[Root] {
        &self.roots[..self.positive_count]
    }

    pub fn all(&self) -> &[Root] {
        &self.roots
    }

    pub fn root(&self, idx: usize) -> &Root {
        &self.roots[idx]
    }

    pub fn negate(&self, idx: usize) -> usize {
        if idx < self.positive_count {
            idx + self.positive_count
        } else {
            idx - self.positive_count
        }
    }

    pub fn is_positive(&self, idx: usize) -> bool {
        idx < self.positive_count
    }

    pub fn index_of_coords(&self, c: &[i64]) -> Option<usize> {
        self.by_coords.get(c).copied()
    }

    pub fn index_of_vector(&self, v: &[i64]) -> Option<usize> {
        self.by_vector.get(v).copied()
    }

    /// Index of the `i`-th simple root.
    pub fn simple(&self, i: usize) -> usize {
        let r = self.roots[0].coords.len();
        self.index_of_coords(&lattice::unit_vec(r, i)).expect("simple root present")
    }
}

type RootCache = Mutex<Option<(Vec<IVec>, Vec<IVec>, Result<Arc<RootSystem>, String>)>>;

#[derive(Debug)]
pub struct RootDatum {
    pub family: Family,
    /// The build parameter: semisimple rank, or the matrix size for `gl`.
    pub n: usize,
    pub dim_x: usize,
    pub basis_labels: Vec<String>,
    pub simple_roots: Vec<IVec>,
    pub simple_coroots: Vec<IVec>,
    // Keyed by the simple data it was computed from, so edits to the public fields are seen.
    roots: RootCache,
}

impl Clone for RootDatum {
    fn clone(&self) -> Self {
        RootDatum {
            family: self.family.clone(),
            n: self.n,
            dim_x: self.dim_x,
            basis_labels: self.basis_labels.clone(),
            simple_roots: self.simple_roots.clone(),
            simple_coroots: self.simple_coroots.clone(),
            roots: Mutex::new(self.roots.lock().expect("cache lock").clone()),
        }
    }
}

impl PartialEq for RootDatum {
    fn eq(&self, o: &Self) -> bool {
        self.family == o.family
            && self.n == o.n
            && self.dim_x == o.dim_x
            && self.basis_labels == o.basis_labels
            && self.simple_roots == o.simple_roots
            && self.simple_coroots == o.simple_coroots
    }
}

impl Eq for RootDatum {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub axiom: &'static str,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.axiom, self.detail)
    }
}

/// Cartan matrix and diagram type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub cartan: IMat,
    /// Components as `(type letter, simple-root indices)`, ordered by smallest index.
    pub components: Vec<(String, Vec<usize>)>,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CenterDescription {
    /// Basis of the cocharacters parametrizing the identity component.
    pub identity_component: Vec<IVec>,
    /// Cocharacters `c` with `c(-1)` representing the other components.
    pub extra_components: Vec<IVec>,
}

#[derive(Clone, Debug)]
pub struct LeviFactorization {
    pub levi: RootDatum,
    pub removed: Vec<usize>,
    pub factors: Vec<String>,
    /// Indices (into the ambient root system) of the roots of the unipotent radical.
    pub nilradical: Vec<usize>,
}

impl LeviFactorization {
    pub fn label(&self) -> String {
        self.factors.join(" × ")
    }
}

impl RootDatum {
    /// A datum from explicit data; not validated.
    pub fn from_parts(
        family: Family,
        n: usize,
        basis_labels: Vec<String>,
        simple_roots: Vec<IVec>,
        simple_coroots: Vec<IVec>,
    ) -> RootDatum {
        RootDatum {
            family,
            n,
            dim_x: basis_labels.len(),
            basis_labels,
            simple_roots,
            simple_coroots,
            roots: Mutex::new(None),
        }
    }

    pub fn build(family: Family, n: usize) -> Result<RootDatum, DatumError> {
        let unsupported = |reason: &str| DatumError::Unsupported {
            family: family.to_string(),
            n,
            reason: reason.to_string(),
        };
        if n == 0 {
            return Err(unsupported("rank must be positive"));
        }
        if family.is_even_type() && n < 2 {
            return Err(unsupported("the even case requires n >= 2"));
        }
        let e = |dim: usize, i: usize| lattice::unit_vec(dim, i);
        let diff = |dim: usize, i: usize, j: usize| lattice::sub(&e(dim, i), &e(dim, j));
        let std_labels = |dim: usize| (0..dim).map(|i| format!("e{i}")).collect::<Vec<_>>();
        let (labels, roots, coroots) = match family {
            Family::GspinOdd | Family::GspinEven | Family::Gsp | Family::Gso => {
                let d = n + 1;
                let mut r: Vec<IVec> = (1..n).map(|i| diff(d, i, i + 1)).collect();
                let mut c = r.clone();
                let (last_r, last_c) = match family {
                    Family::GspinOdd => (e(d, n), lattice::sub(&lattice::scale(2, &e(d, n)), &e(d, 0))),
                    Family::GspinEven => {
                        let s = lattice::add(&e(d, n - 1), &e(d, n));
                        (s.clone(), lattice::sub(&s, &e(d, 0)))
                    }
                    Family::Gsp => (lattice::sub(&lattice::scale(2, &e(d, n)), &e(d, 0)), e(d, n)),
                    _ => {
                        let s = lattice::add(&e(d, n - 1), &e(d, n));
                        (lattice::sub(&s, &e(d, 0)), s)
                    }
                };
                r.push(last_r);
                c.push(last_c);
                (std_labels(d), r, c)
            }
            Family::WgspinEven => {
                // index 0 is E_{-1}, index 1 is E_0, index i+1 is E_i
                let d = n + 2;
                let mut r: Vec<IVec> = (1..n).map(|i| diff(d, i + 1, i + 2)).collect();
                let mut c = r.clone();
                let s = lattice::add(&e(d, n), &e(d, n + 1));
                r.push(lattice::sub(&s, &e(d, 0)));
                c.push(lattice::sub(&s, &e(d, 1)));
                let labels = std::iter::once("E-1".to_string()).chain((0..=n).map(|i| format!("E{i}"))).collect();
                (labels, r, c)
            }
            Family::Gl => {
                let r: Vec<IVec> = (0..n - 1).map(|i| diff(n, i, i + 1)).collect();
                (((1..=n).map(|i| format!("e{i}"))).collect(), r.clone(), r)
            }
            Family::Derived(_) => return Err(unsupported("only the built-in families can be built")),
        };
        Ok(RootDatum::from_parts(family, n, labels, roots, coroots))
    }

    /// Number of simple roots.
    pub fn rank(&self) -> usize {
        self.simple_roots.len()
    }

    pub fn coroot_labels(&self) -> Vec<String> {
        self.basis_labels.iter().map(|l| format!("{l}*")).collect()
    }

    pub fn cartan(&self) -> IMat {
        let r = self.rank();
        (0..r)
            .map(|i| (0..r).map(|j| lattice::dot(&self.simple_roots[i], &self.simple_coroots[j])).collect())
            .collect()
    }

    /// The root system, computed by closure under simple reflections and cached.
    pub fn root_system(&self) -> Result<Arc<RootSystem>, DatumError> {
        let mut guard = self.roots.lock().expect("cache lock");
        let fresh = match &*guard {
            Some((r, c, _)) => *r != self.simple_roots || *c != self.simple_coroots,
            None => true,
        };
        if fresh {
            let rs = compute_roots(self);
            *guard = Some((self.simple_roots.clone(), self.simple_coroots.clone(), rs.map(Arc::new)));
        }
        let (_, _, rs) = guard.as_ref().expect("filled");
        rs.clone().map_err(DatumError::Invalid)
    }

    /// Root system of a datum already known to be valid.
    pub fn roots(&self) -> Arc<RootSystem> {
        self.root_system().expect("valid root datum")
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let r = self.rank();
        if self.simple_coroots.len() != r {
            out.push(Violation {
                axiom: "length",
                detail: format!("{} simple roots but {} simple coroots", r, self.simple_coroots.len()),
            });
            return out;
        }
        for (i, v) in self.simple_roots.iter().chain(&self.simple_coroots).enumerate() {
            if v.len() != self.dim_x {
                out.push(Violation { axiom: "dimension", detail: format!("vector #{i} has length {}", v.len()) });
            }
        }
        if !out.is_empty() {
            return out;
        }
        let a = self.cartan();
        for i in 0..r {
            if a[i][i] != 2 {
                out.push(Violation {
                    axiom: "pairing",
                    detail: format!("<α{0},α{0}∨> = {1} ≠ 2", i + 1, a[i][i]),
                });
            }
            for j in 0..r {
                if i == j {
                    continue;
                }
                if a[i][j] > 0 {
                    out.push(Violation {
                        axiom: "cartan sign",
                        detail: format!("A[{}][{}] = {} > 0", i + 1, j + 1, a[i][j]),
                    });
                }
                if (a[i][j] == 0) != (a[j][i] == 0) {
                    out.push(Violation {
                        axiom: "cartan zero pattern",
                        detail: format!("A[{0}][{1}] = {2} but A[{1}][{0}] = {3}", i + 1, j + 1, a[i][j], a[j][i]),
                    });
                }
            }
        }
        if lattice::rank(&self.simple_roots) != r {
            out.push(Violation { axiom: "independence", detail: "simple roots are linearly dependent".into() });
        }
        if lattice::rank(&self.simple_coroots) != r {
            out.push(Violation { axiom: "independence", detail: "simple coroots are linearly dependent".into() });
        }
        if !out.is_empty() {
            return out;
        }
        match self.root_system() {
            Err(e) => out.push(Violation { axiom: "closure", detail: e.to_string() }),
            Ok(rs) => {
                for root in rs.all() {
                    if lattice::dot(&root.vector, &root.coroot) != 2 {
                        out.push(Violation {
                            axiom: "pairing",
                            detail: format!("<β,β∨> ≠ 2 for β = {:?}", root.vector),
                        });
                    }
                    for i in 0..r {
                        let (img, cimg) = reflect_root(self, i, root);
                        match rs.index_of_vector(&img) {
                            Some(k) if rs.root(k).coroot == cimg => {}
                            _ => out.push(Violation {
                                axiom: "reflection closure",
                                detail: format!("s{} does not map {:?} into R with matching coroot", i + 1, root.vector),
                            }),
                        }
                    }
                }
            }
        }
        out
    }

    pub fn classify(&self) -> Classification {
        let a = self.cartan();
        let r = self.rank();
        let mut seen = vec![false; r];
        let mut components = Vec::new();
        for s in 0..r {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut k = 0;
            while k < comp.len() {
                let i = comp[k];
                for j in 0..r {
                    if !seen[j] && a[i][j] != 0 {
                        seen[j] = true;
                        comp.push(j);
                    }
                }
                k += 1;
            }
            comp.sort_unstable();
            let t = component_type(&a, &comp);
            components.push((t, comp));
        }
        let label = if components.is_empty() {
            "torus".to_string()
        } else {
            components.iter().map(|(t, _)| t.clone()).collect::<Vec<_>>().join("×")
        };
        Classification { cartan: a, components, label }
    }

    pub fn dual(&self) -> RootDatum {
        let family = match &self.family {
            Family::Derived(s) if s.starts_with("dual(") && s.ends_with(')') => {
                let inner = &s[5..s.len() - 1];
                Family::parse(inner).unwrap_or_else(|_| Family::Derived(inner.to_string()))
            }
            f => Family::Derived(format!("dual({f})")),
        };
        let labels = self
            .basis_labels
            .iter()
            .map(|l| l.strip_suffix('*').map(str::to_string).unwrap_or_else(|| format!("{l}*")))
            .collect();
        RootDatum::from_parts(family, self.n, labels, self.simple_coroots.clone(), self.simple_roots.clone())
    }

    pub fn positive_roots(&self) -> Vec<Root> {
        self.roots().positive().to_vec()
    }

    pub fn highest_root(&self) -> Result<Root, DatumError> {
        let cl = self.classify();
        if cl.components.len() != 1 {
            return Err(DatumError::Reducible(cl.label));
        }
        let rs = self.roots();
        let top = rs.positive().last().expect("nonempty").clone();
        for b in rs.positive() {
            if b.coords.iter().zip(&top.coords).any(|(x, y)| x > y) {
                return Err(DatumError::Invalid("no root dominates all positive roots".into()));
            }
        }
        Ok(top)
    }

    pub fn center(&self) -> CenterDescription {
        let identity_component = lattice::integer_kernel(&self.simple_roots, self.dim_x);
        // 2-torsion: c(-1) is central iff <α,c> is even for all simple α.
        let v = f2_kernel(&self.simple_roots, self.dim_x);
        let w: Vec<Vec<u8>> = identity_component.iter().map(|c| c.iter().map(|x| x.rem_euclid(2) as u8).collect()).collect();
        let w_ech = f2_echelon(w);
        let mut complement: Vec<Vec<u8>> = Vec::new();
        for x in v {
            let mut x = f2_reduce(&x, &w_ech);
            x = f2_reduce(&x, &complement);
            if x.iter().any(|&b| b != 0) {
                complement.push(x);
                complement = f2_echelon(std::mem::take(&mut complement));
            }
        }
        let mut extra = Vec::new();
        let k = complement.len();
        for mask in 1u32..(1 << k) {
            let mut s = vec![0u8; self.dim_x];
            for (j, c) in complement.iter().enumerate() {
                if mask & (1 << j) != 0 {
                    for (a, b) in s.iter_mut().zip(c) {
                        *a ^= b;
                    }
                }
            }
            let s = f2_reduce(&s, &w_ech);
            extra.push(s.into_iter().map(i64::from).collect());
        }
        CenterDescription { identity_component, extra_components: extra }
    }

    /// Levi subgroup attached to removing the given simple roots (0-based indices).
    pub fn levi_factorization(&self, removed: &[usize]) -> Result<LeviFactorization, DatumError> {
        let r = self.rank();
        let removed: BTreeSet<usize> = removed.iter().copied().collect();
        if let Some(&bad) = removed.iter().find(|&&i| i >= r) {
            return Err(DatumError::BadIndex(bad + 1));
        }
        let kept: Vec<usize> = (0..r).filter(|i| !removed.contains(i)).collect();
        let levi = RootDatum::from_parts(
            Family::Derived(format!("levi({})", self.family)),
            kept.len(),
            self.basis_labels.clone(),
            kept.iter().map(|&i| self.simple_roots[i].clone()).collect(),
            kept.iter().map(|&i| self.simple_coroots[i].clone()).collect(),
        );
        let rs = self.roots();
        let nilradical = (0..rs.positive_count())
            .filter(|&k| removed.iter().any(|&i| rs.root(k).coords[i] > 0))
            .collect();
        let factors = self.levi_factor_names(&kept);
        Ok(LeviFactorization { levi, removed: removed.into_iter().collect(), factors, nilradical })
    }

    /// The maximal Levi `GL_k × (tail)` obtained by removing α_k (1-based `k`).
    /// In the even families `k = n - 1` is not of this shape and is rejected;
    /// `alternate` selects the non-conjugate `k = n` Levi obtained by removing α_{n-1}.
    pub fn maximal_levi(&self, k: usize, alternate: bool) -> Result<LeviFactorization, DatumError> {
        let r = self.rank();
        if k == 0 || k > r {
            return Err(DatumError::BadIndex(k));
        }
        let even = self.family.is_even_type();
        if even && k == r - 1 {
            return Err(DatumError::RuledOut(format!(
                "k = n-1 = {k} gives no Levi of the form GL_k × GSpin_2 in the even case"
            )));
        }
        let idx = if alternate {
            if !(even && k == r) {
                return Err(DatumError::RuledOut("the alternate Levi exists only for k = n in the even case".into()));
            }
            r - 2
        } else {
            k - 1
        };
        self.levi_factorization(&[idx])
    }

    fn levi_factor_names(&self, kept: &[usize]) -> Vec<String> {
        let r = self.rank();
        let a = self.cartan();
        let comps = components_of(&a, kept);
        let has = |c: &Vec<usize>, i: usize| c.contains(&i);
        let mut tail: Vec<usize> = Vec::new();
        let mut others: Vec<&Vec<usize>> = Vec::new();
        let spin_like = !matches!(self.family, Family::Gl | Family::Derived(_));
        for c in &comps {
            let is_tail = spin_like
                && r >= 1
                && if self.family.is_even_type() {
                    r >= 2 && kept.contains(&(r - 1)) && kept.contains(&(r - 2)) && (has(c, r - 1) || has(c, r - 2))
                } else {
                    has(c, r - 1)
                };
            if is_tail {
                tail.extend(c);
            } else {
                others.push(c);
            }
        }
        let mut names: Vec<String> = others.iter().map(|c| format!("GL{}", c.len() + 1)).collect();
        let t = tail.len();
        let (tail_name, tail_center) = if t == 0 {
            (None, 0)
        } else {
            match self.family {
                Family::GspinOdd => (Some(format!("GSpin{}", 2 * t + 1)), 1),
                Family::GspinEven => (Some(format!("GSpin{}", 2 * t)), 1),
                Family::WgspinEven => (Some(format!("~GSpin{}", 2 * t)), 2),
                Family::Gsp => (Some(format!("GSp{}", 2 * t)), 1),
                Family::Gso => (Some(format!("GSO{}", 2 * t)), 1),
                _ => (None, 0),
            }
        };
        let central_rank = self.dim_x - kept.len();
        let gl1 = central_rank.saturating_sub(others.len() + tail_center);
        names.extend(std::iter::repeat_n("GL1".to_string(), gl1));
        names.extend(tail_name);
        names
    }

    /// The identity relating `e1*+…+en*` to simple coroots and `e0*` in the even case (`n` even).
    pub fn even_center_identity_holds(&self) -> bool {
        if self.family != Family::GspinEven || !self.n.is_multiple_of(2) {
            return false;
        }
        let n = self.n as i64;
        let d = self.dim_x;
        // Both sides doubled to stay integral.
        let mut lhs = vec![0i64; d];
        for x in lhs.iter_mut().skip(1) {
            *x = 2;
        }
        let mut rhs = vec![0i64; d];
        for j in 1..=(self.n - 2) {
            rhs = lattice::axpy(&rhs, 2 * j as i64, &self.simple_coroots[j - 1]);
        }
        rhs = lattice::axpy(&rhs, n - 2, &self.simple_coroots[self.n - 2]);
        rhs = lattice::axpy(&rhs, n, &self.simple_coroots[self.n - 1]);
        rhs[0] += n;
        lhs == rhs
    }

    /// Render a vector of X in the basis labels, e.g. `e1+e2` or `E1-E-1`.
    pub fn render_character(&self, v: &[i64]) -> String {
        render_combination(v, &self.basis_labels)
    }

    pub fn render_cocharacter(&self, v: &[i64]) -> String {
        render_combination(v, &self.coroot_labels())
    }

    /// Render Δ-coordinates, e.g. `α1+2α2`.
    pub fn render_coords(coords: &[i64]) -> String {
        let labels: Vec<String> = (1..=coords.len()).map(|i| format!("α{i}")).collect();
        render_combination(coords, &labels)
    }
}

pub fn render_combination(v: &[i64], labels: &[String]) -> String {
    let mut s = String::new();
    for (c, l) in v.iter().zip(labels) {
        if *c == 0 {
            continue;
        }
        if *c < 0 {
            s.push('-');
        } else if !s.is_empty() {
            s.push('+');
        }
        if c.abs() != 1 {
            s.push_str(&c.abs().to_string());
        }
        s.push_str(l);
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

fn reflect_root(d: &RootDatum, i: usize, b: &Root) -> (IVec, IVec) {
    let k = lattice::dot(&b.vector, &d.simple_coroots[i]);
    let l = lattice::dot(&d.simple_roots[i], &b.coroot);
    (
        lattice::axpy(&b.vector, -k, &d.simple_roots[i]),
        lattice::axpy(&b.coroot, -l, &d.simple_coroots[i]),
    )
}

fn compute_roots(d: &RootDatum) -> Result<RootSystem, String> {
    let r = d.rank();
    let mut found: HashMap<IVec, Root> = HashMap::new();
    let mut queue = VecDeque::new();
    for i in 0..r {
        let root = Root {
            vector: d.simple_roots[i].clone(),
            coroot: d.simple_coroots[i].clone(),
            coords: lattice::unit_vec(r, i),
        };
        found.insert(root.vector.clone(), root.clone());
        queue.push_back(root);
    }
    while let Some(b) = queue.pop_front() {
        for i in 0..r {
            let k = lattice::dot(&b.vector, &d.simple_coroots[i]);
            let (v, c) = reflect_root(d, i, &b);
            let mut coords = b.coords.clone();
            coords[i] -= k;
            if let Some(old) = found.get(&v) {
                if old.coroot != c {
                    return Err(format!("root {v:?} reached with two different coroots"));
                }
                continue;
            }
            let nb = Root { vector: v.clone(), coroot: c, coords };
            found.insert(v, nb.clone());
            queue.push_back(nb);
            if found.len() > MAX_ROOTS {
                return Err("reflection closure does not terminate".into());
            }
        }
    }
    let mut pos: Vec<Root> = Vec::new();
    for b in found.values() {
        let p = b.coords.iter().all(|&c| c >= 0);
        let n = b.coords.iter().all(|&c| c <= 0);
        if !p && !n {
            return Err(format!("root {:?} is neither positive nor negative", b.vector));
        }
        if p {
            pos.push(b.clone());
        }
    }
    pos.sort_by(|x, y| x.height().cmp(&y.height()).then_with(|| y.coords.cmp(&x.coords)));
    if pos.len() * 2 != found.len() {
        return Err("root set is not symmetric".into());
    }
    let mut roots = pos.clone();
    roots.extend(pos.iter().map(Root::negated));
    let by_coords = roots.iter().enumerate().map(|(i, b)| (b.coords.clone(), i)).collect();
    let by_vector = roots.iter().enumerate().map(|(i, b)| (b.vector.clone(), i)).collect();
    Ok(RootSystem { roots, positive_count: pos.len(), by_coords, by_vector })
}

fn components_of(a: &IMat, nodes: &[usize]) -> Vec<Vec<usize>> {
    let mut seen: BTreeSet<usize> = BTreeSet::new();
    let mut out = Vec::new();
    for &s in nodes {
        if seen.contains(&s) {
            continue;
        }
        let mut comp = vec![s];
        seen.insert(s);
        let mut k = 0;
        while k < comp.len() {
            let i = comp[k];
            for &j in nodes {
                if !seen.contains(&j) && a[i][j] != 0 {
                    seen.insert(j);
                    comp.push(j);
                }
            }
            k += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

fn component_type(a: &IMat, comp: &[usize]) -> String {
    let r = comp.len();
    if r == 1 {
        return "A1".into();
    }
    let deg = |i: usize| comp.iter().filter(|&&j| j != i && a[i][j] != 0).count();
    let mut edges = 0;
    let mut double: Option<(usize, usize)> = None;
    for (x, &i) in comp.iter().enumerate() {
        for &j in &comp[x + 1..] {
            let m = a[i][j] * a[j][i];
            if m == 0 {
                continue;
            }
            edges += 1;
            match m {
                1 => {}
                2 if double.is_none() => double = Some((i, j)),
                _ => return "unrecognized".into(),
            }
        }
    }
    if edges != r - 1 {
        return "unrecognized".into();
    }
    let degrees: Vec<usize> = comp.iter().map(|&i| deg(i)).collect();
    let max_deg = degrees.iter().copied().max().unwrap_or(0);
    match (double, max_deg) {
        (None, 0..=2) => format!("A{r}"),
        (None, 3) => {
            // D_r: one branch node with two arms of length one.
            let branch = comp[degrees.iter().position(|&d| d == 3).expect("branch")];
            let leaves = comp
                .iter()
                .filter(|&&j| a[branch][j] != 0 && j != branch && deg(j) == 1)
                .count();
            if degrees.iter().filter(|&&d| d == 3).count() == 1 && leaves >= 2 {
                format!("D{r}")
            } else {
                "unrecognized".into()
            }
        }
        (Some((i, j)), 0..=2) => {
            // |A[i][j]| > |A[j][i]| means α_i is the longer root.
            let (long, short) = if a[i][j].abs() > a[j][i].abs() { (i, j) } else { (j, i) };
            let end = if r == 2 {
                i.max(j)
            } else if deg(short) == 1 {
                short
            } else if deg(long) == 1 {
                long
            } else {
                return "unrecognized".into();
            };
            if end == short {
                format!("B{r}")
            } else {
                format!("C{r}")
            }
        }
        _ => "unrecognized".into(),
    }
}

fn f2_kernel(rows: &[IVec], ncols: usize) -> Vec<Vec<u8>> {
    let m: Vec<Vec<u8>> = rows.iter().map(|r| r.iter().map(|x| x.rem_euclid(2) as u8).collect()).collect();
    let ech = f2_echelon(m);
    let pivots: Vec<usize> = ech.iter().map(|r| r.iter().position(|&b| b != 0).expect("nonzero row")).collect();
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u8; ncols];
        v[free] = 1;
        for (row, &p) in ech.iter().zip(&pivots) {
            v[p] = row[free];
        }
        out.push(v);
    }
    out
}

/// Reduced row echelon form over F2, zero rows dropped.
fn f2_echelon(mut rows: Vec<Vec<u8>>) -> Vec<Vec<u8>> {
    if rows.is_empty() {
        return rows;
    }
    let n = rows[0].len();
    let mut out: Vec<Vec<u8>> = Vec::new();
    for col in 0..n {
        if let Some(p) = rows.iter().position(|r| r[col] != 0) {
            let pr = rows.remove(p);
            for r in rows.iter_mut().chain(out.iter_mut()) {
                if r[col] != 0 {
                    for (a, b) in r.iter_mut().zip(&pr) {
                        *a ^= b;
                    }
                }
            }
            out.push(pr);
        }
    }
    out
}

fn f2_reduce(v: &[u8], ech: &[Vec<u8>]) -> Vec<u8> {
    let mut v = v.to_vec();
    for row in ech {
        let p = row.iter().position(|&b| b != 0).expect("nonzero row");
        if v[p] != 0 {
            for (a, b) in v.iter_mut().zip(row) {
                *a ^= b;
            }
        }
    }
    v
}

#[derive(Serialize, Deserialize)]
struct RootDatumJson {
    family: String,
    n: usize,
    #[serde(rename = "dim_X")]
    dim_x: usize,
    labels: Vec<String>,
    simple_roots: Vec<IVec>,
    simple_coroots: Vec<IVec>,
}

impl Serialize for RootDatum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RootDatumJson {
            family: self.family.to_string(),
            n: self.n,
            dim_x: self.dim_x,
            labels: self.basis_labels.clone(),
            simple_roots: self.simple_roots.clone(),
            simple_coroots: self.simple_coroots.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RootDatum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = RootDatumJson::deserialize(d)?;
        if j.labels.len() != j.dim_x {
            return Err(serde::de::Error::custom("dim_X does not match the number of labels"));
        }
        let family = Family::parse(&j.family).unwrap_or(Family::Derived(j.family));
        Ok(RootDatum::from_parts(family, j.n, j.labels, j.simple_roots, j.simple_coroots))
    }
}

/// Search for an isomorphism of root data: an integer matrix `m` on coordinates with
/// `m·α1_i = α2_σ(i)` and `mᵀ·α2∨_σ(i) = α1∨_i` for a diagram bijection `σ`.
pub fn datum_isomorphic(d1: &RootDatum, d2: &RootDatum) -> Option<IMat> {
    if d1.dim_x != d2.dim_x || d1.rank() != d2.rank() {
        return None;
    }
    let dim = d1.dim_x;
    let r = d1.rank();
    let (a1, a2) = (d1.cartan(), d2.cartan());
    let mut perms = Vec::new();
    let mut cur = Vec::new();
    let mut used = vec![false; r];
    cartan_bijections(&a1, &a2, &mut cur, &mut used, &mut perms);
    for sigma in perms {
        if sigma.iter().enumerate().all(|(i, &s)| s == i) {
            let id = lattice::identity(dim);
            if iso_equations_hold(d1, d2, &sigma, &id) {
                return Some(id);
            }
        }
        if let Some(m) = solve_iso(d1, d2, &sigma) {
            return Some(m);
        }
    }
    None
}

fn cartan_bijections(a1: &IMat, a2: &IMat, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
    let k = cur.len();
    if k == a1.len() {
        out.push(cur.clone());
        return;
    }
    for cand in 0..a1.len() {
        if used[cand] {
            continue;
        }
        let ok = (0..k).all(|j| a1[k][j] == a2[cand][cur[j]] && a1[j][k] == a2[cur[j]][cand]) && a1[k][k] == a2[cand][cand];
        if ok {
            used[cand] = true;
            cur.push(cand);
            cartan_bijections(a1, a2, cur, used, out);
            cur.pop();
            used[cand] = false;
        }
    }
}

fn iso_equations_hold(d1: &RootDatum, d2: &RootDatum, sigma: &[usize], m: &IMat) -> bool {
    let mt = lattice::transpose(m);
    (0..d1.rank()).all(|i| {
        lattice::mat_vec(m, &d1.simple_roots[i]) == d2.simple_roots[sigma[i]]
            && lattice::mat_vec(&mt, &d2.simple_coroots[sigma[i]]) == d1.simple_coroots[i]
    })
}

fn solve_iso(d1: &RootDatum, d2: &RootDatum, sigma: &[usize]) -> Option<IMat> {
    let dim = d1.dim_x;
    let unknowns = dim * dim; // m[row][col] at row*dim+col
    let mut rows: Vec<IVec> = Vec::new();
    let mut rhs: IVec = Vec::new();
    for i in 0..d1.rank() {
        let a = &d1.simple_roots[i];
        let b = &d2.simple_roots[sigma[i]];
        for row in 0..dim {
            let mut eq = vec![0; unknowns];
            for col in 0..dim {
                eq[row * dim + col] = a[col];
            }
            rows.push(eq);
            rhs.push(b[row]);
        }
        let c2 = &d2.simple_coroots[sigma[i]];
        let c1 = &d1.simple_coroots[i];
        // (mᵀ c2)[col] = Σ_row m[row][col] c2[row]
        for col in 0..dim {
            let mut eq = vec![0; unknowns];
            for row in 0..dim {
                eq[row * dim + col] = c2[row];
            }
            rows.push(eq);
            rhs.push(c1[col]);
        }
    }
    let (x0, kernel) = lattice::solve_integer(&rows, &rhs, unknowns)?;
    let to_mat = |x: &IVec| -> IMat { (0..dim).map(|r| x[r * dim..(r + 1) * dim].to_vec()).collect() };
    let k = kernel.len();
    // Small coefficient search over the kernel, zero combination first.
    let bound: i64 = if k <= 2 { 2 } else if k <= 4 { 1 } else { 0 };
    let mut coeffs = vec![-bound; k];
    let mut candidates: Vec<IVec> = Vec::new();
    loop {
        candidates.push(coeffs.clone());
        let mut j = 0;
        loop {
            if j == k {
                break;
            }
            coeffs[j] += 1;
            if coeffs[j] > bound {
                coeffs[j] = -bound;
                j += 1;
            } else {
                break;
            }
        }
        if j == k {
            break;
        }
    }
    candidates.sort_by_key(|c| c.iter().map(|x| x.abs()).sum::<i64>());
    for c in candidates {
        let mut x = x0.clone();
        for (coef, v) in c.iter().zip(&kernel) {
            x = lattice::axpy(&x, *coef, v);
        }
        let m = to_mat(&x);
        if lattice::det(&m).abs() == 1 {
            return Some(m);
        }
    }
    None
}

impl fmt::Display for RootDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "family: {}  n: {}  dim X: {}", self.family, self.n, self.dim_x)?;
        writeln!(f, "basis: {}", self.basis_labels.join(", "))?;
        for (i, (a, c)) in self.simple_roots.iter().zip(&self.simple_coroots).enumerate() {
            writeln!(f, "α{} = {:<16} α{}∨ = {}", i + 1, self.render_character(a), i + 1, self.render_cocharacter(c))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(f: Family, n: usize) -> RootDatum {
        RootDatum::build(f, n).unwrap()
    }

    #[test]
    fn gspin_odd_2_data() {
        let d = b(Family::GspinOdd, 2);
        assert_eq!(d.simple_roots, vec![vec![0, 1, -1], vec![0, 0, 1]]);
        assert_eq!(d.simple_coroots, vec![vec![0, 1, -1], vec![-1, 0, 2]]);
        let c = d.classify();
        assert_eq!(c.cartan, vec![vec![2, -2], vec![-1, 2]]);
        assert_eq!(c.label, "B2");
        let pos: Vec<IVec> = d.positive_roots().into_iter().map(|r| r.vector).collect();
        assert_eq!(pos, vec![vec![0, 1, -1], vec![0, 0, 1], vec![0, 1, 0], vec![0, 1, 1]]);
        assert_eq!(d.highest_root().unwrap().vector, vec![0, 1, 1]);
    }

    #[test]
    fn wgspin_last_root() {
        let d = b(Family::WgspinEven, 3);
        // E-1, E0, E1, E2, E3
        assert_eq!(d.simple_roots[2], vec![-1, 0, 0, 1, 1]);
        assert_eq!(d.simple_coroots[2], vec![0, -1, 0, 1, 1]);
    }

    #[test]
    fn gl1_is_a_torus() {
        let d = b(Family::Gl, 1);
        assert_eq!(d.dim_x, 1);
        assert!(d.simple_roots.is_empty());
        assert!(d.validate().is_empty());
        assert!(d.positive_roots().is_empty());
    }

    #[test]
    fn rejects_bad_ranks() {
        assert!(RootDatum::build(Family::GspinEven, 1).is_err());
        assert!(RootDatum::build(Family::GspinOdd, 0).is_err());
    }

    #[test]
    fn validate_catches_zero_coroot() {
        let mut d = b(Family::GspinOdd, 3);
        d.simple_coroots[0] = vec![0; 4];
        let v = d.validate();
        assert!(v.iter().any(|x| x.axiom == "pairing" && x.detail.contains("α1")), "{v:?}");
    }

    #[test]
    fn types() {
        assert_eq!(b(Family::GspinEven, 4).classify().label, "D4");
        assert_eq!(b(Family::Gsp, 3).classify().label, "C3");
        assert_eq!(b(Family::Gsp, 2).classify().label, "C2");
        assert_eq!(b(Family::Gso, 5).classify().label, "D5");
        assert_eq!(b(Family::GspinEven, 3).classify().label, "A3");
        assert_eq!(b(Family::GspinEven, 2).classify().label, "A1×A1");
    }

    #[test]
    fn centers() {
        let c = b(Family::GspinEven, 4).center();
        assert_eq!(c.identity_component, vec![vec![1, 0, 0, 0, 0]]);
        assert_eq!(c.extra_components, vec![vec![0, 1, 1, 1, 1]]);
        let c = b(Family::GspinOdd, 4).center();
        assert!(c.extra_components.is_empty());
        let c = b(Family::Gsp, 3).center();
        assert_eq!(c.identity_component, vec![vec![2, 1, 1, 1]]);
        assert!(c.extra_components.is_empty());
    }

    #[test]
    fn levi_names() {
        let d = b(Family::GspinOdd, 3);
        let l = d.levi_factorization(&[0]).unwrap();
        assert_eq!(l.label(), "GL1 × GSpin5");
        assert_eq!(l.nilradical.len(), 5);
        let l = b(Family::WgspinEven, 4).levi_factorization(&[1]).unwrap();
        assert_eq!(l.label(), "GL2 × ~GSpin4");
        assert!(b(Family::GspinEven, 4).maximal_levi(3, false).is_err());
        assert_eq!(b(Family::GspinEven, 4).maximal_levi(4, true).unwrap().label(), "GL4 × GL1");
    }

    #[test]
    fn isomorphisms() {
        let g = b(Family::GspinOdd, 2);
        assert!(datum_isomorphic(&g, &b(Family::Gsp, 2)).is_some());
        assert!(datum_isomorphic(&g, &b(Family::Gso, 2)).is_none());
        assert_eq!(datum_isomorphic(&g, &g), Some(lattice::identity(3)));
    }

    #[test]
    fn json_round_trip() {
        let d = b(Family::WgspinEven, 3);
        let s = serde_json::to_string(&d).unwrap();
        let back: RootDatum = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
    }
}
