//! Weyl group elements as reflection words with exact actions on X and X∨.

use thiserror::Error;

use crate::lattice::{self, IMat, IVec};
use crate::root_datum::{Family, Root, RootDatum};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeylError {
    #[error("vector {0:?} is not a root")]
    NotARoot(IVec),
    #[error("simple reflection index {0} out of range")]
    BadIndex(usize),
    #[error("{0}")]
    WrongFamily(String),
}

/// A word in simple reflections (0-based indices), rightmost factor acting first.
#[derive(Clone, Debug)]
pub struct WeylElement {
    pub word: Vec<usize>,
    pub action_x: IMat,
    pub action_xdual: IMat,
}

impl PartialEq for WeylElement {
    /// Equality of group elements, decided on the action.
    fn eq(&self, o: &Self) -> bool {
        self.action_x == o.action_x
    }
}

impl Eq for WeylElement {}

fn reflection_matrices(root: &[i64], coroot: &[i64]) -> (IMat, IMat) {
    let d = root.len();
    let on_x = (0..d)
        .map(|r| (0..d).map(|c| i64::from(r == c) - root[r] * coroot[c]).collect())
        .collect();
    let on_xd = (0..d)
        .map(|r| (0..d).map(|c| i64::from(r == c) - coroot[r] * root[c]).collect())
        .collect();
    (on_x, on_xd)
}

impl WeylElement {
    pub fn identity(d: &RootDatum) -> WeylElement {
        WeylElement { word: Vec::new(), action_x: lattice::identity(d.dim_x), action_xdual: lattice::identity(d.dim_x) }
    }

    pub fn simple(d: &RootDatum, i: usize) -> Result<WeylElement, WeylError> {
        if i >= d.rank() {
            return Err(WeylError::BadIndex(i + 1));
        }
        let (a, b) = reflection_matrices(&d.simple_roots[i], &d.simple_coroots[i]);
        Ok(WeylElement { word: vec![i], action_x: a, action_xdual: b })
    }

    /// `s_{w0} s_{w1} ...`, 0-based indices.
    pub fn from_word(d: &RootDatum, word: &[usize]) -> Result<WeylElement, WeylError> {
        let mut w = WeylElement::identity(d);
        for &i in word {
            w = w.compose(&WeylElement::simple(d, i)?);
        }
        Ok(w)
    }

    /// `self ∘ other`: `other` acts first.
    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        let mut word = self.word.clone();
        word.extend_from_slice(&other.word);
        WeylElement {
            word,
            action_x: lattice::mat_mul(&self.action_x, &other.action_x),
            action_xdual: lattice::mat_mul(&self.action_xdual, &other.action_xdual),
        }
    }

    pub fn inverse(&self) -> WeylElement {
        let word: Vec<usize> = self.word.iter().rev().copied().collect();
        // For an element of a reflection group the actions are unimodular.
        let ax = lattice::unimodular_inverse(&self.action_x).expect("unimodular");
        let axd = lattice::unimodular_inverse(&self.action_xdual).expect("unimodular");
        WeylElement { word, action_x: ax, action_xdual: axd }
    }

    pub fn apply(&self, x: &[i64]) -> IVec {
        lattice::mat_vec(&self.action_x, x)
    }

    pub fn apply_dual(&self, y: &[i64]) -> IVec {
        lattice::mat_vec(&self.action_xdual, y)
    }

    pub fn is_identity(&self) -> bool {
        self.action_x == lattice::identity(self.action_x.len())
    }

    /// Index permutation of the root system induced by the action.
    pub fn root_permutation(&self, d: &RootDatum) -> Vec<usize> {
        let rs = d.roots();
        rs.all()
            .iter()
            .map(|b| rs.index_of_vector(&self.apply(&b.vector)).expect("Weyl group permutes roots"))
            .collect()
    }

    /// Number of positive roots sent to negative roots.
    pub fn length(&self, d: &RootDatum) -> usize {
        let rs = d.roots();
        rs.positive()
            .iter()
            .filter(|b| !rs.root(rs.index_of_vector(&self.apply(&b.vector)).expect("root")).is_positive())
            .count()
    }

    /// Reduced word chosen by peeling off the smallest right descent each time.
    pub fn reduced(&self, d: &RootDatum) -> WeylElement {
        let mut w = self.clone();
        let mut rev = Vec::new();
        loop {
            let rs = d.roots();
            let desc = (0..d.rank()).find(|&i| {
                let img = w.apply(&d.simple_roots[i]);
                !rs.root(rs.index_of_vector(&img).expect("root")).is_positive()
            });
            match desc {
                None => break,
                Some(i) => {
                    rev.push(i);
                    w = w.compose(&WeylElement::simple(d, i).expect("in range"));
                }
            }
        }
        rev.reverse();
        WeylElement { word: rev, action_x: self.action_x.clone(), action_xdual: self.action_xdual.clone() }
    }

    pub fn render(&self) -> String {
        if self.word.is_empty() {
            return "1".into();
        }
        self.word.iter().map(|i| format!("s{}", i + 1)).collect::<Vec<_>>().join(" ")
    }
}

/// Reflection in an arbitrary root, with a palindromic word `u s_i u⁻¹`.
pub fn reflection(d: &RootDatum, root: &[i64]) -> Result<WeylElement, WeylError> {
    let rs = d.roots();
    let idx = rs.index_of_vector(root).ok_or_else(|| WeylError::NotARoot(root.to_vec()))?;
    let mut b: Root = rs.root(idx).clone();
    if !b.is_positive() {
        b = b.negated();
    }
    // Walk down to a simple root, recording the reflections used.
    let mut path = Vec::new();
    while b.height() > 1 {
        let j = (0..d.rank())
            .find(|&j| lattice::dot(&b.vector, &d.simple_coroots[j]) > 0)
            .expect("a positive non-simple root pairs positively with some simple coroot");
        let k = lattice::dot(&b.vector, &d.simple_coroots[j]) ;
        let v = lattice::axpy(&b.vector, -k, &d.simple_roots[j]);
        b = rs.root(rs.index_of_vector(&v).expect("root")).clone();
        path.push(j);
    }
    let i = b.coords.iter().position(|&c| c == 1).expect("simple");
    let mut word = path.clone();
    word.push(i);
    word.extend(path.iter().rev());
    let (ax, axd) = reflection_matrices(&rs.root(idx).vector, &rs.root(idx).coroot);
    Ok(WeylElement { word, action_x: ax, action_xdual: axd })
}

/// Longest element of the parabolic subgroup generated by `subset`.
pub fn longest_in(d: &RootDatum, subset: &[usize]) -> WeylElement {
    let mut w = WeylElement::identity(d);
    let rs = d.roots();
    loop {
        let grow = subset.iter().copied().find(|&i| {
            let img = w.apply(&d.simple_roots[i]);
            rs.root(rs.index_of_vector(&img).expect("root")).is_positive()
        });
        match grow {
            None => return w,
            Some(i) => w = w.compose(&WeylElement::simple(d, i).expect("in range")),
        }
    }
}

pub fn longest(d: &RootDatum) -> WeylElement {
    longest_in(d, &(0..d.rank()).collect::<Vec<_>>())
}

/// `w_ℓ(G) w_ℓ(M)` for `θ = Δ ∖ {α_removed}` (0-based index).
pub fn parabolic_longest(d: &RootDatum, removed: usize) -> Result<WeylElement, WeylError> {
    if removed >= d.rank() {
        return Err(WeylError::BadIndex(removed + 1));
    }
    let theta: Vec<usize> = (0..d.rank()).filter(|&i| i != removed).collect();
    Ok(longest(d).compose(&longest_in(d, &theta)))
}

fn ambient_rank(d: &RootDatum) -> Result<(usize, bool), WeylError> {
    match d.family {
        Family::GspinOdd if d.rank() >= 2 => Ok((d.rank(), true)),
        Family::GspinEven | Family::WgspinEven if d.rank() >= 3 => Ok((d.rank(), false)),
        _ => Err(WeylError::WrongFamily(format!(
            "{} of rank {} is not an ambient group (odd rank >= 2 or even rank >= 3)",
            d.family,
            d.rank()
        ))),
    }
}

/// The middle segment `α_l` (odd) or the commuting pair `α_{l-1}, α_l` (even), 0-based.
fn middle(l: usize, odd: bool) -> Vec<usize> {
    if odd {
        vec![l - 1]
    } else {
        vec![l - 2, l - 1]
    }
}

/// Word `1 2 … l … 2 1` (odd) or `1 … l-2 (l-1 l) l-2 … 1` (even), 0-based.
pub fn w0_word(d: &RootDatum) -> Result<Vec<usize>, WeylError> {
    let (l, odd) = ambient_rank(d)?;
    let top = if odd { l - 1 } else { l - 2 };
    let mut w: Vec<usize> = (0..top).collect();
    w.extend(middle(l, odd));
    w.extend((0..top).rev());
    Ok(w)
}

/// Word of `w′`: `2 … l … 2` (odd) or `2 … l-2 (l-1 l) l-2 … 2` (even), 0-based.
pub fn w_prime_word(d: &RootDatum) -> Result<Vec<usize>, WeylError> {
    let w = w0_word(d)?;
    Ok(w[1..w.len() - 1].to_vec())
}

/// Simple reflections (0-based) applied along the chain from α1 to the highest root.
pub fn beta_reflections(d: &RootDatum) -> Result<Vec<usize>, WeylError> {
    let (l, odd) = ambient_rank(d)?;
    let top = if odd { l - 1 } else { l - 2 };
    let mut r: Vec<usize> = (1..top).collect();
    r.extend(middle(l, odd));
    r.extend((1..top).rev());
    Ok(r)
}

/// `β_1 = α_1, β_{i+1} = s_{r_i}(β_i)`; ends at the highest root. Returns root indices.
pub fn beta_chain(d: &RootDatum) -> Result<Vec<usize>, WeylError> {
    let refl = beta_reflections(d)?;
    let rs = d.roots();
    let mut cur = rs.simple(0);
    let mut out = vec![cur];
    for &j in &refl {
        let b = rs.root(cur);
        let k = lattice::dot(&b.vector, &d.simple_coroots[j]);
        let v = lattice::axpy(&b.vector, -k, &d.simple_roots[j]);
        cur = rs.index_of_vector(&v).expect("root");
        out.push(cur);
    }
    Ok(out)
}
