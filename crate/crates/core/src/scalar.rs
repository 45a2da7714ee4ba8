//! Exact rational functions in named indeterminates over the rationals.
//!
//! Polynomials are sparse term lists under lexicographic monomial order with
//! variables ranked by name ("a" before "b"). A [`ScalarExpr`] is a reduced
//! fraction of polynomials with monic denominator, so structural equality is
//! mathematical equality.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("variable `{0}` has no value")]
    Unbound(String),
    #[error("denominator vanishes at the given point")]
    VanishingDenominator,
}

/// A power product of named variables, sorted by name, exponents positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Arc<str>, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(name: &str) -> Self {
        Monomial(vec![(Arc::from(name), 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Arc<str>, u32)] {
        &self.0
    }

    pub fn degree_in(&self, v: &str) -> u32 {
        self.0.iter().find(|(n, _)| &**n == v).map_or(0, |(_, e)| *e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0.clone(), a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` if `other` divides `self`.
    fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for (n, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < *n {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == *n {
                let f = other.0[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((n.clone(), e - f)),
                }
            } else {
                out.push((n.clone(), *e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::new();
        for (n, e) in &self.0 {
            let f = other.degree_in(n);
            if f > 0 {
                out.push((n.clone(), (*e).min(f)));
            }
        }
        Monomial(out)
    }

    fn without(&self, v: &str) -> Monomial {
        Monomial(self.0.iter().filter(|(n, _)| &**n != v).cloned().collect())
    }
}

impl Ord for Monomial {
    /// Lexicographic order; a variable with a smaller name dominates.
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        let mut i = 0;
        loop {
            match (a.get(i), b.get(i)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((n, e)), Some((m, f))) => match n.cmp(m) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => match e.cmp(f) {
                        Ordering::Equal => i += 1,
                        o => return o,
                    },
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial, terms sorted by strictly decreasing monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: Vec<(Monomial, BigRational)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(Monomial::one(), c)] }
        }
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn var(name: &str) -> Self {
        Poly { terms: vec![(Monomial::var(name), BigRational::one())] }
    }

    pub fn terms(&self) -> &[(Monomial, BigRational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.as_slice() {
            [] => Some(BigRational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    fn from_unsorted(mut terms: Vec<(Monomial, BigRational)>) -> Self {
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Monomial, BigRational)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc += c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Poly { terms: out }
    }

    fn leading(&self) -> Option<&(Monomial, BigRational)> {
        self.terms.first()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &a[i].1 + &b[j].1;
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Poly { terms: out }
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigRational) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect() }
    }

    fn mul_term(&self, m: &Monomial, k: &BigRational) -> Poly {
        // Multiplying by a monomial preserves the order.
        Poly { terms: self.terms.iter().map(|(n, c)| (n.mul(m), c * k)).collect() }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if other.terms.len() == 1 {
            let (m, k) = &other.terms[0];
            return self.mul_term(m, k);
        }
        if self.terms.len() == 1 {
            let (m, k) = &self.terms[0];
            return other.mul_term(m, k);
        }
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (m, c) in &self.terms {
            for (n, d) in &other.terms {
                terms.push((m.mul(n), c * d));
            }
        }
        Poly::from_unsorted(terms)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Quotient when `d` divides `self` exactly.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (lm, lc) = d.leading()?.clone();
        let mut rem = self.clone();
        let mut q = Vec::new();
        while let Some((m, c)) = rem.leading().cloned() {
            let qm = m.div(&lm)?;
            let qc = c / &lc;
            rem = rem.sub(&d.mul_term(&qm, &qc));
            q.push((qm, qc));
        }
        Some(Poly::from_unsorted(q))
    }

    fn vars(&self) -> Vec<Arc<str>> {
        let mut v: Vec<Arc<str>> = self
            .terms
            .iter()
            .flat_map(|(m, _)| m.0.iter().map(|(n, _)| n.clone()))
            .collect();
        v.sort();
        v.dedup();
        v
    }

    fn degree_in(&self, v: &str) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree_in(v)).max().unwrap_or(0)
    }

    /// Coefficients in `v`, indexed by degree.
    fn univariate(&self, v: &str) -> Vec<Poly> {
        let d = self.degree_in(v) as usize;
        let mut parts: Vec<Vec<(Monomial, BigRational)>> = vec![Vec::new(); d + 1];
        for (m, c) in &self.terms {
            parts[m.degree_in(v) as usize].push((m.without(v), c.clone()));
        }
        parts.into_iter().map(Poly::from_unsorted).collect()
    }

    fn from_univariate(v: &str, coeffs: &[Poly]) -> Poly {
        let mut acc = Poly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let m = if k == 0 { Monomial::one() } else { Monomial(vec![(Arc::from(v), k as u32)]) };
                acc = acc.add(&c.mul_term(&m, &BigRational::one()));
            }
        }
        acc
    }

    /// Scale so the leading coefficient is 1.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        let first = match it.next() {
            None => return Monomial::one(),
            Some((m, _)) => m.clone(),
        };
        it.fold(first, |g, (m, _)| g.gcd(m))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        if self.terms.len() == 1 || other.terms.len() == 1 {
            let m = self.monomial_content().gcd(&other.monomial_content());
            return Poly { terms: vec![(m, BigRational::one())] };
        }
        let (va, vb) = (self.vars(), other.vars());
        let v = match (va.first(), vb.first()) {
            (Some(a), Some(b)) => a.min(b).clone(),
            _ => return Poly::one(),
        };
        let in_a = va.contains(&v);
        let in_b = vb.contains(&v);
        if !in_a {
            return self.gcd(&other.content_in(&v));
        }
        if !in_b {
            return self.content_in(&v).gcd(other);
        }
        let ca = self.content_in(&v);
        let cb = other.content_in(&v);
        let g_content = ca.gcd(&cb);
        let mut r0 = self.div_exact(&ca).expect("content divides");
        let mut r1 = other.div_exact(&cb).expect("content divides");
        if r0.degree_in(&v) < r1.degree_in(&v) {
            std::mem::swap(&mut r0, &mut r1);
        }
        loop {
            let r = r0.pseudo_rem(&r1, &v);
            if r.is_zero() {
                break;
            }
            if r.degree_in(&v) == 0 {
                return g_content.monic();
            }
            r0 = r1;
            r1 = r.div_exact(&r.content_in(&v)).expect("content divides");
        }
        g_content.mul(&r1).monic()
    }

    /// Gcd of the coefficients of `self` viewed as a polynomial in `v`.
    fn content_in(&self, v: &str) -> Poly {
        let mut g = Poly::zero();
        for c in self.univariate(v) {
            if c.is_zero() {
                continue;
            }
            g = if g.is_zero() { c.monic() } else { g.gcd(&c) };
            if g.as_constant().is_some() {
                return Poly::one();
            }
        }
        if g.is_zero() {
            Poly::one()
        } else {
            g
        }
    }

    fn pseudo_rem(&self, b: &Poly, v: &str) -> Poly {
        let bc = b.univariate(v);
        let db = bc.len() - 1;
        let lb = bc[db].clone();
        let mut a = self.univariate(v);
        while a.len() > db && !a.is_empty() {
            let da = a.len() - 1;
            let la = a[da].clone();
            let mut next: Vec<Poly> = a.iter().map(|c| c.mul(&lb)).collect();
            for (k, c) in bc.iter().enumerate() {
                let idx = k + da - db;
                next[idx] = next[idx].sub(&c.mul(&la));
            }
            while next.last().is_some_and(Poly::is_zero) {
                next.pop();
            }
            a = next;
        }
        Poly::from_univariate(v, &a)
    }

    pub fn eval(&self, point: &HashMap<String, BigRational>) -> Result<BigRational, ScalarError> {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (n, e) in &m.0 {
                let x = point.get(&**n).ok_or_else(|| ScalarError::Unbound(n.to_string()))?;
                t *= num_traits::pow(x.clone(), *e as usize);
            }
            acc += t;
        }
        Ok(acc)
    }

    fn fmt_with(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mut first = true;
            if m.is_one() || !a.is_one() {
                write!(f, "{}", fmt_rational(&a))?;
                first = false;
            }
            for (n, e) in &m.0 {
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                if *e == 1 {
                    write!(f, "{n}")?;
                } else {
                    write!(f, "{n}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact rational function: `num / den`, reduced, `den` monic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ScalarExpr {
    num: Poly,
    den: Poly,
}

impl Default for ScalarExpr {
    fn default() -> Self {
        ScalarExpr::zero()
    }
}

impl ScalarExpr {
    pub fn zero() -> Self {
        ScalarExpr { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        ScalarExpr::int(1)
    }

    pub fn int(k: i64) -> Self {
        ScalarExpr::rational(BigRational::from_integer(BigInt::from(k)))
    }

    pub fn frac(p: i64, q: i64) -> Self {
        ScalarExpr::rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn rational(r: BigRational) -> Self {
        ScalarExpr { num: Poly::constant(r), den: Poly::one() }
    }

    pub fn var(name: &str) -> Self {
        ScalarExpr { num: Poly::var(name), den: Poly::one() }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    fn reduce(num: Poly, den: Poly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(ScalarExpr::zero());
        }
        if let Some(c) = den.as_constant() {
            let k = c.recip();
            return Ok(ScalarExpr { num: num.scale(&k), den: Poly::one() });
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = if g.as_constant().is_some() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        let lc = d.leading().expect("nonzero").1.clone();
        if !lc.is_one() {
            let k = lc.recip();
            n = n.scale(&k);
            d = d.scale(&k);
        }
        Ok(ScalarExpr { num: n, den: d })
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.as_constant().is_some() && self.num.as_constant().is_some_and(|c| c.is_one())
    }

    /// The value if the expression has no indeterminates.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.den.as_constant().is_some() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn variables(&self) -> Vec<String> {
        let mut v: Vec<Arc<str>> = self.num.vars();
        v.extend(self.den.vars());
        v.sort();
        v.dedup();
        v.into_iter().map(|s| s.to_string()).collect()
    }

    pub fn add(&self, o: &ScalarExpr) -> ScalarExpr {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            let num = self.num.add(&o.num);
            if self.den.as_constant().is_some() {
                return ScalarExpr { num, den: self.den.clone() };
            }
            return ScalarExpr::reduce(num, self.den.clone()).expect("nonzero denominator");
        }
        let num = self.num.mul(&o.den).add(&o.num.mul(&self.den));
        ScalarExpr::reduce(num, self.den.mul(&o.den)).expect("nonzero denominator")
    }

    pub fn neg(&self) -> ScalarExpr {
        ScalarExpr { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &ScalarExpr) -> ScalarExpr {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &ScalarExpr) -> ScalarExpr {
        if self.is_zero() || o.is_zero() {
            return ScalarExpr::zero();
        }
        if self.den.as_constant().is_some() && o.den.as_constant().is_some() {
            return ScalarExpr { num: self.num.mul(&o.num), den: Poly::one() };
        }
        // Cross-cancel before multiplying to keep the gcd work small.
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let n1 = self.num.div_exact(&g1).expect("gcd divides");
        let d2 = o.den.div_exact(&g1).expect("gcd divides");
        let n2 = o.num.div_exact(&g2).expect("gcd divides");
        let d1 = self.den.div_exact(&g2).expect("gcd divides");
        let num = n1.mul(&n2);
        let den = d1.mul(&d2);
        let lc = den.leading().expect("nonzero").1.clone();
        let k = lc.recip();
        ScalarExpr { num: num.scale(&k), den: den.scale(&k) }
    }

    pub fn scale(&self, k: &BigRational) -> ScalarExpr {
        ScalarExpr { num: self.num.scale(k), den: self.den.clone() }
    }

    pub fn scale_int(&self, k: i64) -> ScalarExpr {
        self.scale(&BigRational::from_integer(BigInt::from(k)))
    }

    pub fn inv(&self) -> Result<ScalarExpr, ScalarError> {
        ScalarExpr::reduce(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &ScalarExpr) -> Result<ScalarExpr, ScalarError> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<ScalarExpr, ScalarError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs() as u32;
        Ok(ScalarExpr { num: base.num.pow(k), den: base.den.pow(k) })
    }

    pub fn eval(&self, point: &HashMap<String, BigRational>) -> Result<BigRational, ScalarError> {
        let d = self.den.eval(point)?;
        if d.is_zero() {
            return Err(ScalarError::VanishingDenominator);
        }
        Ok(self.num.eval(point)? / d)
    }

    /// Parse an expression with `+ - * / ^`, integers, identifiers and parentheses.
    pub fn parse(s: &str) -> Result<ScalarExpr, ScalarError> {
        let mut p = Parser { src: s, pos: 0 };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(e)
    }
}

impl fmt::Display for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let den_is_one = self.den.as_constant().is_some();
        if den_is_one {
            return self.num.fmt_with(f);
        }
        if self.num.terms.len() > 1 {
            write!(f, "(")?;
            self.num.fmt_with(f)?;
            write!(f, ")")?;
        } else {
            self.num.fmt_with(f)?;
        }
        write!(f, "/")?;
        let simple_den = self.den.terms.len() == 1 && self.den.terms[0].0.0.len() == 1 && self.den.terms[0].0.0[0].1 == 1;
        if simple_den {
            self.den.fmt_with(f)
        } else {
            write!(f, "(")?;
            self.den.fmt_with(f)?;
            write!(f, ")")
        }
    }
}

impl From<i64> for ScalarExpr {
    fn from(k: i64) -> Self {
        ScalarExpr::int(k)
    }
}

impl From<BigRational> for ScalarExpr {
    fn from(r: BigRational) -> Self {
        ScalarExpr::rational(r)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> ScalarError {
        ScalarError::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<ScalarExpr, ScalarError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<ScalarExpr, ScalarError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat('/') {
                let at = self.pos;
                let d = self.unary()?;
                acc = acc.div(&d).map_err(|_| ScalarError::Parse { pos: at, msg: "division by zero".into() })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<ScalarExpr, ScalarError> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<ScalarExpr, ScalarError> {
        let base = self.atom()?;
        if self.eat('^') {
            let neg = self.eat('-');
            self.skip_ws();
            let at = self.pos;
            let digits = self.take_while(|c| c.is_ascii_digit());
            let k: i64 = digits.parse().map_err(|_| ScalarError::Parse { pos: at, msg: "expected integer exponent".into() })?;
            let k = if neg { -k } else { k };
            return base.pow(k).map_err(|_| ScalarError::Parse { pos: at, msg: "zero to a negative power".into() });
        }
        Ok(base)
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &str {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if f(c) {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        &self.src[start..self.pos]
    }

    fn atom(&mut self) -> Result<ScalarExpr, ScalarError> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.take_while(|c| c.is_ascii_digit());
                let n: BigInt = d.parse().expect("digits");
                Ok(ScalarExpr::rational(BigRational::from_integer(n)))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let name = self.take_while(|c| c.is_alphanumeric() || c == '_').to_string();
                Ok(ScalarExpr::var(&name))
            }
            _ => Err(self.err("expected number, variable or `(`")),
        }
    }
}

/// Convert a small rational to `i64` parts, if it fits.
pub fn rational_parts(r: &BigRational) -> Option<(i64, i64)> {
    Some((r.numer().to_i64()?, r.denom().to_i64()?))
}
