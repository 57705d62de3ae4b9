//! Bigraded Chevalley-Eilenberg cochains of L1: exterior forms in the dual
//! basis e^1, e^2, ..., with trivial or thread-module coefficients.

mod cohomology;
mod module;
mod spectral;

pub use cohomology::{class_of, cohomology, monomials, Block, BlockCache, CohomologyReport};
pub use module::{
    module_cohomology, module_monomials, ModuleBasis, ModuleCochain, ModuleCohomology, ThreadAction,
    TrivialModule,
};
pub use spectral::{chase, ChaseResult, Filtered, Page, SpectralSequence};

use crate::exactnum::{fmt_rational, int, is_negative, Rational, Scalar};
use crate::liealg::{bracket, AlgebraKind};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CochainError {
    #[error("window L1/(e_i, i > {have}) cannot hold weight {needed} computations")]
    WindowTooSmall { needed: u32, have: u32 },
    #[error("cohomology is only computed for truncations of L1")]
    UnsupportedAlgebra,
    #[error("cochain is not closed")]
    NotClosed,
    #[error("cochain is not homogeneous of degree {q} and weight {mu}")]
    WrongBlock { q: usize, mu: u32 },
    #[error("module action lowers the flag at e_{i} f_{j}")]
    FlagViolation { i: u32, j: i32 },
}

/// e^{i_1} ^ ... ^ e^{i_q} with i_1 < ... < i_q.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExtMonomial(Vec<u32>);

impl ExtMonomial {
    pub fn unit() -> Self {
        ExtMonomial(Vec::new())
    }

    /// Sorts the factors, returning the permutation sign, or None when an
    /// index repeats.
    pub fn normalize(mut idx: Vec<u32>) -> Option<(ExtMonomial, bool)> {
        let mut odd = false;
        // insertion sort, counting transpositions
        for a in 1..idx.len() {
            let mut b = a;
            while b > 0 && idx[b - 1] > idx[b] {
                idx.swap(b - 1, b);
                odd = !odd;
                b -= 1;
            }
        }
        if idx.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some((ExtMonomial(idx), odd))
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn max_index(&self) -> u32 {
        self.0.last().copied().unwrap_or(0)
    }

    /// self ^ other with its sign; None if they share an index.
    pub fn wedge(&self, other: &ExtMonomial) -> Option<(ExtMonomial, bool)> {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        ExtMonomial::normalize(v)
    }
}

impl fmt::Display for ExtMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|i| format!("e{i}")).collect();
        write!(f, "{}", parts.join("∧"))
    }
}

/// d e^k as a list of (a, b, coefficient) with a < b: the dual of the bracket.
fn de(k: u32) -> Vec<(u32, u32, Rational)> {
    let kind = AlgebraKind::L1Truncated(k);
    let mut out = Vec::new();
    for a in 1..k {
        let b = k - a;
        if a >= b {
            break;
        }
        let c = bracket(&kind, a as i32, b as i32).expect("indices inside window").coeff(k as i32);
        out.push((a, b, c));
    }
    out
}

/// Exterior form with coefficients in a scalar ring; possibly mixed in
/// degree and weight.
#[derive(Clone, Debug, PartialEq)]
pub struct Form<C: Scalar> {
    terms: BTreeMap<ExtMonomial, C>,
}

pub type Cochain = Form<Rational>;

impl<C: Scalar> Default for Form<C> {
    fn default() -> Self {
        Form { terms: BTreeMap::new() }
    }
}

impl<C: Scalar> Form<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The 1-form e^k.
    pub fn e(k: u32) -> Self {
        Self::monomial(vec![k], C::from_rational(int(1)))
    }

    /// c * e^{i_1} ^ ... ^ e^{i_q}; the indices need not be sorted.
    pub fn monomial(idx: Vec<u32>, c: C) -> Self {
        let mut f = Self::zero();
        if let Some((m, odd)) = ExtMonomial::normalize(idx) {
            f.add_term(m, if odd { c.neg_ref() } else { c });
        }
        f
    }

    pub fn add_term(&mut self, m: ExtMonomial, c: C) {
        if c.is_zero_value() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(e) => {
                e.add_assign_ref(&c);
                if e.is_zero_value() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExtMonomial, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &ExtMonomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero_value)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Form { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg_ref())).collect() }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.scale(r));
        }
        out
    }

    pub fn mul_scalar(&self, s: &C) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.mul_ref(s));
        }
        out
    }

    pub fn wedge(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                if let Some((m, odd)) = a.wedge(b) {
                    let c = x.mul_ref(y);
                    out.add_term(m, if odd { c.neg_ref() } else { c });
                }
            }
        }
        out
    }

    /// Trivial-coefficient differential, d e^k = sum_{a<b, a+b=k} (b-a) e^a ^ e^b,
    /// extended as an antiderivation.
    pub fn d(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let idx = m.indices();
            for (l, k) in idx.iter().enumerate() {
                for (a, b, s) in de(*k) {
                    let mut v = Vec::with_capacity(idx.len() + 1);
                    v.extend_from_slice(&idx[..l]);
                    v.push(a);
                    v.push(b);
                    v.extend_from_slice(&idx[l + 1..]);
                    if let Some((mm, odd)) = ExtMonomial::normalize(v) {
                        let mut coeff = c.scale(&s);
                        if (l % 2 == 1) ^ odd {
                            coeff = coeff.neg_ref();
                        }
                        out.add_term(mm, coeff);
                    }
                }
            }
        }
        out
    }

    /// The involution a -> (-1)^{k+1} a on degree-k parts.
    pub fn bar(&self) -> Self {
        Form {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), if m.degree() % 2 == 0 { c.neg_ref() } else { c.clone() }))
                .collect(),
        }
    }

    /// Common degree, if homogeneous and nonzero.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|m| m.degree());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn weight(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|m| m.weight());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn weights(&self) -> Vec<u32> {
        let mut w: Vec<u32> = self.terms.keys().map(|m| m.weight()).collect();
        w.sort_unstable();
        w.dedup();
        w
    }

    pub fn weight_part(&self, w: u32) -> Self {
        Form { terms: self.terms.iter().filter(|(m, _)| m.weight() == w).map(|(m, c)| (m.clone(), c.clone())).collect() }
    }

    pub fn max_index(&self) -> u32 {
        self.terms.keys().map(|m| m.max_index()).max().unwrap_or(0)
    }

    pub fn map<D: Scalar>(&self, f: impl Fn(&C) -> D) -> Form<D> {
        let mut out = Form::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }
}

impl Cochain {
    pub fn lift<D: Scalar>(&self) -> Form<D> {
        self.map(|c| D::from_rational(c.clone()))
    }
}

impl fmt::Display for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = is_negative(c);
            let a = if neg { -c } else { c.clone() };
            match (k, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            if a == int(1) {
                out.push_str(&m.to_string());
            } else {
                out.push_str(&format!("{}*{}", fmt_rational(&a), m));
            }
        }
        write!(f, "{out}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(idx: &[u32], c: i64) -> Cochain {
        Cochain::monomial(idx.to_vec(), int(c))
    }

    #[test]
    fn differential_examples() {
        assert_eq!(Cochain::e(3).d(), e(&[1, 2], 1));
        assert_eq!(Cochain::e(5).d(), e(&[1, 4], 3).add(&e(&[2, 3], 1)));
        assert!(Cochain::e(1).d().is_zero());
        assert!(Cochain::e(2).d().is_zero());
    }

    #[test]
    fn sign_normalization() {
        assert_eq!(e(&[4, 1], 1), e(&[1, 4], -1));
        assert!(e(&[2, 2], 1).is_zero());
        let w = Cochain::e(2).wedge(&Cochain::e(1));
        assert_eq!(w, e(&[1, 2], -1));
    }

    #[test]
    fn d_squares_to_zero_on_small_forms() {
        for k in 1..12 {
            for l in 1..12 {
                let f = e(&[k, l], 1).add(&e(&[k], 2));
                assert!(f.d().d().is_zero());
            }
        }
    }
}
