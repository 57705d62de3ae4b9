//! PBW normal-ordered arithmetic in U(L1) and the Benoit-Saint-Aubin
//! operators S_{p,1}(t), S_{1,q}(t).

use crate::exactnum::{factorial, fmt_rational, int, LaurentPoly, Rational, Scalar};
use crate::liealg::{bracket, AlgebraKind};
use num::{One, Zero};
use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnvelopeError {
    #[error("no closed formula for S_{{{p},{q}}}: needs p = 1 or q = 1")]
    UnsupportedPq { p: u32, q: u32 },
    #[error("composition {comp:?} does not sum to {r}")]
    BadComposition { r: u32, comp: Vec<u32> },
}

/// e_{i_1} ... e_{i_s} with i_1 >= ... >= i_s.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PBWMonomial(Vec<i32>);

impl PBWMonomial {
    pub fn unit() -> Self {
        PBWMonomial(Vec::new())
    }

    /// Panics unless the indices are non-increasing.
    pub fn new(idx: Vec<i32>) -> Self {
        assert!(idx.windows(2).all(|w| w[0] >= w[1]), "not in normal order: {idx:?}");
        PBWMonomial(idx)
    }

    pub fn power(i: i32, n: usize) -> Self {
        PBWMonomial(vec![i; n])
    }

    pub fn indices(&self) -> &[i32] {
        &self.0
    }

    pub fn weight(&self) -> i32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for PBWMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        let mut k = 0;
        while k < self.0.len() {
            let i = self.0[k];
            let run = self.0[k..].iter().take_while(|x| **x == i).count();
            parts.push(if run == 1 { format!("e{i}") } else { format!("e{i}^{run}") });
            k += run;
        }
        write!(f, "{}", parts.join("*"))
    }
}

/// Linear combination of normal-ordered monomials.
#[derive(Clone, Debug, PartialEq)]
pub struct UEAElement<C: Scalar> {
    terms: BTreeMap<PBWMonomial, C>,
}

pub type Operator = UEAElement<Rational>;

impl<C: Scalar> Default for UEAElement<C> {
    fn default() -> Self {
        UEAElement { terms: BTreeMap::new() }
    }
}

impl<C: Scalar> UEAElement<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::term(PBWMonomial::unit(), C::from_rational(Rational::one()))
    }

    pub fn term(m: PBWMonomial, c: C) -> Self {
        let mut out = Self::zero();
        out.add_term(m, c);
        out
    }

    pub fn add_term(&mut self, m: PBWMonomial, c: C) {
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

    pub fn terms(&self) -> impl Iterator<Item = (&PBWMonomial, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &PBWMonomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero_value)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
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
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.neg_ref());
        }
        out
    }

    pub fn scale(&self, r: &Rational) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.scale(r));
        }
        out
    }

    /// Common weight, if homogeneous and nonzero.
    pub fn weight(&self) -> Option<i32> {
        let mut it = self.terms.keys().map(|m| m.weight());
        let first = it.next()?;
        it.all(|w| w == first).then_some(first)
    }
}

impl UEAElement<LaurentPoly> {
    /// Fixes t to a nonzero rational.
    pub fn specialize(&self, t: &Rational) -> Operator {
        let mut out = Operator::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.eval(t));
        }
        out
    }

    /// Substitutes t -> 1/t in every coefficient.
    pub fn invert_t(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.invert_variable());
        }
        out
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in display_order(&self.terms).into_iter().enumerate() {
            let neg = c < &Rational::zero();
            let mag = if neg { -c } else { c.clone() };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if mag == int(1) {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", fmt_rational(&mag))?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for UEAElement<LaurentPoly> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = display_order(&self.terms).into_iter().map(|(m, c)| format!("({c})*{m}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Longer monomials first, then lexicographic: e1^3, e2*e1, e3.
fn display_order<C>(terms: &BTreeMap<PBWMonomial, C>) -> Vec<(&PBWMonomial, &C)> {
    let mut v: Vec<_> = terms.iter().collect();
    v.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then(a.0.cmp(b.0)));
    v
}

type Expansion = BTreeMap<PBWMonomial, Rational>;

thread_local! {
    static LEFT_MUL: RefCell<HashMap<(i32, PBWMonomial), Expansion>> = RefCell::new(HashMap::new());
}

fn add_scaled(acc: &mut Expansion, src: &Expansion, c: &Rational) {
    for (m, v) in src {
        let e = acc.entry(m.clone()).or_insert_with(Rational::zero);
        *e += v * c;
        if e.is_zero() {
            acc.remove(m);
        }
    }
}

/// e_j * M in normal order, for j >= 1 and M a monomial of U(L1).
fn left_mul(j: i32, m: &PBWMonomial) -> Expansion {
    if m.0.first().is_none_or(|i| j >= *i) {
        let mut v = Vec::with_capacity(m.len() + 1);
        v.push(j);
        v.extend_from_slice(&m.0);
        return [(PBWMonomial(v), Rational::one())].into();
    }
    if let Some(hit) = LEFT_MUL.with(|c| c.borrow().get(&(j, m.clone())).cloned()) {
        return hit;
    }
    // e_j e_i M' = e_i (e_j M') + [e_j, e_i] M'   with i > j
    let i = m.0[0];
    let rest = PBWMonomial(m.0[1..].to_vec());
    let mut out = Expansion::new();
    for (n, c) in left_mul(j, &rest) {
        add_scaled(&mut out, &left_mul(i, &n), &c);
    }
    let br = bracket(&AlgebraKind::WittWindow { lo: 1, hi: i32::MAX }, j, i).expect("positive indices");
    for (k, c) in br.terms {
        add_scaled(&mut out, &left_mul(k, &rest), &c);
    }
    LEFT_MUL.with(|c| c.borrow_mut().insert((j, m.clone()), out.clone()));
    out
}

/// e_j * M for j >= 1.
pub fn left_multiply(j: i32, m: &PBWMonomial) -> Operator {
    let mut out = Operator::zero();
    for (n, c) in left_mul(j, m) {
        out.add_term(n, c);
    }
    out
}

/// Rewrites a word of generators e_{w_1} ... e_{w_n} (all w >= 1) in PBW order.
pub fn normal_order(word: &[i32]) -> Operator {
    assert!(word.iter().all(|i| *i >= 1), "U(L1) words use positive indices");
    let mut acc: Expansion = [(PBWMonomial::unit(), Rational::one())].into();
    for j in word.iter().rev() {
        let mut next = Expansion::new();
        for (m, c) in &acc {
            add_scaled(&mut next, &left_mul(*j, m), c);
        }
        acc = next;
    }
    let mut out = Operator::zero();
    for (m, c) in acc {
        out.add_term(m, c);
    }
    out
}

/// Product in U(L1).
pub fn multiply<C: Scalar>(a: &UEAElement<C>, b: &UEAElement<C>) -> UEAElement<C> {
    let mut out = UEAElement::zero();
    for (ma, ca) in &a.terms {
        for (mb, cb) in &b.terms {
            let mut word = ma.0.clone();
            word.extend_from_slice(&mb.0);
            let coeff = ca.mul_ref(cb);
            for (m, c) in normal_order(&word).terms {
                out.add_term(m, coeff.scale(&c));
            }
        }
    }
    out
}

/// Ordered tuple of positive integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Composition(pub Vec<u32>);

impl Composition {
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Partial sums i_1, i_1+i_2, ..., excluding the total.
    pub fn partial_sums(&self) -> Vec<u32> {
        let mut s = 0;
        let mut out = Vec::new();
        for i in &self.0[..self.0.len().saturating_sub(1)] {
            s += i;
            out.push(s);
        }
        out
    }

    /// All compositions of r, in lexicographic order.
    pub fn all(r: u32) -> Vec<Composition> {
        fn rec(r: u32, prefix: &mut Vec<u32>, out: &mut Vec<Composition>) {
            if r == 0 {
                out.push(Composition(prefix.clone()));
                return;
            }
            for i in 1..=r {
                prefix.push(i);
                rec(r - i, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(r, &mut Vec::new(), &mut out);
        out
    }
}

fn check_comp(r: u32, comp: &Composition) -> Result<(), EnvelopeError> {
    if comp.total() != r || comp.0.contains(&0) {
        return Err(EnvelopeError::BadComposition { r, comp: comp.0.clone() });
    }
    Ok(())
}

/// c_r(I) = product over 1 <= k < r, k not a partial sum of I, of k (r - k).
pub fn bsa_coefficient(r: u32, comp: &Composition) -> Result<Rational, EnvelopeError> {
    check_comp(r, comp)?;
    let sums = comp.partial_sums();
    Ok((1..r).filter(|k| !sums.contains(k)).fold(Rational::one(), |acc, k| acc * int((k * (r - k)) as i64)))
}

/// The same coefficient as (r-1)!^2 / prod over partial sums s of s (r - s).
pub fn bsa_coefficient_closed(r: u32, comp: &Composition) -> Result<Rational, EnvelopeError> {
    check_comp(r, comp)?;
    let f = factorial(r - 1);
    let den = comp.partial_sums().iter().fold(Rational::one(), |acc, s| acc * int((s * (r - s)) as i64));
    Ok(&f * &f / den)
}

/// S_{p,1}(t) or S_{1,q}(t) from the composition formula.
pub fn bsa_operator(p: u32, q: u32) -> Result<UEAElement<LaurentPoly>, EnvelopeError> {
    let (r, sign) = match (p, q) {
        (p, 1) => (p, 1),
        (1, q) => (q, -1),
        _ => return Err(EnvelopeError::UnsupportedPq { p, q }),
    };
    let mut out = UEAElement::zero();
    for comp in Composition::all(r) {
        let c = bsa_coefficient(r, &comp)?;
        let s = comp.0.len() as i32;
        let coeff = LaurentPoly::monomial(sign * (r as i32 - s), c);
        let word: Vec<i32> = comp.0.iter().map(|i| *i as i32).collect();
        for (m, v) in normal_order(&word).terms {
            out.add_term(m, coeff.scale(&v));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn lp(pairs: &[(i32, i64)]) -> LaurentPoly {
        pairs.iter().fold(LaurentPoly::zero(), |acc, (e, c)| &acc + &LaurentPoly::monomial(*e, int(*c)))
    }

    #[test]
    fn normal_order_examples() {
        let a = normal_order(&[1, 2]);
        assert_eq!(a.coeff(&PBWMonomial::new(vec![2, 1])), int(1));
        assert_eq!(a.coeff(&PBWMonomial::new(vec![3])), int(1));
        assert_eq!(a.len(), 2);
        assert_eq!(normal_order(&[2, 1]), Operator::term(PBWMonomial::new(vec![2, 1]), int(1)));
    }

    #[test]
    fn coefficients() {
        assert_eq!(bsa_coefficient(4, &Composition(vec![1, 1, 1, 1])).unwrap(), int(1));
        assert_eq!(bsa_coefficient(3, &Composition(vec![1, 2])).unwrap(), int(2));
        assert_eq!(bsa_coefficient(4, &Composition(vec![4])).unwrap(), int(36));
        assert!(bsa_coefficient(4, &Composition(vec![1, 2])).is_err());
    }

    #[test]
    fn operators() {
        let s21 = bsa_operator(2, 1).unwrap();
        assert_eq!(s21.coeff(&PBWMonomial::power(1, 2)), lp(&[(0, 1)]));
        assert_eq!(s21.coeff(&PBWMonomial::new(vec![2])), lp(&[(1, 1)]));
        let s11 = bsa_operator(1, 1).unwrap();
        assert_eq!(s11, UEAElement::term(PBWMonomial::new(vec![1]), LaurentPoly::constant(int(1))));
        let s41 = bsa_operator(4, 1).unwrap();
        assert_eq!(s41.len(), 5);
        assert_eq!(s41.coeff(&PBWMonomial::new(vec![2, 1, 1])), lp(&[(1, 10)]));
        // the singular-vector solver agrees on 9t^2, not 6t^2
        assert_eq!(s41.coeff(&PBWMonomial::new(vec![2, 2])), lp(&[(2, 9)]));
        assert_eq!(s41.coeff(&PBWMonomial::new(vec![3, 1])), lp(&[(2, 24), (1, 10)]));
        assert_eq!(s41.coeff(&PBWMonomial::new(vec![4])), lp(&[(3, 36), (2, 24), (1, 6)]));
        assert_eq!(bsa_operator(2, 2), Err(EnvelopeError::UnsupportedPq { p: 2, q: 2 }));
    }

    #[test]
    fn known_specializations() {
        let s31 = bsa_operator(3, 1).unwrap().specialize(&rat(-3, 2));
        assert_eq!(s31.to_string(), "e1^3 - 6*e2*e1 + 6*e3");
        let s12 = bsa_operator(1, 2).unwrap().specialize(&rat(-3, 2));
        assert_eq!(s12.to_string(), "e1^2 - 2/3*e2");
    }
}
