//! Thread modules: one-dimensional homogeneous components f_j with
//! e_i f_j proportional to f_{i+j}.

use crate::cochain::{Cochain, ThreadAction};
use crate::envelope::Operator;
use crate::exactnum::{factorial, int, rat, LaurentPoly, Poly, Rational, Scalar, Var};
use crate::liealg::rescaled_basis;
use crate::massey::FormalConnection;
use num::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ThreadError {
    #[error("S has components of weight {weights:?}, expected only {expected}")]
    NotThread { expected: i32, weights: Vec<i32> },
    #[error("relations are inconsistent at b_{index}")]
    Inconsistent { index: i32 },
    #[error("relations leave b_{index} undetermined")]
    Underdetermined { index: i32 },
    #[error("uniqueness needs at least 11 basis vectors, got {0}")]
    TooShort(i32),
    #[error("module needs finite bounds")]
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ThreadKind {
    /// e_1 f_j = f_{j+1}, e_2 f_j = alpha f_{j+2}, higher e_i act by 0.
    A(Rational),
    /// Tensor densities: e_i f_j = (j + mu - lambda (i+1)) f_{i+j}.
    F { lambda: Rational, mu: Rational },
    /// The glued module: trivial f_0 plus a cyclic part bridged by e_2.
    Mtilde,
    /// The same without f_0.
    MtildeNonzero,
    /// Rescaled generators: e~1 f_j = f_{j+1} except at j = -1, 0, and
    /// e~2 f_j = b_j f_{j+2}.
    CustomB(BTreeMap<i32, Rational>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreadSpec {
    pub kind: ThreadKind,
    pub bounds: Option<(i32, i32)>,
}

impl ThreadSpec {
    pub fn new(kind: ThreadKind) -> Self {
        ThreadSpec { kind, bounds: None }
    }

    pub fn a(alpha: Rational) -> Self {
        Self::new(ThreadKind::A(alpha))
    }

    pub fn f(lambda: Rational, mu: Rational) -> Self {
        Self::new(ThreadKind::F { lambda, mu })
    }

    pub fn mtilde() -> Self {
        Self::new(ThreadKind::Mtilde)
    }

    pub fn mtilde_nonzero() -> Self {
        Self::new(ThreadKind::MtildeNonzero)
    }

    pub fn custom_b(b: BTreeMap<i32, Rational>) -> Self {
        Self::new(ThreadKind::CustomB(b))
    }

    /// The subquotient spanned by f_m, ..., f_n.
    pub fn bounded(mut self, m: i32, n: i32) -> Self {
        assert!(m <= n, "empty subquotient [{m}, {n}]");
        self.bounds = Some((m, n));
        self
    }

    pub fn contains(&self, j: i32) -> bool {
        if matches!(self.kind, ThreadKind::MtildeNonzero) && j == 0 {
            return false;
        }
        self.bounds.is_none_or(|(m, n)| m <= j && j <= n)
    }

    /// Coefficient of f_{i+j} in e_i f_j; zero when either end is absent.
    pub fn act(&self, i: u32, j: i32) -> Rational {
        if i == 0 || !self.contains(j) || !self.contains(j + i as i32) {
            return Rational::zero();
        }
        let ii = i as i64;
        let jj = j as i64;
        match &self.kind {
            ThreadKind::A(alpha) => match i {
                1 => Rational::one(),
                2 => alpha.clone(),
                _ => Rational::zero(),
            },
            ThreadKind::F { lambda, mu } => int(jj) + mu - lambda * int(ii + 1),
            ThreadKind::Mtilde | ThreadKind::MtildeNonzero => {
                if j >= 0 {
                    int(jj)
                } else if i as i32 + j <= 0 {
                    int(ii + jj)
                } else {
                    Rational::one()
                }
            }
            ThreadKind::CustomB(b) => {
                let bounds = self.bounds;
                let get = |k: i32| b.get(&k).cloned().unwrap_or_else(Rational::zero);
                tilde_act(i, j, bounds, &get) / rescaled_basis(i)
            }
        }
    }

    /// Acts by e_{i_1} ... e_{i_s} (rightmost first) on f_j.
    pub fn act_word(&self, word: &[i32], j: i32) -> Rational {
        let mut c = Rational::one();
        let mut k = j;
        for i in word.iter().rev() {
            c *= self.act(*i as u32, k);
            if c.is_zero() {
                return c;
            }
            k += i;
        }
        c
    }
}

impl ThreadAction for ThreadSpec {
    fn indices(&self) -> Vec<i32> {
        let (m, n) = self.bounds.expect("finite module needs bounds");
        (m..=n).filter(|j| self.contains(*j)).collect()
    }
    fn act(&self, i: u32, j: i32) -> Rational {
        ThreadSpec::act(self, i, j)
    }
}

/// Action of the rescaled generator e~i on f_j in a module given by e~1 and
/// b, with e~i = [e~1, e~{i-1}] for i >= 3.
fn tilde_act<C: Scalar>(i: u32, j: i32, bounds: Option<(i32, i32)>, b: &dyn Fn(i32) -> C) -> C {
    let inside = |k: i32| bounds.is_none_or(|(m, n)| m <= k && k <= n);
    if !inside(j) || !inside(j + i as i32) {
        return C::zero_value();
    }
    match i {
        1 => {
            if j == -1 || j == 0 {
                C::zero_value()
            } else {
                C::from_rational(Rational::one())
            }
        }
        2 => b(j),
        _ => {
            let i = i - 1;
            let up = tilde_act(1, j + i as i32, bounds, b).mul_ref(&tilde_act(i, j, bounds, b));
            let down = tilde_act(i, j + 1, bounds, b).mul_ref(&tilde_act(1, j, bounds, b));
            let mut out = up;
            out.add_assign_ref(&down.neg_ref());
            out
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaValue {
    pub p: u32,
    pub q: u32,
    pub j: i32,
    pub value: Rational,
}

/// The scalar by which S maps f_j to f_{j+pq}.
pub fn sigma(spec: &ThreadSpec, p: u32, q: u32, j: i32, s: &Operator) -> Result<SigmaValue, ThreadError> {
    let expected = (p * q) as i32;
    let weights: BTreeSet<i32> = s.terms().map(|(m, _)| m.weight()).collect();
    if weights.iter().any(|w| *w != expected) {
        return Err(ThreadError::NotThread { expected, weights: weights.into_iter().collect() });
    }
    let mut value = Rational::zero();
    for (m, c) in s.terms() {
        value += c * spec.act_word(m.indices(), j);
    }
    Ok(SigmaValue { p, q, j, value })
}

/// F_{j,p}(t) = (p-1)!^2 prod_{i=1}^{p-1} (t + (i+j)/(i(p-i))).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FjpPoly {
    pub j: i32,
    pub p: u32,
    pub poly: LaurentPoly,
}

impl FjpPoly {
    pub fn eval(&self, t: &Rational) -> Rational {
        self.poly.eval(t)
    }
}

pub fn f_poly(j: i32, p: u32) -> FjpPoly {
    let f = factorial(p - 1);
    let mut poly = LaurentPoly::constant(&f * &f);
    for i in 1..p as i64 {
        let shift = rat(i + j as i64, i * (p as i64 - i));
        poly = &poly * &(&LaurentPoly::t() + &LaurentPoly::constant(shift));
    }
    FjpPoly { j, p, poly }
}

/// Symbolic R5 and R7 relation coefficients at f_i for the module of
/// `tilde_act` with unknown b's.
fn relations(m: i32, n: i32, b: &dyn Fn(i32) -> Poly) -> Vec<(String, Poly)> {
    let bounds = Some((m, n));
    let t = |i: u32, j: i32| tilde_act(i, j, bounds, b);
    let mut out = Vec::new();
    for i in m..=n - 5 {
        let r = t(2, i + 3).mul(&t(3, i)).sub(&t(3, i + 2).mul(&t(2, i))).sub(&t(5, i));
        out.push((format!("R5_{i}"), r));
    }
    for i in m..=n - 7 {
        let r = t(2, i + 5).mul(&t(5, i)).sub(&t(5, i + 2).mul(&t(2, i))).sub(&t(7, i).scale(&rat(9, 10)));
        out.push((format!("R7_{i}"), r));
    }
    out
}

/// Solves the R5/R7 system for b_m, ..., b_{n-2} under b_{-2} = 0,
/// b_{-1} = b_0 = 1, determining b_1, b_2, b_3 first and then extending
/// one index at a time, alternating sides.
pub fn uniqueness_solve(m: i32, n: i32) -> Result<BTreeMap<i32, Rational>, ThreadError> {
    if n - m + 1 < 11 {
        return Err(ThreadError::TooShort(n - m + 1));
    }
    let var = |j: i32| (j - m) as Var;
    let mut known: BTreeMap<i32, Rational> = [(-2, int(0)), (-1, int(1)), (0, int(1))].into();
    let b = |j: i32| if (m..=n - 2).contains(&j) { Poly::var(var(j)) } else { Poly::zero() };
    let rels = relations(m, n, &b);

    let mut order: Vec<i32> = vec![1, 2, 3];
    let (mut lo, mut hi) = (-3, 4);
    while lo >= m || hi <= n - 2 {
        if lo >= m {
            order.push(lo);
        }
        if hi <= n - 2 {
            order.push(hi);
        }
        lo -= 1;
        hi += 1;
    }

    let substitute = |p: &Poly, known: &BTreeMap<i32, Rational>| {
        known.iter().fold(p.clone(), |acc, (j, v)| acc.substitute(var(*j), &Poly::constant(v.clone())))
    };
    for target in order {
        let v = var(target);
        let mut value = None;
        for (_, r) in &rels {
            let r = substitute(r, &known);
            if r.variables() != BTreeSet::from([v]) {
                continue;
            }
            if let Some((c, rest)) = r.split_linear(v) {
                value = Some(-rest.constant_term() / c);
                break;
            }
        }
        let Some(x) = value else {
            return Err(ThreadError::Underdetermined { index: target });
        };
        known.insert(target, x);
        // every fully determined relation must now vanish
        for (_, r) in &rels {
            let r = substitute(r, &known);
            if r.is_constant() && !r.is_zero() {
                return Err(ThreadError::Inconsistent { index: target });
            }
        }
    }
    Ok(known)
}

/// Checks every R5 and R7 relation for a numeric b-sequence.
pub fn relations_hold(m: i32, n: i32, b: &BTreeMap<i32, Rational>) -> bool {
    let get = |j: i32| Poly::constant(b.get(&j).cloned().unwrap_or_else(Rational::zero));
    relations(m, n, &get).iter().all(|(_, r)| r.is_zero())
}

/// The lower-triangular matrix of 1-forms of a finite module, rows and
/// columns ordered by ascending index.
pub fn connection_of(spec: &ThreadSpec) -> Result<FormalConnection<Rational>, ThreadError> {
    if spec.bounds.is_none() {
        return Err(ThreadError::Unbounded);
    }
    let idx = spec.indices();
    let mut a = FormalConnection::new(idx.len());
    for (c, jc) in idx.iter().enumerate() {
        for (r, jr) in idx.iter().enumerate().skip(c + 1) {
            let i = (jr - jc) as u32;
            let coeff = spec.act(i, *jc);
            if !coeff.is_zero() {
                a.set(r, c, Cochain::e(i).scale(&coeff));
            }
        }
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envelope::bsa_operator;

    #[test]
    fn action_examples() {
        assert_eq!(ThreadSpec::a(rat(2, 7)).act(2, 5), rat(2, 7));
        assert_eq!(ThreadSpec::a(rat(2, 7)).act(3, 5), int(0));
        assert_eq!(ThreadSpec::mtilde().act(3, -2), int(1));
        assert_eq!(ThreadSpec::mtilde().act(1, -1), int(0));
        assert_eq!(ThreadSpec::mtilde().act(4, 0), int(0));
        assert_eq!(ThreadSpec::mtilde().bounded(-2, 3).act(4, 1), int(0));
    }

    #[test]
    fn sigma_examples() {
        let t = rat(-3, 2);
        let s31 = bsa_operator(3, 1).unwrap().specialize(&t);
        assert_eq!(sigma(&ThreadSpec::mtilde(), 3, 1, -2, &s31).unwrap().value, int(12));
        let s21 = bsa_operator(2, 1).unwrap().specialize(&t);
        let (l, mu) = (rat(1, 3), rat(-5, 4));
        for j in -3..4 {
            let jj = int(j as i64);
            let expect = (&jj + &mu - int(2) * &l) * (&jj + int(1) + &mu - int(2) * &l) - rat(3, 2) * (&jj + &mu - int(3) * &l);
            assert_eq!(sigma(&ThreadSpec::f(l.clone(), mu.clone()), 2, 1, j, &s21).unwrap().value, expect);
        }
        let bad = s31.add(&s21);
        assert!(matches!(sigma(&ThreadSpec::mtilde(), 3, 1, 0, &bad), Err(ThreadError::NotThread { .. })));
    }

    #[test]
    fn fjp_examples() {
        let f = f_poly(-2, 3);
        assert_eq!(f.poly, &LaurentPoly::monomial(2, int(4)) + &LaurentPoly::monomial(1, int(-2)));
        assert_eq!(f_poly(-1, 4).eval(&rat(-2, 3)), int(0));
        assert_ne!(f_poly(-1, 5).eval(&rat(-2, 3)), int(0));
    }

    #[test]
    fn uniqueness_first_values() {
        let b = uniqueness_solve(-6, 6).unwrap();
        assert_eq!(b[&1], int(3));
        assert_eq!(b[&2], int(2));
        assert_eq!(b[&3], rat(3, 2));
        assert_eq!(b[&-3], int(-3));
        assert!(relations_hold(-6, 6, &b));
        assert_eq!(uniqueness_solve(0, 5), Err(ThreadError::TooShort(6)));
    }

    #[test]
    fn connection_of_a_alpha() {
        let a = connection_of(&ThreadSpec::a(rat(1, 5)).bounded(0, 2)).unwrap();
        assert_eq!(a.get(1, 0), Cochain::e(1));
        assert_eq!(a.get(2, 1), Cochain::e(1));
        assert_eq!(a.get(2, 0), Cochain::e(2).scale(&rat(1, 5)));
    }
}
