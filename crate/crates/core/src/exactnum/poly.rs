use super::{fmt_rational, Rational, Scalar};
use num::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub type Var = u32;

/// Sorted (variable, exponent) pairs; exponents are positive.
pub type Mono = Vec<(Var, u32)>;

/// Multivariate polynomial with rational coefficients, used for the free
/// parameters of a defining system.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Mono, Rational>,
}

fn mono_mul(a: &Mono, b: &Mono) -> Mono {
    let mut out: BTreeMap<Var, u32> = a.iter().copied().collect();
    for (v, e) in b {
        *out.entry(*v).or_insert(0) += e;
    }
    out.into_iter().collect()
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(Vec::new(), c);
        p
    }

    pub fn var(v: Var) -> Self {
        let mut p = Self::zero();
        p.add_term(vec![(v, 1)], Rational::one());
        p
    }

    fn add_term(&mut self, m: Mono, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff_of(&self, m: &Mono) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_empty())
    }

    pub fn constant_term(&self) -> Rational {
        self.terms.get(&Vec::new()).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.iter().map(|(_, e)| e).sum()).max().unwrap_or(0)
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.iter().map(|(v, _)| *v)).collect()
    }

    pub fn contains(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.iter().any(|(w, _)| *w == v))
    }

    /// If every monomial containing v is exactly v^1, returns its coefficient.
    pub fn pure_linear_coeff(&self, v: Var) -> Option<Rational> {
        let mut found = None;
        for (m, c) in &self.terms {
            if m.iter().any(|(w, _)| *w == v) {
                if m.len() == 1 && m[0].1 == 1 {
                    found = Some(c.clone());
                } else {
                    return None;
                }
            }
        }
        found
    }

    /// Writes self = c*v + rest with c a constant; None if v enters otherwise.
    pub fn split_linear(&self, v: Var) -> Option<(Rational, Poly)> {
        let c = self.pure_linear_coeff(v)?;
        let mut rest = self.clone();
        rest.terms.remove(&vec![(v, 1)]);
        Some((c, rest))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(mono_mul(a, b), x * y);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        (0..e).fold(Poly::constant(Rational::one()), |acc, _| acc.mul(self))
    }

    /// Replaces v by `value` everywhere.
    pub fn substitute(&self, v: Var, value: &Poly) -> Poly {
        if !self.contains(v) {
            return self.clone();
        }
        let mut out = Poly::zero();
        let mut cache: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut rest = Vec::with_capacity(m.len());
            let mut e = 0;
            for (w, k) in m {
                if *w == v {
                    e = *k;
                } else {
                    rest.push((*w, *k));
                }
            }
            let mut term = Poly::zero();
            term.add_term(rest, c.clone());
            if e > 0 {
                let p = cache.entry(e).or_insert_with(|| value.pow(e));
                term = term.mul(p);
            }
            out = out.add(&term);
        }
        out
    }

    /// Evaluates with unassigned variables taken as 0.
    pub fn eval(&self, values: &BTreeMap<Var, Rational>) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m {
                match values.get(v) {
                    Some(x) => t *= num::pow(x.clone(), *e as usize),
                    None => t = Rational::zero(),
                }
            }
            acc += t;
        }
        acc
    }

    /// Coefficients of a univariate polynomial in v, lowest degree first.
    /// None if another variable occurs.
    pub fn univariate(&self, v: Var) -> Option<Vec<Rational>> {
        let deg = self.total_degree() as usize;
        let mut out = vec![Rational::zero(); deg + 1];
        for (m, c) in &self.terms {
            match m.as_slice() {
                [] => out[0] += c,
                [(w, e)] if *w == v => out[*e as usize] += c,
                _ => return None,
            }
        }
        Some(out)
    }

    pub fn fmt_with(&self, name: &dyn Fn(Var) -> String) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = if neg { -c } else { c.clone() };
            match (i, neg) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            if m.is_empty() {
                s.push_str(&fmt_rational(&mag));
                continue;
            }
            if mag != Rational::one() {
                s.push_str(&fmt_rational(&mag));
                s.push('*');
            }
            let vars: Vec<String> = m
                .iter()
                .map(|(v, e)| if *e == 1 { name(*v) } else { format!("{}^{}", name(*v), e) })
                .collect();
            s.push_str(&vars.join("*"));
        }
        s
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with(&|v| format!("x{v}")))
    }
}

impl Scalar for Poly {
    fn zero_value() -> Self {
        Poly::zero()
    }
    fn is_zero_value(&self) -> bool {
        self.terms.is_empty()
    }
    fn from_rational(r: Rational) -> Self {
        Poly::constant(r)
    }
    fn add_assign_ref(&mut self, other: &Self) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn neg_ref(&self) -> Self {
        self.scale(&-Rational::one())
    }
    fn scale(&self, r: &Rational) -> Self {
        Poly::scale(self, r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::int;

    #[test]
    fn substitution_and_linearity() {
        let x = Poly::var(0);
        let y = Poly::var(1);
        let p = x.mul(&y).add(&x.scale(&int(2))).add(&Poly::constant(int(1)));
        assert_eq!(p.pure_linear_coeff(0), None);
        let (c, rest) = y.scale(&int(3)).add(&x.mul(&x)).split_linear(1).unwrap();
        assert_eq!(c, int(3));
        assert_eq!(rest, x.mul(&x));
        let q = p.substitute(1, &Poly::constant(int(-2)));
        assert_eq!(q, Poly::constant(int(1)));
        let vals: BTreeMap<Var, Rational> = [(0, int(3)), (1, int(4))].into();
        assert_eq!(p.eval(&vals), int(19));
    }
}
