use super::{fmt_rational, int, Rational, Scalar};
use num::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Finite sum of c_k t^k with k ranging over all integers.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i32, Rational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(exp: i32, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, &c);
        p
    }

    /// The formal variable t itself.
    pub fn t() -> Self {
        Self::monomial(1, Rational::one())
    }

    pub fn add_term(&mut self, exp: i32, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(exp).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&exp);
        }
    }

    pub fn coeff(&self, exp: i32) -> Rational {
        self.coeffs.get(&exp).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &Rational)> {
        self.coeffs.iter().map(|(k, v)| (*k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { coeffs: self.coeffs.iter().map(|(k, v)| (*k, v * c)).collect() }
    }

    /// Substitutes t -> 1/t.
    pub fn invert_variable(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|(k, v)| (-k, v.clone())).collect() }
    }

    /// Exact evaluation. Panics if t = 0 and a negative power is present.
    pub fn eval(&self, t: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (k, c) in &self.coeffs {
            acc += c * pow(t, *k);
        }
        acc
    }
}

fn pow(t: &Rational, k: i32) -> Rational {
    if k >= 0 {
        num::pow(t.clone(), k as usize)
    } else {
        assert!(!t.is_zero(), "negative power of t evaluated at t = 0");
        num::pow(t.recip(), (-k) as usize)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (k, v) in &rhs.coeffs {
            out.add_term(*k, v);
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(&-Rational::one())
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (a, x) in &self.coeffs {
            for (b, y) in &rhs.coeffs {
                out.add_term(a + b, &(x * y));
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Scalar for LaurentPoly {
    fn zero_value() -> Self {
        LaurentPoly::zero()
    }
    fn is_zero_value(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn from_rational(r: Rational) -> Self {
        LaurentPoly::constant(r)
    }
    fn add_assign_ref(&mut self, other: &Self) {
        for (k, v) in &other.coeffs {
            self.add_term(*k, v);
        }
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn scale(&self, r: &Rational) -> Self {
        LaurentPoly::scale(self, r)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().rev() {
            let neg = c < &Rational::zero();
            let mag = if neg { -c } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let unit = mag == int(1);
            match *k {
                0 => write!(f, "{}", fmt_rational(&mag))?,
                _ => {
                    if !unit {
                        write!(f, "{}*", fmt_rational(&mag))?;
                    }
                    if *k == 1 {
                        write!(f, "t")?
                    } else {
                        write!(f, "t^{}", k)?
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    #[test]
    fn arithmetic_and_eval() {
        let t = LaurentPoly::t();
        let p = &t + &LaurentPoly::monomial(-1, int(6));
        let q = &p * &p;
        assert_eq!(q.coeff(0), int(12));
        assert_eq!(q.coeff(-2), int(36));
        assert_eq!(q.eval(&rat(-3, 2)), num::pow(rat(-3, 2) + rat(-4, 1), 2));
        assert!((&p - &p).is_zero());
    }

    #[test]
    fn display() {
        let p = &LaurentPoly::monomial(2, int(4)) + &LaurentPoly::monomial(1, int(2));
        assert_eq!(p.to_string(), "4*t^2 + 2*t");
        assert_eq!(LaurentPoly::monomial(-1, int(-1)).to_string(), "-t^-1");
    }
}
