//! Structure constants of the Witt algebra, its positive part and the
//! Virasoro extension.

use crate::exactnum::{factorial, int, rat, Rational};
use num::Zero;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgebraKind {
    /// Quotient of L1 by the span of e_i, i > N.
    L1Truncated(u32),
    WittWindow { lo: i32, hi: i32 },
    VirasoroWindow { lo: i32, hi: i32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error("index {index} lies outside the window [{lo}, {hi}]")]
    OutOfWindow { index: i32, lo: i32, hi: i32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BracketResult {
    pub terms: Vec<(i32, Rational)>,
    /// Coefficient of the central element z.
    pub central: Option<Rational>,
}

impl BracketResult {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.central.is_none()
    }

    pub fn coeff(&self, index: i32) -> Rational {
        self.terms.iter().find(|(i, _)| *i == index).map_or_else(Rational::zero, |(_, c)| c.clone())
    }
}

impl AlgebraKind {
    pub fn bounds(&self) -> (i32, i32) {
        match *self {
            AlgebraKind::L1Truncated(n) => (1, n as i32),
            AlgebraKind::WittWindow { lo, hi } | AlgebraKind::VirasoroWindow { lo, hi } => (lo, hi),
        }
    }

    pub fn contains(&self, i: i32) -> bool {
        let (lo, hi) = self.bounds();
        lo <= i && i <= hi
    }

    pub fn basis(&self) -> Vec<i32> {
        let (lo, hi) = self.bounds();
        (lo..=hi).collect()
    }
}

fn check(kind: &AlgebraKind, i: i32) -> Result<(), LieError> {
    let (lo, hi) = kind.bounds();
    if kind.contains(i) {
        Ok(())
    } else {
        Err(LieError::OutOfWindow { index: i, lo, hi })
    }
}

/// [e_i, e_j] = (j - i) e_{i+j}, plus (j^3 - j)/12 z on the Virasoro side
/// when i + j = 0.
///
/// Truncations drop results above N. Windows only restrict the inputs: the
/// result index may leave the window.
pub fn bracket(kind: &AlgebraKind, i: i32, j: i32) -> Result<BracketResult, LieError> {
    check(kind, i)?;
    check(kind, j)?;
    let mut out = BracketResult::default();
    let c = int((j - i) as i64);
    let keep = match kind {
        AlgebraKind::L1Truncated(n) => i + j <= *n as i32,
        _ => true,
    };
    if keep && !c.is_zero() {
        out.terms.push((i + j, c));
    }
    if matches!(kind, AlgebraKind::VirasoroWindow { .. }) && i + j == 0 {
        let j = j as i64;
        let z = rat(j * j * j - j, 12);
        if !z.is_zero() {
            out.central = Some(z);
        }
    }
    Ok(out)
}

/// Scale relating the rescaled generator to e_i: 1 for i = 1, 6 (i-2)! else.
pub fn rescaled_basis(i: u32) -> Rational {
    assert!(i >= 1, "rescaled basis starts at 1");
    if i == 1 {
        int(1)
    } else {
        int(6) * factorial(i - 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bracket_examples() {
        let b = bracket(&AlgebraKind::L1Truncated(10), 1, 2).unwrap();
        assert_eq!(b.terms, vec![(3, int(1))]);
        assert!(bracket(&AlgebraKind::L1Truncated(4), 2, 3).unwrap().is_zero());
        let v = bracket(&AlgebraKind::VirasoroWindow { lo: -2, hi: 2 }, -2, 2).unwrap();
        assert_eq!(v.terms, vec![(0, int(4))]);
        assert_eq!(v.central, Some(rat(1, 2)));
        assert_eq!(
            bracket(&AlgebraKind::WittWindow { lo: -1, hi: 1 }, 2, 0),
            Err(LieError::OutOfWindow { index: 2, lo: -1, hi: 1 })
        );
    }

    #[test]
    fn rescaled() {
        assert_eq!(rescaled_basis(1), int(1));
        assert_eq!(rescaled_basis(2), int(6));
        assert_eq!(rescaled_basis(5), int(36));
    }
}
