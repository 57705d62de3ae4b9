//! Formal connections over the cochain algebra, defining systems and
//! Massey product sets.

mod bridge;
mod solve;

pub use bridge::{ffr_product, module_inputs, ALPHA, rational_roots, rigidity_check, spectral_check, FfrResult, RigidityVerdict, SpectralVerdict};
pub use solve::{
    product_set, product_set_with, solve_defining_system, ClassVector, DefiningSystem, MasseyInput, MasseyVerdict,
    Param, SolveOptions, Status, Triviality, ValueSet,
};

use crate::cochain::Form;
use crate::exactnum::{solve as solve_linear, Rational, Scalar, SparseMatrix};
use num::{One, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MasseyError {
    #[error("Maurer-Cartan residual is nonzero at ({row}, {col}), off the corner")]
    NotCentral { row: usize, col: usize },
    #[error("gauge matrix is singular")]
    SingularC,
    #[error("product undefined: slot ({i}, {j}) has a nontrivial class in weight {weight}")]
    Undefined { i: usize, j: usize, weight: u32 },
    #[error("fixed slot ({i}, {j}) does not solve its equation")]
    BadFixedSlot { i: usize, j: usize },
    #[error("input {0} is not a closed homogeneous form")]
    BadInput(usize),
    #[error("spectral differential disagrees with the related cocycle: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Thread(#[from] crate::threadmod::ThreadError),
    #[error(transparent)]
    Cochain(#[from] crate::cochain::CochainError),
}

/// Lower-triangular (n+1)x(n+1) matrix of forms. For an n-fold product the
/// entry a(i, j) sits at row n+1-i, column n-j.
#[derive(Debug, Clone, PartialEq)]
pub struct FormalConnection<C: Scalar> {
    size: usize,
    entries: BTreeMap<(usize, usize), Form<C>>,
}

impl<C: Scalar> FormalConnection<C> {
    pub fn new(size: usize) -> Self {
        FormalConnection { size, entries: BTreeMap::new() }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Number of inputs n.
    pub fn length(&self) -> usize {
        self.size - 1
    }

    pub fn get(&self, r: usize, c: usize) -> Form<C> {
        self.entries.get(&(r, c)).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, r: usize, c: usize, f: Form<C>) {
        assert!(r < self.size && c < self.size, "entry ({r}, {c}) outside {}x{}", self.size, self.size);
        if f.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), f);
        }
    }

    /// Nonzero entries in (row, col) order.
    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &Form<C>)> {
        self.entries.iter()
    }

    fn position(&self, i: usize, j: usize) -> (usize, usize) {
        let n = self.length();
        assert!(1 <= i && i <= j && j <= n, "slot ({i}, {j}) outside 1..={n}");
        (n + 1 - i, n - j)
    }

    pub fn slot(&self, i: usize, j: usize) -> Form<C> {
        let (r, c) = self.position(i, j);
        self.get(r, c)
    }

    pub fn set_slot(&mut self, i: usize, j: usize, f: Form<C>) {
        let (r, c) = self.position(i, j);
        self.set(r, c, f);
    }

    pub fn map_entries(&self, f: impl Fn(&Form<C>) -> Form<C>) -> Self {
        let mut out = Self::new(self.size);
        for ((r, c), e) in &self.entries {
            out.set(*r, *c, f(e));
        }
        out
    }

    pub fn d(&self) -> Self {
        self.map_entries(|f| f.d())
    }

    pub fn bar(&self) -> Self {
        self.map_entries(|f| f.bar())
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((r, c), e) in &other.entries {
            out.set(*r, *c, out.get(*r, *c).add(e));
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.map_entries(|f| f.neg()))
    }

    /// Matrix product with wedge multiplication of entries.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.size, other.size);
        let mut out = Self::new(self.size);
        for ((r, k), a) in &self.entries {
            for c in 0..self.size {
                if let Some(b) = other.entries.get(&(*k, c)) {
                    let v = out.get(*r, c).add(&a.wedge(b));
                    out.set(*r, c, v);
                }
            }
        }
        out
    }

    /// mu(A) = dA - Abar A over the whole matrix.
    pub fn mu(&self) -> Self {
        self.d().sub(&self.bar().mul(self))
    }

    /// Multiplies every entry by a scalar matrix on each side: L A R.
    fn sandwich(&self, left: &[Vec<Rational>], right: &[Vec<Rational>]) -> Self {
        let mut out = Self::new(self.size);
        for ((k, l), a) in &self.entries {
            for (r, row) in left.iter().enumerate() {
                if row[*k].is_zero() {
                    continue;
                }
                for c in 0..self.size {
                    let s = &row[*k] * &right[*l][c];
                    if !s.is_zero() {
                        let v = out.get(r, c).add(&a.scale(&s));
                        out.set(r, c, v);
                    }
                }
            }
        }
        out
    }
}

/// The corner tau of dA - Abar A, after checking every other entry vanishes.
pub fn mc_residual<C: Scalar>(a: &FormalConnection<C>) -> Result<Form<C>, MasseyError> {
    let mu = a.mu();
    let corner = (a.length(), 0);
    for ((r, c), e) in mu.entries() {
        if (*r, *c) != corner && !e.is_zero() {
            return Err(MasseyError::NotCentral { row: *r, col: *c });
        }
    }
    Ok(mu.get(corner.0, corner.1))
}

/// c(A) = sum_r abar(1, r) a(r+1, n).
pub fn related_cocycle<C: Scalar>(a: &FormalConnection<C>) -> Form<C> {
    let n = a.length();
    let mut c = Form::zero();
    for r in 1..n {
        c = c.add(&a.slot(1, r).bar().wedge(&a.slot(r + 1, n)));
    }
    c
}

fn invert(c: &[Vec<Rational>]) -> Result<Vec<Vec<Rational>>, MasseyError> {
    let n = c.len();
    let m = SparseMatrix::from_dense(c);
    let mut cols = Vec::with_capacity(n);
    for k in 0..n {
        let mut e = vec![Rational::zero(); n];
        e[k] = Rational::one();
        cols.push(solve_linear(&m, &e).map_err(|_| MasseyError::SingularC)?);
    }
    Ok((0..n).map(|r| (0..n).map(|k| cols[k][r].clone()).collect()).collect())
}

/// C^{-1} A C for an invertible scalar matrix C.
pub fn gauge_transform<C: Scalar>(a: &FormalConnection<C>, c: &[Vec<Rational>]) -> Result<FormalConnection<C>, MasseyError> {
    if c.len() != a.size() || c.iter().any(|row| row.len() != a.size()) {
        return Err(MasseyError::SingularC);
    }
    let inv = invert(c)?;
    Ok(a.sandwich(&inv, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::Cochain;
    use crate::exactnum::{int, rat};

    fn triple(a: Cochain, b: Cochain, c: Cochain, ab: Cochain, bc: Cochain) -> FormalConnection<Rational> {
        let mut m = FormalConnection::new(4);
        m.set_slot(1, 1, a);
        m.set_slot(2, 2, b);
        m.set_slot(3, 3, c);
        m.set_slot(1, 2, ab);
        m.set_slot(2, 3, bc);
        m
    }

    #[test]
    fn n2_corner_is_minus_abar_b() {
        let (a, b) = (Cochain::e(1), Cochain::e(2));
        let mut m = FormalConnection::new(3);
        m.set_slot(1, 1, a.clone());
        m.set_slot(2, 2, b.clone());
        let tau = mc_residual(&m).unwrap();
        assert_eq!(tau, a.bar().wedge(&b).neg());
        assert_eq!(related_cocycle(&m), a.wedge(&b));
        // dc - abar b with a nonzero corner
        m.set_slot(1, 2, Cochain::e(3));
        assert_eq!(mc_residual(&m).unwrap(), Cochain::e(3).d().sub(&a.wedge(&b)));
    }

    #[test]
    fn e1_e2_e2_connection() {
        // d a(1,2) = e1 e2, d a(2,3) = e2 e2 = 0
        let m = triple(Cochain::e(1), Cochain::e(2), Cochain::e(2), Cochain::e(3), Cochain::zero());
        let tau = mc_residual(&m).unwrap();
        assert_eq!(tau, related_cocycle(&m).neg());
        assert_eq!(related_cocycle(&m), Cochain::e(3).wedge(&Cochain::e(2)));
    }

    #[test]
    fn not_central() {
        let m = triple(Cochain::e(1), Cochain::e(2), Cochain::e(2), Cochain::e(4), Cochain::zero());
        assert!(matches!(mc_residual(&m), Err(MasseyError::NotCentral { .. })));
    }

    #[test]
    fn gauge_scaling() {
        let m = triple(Cochain::e(1), Cochain::e(2), Cochain::e(2), Cochain::e(3), Cochain::zero());
        let id: Vec<Vec<Rational>> = (0..4).map(|r| (0..4).map(|c| if r == c { int(1) } else { int(0) }).collect()).collect();
        assert_eq!(gauge_transform(&m, &id).unwrap(), m);
        let (x, y, z) = (int(2), rat(-1, 3), int(5));
        let mut c = vec![vec![int(0); 4]; 4];
        c[0][0] = &x * &y * &z;
        c[1][1] = &x * &y;
        c[2][2] = x.clone();
        c[3][3] = int(1);
        let g = gauge_transform(&m, &c).unwrap();
        let tau = mc_residual(&g).unwrap();
        assert_eq!(tau, mc_residual(&m).unwrap().scale(&(&x * &y * &z)));
        c[1][1] = int(0);
        assert_eq!(gauge_transform(&m, &c), Err(MasseyError::SingularC));
    }
}
