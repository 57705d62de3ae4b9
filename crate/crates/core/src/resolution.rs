//! The rank-two free resolution of the trivial module at t = -3/2, and
//! thread-module cohomology computed from it.

use crate::cochain::module_cohomology;
use crate::envelope::{bsa_operator, multiply, EnvelopeError, Operator};
use crate::exactnum::{rank, rat, Rational, SparseMatrix};
use crate::threadmod::{sigma, ThreadError, ThreadSpec};
use crate::verma::{singular_vector, VermaError};
use num::Zero;
use std::cell::RefCell;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolutionError {
    #[error("stages are numbered from 1")]
    NoStage,
    #[error(transparent)]
    Verma(#[from] VermaError),
    #[error(transparent)]
    Envelope(#[from] EnvelopeError),
    #[error(transparent)]
    Thread(#[from] ThreadError),
    #[error("delta_{k} o delta_{next} has nonzero entry ({row}, {col}): {residual}", next = k + 1)]
    NotExact { k: usize, row: usize, col: usize, residual: String },
    #[error("dimensions differ at degree {q}: resolution {resolution:?}, cochains {cochains:?}")]
    Mismatch { q: usize, resolution: Vec<usize>, cochains: Vec<usize> },
}

/// e(k) = (3k^2 + k)/2, so e(-k) = (3k^2 - k)/2.
pub fn pentagonal(k: i64) -> i64 {
    (3 * k * k + k) / 2
}

fn t0() -> Rational {
    rat(-3, 2)
}

/// Memoized S_{p,q}(-3/2).
#[derive(Default)]
pub struct Operators {
    cache: RefCell<HashMap<(u32, u32), Operator>>,
}

impl Operators {
    pub fn new() -> Self {
        Self::default()
    }

    /// (1, q) and (p, 1) from the closed formula, the rest from the Verma
    /// solver.
    pub fn get(&self, p: u32, q: u32) -> Result<Operator, ResolutionError> {
        if let Some(op) = self.cache.borrow().get(&(p, q)) {
            return Ok(op.clone());
        }
        let op = if p == 1 || q == 1 {
            bsa_operator(p, q)?.specialize(&t0())
        } else {
            singular_vector(p, q, &t0())?.0
        };
        self.cache.borrow_mut().insert((p, q), op.clone());
        Ok(op)
    }
}

/// A differential of the resolution: rows index the target generators,
/// columns the source generators.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolutionStage {
    pub k: usize,
    pub entries: Vec<Vec<Operator>>,
}

/// delta_1 = (S_{1,1}, S_{1,2}); for k >= 1 delta_{k+1} has rows
/// (S_{1,3k+1}, S_{2k+1,2}) and (-S_{2k+1,1}, -S_{1,3k+2}).
pub fn delta(k: usize, ops: &Operators) -> Result<ResolutionStage, ResolutionError> {
    match k {
        0 => Err(ResolutionError::NoStage),
        1 => Ok(ResolutionStage { k, entries: vec![vec![ops.get(1, 1)?, ops.get(1, 2)?]] }),
        _ => {
            let j = (k - 1) as u32;
            let neg = |op: Operator| op.scale(&rat(-1, 1));
            Ok(ResolutionStage {
                k,
                entries: vec![
                    vec![ops.get(1, 3 * j + 1)?, ops.get(2 * j + 1, 2)?],
                    vec![neg(ops.get(2 * j + 1, 1)?), neg(ops.get(1, 3 * j + 2)?)],
                ],
            })
        }
    }
}

/// Composite delta_k o delta_{k+1}: entry (a, b) is
/// sum_c delta_{k+1}[c][b] * delta_k[a][c] in U(L1).
pub fn composite(k: usize, ops: &Operators) -> Result<Vec<Vec<Operator>>, ResolutionError> {
    let inner = delta(k + 1, ops)?;
    let outer = delta(k, ops)?;
    let mut out = Vec::new();
    for a in 0..outer.entries.len() {
        let mut row = Vec::new();
        for b in 0..inner.entries[0].len() {
            let mut acc = Operator::zero();
            for c in 0..inner.entries.len() {
                acc = acc.add(&multiply(&inner.entries[c][b], &outer.entries[a][c]));
            }
            row.push(acc);
        }
        out.push(row);
    }
    Ok(out)
}

pub fn verify_exactness(k: usize, ops: &Operators) -> Result<(), ResolutionError> {
    for (row, r) in composite(k, ops)?.iter().enumerate() {
        for (col, e) in r.iter().enumerate() {
            if !e.is_zero() {
                return Err(ResolutionError::NotExact { k, row, col, residual: e.to_string() });
            }
        }
    }
    Ok(())
}

/// D_k restricted to the nonzero components; `sources` and `targets` list
/// the module indices of those components.
#[derive(Debug, Clone, PartialEq)]
pub struct DkMatrix {
    pub k: usize,
    pub s: i32,
    pub sources: Vec<i32>,
    pub targets: Vec<i32>,
    /// targets.len() x sources.len()
    pub entries: Vec<Vec<Rational>>,
}

/// Module indices of the degree-q term: s for q = 0, else s + e(-q) and
/// s + e(q).
fn slots(q: usize, s: i32) -> Vec<i32> {
    if q == 0 {
        vec![s]
    } else {
        let q = q as i64;
        vec![s + pentagonal(-q) as i32, s + pentagonal(q) as i32]
    }
}

/// (p, q, sign) of the operator from source slot b to target slot a.
fn d_entry(k: usize, a: usize, b: usize) -> (u32, u32, i64) {
    if k == 0 {
        return if a == 0 { (1, 1, 1) } else { (1, 2, 1) };
    }
    let k = k as u32;
    match (a, b) {
        (0, 0) => (1, 3 * k + 1, 1),
        (0, 1) => (2 * k + 1, 1, -1),
        (1, 0) => (2 * k + 1, 2, 1),
        _ => (1, 3 * k + 2, -1),
    }
}

pub fn d_matrix(spec: &ThreadSpec, k: usize, s: i32, ops: &Operators) -> Result<DkMatrix, ResolutionError> {
    let src_all = slots(k, s);
    let tgt_all = slots(k + 1, s);
    let src: Vec<(usize, i32)> = src_all.iter().copied().enumerate().filter(|(_, j)| spec.contains(*j)).collect();
    let tgt: Vec<(usize, i32)> = tgt_all.iter().copied().enumerate().filter(|(_, j)| spec.contains(*j)).collect();
    let mut entries = vec![vec![Rational::zero(); src.len()]; tgt.len()];
    for (ri, (a, _)) in tgt.iter().enumerate() {
        for (ci, (b, j)) in src.iter().enumerate() {
            let (p, q, sign) = d_entry(k, *a, *b);
            let v = sigma(spec, p, q, *j, &ops.get(p, q)?)?.value;
            entries[ri][ci] = v * Rational::from_integer(sign.into());
        }
    }
    Ok(DkMatrix { k, s, sources: src.iter().map(|x| x.1).collect(), targets: tgt.iter().map(|x| x.1).collect(), entries })
}

fn matrix_rank(m: &DkMatrix) -> usize {
    if m.entries.is_empty() || m.sources.is_empty() {
        return 0;
    }
    rank(&SparseMatrix::from_dense(&m.entries))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThreadCohomologyReport {
    pub s: i32,
    /// dim H^q_s for q = 0..=k_max.
    pub dims: Vec<usize>,
    pub matrices: Vec<DkMatrix>,
}

/// H^q_s(L1, M) for q <= k_max from the complex of D_k's.
pub fn thread_cohomology(spec: &ThreadSpec, s: i32, k_max: usize, ops: &Operators) -> Result<ThreadCohomologyReport, ResolutionError> {
    let matrices: Vec<DkMatrix> = (0..=k_max).map(|k| d_matrix(spec, k, s, ops)).collect::<Result<_, _>>()?;
    let ranks: Vec<usize> = matrices.iter().map(matrix_rank).collect();
    let dims = (0..=k_max)
        .map(|q| {
            let c = matrices[q].sources.len();
            c - ranks[q] - if q > 0 { ranks[q - 1] } else { 0 }
        })
        .collect();
    Ok(ThreadCohomologyReport { s, dims, matrices })
}

/// Compares the resolution route with Chevalley-Eilenberg cochains on a
/// finite module, degree by degree.
pub fn cross_validate(spec: &ThreadSpec, s: i32, max_degree: usize, ops: &Operators) -> Result<Vec<usize>, ResolutionError> {
    let res = thread_cohomology(spec, s, max_degree, ops)?;
    let ce: Vec<usize> = (0..=max_degree).map(|q| module_cohomology(spec, q, s).dim).collect();
    if let Some(q) = (0..=max_degree).find(|q| res.dims[*q] != ce[*q]) {
        return Err(ResolutionError::Mismatch { q, resolution: res.dims, cochains: ce });
    }
    Ok(ce)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envelope::PBWMonomial;
    use crate::exactnum::int;

    #[test]
    fn first_stages() {
        let ops = Operators::new();
        let d1 = delta(1, &ops).unwrap();
        assert_eq!(d1.entries[0][0].to_string(), "e1");
        assert_eq!(d1.entries[0][1], Operator::term(PBWMonomial::new(vec![1, 1]), int(1)).add(&Operator::term(PBWMonomial::new(vec![2]), rat(-2, 3))));
        let d2 = delta(2, &ops).unwrap();
        assert_eq!(d2.entries[1][0].to_string(), "-e1^3 + 6*e2*e1 - 6*e3");
        assert_eq!(delta(0, &ops), Err(ResolutionError::NoStage));
    }

    #[test]
    fn exact_at_one() {
        let ops = Operators::new();
        verify_exactness(1, &ops).unwrap();
    }

    #[test]
    fn trivial_module_gives_pentagonal_weights() {
        let ops = Operators::new();
        let triv = ThreadSpec::a(int(0)).bounded(0, 0);
        for s in -8..=0 {
            let r = thread_cohomology(&triv, s, 2, &ops).unwrap();
            let expect: Vec<usize> = (0..=2)
                .map(|q| {
                    let q = q as i64;
                    usize::from(-s as i64 == pentagonal(q) || -s as i64 == pentagonal(-q))
                })
                .collect();
            assert_eq!(r.dims, expect, "s = {s}");
        }
    }
}
