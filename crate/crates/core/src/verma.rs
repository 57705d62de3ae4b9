//! Virasoro Verma modules V(h, c) and singular vectors.

use crate::envelope::{left_multiply, Operator, PBWMonomial};
use crate::exactnum::{int, kernel_basis, rat, Rational, SparseMatrix};
use crate::liealg::{bracket, AlgebraKind};
use num::Zero;
use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VermaError {
    #[error("singular vectors at level {level} form a space of dimension {dim}, expected 1")]
    NotUnique { level: u32, dim: usize },
    #[error("t must be nonzero")]
    ZeroT,
    #[error("singular vector has no e1^{level} term to normalize")]
    NoLeadingTerm { level: u32 },
}

/// c(t) = 13 + 6t + 6/t
pub fn central_charge(t: &Rational) -> Rational {
    int(13) + int(6) * t + int(6) / t
}

/// h_{p,q}(t) = -(p^2-1) t/4 - (pq-1)/2 - (q^2-1)/(4t)
pub fn h_pq(p: u32, q: u32, t: &Rational) -> Rational {
    let (p, q) = (p as i64, q as i64);
    -(rat(p * p - 1, 4) * t) - rat(p * q - 1, 2) - rat(q * q - 1, 4) / t
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VermaParams {
    pub h: Rational,
    pub c: Rational,
    pub provenance: Option<(u32, u32, Rational)>,
}

impl VermaParams {
    pub fn new(h: Rational, c: Rational) -> Self {
        VermaParams { h, c, provenance: None }
    }

    pub fn from_pqt(p: u32, q: u32, t: &Rational) -> Result<Self, VermaError> {
        if t.is_zero() {
            return Err(VermaError::ZeroT);
        }
        Ok(VermaParams { h: h_pq(p, q, t), c: central_charge(t), provenance: Some((p, q, t.clone())) })
    }
}

/// Element of V(h, c): monomials stand for M v.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct VermaVector(pub Operator);

impl VermaVector {
    pub fn highest() -> Self {
        VermaVector(Operator::one())
    }

    pub fn level(&self) -> Option<i32> {
        self.0.weight()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

type Expansion = BTreeMap<PBWMonomial, Rational>;

/// V(h, c) with a memo for the action of non-positive generators.
pub struct VermaModule {
    pub params: VermaParams,
    memo: RefCell<HashMap<(i32, PBWMonomial), Expansion>>,
}

fn add_scaled(acc: &mut Expansion, src: impl IntoIterator<Item = (PBWMonomial, Rational)>, c: &Rational) {
    for (m, v) in src {
        let e = acc.entry(m.clone()).or_insert_with(Rational::zero);
        *e += v * c;
        if e.is_zero() {
            acc.remove(&m);
        }
    }
}

fn positive(j: i32, m: &PBWMonomial) -> Expansion {
    left_multiply(j, m).terms().map(|(n, c)| (n.clone(), c.clone())).collect()
}

impl VermaModule {
    pub fn new(params: VermaParams) -> Self {
        VermaModule { params, memo: RefCell::new(HashMap::new()) }
    }

    /// e_k (M v) for any integer k.
    fn act_mono(&self, k: i32, m: &PBWMonomial) -> Expansion {
        if k > 0 {
            return positive(k, m);
        }
        if k == 0 {
            return [(m.clone(), &self.params.h + int(m.weight() as i64))].into();
        }
        let Some(&i) = m.indices().first() else {
            return Expansion::new();
        };
        if let Some(hit) = self.memo.borrow().get(&(k, m.clone())) {
            return hit.clone();
        }
        // e_k e_i M' = e_i (e_k M') + [e_k, e_i] M'
        let rest = PBWMonomial::new(m.indices()[1..].to_vec());
        let mut out = Expansion::new();
        for (n, c) in self.act_mono(k, &rest) {
            add_scaled(&mut out, self.act_mono(i, &n), &c);
        }
        let window = AlgebraKind::VirasoroWindow { lo: k.min(-i), hi: i.max(-k) };
        let br = bracket(&window, k, i).expect("indices inside window");
        for (idx, c) in &br.terms {
            add_scaled(&mut out, self.act_mono(*idx, &rest), c);
        }
        if let Some(z) = &br.central {
            add_scaled(&mut out, [(rest.clone(), self.params.c.clone())], z);
        }
        self.memo.borrow_mut().insert((k, m.clone()), out.clone());
        out
    }

    pub fn act(&self, k: i32, v: &VermaVector) -> VermaVector {
        let mut out = Expansion::new();
        for (m, c) in v.0.terms() {
            add_scaled(&mut out, self.act_mono(k, m), c);
        }
        let mut op = Operator::zero();
        for (m, c) in out {
            op.add_term(m, c);
        }
        VermaVector(op)
    }

    /// The central element acts by c.
    pub fn act_central(&self, v: &VermaVector) -> VermaVector {
        VermaVector(v.0.scale(&self.params.c))
    }
}

/// Applies e_k once; builds a fresh module, so prefer `VermaModule` for
/// repeated use.
pub fn act(k: i32, v: &VermaVector, params: &VermaParams) -> VermaVector {
    VermaModule::new(params.clone()).act(k, v)
}

/// Partitions of n as non-increasing monomials, in lexicographic order.
pub fn partitions(n: u32) -> Vec<PBWMonomial> {
    fn rec(n: u32, max: u32, prefix: &mut Vec<i32>, out: &mut Vec<PBWMonomial>) {
        if n == 0 {
            out.push(PBWMonomial::new(prefix.clone()));
            return;
        }
        for i in (1..=max.min(n)).rev() {
            prefix.push(i as i32);
            rec(n - i, i, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Solves e_{-1} w = e_{-2} w = 0 at level pq and normalizes the e1^{pq}
/// coefficient to 1.
pub fn singular_vector(p: u32, q: u32, t: &Rational) -> Result<VermaVector, VermaError> {
    let params = VermaParams::from_pqt(p, q, t)?;
    singular_vector_for(&params, p * q)
}

pub fn singular_vector_for(params: &VermaParams, level: u32) -> Result<VermaVector, VermaError> {
    let module = VermaModule::new(params.clone());
    let unknowns = partitions(level);
    let mut rows: BTreeMap<(i32, PBWMonomial), usize> = BTreeMap::new();
    let mut cols: Vec<Vec<((i32, PBWMonomial), Rational)>> = Vec::new();
    for m in &unknowns {
        let mut col = Vec::new();
        for k in [-1, -2] {
            for (n, c) in module.act_mono(k, m) {
                let key = (k, n);
                let len = rows.len();
                rows.entry(key.clone()).or_insert(len);
                col.push((key, c));
            }
        }
        cols.push(col);
    }
    let mut mat = SparseMatrix::zeros(rows.len(), unknowns.len());
    for (j, col) in cols.iter().enumerate() {
        for (key, c) in col {
            mat.set(rows[key], j, c.clone());
        }
    }
    let ker = kernel_basis(&mat);
    if ker.len() != 1 {
        return Err(VermaError::NotUnique { level, dim: ker.len() });
    }
    let lead = unknowns.iter().position(|m| *m == PBWMonomial::power(1, level as usize)).expect("e1^n is a partition");
    let scale = &ker[0][lead];
    if scale.is_zero() {
        return Err(VermaError::NoLeadingTerm { level });
    }
    let inv = scale.recip();
    let mut op = Operator::zero();
    for (m, c) in unknowns.iter().zip(&ker[0]) {
        op.add_term(m.clone(), c * &inv);
    }
    Ok(VermaVector(op))
}

/// Strips the highest-weight vector: w = S v gives S.
pub fn as_operator(w: &VermaVector) -> Operator {
    w.0.clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envelope::bsa_operator;

    #[test]
    fn action_examples() {
        let params = VermaParams::new(rat(7, 3), int(5));
        let m = VermaModule::new(params.clone());
        let v = VermaVector(Operator::term(PBWMonomial::new(vec![2, 1]), int(1)));
        assert_eq!(m.act(0, &v), VermaVector(v.0.scale(&(rat(7, 3) + int(3)))));
        let e1v = VermaVector(Operator::term(PBWMonomial::new(vec![1]), int(1)));
        assert_eq!(m.act(-1, &e1v), VermaVector(Operator::one().scale(&(int(2) * rat(7, 3)))));
        assert_eq!(m.act_central(&v), VermaVector(v.0.scale(&int(5))));
        assert!(m.act(-1, &VermaVector::highest()).is_zero());
    }

    #[test]
    fn small_singular_vectors() {
        let t = rat(5, 7);
        assert_eq!(as_operator(&singular_vector(1, 1, &t).unwrap()).to_string(), "e1");
        for t in [rat(-3, 2), int(2), rat(1, 3)] {
            let w = singular_vector(2, 1, &t).unwrap();
            assert_eq!(as_operator(&w), bsa_operator(2, 1).unwrap().specialize(&t));
        }
    }

    #[test]
    fn params() {
        assert_eq!(central_charge(&rat(-3, 2)), int(0));
        assert_eq!(h_pq(1, 1, &rat(9, 4)), int(0));
        assert_eq!(h_pq(3, 2, &rat(-3, 2)), int(1));
        assert_eq!(partitions(4).len(), 5);
    }
}
