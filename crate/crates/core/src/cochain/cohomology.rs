use super::{Cochain, CochainError, ExtMonomial, Form};
use crate::exactnum::{kernel_basis, rref, rref_with_transform, Rational, Reduction, Scalar, SparseMatrix};
use crate::liealg::AlgebraKind;
use num::{One, Zero};
use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

/// Degree-q monomials of weight w, in lexicographic order.
pub fn monomials(q: usize, w: u32) -> Vec<ExtMonomial> {
    fn rec(q: usize, w: u32, min: u32, prefix: &mut Vec<u32>, out: &mut Vec<ExtMonomial>) {
        if q == 0 {
            if w == 0 {
                out.push(ExtMonomial(prefix.clone()));
            }
            return;
        }
        // the remaining q-1 factors exceed i, so need w - i >= (q-1) i + q(q-1)/2
        let mut i = min;
        while (q as u32) * i + (q as u32 * (q as u32 - 1)) / 2 <= w {
            prefix.push(i);
            rec(q - 1, w - i, i + 1, prefix, out);
            prefix.pop();
            i += 1;
        }
    }
    let mut out = Vec::new();
    rec(q, w, 1, &mut Vec::new(), &mut out);
    out
}

type Row = BTreeMap<usize, Rational>;

/// Linear data of one (q, w) block: reduction modulo coboundaries,
/// normalized representatives and a fixed preimage map for d_{q-1}.
#[derive(Debug)]
pub struct Block {
    pub q: usize,
    pub w: u32,
    basis: Vec<ExtMonomial>,
    index: HashMap<ExtMonomial, usize>,
    /// Coboundary space in reduced form, pivots on lex-last monomials.
    image: Vec<(usize, Row)>,
    /// Representatives reduced modulo coboundaries, pivots on lex-first monomials.
    reps: Vec<(usize, Row)>,
    sources: Vec<ExtMonomial>,
    preimage: Reduction,
    cocycle_dim: usize,
}

impl Block {
    pub fn new(q: usize, w: u32) -> Block {
        let basis = monomials(q, w);
        let index: HashMap<ExtMonomial, usize> = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let n = basis.len();
        let sources = if q == 0 { Vec::new() } else { monomials(q - 1, w) };
        let targets = monomials(q + 1, w);
        let tindex: HashMap<&ExtMonomial, usize> = targets.iter().enumerate().map(|(i, m)| (m, i)).collect();

        let mut dq = SparseMatrix::zeros(targets.len(), n);
        for (c, m) in basis.iter().enumerate() {
            for (t, v) in Cochain::monomial(m.0.clone(), Rational::one()).d().terms() {
                dq.set(tindex[t], c, v.clone());
            }
        }
        let mut b = SparseMatrix::zeros(n, sources.len());
        for (c, m) in sources.iter().enumerate() {
            for (t, v) in Cochain::monomial(m.0.clone(), Rational::one()).d().terms() {
                b.set(index[t], c, v.clone());
            }
        }

        // coboundaries: reverse the column order so pivots land on lex-last monomials
        let mut rev = SparseMatrix::zeros(sources.len(), n);
        for c in 0..sources.len() {
            for (r, v) in (0..n).map(|r| (r, b.get(r, c))) {
                if !v.is_zero() {
                    rev.set(c, n - 1 - r, v);
                }
            }
        }
        let (rr, rp) = rref(&rev);
        let image: Vec<(usize, Row)> = rp
            .iter()
            .enumerate()
            .map(|(k, p)| (n - 1 - p, rr.row(k).iter().map(|(c, v)| (n - 1 - c, v.clone())).collect()))
            .collect();

        let cocycles = kernel_basis(&dq);
        let cocycle_dim = cocycles.len();
        let mut reduced = SparseMatrix::zeros(cocycles.len(), n);
        for (i, z) in cocycles.iter().enumerate() {
            let mut row: Row = z.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(c, v)| (c, v.clone())).collect();
            reduce_row(&image, &mut row);
            for (c, v) in row {
                reduced.set(i, c, v);
            }
        }
        let (rr, rp) = rref(&reduced);
        let reps = rp.iter().enumerate().map(|(k, p)| (*p, rr.row(k).clone())).collect();

        let preimage = rref_with_transform(&b);
        Block { q, w, basis, index, image, reps, sources, preimage, cocycle_dim }
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn coboundary_dim(&self) -> usize {
        self.image.len()
    }

    pub fn cocycle_dim(&self) -> usize {
        self.cocycle_dim
    }

    pub fn basis(&self) -> &[ExtMonomial] {
        &self.basis
    }

    pub fn representative(&self, k: usize) -> Cochain {
        let mut f = Cochain::zero();
        for (c, v) in &self.reps[k].1 {
            f.add_term(self.basis[*c].clone(), v.clone());
        }
        f
    }

    pub fn representatives(&self) -> Vec<Cochain> {
        (0..self.dim()).map(|k| self.representative(k)).collect()
    }

    fn coords_of<C: Scalar>(&self, f: &Form<C>) -> Vec<C> {
        let mut v = vec![C::zero_value(); self.basis.len()];
        for (m, c) in f.terms() {
            let i = *self.index.get(m).unwrap_or_else(|| panic!("monomial {m} outside block ({}, {})", self.q, self.w));
            v[i] = c.clone();
        }
        v
    }

    fn reduce_generic<C: Scalar>(&self, f: &Form<C>) -> Vec<C> {
        let mut v = self.coords_of(f);
        for (p, row) in &self.image {
            let x = v[*p].clone();
            if x.is_zero_value() {
                continue;
            }
            for (c, r) in row {
                let t = x.scale(r).neg_ref();
                v[*c].add_assign_ref(&t);
            }
        }
        v
    }

    /// Class coordinates of a closed form in the representative basis.
    /// Closedness is the caller's responsibility.
    pub fn coordinates<C: Scalar>(&self, f: &Form<C>) -> Vec<C> {
        let v = self.reduce_generic(f);
        self.reps.iter().map(|(p, _)| v[*p].clone()).collect()
    }

    /// Given a closed form with zero class, a primitive with d(result) = f.
    pub fn primitive<C: Scalar>(&self, f: &Form<C>) -> Form<C> {
        let b = self.coords_of(f);
        let t = &self.preimage.transform;
        let mut x = vec![C::zero_value(); self.sources.len()];
        for (k, p) in self.preimage.pivots.iter().enumerate() {
            let mut acc = C::zero_value();
            for (c, v) in t.row(k) {
                if !b[*c].is_zero_value() {
                    acc.add_assign_ref(&b[*c].scale(v));
                }
            }
            x[*p] = acc;
        }
        let mut out = Form::zero();
        for (i, c) in x.into_iter().enumerate() {
            out.add_term(self.sources[i].clone(), c);
        }
        out
    }

    /// f minus the combination of representatives given by `coords`.
    pub fn remove_class<C: Scalar>(&self, f: &Form<C>, coords: &[C]) -> Form<C> {
        let mut out = f.clone();
        for (k, c) in coords.iter().enumerate() {
            if c.is_zero_value() {
                continue;
            }
            out = out.sub(&self.representative(k).lift::<C>().mul_scalar(c));
        }
        out
    }
}

fn reduce_row(image: &[(usize, Row)], row: &mut Row) {
    for (p, r) in image {
        let Some(x) = row.get(p).cloned() else { continue };
        for (c, v) in r {
            let e = row.entry(*c).or_insert_with(Rational::zero);
            *e -= &x * v;
            if e.is_zero() {
                row.remove(c);
            }
        }
    }
}

/// Shared cache of blocks for repeated queries.
#[derive(Default)]
pub struct BlockCache {
    blocks: RefCell<HashMap<(usize, u32), Rc<Block>>>,
}

impl BlockCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, q: usize, w: u32) -> Rc<Block> {
        if let Some(b) = self.blocks.borrow().get(&(q, w)) {
            return b.clone();
        }
        let b = Rc::new(Block::new(q, w));
        self.blocks.borrow_mut().insert((q, w), b.clone());
        b
    }
}

#[derive(Debug, Clone)]
pub struct CohomologyReport {
    pub q: usize,
    pub mu: u32,
    pub dim: usize,
    pub representatives: Vec<Cochain>,
    pub coboundary_dim: usize,
    pub cocycle_dim: usize,
    block: Rc<Block>,
}

impl CohomologyReport {
    pub fn block(&self) -> &Block {
        &self.block
    }
}

/// H^q in weight mu of L1, computed on the given truncation.
pub fn cohomology(q: usize, mu: u32, algebra: &AlgebraKind) -> Result<CohomologyReport, CochainError> {
    let AlgebraKind::L1Truncated(n) = *algebra else {
        return Err(CochainError::UnsupportedAlgebra);
    };
    // every participating index must survive the truncation
    let needed = (q.saturating_sub(1)..=q + 1)
        .flat_map(|d| monomials(d, mu))
        .map(|m| m.max_index())
        .max()
        .unwrap_or(0);
    if n < needed {
        return Err(CochainError::WindowTooSmall { needed, have: n });
    }
    let block = Rc::new(Block::new(q, mu));
    Ok(CohomologyReport {
        q,
        mu,
        dim: block.dim(),
        representatives: block.representatives(),
        coboundary_dim: block.coboundary_dim(),
        cocycle_dim: block.cocycle_dim(),
        block,
    })
}

pub fn class_of(c: &Cochain, report: &CohomologyReport) -> Result<Vec<Rational>, CochainError> {
    if c.is_zero() {
        return Ok(vec![Rational::zero(); report.dim]);
    }
    if c.degree() != Some(report.q) || c.weight() != Some(report.mu) {
        return Err(CochainError::WrongBlock { q: report.q, mu: report.mu });
    }
    if !c.d().is_zero() {
        return Err(CochainError::NotClosed);
    }
    Ok(report.block.coordinates(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::int;

    fn l1(n: u32) -> AlgebraKind {
        AlgebraKind::L1Truncated(n)
    }

    #[test]
    fn enumerates_monomials() {
        let m: Vec<String> = monomials(2, 7).iter().map(|m| m.to_string()).collect();
        assert_eq!(m, vec!["e1∧e6", "e2∧e5", "e3∧e4"]);
        assert_eq!(monomials(3, 5).len(), 0);
        assert_eq!(monomials(3, 6).len(), 1);
    }

    #[test]
    fn low_degree_reports() {
        let r = cohomology(1, 1, &l1(1)).unwrap();
        assert_eq!(r.dim, 1);
        assert_eq!(r.representatives[0], Cochain::e(1));
        let r = cohomology(1, 2, &l1(2)).unwrap();
        assert_eq!(r.representatives[0], Cochain::e(2));
        let r = cohomology(2, 5, &l1(5)).unwrap();
        assert_eq!(r.dim, 1);
        assert_eq!(r.representatives[0], Cochain::monomial(vec![1, 4], int(1)));
        assert_eq!(cohomology(2, 6, &l1(6)).unwrap().dim, 0);
    }

    #[test]
    fn class_coordinates() {
        let r = cohomology(2, 5, &l1(5)).unwrap();
        let c = Cochain::monomial(vec![2, 3], int(1));
        assert_eq!(class_of(&c, &r).unwrap(), vec![int(-3)]);
        assert_eq!(class_of(&Cochain::e(5).d(), &r).unwrap(), vec![int(0)]);
        let r3 = cohomology(2, 3, &l1(3)).unwrap();
        assert_eq!(class_of(&Cochain::monomial(vec![1, 2], int(1)), &r3).unwrap(), Vec::<Rational>::new());
        assert_eq!(class_of(&Cochain::monomial(vec![1, 5], int(1)), &cohomology(2, 6, &l1(6)).unwrap()), Err(CochainError::NotClosed));
    }

    #[test]
    fn primitives_invert_d() {
        let b = Block::new(2, 7);
        let exact = Cochain::e(7).d().scale(&int(5));
        let p = b.primitive(&exact);
        assert_eq!(p.d(), exact);
    }

    #[test]
    fn window_guard() {
        assert!(matches!(cohomology(2, 7, &l1(4)), Err(CochainError::WindowTooSmall { .. })));
    }
}
