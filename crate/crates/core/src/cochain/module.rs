use super::{monomials, Cochain, ExtMonomial};
use crate::exactnum::{rank, Rational, SparseMatrix};
use num::{One, Zero};
use std::collections::{BTreeMap, HashMap};

/// A finite thread module: one basis vector f_j per index j, with
/// e_i f_j = act(i, j) f_{i+j}.
pub trait ThreadAction {
    /// Basis indices, ascending.
    fn indices(&self) -> Vec<i32>;
    fn act(&self, i: u32, j: i32) -> Rational;
}

/// The one-dimensional trivial module, sitting at index 0.
pub struct TrivialModule;

impl ThreadAction for TrivialModule {
    fn indices(&self) -> Vec<i32> {
        vec![0]
    }
    fn act(&self, _i: u32, _j: i32) -> Rational {
        Rational::zero()
    }
}

/// Basis element e^I (x) f_j.
pub type ModuleBasis = (ExtMonomial, i32);

/// Cochain with values in a thread module.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ModuleCochain {
    terms: BTreeMap<ModuleBasis, Rational>,
}

impl ModuleCochain {
    pub fn zero() -> Self {
        Self::default()
    }

    /// omega (x) f_j
    pub fn tensor(omega: &Cochain, j: i32) -> Self {
        let mut out = Self::zero();
        for (m, c) in omega.terms() {
            out.add_term((m.clone(), j), c.clone());
        }
        out
    }

    pub fn add_term(&mut self, b: ModuleBasis, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(b.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&b);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ModuleBasis, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(b.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, r: &Rational) -> Self {
        let mut out = Self::zero();
        for (b, c) in &self.terms {
            out.add_term(b.clone(), c * r);
        }
        out
    }

    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|(m, _)| m.degree());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// The form multiplying f_j.
    pub fn component(&self, j: i32) -> Cochain {
        let mut f = Cochain::zero();
        for ((m, k), c) in &self.terms {
            if *k == j {
                f.add_term(m.clone(), c.clone());
            }
        }
        f
    }

    /// Lowest module index present.
    pub fn filtration(&self) -> Option<i32> {
        self.terms.keys().map(|(_, j)| *j).min()
    }

    /// D(e^I (x) f_j) = sum_i act(i, j) e^i ^ e^I (x) f_{i+j} - d(e^I) (x) f_j.
    pub fn differential(&self, module: &dyn ThreadAction) -> ModuleCochain {
        let indices = module.indices();
        let top = *indices.last().unwrap_or(&0);
        let mut out = ModuleCochain::zero();
        for ((m, j), c) in &self.terms {
            for (t, v) in Cochain::monomial(m.indices().to_vec(), c.clone()).d().terms() {
                out.add_term((t.clone(), *j), -v.clone());
            }
            for i in 1..=(top - j).max(0) as u32 {
                let a = module.act(i, *j);
                if a.is_zero() {
                    continue;
                }
                let mut idx = vec![i];
                idx.extend_from_slice(m.indices());
                if let Some((mm, odd)) = ExtMonomial::normalize(idx) {
                    let v = &a * c;
                    out.add_term((mm, *j + i as i32), if odd { -v } else { v });
                }
            }
        }
        out
    }
}

/// Basis of the (q, mu) block with module coefficients: e^I (x) f_j with
/// |I| = q and weight(I) = j - mu.
pub fn module_monomials(module: &dyn ThreadAction, q: usize, mu: i32) -> Vec<ModuleBasis> {
    let mut out = Vec::new();
    for j in module.indices() {
        let w = j - mu;
        if w < 0 || (q == 0 && w != 0) {
            continue;
        }
        for m in monomials(q, w as u32) {
            out.push((m, j));
        }
    }
    out
}

/// Matrix of D from the (q, mu) block to the (q+1, mu) block.
pub(crate) fn module_matrix(module: &dyn ThreadAction, q: usize, mu: i32) -> (Vec<ModuleBasis>, Vec<ModuleBasis>, SparseMatrix) {
    let src = module_monomials(module, q, mu);
    let tgt = module_monomials(module, q + 1, mu);
    let index: HashMap<&ModuleBasis, usize> = tgt.iter().enumerate().map(|(i, b)| (b, i)).collect();
    let mut m = SparseMatrix::zeros(tgt.len(), src.len());
    for (c, b) in src.iter().enumerate() {
        let mut x = ModuleCochain::zero();
        x.add_term(b.clone(), Rational::one());
        for (t, v) in x.differential(module).terms() {
            m.set(index[t], c, v.clone());
        }
    }
    (src, tgt, m)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleCohomology {
    pub q: usize,
    pub mu: i32,
    pub dim: usize,
    pub cocycle_dim: usize,
    pub coboundary_dim: usize,
}

/// H^q_mu(L1, M) for a finite thread module: weight mu means e^I (x) f_j
/// with j - weight(I) = mu.
pub fn module_cohomology(module: &dyn ThreadAction, q: usize, mu: i32) -> ModuleCohomology {
    let (src, _, dq) = module_matrix(module, q, mu);
    let coboundary_dim = if q == 0 { 0 } else { rank(&module_matrix(module, q - 1, mu).2) };
    let cocycle_dim = src.len() - rank(&dq);
    ModuleCohomology { q, mu, dim: cocycle_dim - coboundary_dim, cocycle_dim, coboundary_dim }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::int;

    /// e_1 f_0 = f_1, e_2 f_0 = a f_2, e_1 f_1 = f_2.
    struct Small(Rational);
    impl ThreadAction for Small {
        fn indices(&self) -> Vec<i32> {
            vec![0, 1, 2]
        }
        fn act(&self, i: u32, j: i32) -> Rational {
            match (i, j) {
                (1, 0) | (1, 1) => int(1),
                (2, 0) => self.0.clone(),
                _ => int(0),
            }
        }
    }

    #[test]
    fn module_d_squares_to_zero() {
        let m = Small(int(5));
        for q in 0..3 {
            for mu in -6..3 {
                let (_, _, a) = module_matrix(&m, q, mu);
                let (_, _, b) = module_matrix(&m, q + 1, mu);
                let prod = b.mul(&a);
                assert_eq!(prod.nnz(), 0, "q={q} mu={mu}");
            }
        }
    }

    #[test]
    fn trivial_module_matches_scalar_cohomology() {
        assert_eq!(module_cohomology(&TrivialModule, 0, 0).dim, 1);
        assert_eq!(module_cohomology(&TrivialModule, 1, -1).dim, 1);
        assert_eq!(module_cohomology(&TrivialModule, 2, -5).dim, 1);
        assert_eq!(module_cohomology(&TrivialModule, 2, -6).dim, 0);
    }
}
