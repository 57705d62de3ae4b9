//! Spectral sequence of the thread-index filtration F^p = span{f_j : j >= p}
//! on cochains with values in a finite thread module.

use super::module::{module_matrix, ModuleBasis, ModuleCochain, ThreadAction};
use super::{cohomology, CochainError};
use crate::exactnum::{kernel_basis, rank, solve, Rational, SparseMatrix};
use crate::liealg::AlgebraKind;
use num::Zero;
use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

type Vector = Vec<Rational>;

struct Level {
    basis: Vec<ModuleBasis>,
    index: HashMap<ModuleBasis, usize>,
    /// D from this degree to the next.
    d: SparseMatrix,
}

/// The filtered complex of one total weight mu.
pub struct Filtered<'a> {
    module: &'a dyn ThreadAction,
    pub mu: i32,
    levels: RefCell<BTreeMap<usize, std::rc::Rc<Level>>>,
}

impl<'a> Filtered<'a> {
    pub fn new(module: &'a dyn ThreadAction, mu: i32) -> Result<Self, CochainError> {
        let idx = module.indices();
        for (a, j) in idx.iter().enumerate() {
            for k in &idx[..a] {
                if !module.act((j - k) as u32, *k).is_zero() && j <= k {
                    return Err(CochainError::FlagViolation { i: (j - k) as u32, j: *k });
                }
            }
        }
        Ok(Filtered { module, mu, levels: RefCell::new(BTreeMap::new()) })
    }

    fn level(&self, q: usize) -> std::rc::Rc<Level> {
        if let Some(l) = self.levels.borrow().get(&q) {
            return l.clone();
        }
        let (basis, _, d) = module_matrix(self.module, q, self.mu);
        let index = basis.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
        let l = std::rc::Rc::new(Level { basis, index, d });
        self.levels.borrow_mut().insert(q, l.clone());
        l
    }

    pub fn bottom(&self) -> i32 {
        *self.module.indices().first().unwrap_or(&0)
    }

    pub fn top(&self) -> i32 {
        *self.module.indices().last().unwrap_or(&0)
    }

    pub fn to_vector(&self, x: &ModuleCochain, q: usize) -> Vector {
        let l = self.level(q);
        let mut v = vec![Rational::zero(); l.basis.len()];
        for (b, c) in x.terms() {
            v[l.index[b]] = c.clone();
        }
        v
    }

    pub fn from_vector(&self, v: &[Rational], q: usize) -> ModuleCochain {
        let l = self.level(q);
        let mut x = ModuleCochain::zero();
        for (i, c) in v.iter().enumerate() {
            x.add_term(l.basis[i].clone(), c.clone());
        }
        x
    }

    /// Columns of D restricted to sources in F^p, rows to targets below F^lim.
    fn restricted(&self, q: usize, p: i32, lim: i32) -> (Vec<usize>, SparseMatrix) {
        let l = self.level(q);
        let next = self.level(q + 1);
        let cols: Vec<usize> = (0..l.basis.len()).filter(|c| l.basis[*c].1 >= p).collect();
        let rows: Vec<usize> = (0..next.basis.len()).filter(|r| next.basis[*r].1 < lim).collect();
        let mut m = SparseMatrix::zeros(rows.len(), cols.len());
        for (ri, r) in rows.iter().enumerate() {
            for (ci, c) in cols.iter().enumerate() {
                let v = l.d.get(*r, *c);
                if !v.is_zero() {
                    m.set(ri, ci, v);
                }
            }
        }
        (cols, m)
    }

    fn embed(&self, q: usize, cols: &[usize], v: &[Rational]) -> Vector {
        let mut out = vec![Rational::zero(); self.level(q).basis.len()];
        for (i, c) in cols.iter().enumerate() {
            out[*c] = v[i].clone();
        }
        out
    }

    /// Z_r^p = {x in F^p C^q : D x in F^{p+r}}.
    pub fn z(&self, r: i32, p: i32, q: usize) -> Vec<Vector> {
        let (cols, m) = self.restricted(q, p, p + r);
        kernel_basis(&m).iter().map(|v| self.embed(q, &cols, v)).collect()
    }

    /// B_r^p = F^p C^q intersected with D(F^{p-r} C^{q-1}).
    pub fn b(&self, r: i32, p: i32, q: usize) -> Vec<Vector> {
        if q == 0 {
            return Vec::new();
        }
        let (cols, m) = self.restricted(q - 1, p - r, p);
        let d = &self.level(q - 1).d;
        kernel_basis(&m).iter().map(|v| d.mul_vec(&self.embed(q - 1, &cols, v))).collect()
    }

    /// Z_{r-1}^{p+1} + B_{r-1}^p, the denominator of E_r^p.
    fn denominator(&self, r: i32, p: i32, q: usize) -> Vec<Vector> {
        let mut out = self.z(r - 1, p + 1, q);
        out.extend(self.b(r - 1, p, q));
        out
    }

    pub fn page_dim(&self, r: i32, p: i32, q: usize) -> usize {
        let num = self.z(r, p, q);
        let den = self.denominator(r, p, q);
        let n = self.level(q).basis.len();
        span_rank(n, &num.iter().chain(den.iter()).cloned().collect::<Vec<_>>()) - span_rank(n, &den)
    }

    /// Whether x (in F^p C^q) represents zero in E_r^p.
    pub fn vanishes_in_page(&self, x: &ModuleCochain, r: i32, p: i32, q: usize) -> bool {
        let den = self.denominator(r, p, q);
        let v = self.to_vector(x, q);
        let n = v.len();
        if den.is_empty() {
            return v.iter().all(|c| c.is_zero());
        }
        let m = SparseMatrix::from_columns(n, &den);
        solve(&m, &v).is_ok()
    }

    /// Dimensions of E_r^{p,q} for r = 1..=r_max over every filtration level.
    pub fn pages(&self, degrees: &[usize], r_max: i32) -> SpectralSequence {
        let mut pages = Vec::new();
        for r in 1..=r_max {
            let mut dims = BTreeMap::new();
            for p in self.module.indices() {
                for q in degrees {
                    let d = self.page_dim(r, p, *q);
                    if d > 0 {
                        dims.insert((p, *q), d);
                    }
                }
            }
            pages.push(Page { r, dims });
        }
        SpectralSequence { mu: self.mu, pages }
    }

    /// E_1^{p,q} predicted from the trivial-coefficient cohomology of L1.
    pub fn predicted_e1(&self, p: i32, q: usize) -> usize {
        let w = p - self.mu;
        if w < 0 || (q == 0 && w != 0) {
            return 0;
        }
        if q == 0 {
            return 1;
        }
        let w = w as u32;
        cohomology(q, w, &AlgebraKind::L1Truncated(w.max(1))).map(|r| r.dim).unwrap_or(0)
    }
}

fn span_rank(n: usize, vs: &[Vector]) -> usize {
    if vs.is_empty() {
        return 0;
    }
    rank(&SparseMatrix::from_columns(n, vs))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Page {
    pub r: i32,
    /// (filtration p, total degree q) -> dim E_r^{p,q}; zeros omitted.
    pub dims: BTreeMap<(i32, usize), usize>,
}

#[derive(Debug, Clone)]
pub struct SpectralSequence {
    pub mu: i32,
    pub pages: Vec<Page>,
}

/// Outcome of lifting x0 through the pages.
#[derive(Debug, Clone)]
pub struct ChaseResult {
    /// x0 survives to E_r and d_r is the first differential that may act.
    pub r: i32,
    pub lift: ModuleCochain,
    /// D(x0 + lift), lying in F^{p+r}.
    pub image: ModuleCochain,
    /// True when D(x0 + lift) = 0 for some lift.
    pub permanent: bool,
}

/// Finds the largest r with D(x0 + y) in F^{p+r} for some y in F^{p+1}.
pub fn chase(f: &Filtered, x0: &ModuleCochain, q: usize) -> ChaseResult {
    let p = x0.filtration().expect("nonzero cochain");
    let l = f.level(q);
    let dx0 = l.d.mul_vec(&f.to_vector(x0, q));
    let top = f.top();
    let mut best = (1, ModuleCochain::zero());
    let mut permanent = false;
    for r in 1..=(top - p + 1) {
        let (cols, m) = f.restricted(q, p + 1, p + r);
        let next = f.level(q + 1);
        let rows: Vec<usize> = (0..next.basis.len()).filter(|i| next.basis[*i].1 < p + r).collect();
        let rhs: Vector = rows.iter().map(|i| -dx0[*i].clone()).collect();
        let sol = if cols.is_empty() {
            rhs.iter().all(|c| c.is_zero()).then(Vec::new)
        } else {
            solve(&m, &rhs).ok()
        };
        match sol {
            Some(y) => {
                best = (r, f.from_vector(&f.embed(q, &cols, &y), q));
                if p + r > top {
                    permanent = true;
                }
            }
            None => break,
        }
    }
    let (r, lift) = best;
    let total = x0.add(&lift);
    let image = total.differential(f.module);
    ChaseResult { r, lift, image, permanent }
}
