use super::{ExactError, Rational};
use num::{One, Zero};
use std::collections::BTreeMap;

type Row = BTreeMap<usize, Rational>;

/// Row-major sparse matrix; no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Row>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Row::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_dense(rows: &[Vec<Rational>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged dense matrix");
            for (j, v) in r.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        self.data[r].get(&c).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        if v.is_zero() {
            self.data[r].remove(&c);
        } else {
            self.data[r].insert(c, v);
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &Rational) {
        let cur = self.get(r, c);
        self.set(r, c, cur + v);
    }

    pub fn row(&self, r: usize) -> &BTreeMap<usize, Rational> {
        &self.data[r]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (i, r) in self.data.iter().enumerate() {
            for (j, v) in r {
                t.data[*j].insert(i, v.clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        self.data
            .iter()
            .map(|r| r.iter().fold(Rational::zero(), |acc, (j, x)| acc + x * &v[*j]))
            .collect()
    }

    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for (i, r) in self.data.iter().enumerate() {
            let mut acc = Row::new();
            for (k, x) in r {
                axpy(&mut acc, x, &other.data[*k]);
            }
            out.data[i] = acc;
        }
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j)).collect()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, c)).collect()
    }
}

/// target += factor * src
fn axpy(target: &mut Row, factor: &Rational, src: &Row) {
    for (j, v) in src {
        let e = target.entry(*j).or_insert_with(Rational::zero);
        *e += factor * v;
        if e.is_zero() {
            target.remove(j);
        }
    }
}

/// Incremental Gauss-Jordan over the rows, restricted to pivots in columns
/// `< pivot_limit`. Returns the reduced rows ordered by pivot.
fn reduce_rows(rows: impl IntoIterator<Item = Row>, pivot_limit: usize) -> (Vec<Row>, Vec<usize>) {
    let mut basis: BTreeMap<usize, Row> = BTreeMap::new();
    for mut r in rows {
        // clear every existing pivot column from r
        let mut from = 0usize;
        loop {
            let next = r.range(from..).map(|(c, _)| *c).find(|c| basis.contains_key(c));
            let Some(c) = next else { break };
            let f = -r[&c].clone();
            axpy(&mut r, &f, &basis[&c]);
            from = c + 1;
        }
        let Some((&lead, lv)) = r.iter().find(|(c, _)| **c < pivot_limit) else { continue };
        let inv = lv.recip();
        for v in r.values_mut() {
            *v *= &inv;
        }
        for other in basis.values_mut() {
            if let Some(x) = other.get(&lead).cloned() {
                axpy(other, &-x, &r);
            }
        }
        basis.insert(lead, r);
    }
    let pivots: Vec<usize> = basis.keys().copied().collect();
    (basis.into_values().collect(), pivots)
}

/// Unique reduced row-echelon form and its pivot columns.
pub fn rref(m: &SparseMatrix) -> (SparseMatrix, Vec<usize>) {
    let (rows, pivots) = reduce_rows(m.data.iter().filter(|r| !r.is_empty()).cloned(), m.cols);
    let mut out = SparseMatrix::zeros(m.rows, m.cols);
    for (i, r) in rows.into_iter().enumerate() {
        out.data[i] = r;
    }
    (out, pivots)
}

pub fn rank(m: &SparseMatrix) -> usize {
    rref(m).1.len()
}

pub fn kernel_basis(m: &SparseMatrix) -> Vec<Vec<Rational>> {
    let (r, pivots) = rref(m);
    let mut is_pivot = vec![false; m.cols];
    for p in &pivots {
        is_pivot[*p] = true;
    }
    let mut out = Vec::new();
    for f in (0..m.cols).filter(|c| !is_pivot[*c]) {
        let mut v = vec![Rational::zero(); m.cols];
        v[f] = Rational::one();
        for (k, p) in pivots.iter().enumerate() {
            v[*p] = -r.get(k, f);
        }
        out.push(v);
    }
    out
}

/// Particular solution of m x = b.
pub fn solve(m: &SparseMatrix, b: &[Rational]) -> Result<Vec<Rational>, ExactError> {
    if b.len() != m.rows {
        return Err(ExactError::Dimension { expected: m.rows, got: b.len() });
    }
    let aug = m.data.iter().zip(b).map(|(r, bi)| {
        let mut r = r.clone();
        if !bi.is_zero() {
            r.insert(m.cols, bi.clone());
        }
        r
    });
    let (rows, pivots) = reduce_rows(aug, m.cols + 1);
    if pivots.last() == Some(&m.cols) {
        return Err(ExactError::NoSolution);
    }
    let mut x = vec![Rational::zero(); m.cols];
    for (r, p) in rows.iter().zip(&pivots) {
        x[*p] = r.get(&m.cols).cloned().unwrap_or_else(Rational::zero);
    }
    Ok(x)
}

/// `transform * m = reduced`, where `reduced` holds only the rank rows.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub reduced: SparseMatrix,
    pub pivots: Vec<usize>,
    pub transform: SparseMatrix,
}

impl Reduction {
    /// For b in the column space of m, a vector x with m x = b.
    pub fn preimage(&self, b: &[Rational]) -> Vec<Rational> {
        let y = self.transform.mul_vec(b);
        let mut x = vec![Rational::zero(); self.reduced.cols];
        for (k, p) in self.pivots.iter().enumerate() {
            x[*p] = y[k].clone();
        }
        x
    }
}

pub fn rref_with_transform(m: &SparseMatrix) -> Reduction {
    let aug = m.data.iter().enumerate().map(|(i, r)| {
        let mut r = r.clone();
        r.insert(m.cols + i, Rational::one());
        r
    });
    let (rows, pivots) = reduce_rows(aug, m.cols);
    let rank = pivots.len();
    let mut reduced = SparseMatrix::zeros(rank, m.cols);
    let mut transform = SparseMatrix::zeros(rank, m.rows);
    for (k, r) in rows.into_iter().take(rank).enumerate() {
        for (c, v) in r {
            if c < m.cols {
                reduced.data[k].insert(c, v);
            } else {
                transform.data[k].insert(c - m.cols, v);
            }
        }
    }
    Reduction { reduced, pivots, transform }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::int;

    fn m(rows: &[&[i64]]) -> SparseMatrix {
        SparseMatrix::from_dense(&rows.iter().map(|r| r.iter().map(|x| int(*x)).collect()).collect::<Vec<_>>())
    }

    #[test]
    fn rref_examples() {
        let (r, p) = rref(&SparseMatrix::identity(3));
        assert_eq!(r, SparseMatrix::identity(3));
        assert_eq!(p, vec![0, 1, 2]);
        let (r, p) = rref(&SparseMatrix::zeros(2, 3));
        assert_eq!(r, SparseMatrix::zeros(2, 3));
        assert!(p.is_empty());
        let (r, p) = rref(&m(&[&[1, 2], &[2, 4]]));
        assert_eq!(r, m(&[&[1, 2], &[0, 0]]));
        assert_eq!(p, vec![0]);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&SparseMatrix::identity(4)).is_empty());
        assert_eq!(kernel_basis(&m(&[&[1, -1]])), vec![vec![int(1), int(1)]]);
        assert_eq!(kernel_basis(&m(&[&[1, 2], &[2, 4]])), vec![vec![int(-2), int(1)]]);
    }

    #[test]
    fn solve_examples() {
        let b = vec![int(3), int(-1), int(5)];
        assert_eq!(solve(&SparseMatrix::identity(3), &b).unwrap(), b);
        let x = solve(&m(&[&[1, 1]]), &[int(3)]).unwrap();
        assert_eq!(&x[0] + &x[1], int(3));
        assert_eq!(solve(&m(&[&[1], &[2]]), &[int(1), int(3)]), Err(ExactError::NoSolution));
    }

    #[test]
    fn transform_gives_preimages() {
        let a = m(&[&[1, 2, 0], &[2, 4, 1], &[3, 6, 1]]);
        let red = rref_with_transform(&a);
        assert_eq!(red.transform.mul(&a), red.reduced);
        let b = a.mul_vec(&[int(1), int(-2), int(7)]);
        assert_eq!(a.mul_vec(&red.preimage(&b)), b);
    }
}
