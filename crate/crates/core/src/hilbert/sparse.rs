//! Compressed-row complex sparse matrices.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rustc_hash::FxHashMap;

/// Entries with magnitude below this are dropped on construction.
pub const PRUNE: f64 = 1e-15;

#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<C64>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, indptr: vec![0; rows + 1], indices: Vec::new(), values: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![C64::new(1.0, 0.0); n])
    }

    pub fn diagonal(d: &[C64]) -> Self {
        Self::from_triplets(d.len(), d.len(), d.iter().enumerate().map(|(i, &v)| (i, i, v)))
    }

    /// Duplicates are summed; tiny results are pruned.
    pub fn from_triplets(rows: usize, cols: usize, triplets: impl IntoIterator<Item = (usize, usize, C64)>) -> Self {
        let mut per_row: Vec<Vec<(usize, C64)>> = vec![Vec::new(); rows];
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "triplet ({r}, {c}) outside {rows}×{cols}");
            per_row[r].push((c, v));
        }
        let mut indptr = Vec::with_capacity(rows + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        indptr.push(0);
        for mut row in per_row {
            row.sort_unstable_by_key(|e| e.0);
            let mut k = 0;
            while k < row.len() {
                let c = row[k].0;
                let mut v = C64::new(0.0, 0.0);
                while k < row.len() && row[k].0 == c {
                    v += row[k].1;
                    k += 1;
                }
                if v.norm() >= PRUNE {
                    indices.push(c);
                    values.push(v);
                }
            }
            indptr.push(indices.len());
        }
        Self { rows, cols, indptr, indices, values }
    }

    pub fn from_dense(m: &DMatrix<C64>) -> Self {
        let mut t = Vec::new();
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                t.push((r, c, m[(r, c)]));
            }
        }
        Self::from_triplets(m.nrows(), m.ncols(), t)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// `(column, value)` pairs of row `r`.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        let (a, b) = (self.indptr[r], self.indptr[r + 1]);
        self.indices[a..b].iter().copied().zip(self.values[a..b].iter().copied())
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.rows).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.row(r).find(|e| e.0 == c).map_or(C64::new(0.0, 0.0), |e| e.1)
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let mut m = DMatrix::zeros(self.rows, self.cols);
        for (r, c, v) in self.triplets() {
            m[(r, c)] = v;
        }
        m
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= s);
        out.prune()
    }

    fn prune(self) -> Self {
        if self.values.iter().all(|v| v.norm() >= PRUNE) {
            return self;
        }
        let (rows, cols) = (self.rows, self.cols);
        Self::from_triplets(rows, cols, self.triplets().collect::<Vec<_>>())
    }

    pub fn add(&self, other: &Self) -> Self {
        self.axpy(C64::new(1.0, 0.0), other)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.axpy(C64::new(-1.0, 0.0), other)
    }

    /// `self + s·other`.
    pub fn axpy(&self, s: C64, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        Self::from_triplets(
            self.rows,
            self.cols,
            self.triplets().chain(other.triplets().map(|(r, c, v)| (r, c, s * v))).collect::<Vec<_>>(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut indptr = vec![0];
        let mut indices = Vec::new();
        let mut values = Vec::new();
        let mut acc: FxHashMap<usize, C64> = FxHashMap::default();
        for r in 0..self.rows {
            acc.clear();
            for (k, a) in self.row(r) {
                for (c, b) in other.row(k) {
                    *acc.entry(c).or_insert(C64::new(0.0, 0.0)) += a * b;
                }
            }
            let mut row: Vec<(usize, C64)> = acc.iter().map(|(&c, &v)| (c, v)).filter(|e| e.1.norm() >= PRUNE).collect();
            row.sort_unstable_by_key(|e| e.0);
            for (c, v) in row {
                indices.push(c);
                values.push(v);
            }
            indptr.push(indices.len());
        }
        Self { rows: self.rows, cols: other.cols, indptr, indices, values }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_triplets(self.cols, self.rows, self.triplets().map(|(r, c, v)| (c, r, v.conj())).collect::<Vec<_>>())
    }

    pub fn transpose(&self) -> Self {
        Self::from_triplets(self.cols, self.rows, self.triplets().map(|(r, c, v)| (c, r, v)).collect::<Vec<_>>())
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    /// Kronecker product with `self` on the more significant index.
    pub fn kron(&self, other: &Self) -> Self {
        let mut t = Vec::with_capacity(self.nnz() * other.nnz());
        for (r1, c1, v1) in self.triplets() {
            for (r2, c2, v2) in other.triplets() {
                t.push((r1 * other.rows + r2, c1 * other.cols + c2, v1 * v2));
            }
        }
        Self::from_triplets(self.rows * other.rows, self.cols * other.cols, t)
    }

    pub fn matvec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows).map(|r| self.row(r).map(|(c, v)| v * x[c]).sum()).collect()
    }

    /// Largest entry magnitude (zero for an empty matrix).
    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest magnitude of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.sub(other).max_abs()
    }

    /// Hermiticity defect `max |A − A†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// Restriction to the given (sorted or unsorted) row/column index set.
    pub fn restrict(&self, keep: &[usize]) -> Self {
        let pos: FxHashMap<usize, usize> = keep.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        let mut t = Vec::new();
        for (i, &r) in keep.iter().enumerate() {
            for (c, v) in self.row(r) {
                if let Some(&j) = pos.get(&c) {
                    t.push((i, j, v));
                }
            }
        }
        Self::from_triplets(keep.len(), keep.len(), t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_matrix(seed: u64, n: usize) -> SparseMatrix {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let t: Vec<_> = (0..3 * n)
            .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
            .collect();
        SparseMatrix::from_triplets(n, n, t)
    }

    #[test]
    fn duplicates_sum_and_zeros_prune() {
        let m = SparseMatrix::from_triplets(2, 2, vec![(0, 1, c(1.0, 0.0)), (0, 1, c(-1.0, 0.0)), (1, 0, c(2.0, 0.0))]);
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(1, 0), c(2.0, 0.0));
    }

    #[test]
    fn commutator_trivia() {
        let a = random_matrix(1, 6);
        assert_eq!(a.commutator(&a).nnz(), 0);
        assert_eq!(a.commutator(&SparseMatrix::identity(6)).nnz(), 0);
    }

    #[test]
    fn kron_matches_dense() {
        let a = random_matrix(2, 3);
        let b = random_matrix(3, 2);
        let k = a.kron(&b).to_dense();
        let (da, db) = (a.to_dense(), b.to_dense());
        for r in 0..6 {
            for col in 0..6 {
                assert!((k[(r, col)] - da[(r / 2, col / 2)] * db[(r % 2, col % 2)]).norm() < 1e-15);
            }
        }
    }

    proptest! {
        #[test]
        fn product_and_adjoint_match_dense(seed in 0u64..500) {
            let a = random_matrix(seed, 7);
            let b = random_matrix(seed + 1000, 7);
            let diff = a.mul(&b).to_dense() - a.to_dense() * b.to_dense();
            prop_assert!(diff.norm() < 1e-12);
            prop_assert!((a.adjoint().to_dense() - a.to_dense().adjoint()).norm() < 1e-15);
            let x: Vec<C64> = (0..7).map(|i| c(i as f64, 1.0)).collect();
            let y = a.add(&b).matvec(&x);
            let z: Vec<C64> = a.matvec(&x).iter().zip(b.matvec(&x)).map(|(p, q)| p + q).collect();
            for (p, q) in y.iter().zip(z) {
                prop_assert!((p - q).norm() < 1e-12);
            }
        }
    }
}
