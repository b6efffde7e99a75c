use std::sync::{Arc, OnceLock};

use num_complex::Complex64 as C64;
use rustc_hash::FxHashMap;

use super::krylov::expm_apply;
use super::{HilbertError, LinkSpace, LinkState, SparseMatrix, StateVector};
use crate::lattice::LinkId;
use crate::repkernel::HalfInt;

/// An operator acting non-trivially on a small ordered set of links,
/// stored as a sparse matrix over the tensor product of those link spaces
/// (first link most significant).
#[derive(Debug)]
pub struct LocalOp {
    links: Vec<LinkId>,
    jmax: HalfInt,
    link_dim: usize,
    mat: SparseMatrix,
    columns: OnceLock<SparseMatrix>,
}

impl Clone for LocalOp {
    fn clone(&self) -> Self {
        Self::new(self.links.clone(), self.jmax, self.mat.clone())
    }
}

impl LocalOp {
    pub fn new(links: Vec<LinkId>, jmax: HalfInt, mat: SparseMatrix) -> Self {
        let link_dim = LinkSpace::new(jmax).dim();
        let dim = link_dim.pow(links.len() as u32);
        assert_eq!((mat.rows(), mat.cols()), (dim, dim), "local matrix has the wrong size");
        Self { links, jmax, link_dim, mat, columns: OnceLock::new() }
    }

    /// `c·1` with empty support.
    pub fn scalar(jmax: HalfInt, c: C64) -> Self {
        Self::new(Vec::new(), jmax, SparseMatrix::diagonal(&[c]))
    }

    pub fn identity(jmax: HalfInt) -> Self {
        Self::scalar(jmax, C64::new(1.0, 0.0))
    }

    pub fn zero(jmax: HalfInt) -> Self {
        Self::scalar(jmax, C64::new(0.0, 0.0))
    }

    pub fn links(&self) -> &[LinkId] {
        &self.links
    }

    pub fn jmax(&self) -> HalfInt {
        self.jmax
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.mat
    }

    pub fn local_dim(&self) -> usize {
        self.mat.rows()
    }

    fn columns(&self) -> &SparseMatrix {
        self.columns.get_or_init(|| self.mat.transpose())
    }

    /// Mixed-radix offsets of every local index inside a basis whose link
    /// positions have the given strides.
    fn offsets(&self, strides: &[u64]) -> Vec<u64> {
        let n = self.links.len();
        (0..self.local_dim())
            .map(|mut idx| {
                let mut off = 0u64;
                for k in (0..n).rev() {
                    off += (idx % self.link_dim) as u64 * strides[k];
                    idx /= self.link_dim;
                }
                off
            })
            .collect()
    }

    /// Re-express on an ordered superset of links.
    pub fn embed(&self, target: &[LinkId]) -> LocalOp {
        if target == self.links.as_slice() {
            return self.clone();
        }
        let n = target.len();
        let d = self.link_dim;
        let mut tstrides = vec![1u64; n];
        for k in (0..n.saturating_sub(1)).rev() {
            tstrides[k] = tstrides[k + 1] * d as u64;
        }
        let pos: Vec<usize> = self
            .links
            .iter()
            .map(|l| target.iter().position(|t| t == l).expect("embedding target must contain the support"))
            .collect();
        let strides: Vec<u64> = pos.iter().map(|&p| tstrides[p]).collect();
        let offsets = self.offsets(&strides);
        let cols = self.columns();
        let total = d.pow(n as u32);
        let mut triplets = Vec::with_capacity(total * (self.mat.nnz() / self.local_dim().max(1) + 1));
        for c in 0..total {
            let local: usize = pos.iter().fold(0, |acc, &p| acc * d + (c / tstrides[p] as usize) % d);
            let base = c as u64 - offsets[local];
            for (r, v) in cols.row(local) {
                triplets.push(((base + offsets[r]) as usize, c, v));
            }
        }
        LocalOp::new(target.to_vec(), self.jmax, SparseMatrix::from_triplets(total, total, triplets))
    }

    fn union(&self, other: &LocalOp) -> Vec<LinkId> {
        let mut u = self.links.clone();
        for l in &other.links {
            if !u.contains(l) {
                u.push(*l);
            }
        }
        u
    }

    pub fn mul(&self, other: &LocalOp) -> LocalOp {
        let u = self.union(other);
        let a = self.embed(&u);
        let b = other.embed(&u);
        LocalOp::new(u, self.jmax, a.mat.mul(&b.mat))
    }

    pub fn axpy(&self, s: C64, other: &LocalOp) -> LocalOp {
        let u = self.union(other);
        let a = self.embed(&u);
        let b = other.embed(&u);
        LocalOp::new(u, self.jmax, a.mat.axpy(s, &b.mat))
    }

    pub fn add(&self, other: &LocalOp) -> LocalOp {
        self.axpy(C64::new(1.0, 0.0), other)
    }

    pub fn sub(&self, other: &LocalOp) -> LocalOp {
        self.axpy(C64::new(-1.0, 0.0), other)
    }

    pub fn scale(&self, s: C64) -> LocalOp {
        LocalOp::new(self.links.clone(), self.jmax, self.mat.scale(s))
    }

    pub fn adjoint(&self) -> LocalOp {
        LocalOp::new(self.links.clone(), self.jmax, self.mat.adjoint())
    }

    pub fn commutator(&self, other: &LocalOp) -> LocalOp {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn max_abs(&self) -> f64 {
        self.mat.max_abs()
    }

    /// `max |self − other|` after embedding both on a common support.
    pub fn max_abs_diff(&self, other: &LocalOp) -> f64 {
        self.sub(other).max_abs()
    }

    /// Restriction to the interior subspace (every support link strictly
    /// below the cutoff) on both sides, as a maximum entry.
    pub fn max_abs_interior(&self) -> f64 {
        let space = LinkSpace::new(self.jmax);
        let d = self.link_dim;
        let n = self.links.len();
        let interior = |mut idx: usize| {
            (0..n).all(|_| {
                let ok = space.is_interior(idx % d);
                idx /= d;
                ok
            })
        };
        self.mat.triplets().filter(|(r, c, _)| interior(*r) && interior(*c)).map(|e| e.2.norm()).fold(0.0, f64::max)
    }

    /// Largest entry between local basis states that both pass `keep`;
    /// `keep` sees the link states in support order.
    pub fn max_abs_restricted(&self, keep: impl Fn(&[LinkState]) -> bool) -> f64 {
        let space = LinkSpace::new(self.jmax);
        let d = self.link_dim;
        let n = self.links.len();
        let states = |mut idx: usize| {
            let mut v = vec![space.state(0); n];
            for k in (0..n).rev() {
                v[k] = space.state(idx % d);
                idx /= d;
            }
            v
        };
        let mut memo: FxHashMap<usize, bool> = FxHashMap::default();
        let mut ok = |i: usize| *memo.entry(i).or_insert_with(|| keep(&states(i)));
        let mut best = 0.0f64;
        for (r, c, v) in self.mat.triplets() {
            if ok(r) && ok(c) {
                best = best.max(v.norm());
            }
        }
        best
    }

    /// Frobenius inner product `Tr(A† B)` on the union of both supports.
    pub fn frobenius_inner(&self, other: &LocalOp) -> C64 {
        let u = self.union(other);
        let a = self.embed(&u);
        let b = other.embed(&u);
        let lookup: FxHashMap<(usize, usize), C64> = a.mat.triplets().map(|(r, c, v)| ((r, c), v)).collect();
        b.mat.triplets().filter_map(|(r, c, v)| lookup.get(&(r, c)).map(|x| x.conj() * v)).sum()
    }

    /// `√(‖A‖₁ ‖A‖_∞)`, an upper bound on the spectral norm.
    pub fn norm_bound(&self) -> f64 {
        let mut row_sums = vec![0.0; self.mat.rows()];
        let mut col_sums = vec![0.0; self.mat.cols()];
        for (r, c, v) in self.mat.triplets() {
            row_sums[r] += v.norm();
            col_sums[c] += v.norm();
        }
        let m1 = col_sums.into_iter().fold(0.0, f64::max);
        let mi = row_sums.into_iter().fold(0.0, f64::max);
        (m1 * mi).sqrt()
    }

    /// Apply to a state whose basis contains every support link.
    pub fn apply(&self, v: &StateVector) -> Result<StateVector, HilbertError> {
        let basis = v.basis();
        if basis.jmax() != self.jmax {
            return Err(HilbertError::BasisMismatch);
        }
        let pos: Vec<usize> = self.links.iter().map(|&l| basis.position(l)).collect::<Result<_, _>>()?;
        let strides: Vec<u64> = pos.iter().map(|&p| basis.stride(p)).collect();
        let offsets = self.offsets(&strides);
        let d = self.link_dim as u64;
        let local_of = |i: u64| pos.iter().zip(&strides).fold(0usize, |acc, (_, &s)| acc * d as usize + ((i / s) % d) as usize);
        let cols = self.columns();
        let mut out = v.zeros_like();
        for (i, x) in v.entries() {
            if x == C64::new(0.0, 0.0) {
                continue;
            }
            let c = local_of(i);
            let base = i - offsets[c];
            for (r, a) in cols.row(c) {
                out.add_at(base + offsets[r], a * x);
            }
        }
        Ok(out)
    }
}

/// Composite operator built from local pieces; applied lazily to states.
#[derive(Clone, Debug)]
pub enum Operator {
    Identity,
    Local(Arc<LocalOp>),
    /// `Σ cᵢ Oᵢ`.
    Sum(Vec<(C64, Operator)>),
    /// `O₀ O₁ … O_k` (the last factor acts first).
    Product(Vec<Operator>),
    /// `exp(generator)`, applied by scaled Taylor series to within `tol`.
    Exp { generator: Box<Operator>, tol: f64 },
}

impl From<LocalOp> for Operator {
    fn from(op: LocalOp) -> Self {
        Operator::Local(Arc::new(op))
    }
}

impl Operator {
    pub fn sum(terms: Vec<(C64, Operator)>) -> Self {
        Operator::Sum(terms)
    }

    pub fn scaled(self, c: C64) -> Self {
        Operator::Sum(vec![(c, self)])
    }

    pub fn product(factors: Vec<Operator>) -> Self {
        Operator::Product(factors)
    }

    pub fn exp(generator: Operator, tol: f64) -> Self {
        Operator::Exp { generator: Box::new(generator), tol }
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector, HilbertError> {
        match self {
            Operator::Identity => Ok(v.clone()),
            Operator::Local(op) => op.apply(v),
            Operator::Sum(terms) => {
                let mut out = v.zeros_like();
                for (c, op) in terms {
                    out.axpy(*c, &op.apply(v)?)?;
                }
                Ok(out)
            }
            Operator::Product(factors) => {
                let mut cur = v.clone();
                for op in factors.iter().rev() {
                    cur = op.apply(&cur)?;
                }
                Ok(cur)
            }
            Operator::Exp { generator, tol } => expm_apply(generator, v, *tol),
        }
    }

    pub fn adjoint(&self) -> Operator {
        match self {
            Operator::Identity => Operator::Identity,
            Operator::Local(op) => Operator::from(op.adjoint()),
            Operator::Sum(terms) => Operator::Sum(terms.iter().map(|(c, o)| (c.conj(), o.adjoint())).collect()),
            Operator::Product(f) => Operator::Product(f.iter().rev().map(Operator::adjoint).collect()),
            Operator::Exp { generator, tol } => Operator::exp(generator.adjoint(), *tol),
        }
    }

    /// `[A, B] v = A(Bv) − B(Av)`.
    pub fn commutator_apply(a: &Operator, b: &Operator, v: &StateVector) -> Result<StateVector, HilbertError> {
        a.apply(&b.apply(v)?)?.sub(&b.apply(&a.apply(v)?)?)
    }

    /// Upper bound on the spectral norm.
    pub fn norm_bound(&self) -> f64 {
        match self {
            Operator::Identity => 1.0,
            Operator::Local(op) => op.norm_bound(),
            Operator::Sum(t) => t.iter().map(|(c, o)| c.norm() * o.norm_bound()).sum(),
            Operator::Product(f) => f.iter().map(Operator::norm_bound).product(),
            Operator::Exp { generator, .. } => generator.norm_bound().exp(),
        }
    }

    /// Collapse into a single local operator (only for small supports).
    pub fn to_local(&self, jmax: HalfInt) -> Option<LocalOp> {
        match self {
            Operator::Identity => Some(LocalOp::identity(jmax)),
            Operator::Local(op) => Some((**op).clone()),
            Operator::Sum(t) => {
                let mut acc = LocalOp::zero(jmax);
                for (c, o) in t {
                    acc = acc.axpy(*c, &o.to_local(jmax)?);
                }
                Some(acc)
            }
            Operator::Product(f) => {
                let mut acc = LocalOp::identity(jmax);
                for o in f {
                    acc = acc.mul(&o.to_local(jmax)?);
                }
                Some(acc)
            }
            Operator::Exp { .. } => None,
        }
    }
}

/// Matrix exponential of a local operator with small support, by scaling and
/// squaring a Taylor series on the sparse local matrix.
pub fn local_expm(op: &LocalOp, tol: f64) -> LocalOp {
    let b = op.norm_bound();
    let squarings = if b > 0.5 { (b / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = op.scale(C64::new(0.5f64.powi(squarings as i32), 0.0));
    let mut term = LocalOp::identity(op.jmax()).embed(op.links());
    let mut sum = term.clone();
    for k in 1..60 {
        term = term.mul(&scaled).scale(C64::new(1.0 / k as f64, 0.0));
        sum = sum.add(&term);
        if term.max_abs() < tol * 1e-3 {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum.mul(&sum);
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::ProductBasis;
    use crate::lattice::TorusLattice;
    use rand::{Rng, SeedableRng};

    fn random_local(links: Vec<LinkId>, jmax: HalfInt, seed: u64) -> LocalOp {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let d = LinkSpace::new(jmax).dim().pow(links.len() as u32);
        let t: Vec<_> = (0..4 * d)
            .map(|_| (rng.gen_range(0..d), rng.gen_range(0..d), C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
            .collect();
        LocalOp::new(links, jmax, SparseMatrix::from_triplets(d, d, t))
    }

    #[test]
    fn apply_matches_embedded_matrix() {
        let lat = TorusLattice::new(2).unwrap();
        let j = HalfInt::HALF;
        let links: Vec<LinkId> = lat.links().take(3).collect();
        let basis = ProductBasis::new(links.clone(), j).unwrap();
        let a = random_local(vec![links[2], links[0]], j, 1);
        let b = random_local(vec![links[1]], j, 2);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let v = StateVector::random_dense(&basis, &mut rng).unwrap();
        // lazy composite vs collapsed product
        let lazy = Operator::product(vec![a.clone().into(), b.clone().into()]).apply(&v).unwrap();
        let full = a.mul(&b).embed(&links);
        let dense: Vec<C64> = (0..basis.dim()).map(|i| v.get(i)).collect();
        let want = full.matrix().matvec(&dense);
        for (i, w) in want.iter().enumerate() {
            assert!((lazy.get(i as u64) - w).norm() < 1e-12);
        }
        // sparse storage gives the same result
        let sparse = Operator::product(vec![a.into(), b.into()]).apply(&v.to_sparse()).unwrap();
        assert!(sparse.sub(&lazy).unwrap().norm() < 1e-12);
    }

    #[test]
    fn adjoint_consistency() {
        let lat = TorusLattice::new(2).unwrap();
        let j = HalfInt::HALF;
        let links: Vec<LinkId> = lat.links().take(2).collect();
        let basis = ProductBasis::new(links.clone(), j).unwrap();
        let a: Operator = random_local(links.clone(), j, 9).into();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for _ in 0..5 {
            let v = StateVector::random_dense(&basis, &mut rng).unwrap();
            let w = StateVector::random_dense(&basis, &mut rng).unwrap();
            let lhs = w.inner(&a.apply(&v).unwrap()).unwrap();
            let rhs = a.adjoint().apply(&w).unwrap().inner(&v).unwrap();
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn local_exponential_is_unitary_for_hermitian_generators() {
        let lat = TorusLattice::new(2).unwrap();
        let j = HalfInt::HALF;
        let h = random_local(vec![lat.link_from_index(0)], j, 5);
        let herm = h.add(&h.adjoint()).scale(C64::new(0.0, 1.0));
        let u = local_expm(&herm, 1e-14);
        let id = LocalOp::identity(j).embed(u.links());
        assert!(u.mul(&u.adjoint()).max_abs_diff(&id) < 1e-12);
    }
}
