//! Exponential-times-vector and a Lanczos eigensolver.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};

use std::sync::Arc;

use super::{HilbertError, Operator, ProductBasis, SparseMatrix, StateVector};

const MAX_TAYLOR_TERMS: usize = 200;

/// `exp(A) v` to within `tol` in Euclidean norm, by splitting into `s` steps
/// with `‖A‖/s ≤ 1` and truncating each Taylor series once the next term is
/// below `tol / s`.
pub fn expm_apply(a: &Operator, v: &StateVector, tol: f64) -> Result<StateVector, HilbertError> {
    if tol <= 0.0 {
        return Err(HilbertError::Invalid("tolerance must be positive".into()));
    }
    let bound = a.norm_bound();
    let steps = bound.ceil().max(1.0) as usize;
    let inv = C64::new(1.0 / steps as f64, 0.0);
    let per_step = tol / steps as f64;
    let mut cur = v.clone();
    for _ in 0..steps {
        let scale = cur.norm().max(1e-300);
        let mut term = cur.clone();
        let mut sum = cur.clone();
        let mut converged = false;
        for k in 1..=MAX_TAYLOR_TERMS {
            term = a.apply(&term)?;
            term.scale_mut(inv / k as f64);
            sum.axpy(C64::new(1.0, 0.0), &term)?;
            term.prune(1e-18 * scale);
            let tn = term.norm();
            if tn <= per_step * scale * 1e-2 {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(HilbertError::NoConvergence { what: "expm_apply", residual: term.norm() });
        }
        cur = sum;
        cur.prune(1e-18 * scale);
    }
    Ok(cur)
}

/// A linear map on `ℂⁿ`.
pub trait LinearMap {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[C64]) -> Vec<C64>;
}

impl LinearMap for SparseMatrix {
    fn dim(&self) -> usize {
        self.rows()
    }

    fn apply(&self, x: &[C64]) -> Vec<C64> {
        self.matvec(x)
    }
}

impl LinearMap for DMatrix<C64> {
    fn dim(&self) -> usize {
        self.nrows()
    }

    fn apply(&self, x: &[C64]) -> Vec<C64> {
        (self * nalgebra::DVector::from_column_slice(x)).as_slice().to_vec()
    }
}

/// An [`Operator`] viewed as a map on dense amplitude vectors of a basis.
pub struct OperatorMap<'a> {
    pub op: &'a Operator,
    pub basis: Arc<ProductBasis>,
}

impl LinearMap for OperatorMap<'_> {
    fn dim(&self) -> usize {
        self.basis.dim() as usize
    }

    fn apply(&self, x: &[C64]) -> Vec<C64> {
        let v = StateVector::from_dense_vec(&self.basis, x.to_vec()).expect("vector length matches the basis");
        self.op.apply(&v).and_then(|w| w.to_dense_vec()).expect("operator acts on the basis")
    }
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn axpy(y: &mut [C64], a: C64, x: &[C64]) {
    y.iter_mut().zip(x).for_each(|(p, q)| *p += a * q);
}

/// `exp(A) x` for a plain linear map, same error control as [`expm_apply`].
pub fn expm_apply_map(a: &dyn LinearMap, norm_bound: f64, x: &[C64], tol: f64) -> Result<Vec<C64>, HilbertError> {
    let steps = norm_bound.ceil().max(1.0) as usize;
    let inv = 1.0 / steps as f64;
    let mut cur = x.to_vec();
    for _ in 0..steps {
        let scale = norm(&cur).max(1e-300);
        let mut term = cur.clone();
        let mut sum = cur.clone();
        let mut ok = false;
        for k in 1..=MAX_TAYLOR_TERMS {
            term = a.apply(&term).into_iter().map(|t| t * (inv / k as f64)).collect();
            axpy(&mut sum, C64::new(1.0, 0.0), &term);
            if norm(&term) <= tol / steps as f64 * scale * 1e-2 {
                ok = true;
                break;
            }
        }
        if !ok {
            return Err(HilbertError::NoConvergence { what: "expm_apply_map", residual: norm(&term) });
        }
        cur = sum;
    }
    Ok(cur)
}

#[derive(Clone, Debug)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<C64>,
    pub residual: f64,
}

/// Orthogonalise `v` against `basis` twice (classical Gram–Schmidt with reorthogonalisation).
fn orthogonalize(v: &mut [C64], basis: &[Vec<C64>]) {
    for _ in 0..2 {
        for b in basis {
            let c = dot(b, v);
            axpy(v, -c, b);
        }
    }
}

/// One Lanczos run with full reorthogonalisation in the complement of `locked`;
/// returns the lowest Ritz pair.
fn lanczos_lowest(map: &dyn LinearMap, start: Vec<C64>, locked: &[Vec<C64>], max_iter: usize) -> (f64, Vec<C64>) {
    let mut q = start;
    orthogonalize(&mut q, locked);
    let n0 = norm(&q);
    q.iter_mut().for_each(|x| *x /= n0);
    let mut vs: Vec<Vec<C64>> = vec![q];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    loop {
        let k = vs.len() - 1;
        let mut w = map.apply(&vs[k]);
        orthogonalize(&mut w, locked);
        let alpha = dot(&vs[k], &w).re;
        alphas.push(alpha);
        let mut all = locked.to_vec();
        all.extend(vs.iter().cloned());
        orthogonalize(&mut w, &all);
        let beta = norm(&w);
        if vs.len() >= max_iter || beta < 1e-12 {
            break;
        }
        betas.push(beta);
        w.iter_mut().for_each(|x| *x /= beta);
        vs.push(w);
    }
    let m = alphas.len();
    let t = DMatrix::from_fn(m, m, |i, j| {
        if i == j {
            alphas[i]
        } else if i + 1 == j || j + 1 == i {
            betas[i.min(j)]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(t);
    let (imin, &theta) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .expect("non-empty Krylov space");
    let y = eig.eigenvectors.column(imin);
    let mut v = vec![C64::new(0.0, 0.0); map.dim()];
    for (i, b) in vs.iter().enumerate().take(m) {
        axpy(&mut v, C64::new(y[i], 0.0), b);
    }
    let nv = norm(&v);
    v.iter_mut().for_each(|x| *x /= nv);
    (theta, v)
}

/// The `k` lowest eigenpairs of a Hermitian map, found one at a time by
/// restarted Lanczos with deflation of already-converged vectors (so
/// degenerate eigenvalues are resolved with an orthonormal basis).
pub fn lowest_eigenpairs(map: &dyn LinearMap, k: usize, tol: f64, seed: u64) -> Result<Vec<EigenPair>, HilbertError> {
    let n = map.dim();
    if k > n {
        return Err(HilbertError::Invalid(format!("asked for {k} eigenpairs of a {n}-dimensional map")));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<EigenPair> = Vec::new();
    let max_iter = n.min(120);
    for _ in 0..k {
        let locked: Vec<Vec<C64>> = out.iter().map(|p| p.vector.clone()).collect();
        let mut start: Vec<C64> = (0..n).map(|_| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)).collect();
        let mut best = (f64::INFINITY, Vec::new(), f64::INFINITY);
        for _restart in 0..200 {
            let (theta, v) = lanczos_lowest(map, start, &locked, max_iter);
            let av = map.apply(&v);
            let r: Vec<C64> = av.iter().zip(&v).map(|(a, x)| a - x * theta).collect();
            let res = norm(&r);
            best = (theta, v.clone(), res);
            if res <= tol {
                break;
            }
            start = v;
        }
        if best.2 > tol {
            return Err(HilbertError::NoConvergence { what: "lowest_eigenpairs", residual: best.2 });
        }
        out.push(EigenPair { value: best.0, vector: best.1, residual: best.2 });
    }
    Ok(out)
}
