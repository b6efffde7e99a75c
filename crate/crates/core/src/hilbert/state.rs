use std::sync::Arc;

use num_complex::Complex64 as C64;
use rand::Rng;
use rustc_hash::FxHashMap;

use super::{HilbertError, ProductBasis};

/// Largest basis for which dense storage is allowed.
pub const DENSE_LIMIT: u64 = 1 << 26;

#[derive(Clone, Debug)]
pub enum Storage {
    Dense(Vec<C64>),
    Sparse(FxHashMap<u64, C64>),
}

/// Amplitudes over a [`ProductBasis`]. Normalisation is always explicit.
#[derive(Clone, Debug)]
pub struct StateVector {
    basis: Arc<ProductBasis>,
    storage: Storage,
}

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

impl StateVector {
    pub fn zeros_sparse(basis: &Arc<ProductBasis>) -> Self {
        Self { basis: basis.clone(), storage: Storage::Sparse(FxHashMap::default()) }
    }

    pub fn zeros_dense(basis: &Arc<ProductBasis>) -> Result<Self, HilbertError> {
        if basis.dim() > DENSE_LIMIT {
            return Err(HilbertError::TooLarge(u128::from(basis.dim())));
        }
        Ok(Self { basis: basis.clone(), storage: Storage::Dense(vec![zero(); basis.dim() as usize]) })
    }

    /// Zero vector with the same basis and storage kind as `self`.
    pub fn zeros_like(&self) -> Self {
        match &self.storage {
            Storage::Dense(v) => Self { basis: self.basis.clone(), storage: Storage::Dense(vec![zero(); v.len()]) },
            Storage::Sparse(_) => Self::zeros_sparse(&self.basis),
        }
    }

    /// Dense vector from raw amplitudes in basis order.
    pub fn from_dense_vec(basis: &Arc<ProductBasis>, values: Vec<C64>) -> Result<Self, HilbertError> {
        if values.len() as u64 != basis.dim() {
            return Err(HilbertError::BasisMismatch);
        }
        Ok(Self { basis: basis.clone(), storage: Storage::Dense(values) })
    }

    /// Amplitudes in basis order (densifies sparse storage).
    pub fn to_dense_vec(&self) -> Result<Vec<C64>, HilbertError> {
        match self.to_dense()?.storage {
            Storage::Dense(v) => Ok(v),
            Storage::Sparse(_) => unreachable!(),
        }
    }

    pub fn basis_state(basis: &Arc<ProductBasis>, index: u64) -> Self {
        let mut s = Self::zeros_sparse(basis);
        s.add_at(index, C64::new(1.0, 0.0));
        s
    }

    pub fn from_entries(basis: &Arc<ProductBasis>, entries: impl IntoIterator<Item = (u64, C64)>) -> Self {
        let mut s = Self::zeros_sparse(basis);
        for (i, v) in entries {
            s.add_at(i, v);
        }
        s
    }

    /// Dense vector with independent complex Gaussian entries, normalised.
    pub fn random_dense<R: Rng + ?Sized>(basis: &Arc<ProductBasis>, rng: &mut R) -> Result<Self, HilbertError> {
        let mut s = Self::zeros_dense(basis)?;
        if let Storage::Dense(v) = &mut s.storage {
            for x in v.iter_mut() {
                *x = C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
            }
        }
        s.normalize();
        Ok(s)
    }

    /// Sparse random vector supported on the given indices, normalised.
    pub fn random_on<R: Rng + ?Sized>(basis: &Arc<ProductBasis>, indices: &[u64], rng: &mut R) -> Self {
        let mut s = Self::from_entries(
            basis,
            indices.iter().map(|&i| (i, C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))),
        );
        s.normalize();
        s
    }

    pub fn basis(&self) -> &Arc<ProductBasis> {
        &self.basis
    }

    pub fn storage(&self) -> &Storage {
        &self.storage
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.storage, Storage::Dense(_))
    }

    pub fn same_basis(&self, other: &StateVector) -> bool {
        Arc::ptr_eq(&self.basis, &other.basis) || *self.basis == *other.basis
    }

    fn check(&self, other: &StateVector) -> Result<(), HilbertError> {
        if self.same_basis(other) {
            Ok(())
        } else {
            Err(HilbertError::BasisMismatch)
        }
    }

    pub fn get(&self, index: u64) -> C64 {
        match &self.storage {
            Storage::Dense(v) => v[index as usize],
            Storage::Sparse(m) => m.get(&index).copied().unwrap_or_else(zero),
        }
    }

    pub fn add_at(&mut self, index: u64, value: C64) {
        debug_assert!(index < self.basis.dim());
        match &mut self.storage {
            Storage::Dense(v) => v[index as usize] += value,
            Storage::Sparse(m) => *m.entry(index).or_insert_with(zero) += value,
        }
    }

    /// Stored entries (all entries for dense storage).
    pub fn entries(&self) -> Box<dyn Iterator<Item = (u64, C64)> + '_> {
        match &self.storage {
            Storage::Dense(v) => Box::new(v.iter().enumerate().map(|(i, &x)| (i as u64, x))),
            Storage::Sparse(m) => Box::new(m.iter().map(|(&i, &x)| (i, x))),
        }
    }

    /// Entries in ascending index order with magnitude above `tol`.
    pub fn sorted_entries(&self, tol: f64) -> Vec<(u64, C64)> {
        let mut v: Vec<(u64, C64)> = self.entries().filter(|e| e.1.norm() > tol).collect();
        v.sort_unstable_by_key(|e| e.0);
        v
    }

    pub fn nnz(&self) -> usize {
        match &self.storage {
            Storage::Dense(v) => v.iter().filter(|x| **x != zero()).count(),
            Storage::Sparse(m) => m.len(),
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries().map(|(_, x)| x.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries().map(|(_, x)| x.norm()).fold(0.0, f64::max)
    }

    /// Normalises in place and returns the previous norm (zero vectors are left alone).
    pub fn normalize(&mut self) -> f64 {
        let n = self.norm();
        if n > 0.0 {
            self.scale_mut(C64::new(1.0 / n, 0.0));
        }
        n
    }

    pub fn normalized(&self) -> Self {
        let mut s = self.clone();
        s.normalize();
        s
    }

    pub fn scale_mut(&mut self, s: C64) {
        match &mut self.storage {
            Storage::Dense(v) => v.iter_mut().for_each(|x| *x *= s),
            Storage::Sparse(m) => m.values_mut().for_each(|x| *x *= s),
        }
    }

    pub fn scaled(&self, s: C64) -> Self {
        let mut out = self.clone();
        out.scale_mut(s);
        out
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &StateVector) -> Result<C64, HilbertError> {
        self.check(other)?;
        Ok(match (&self.storage, &other.storage) {
            (Storage::Dense(a), Storage::Dense(b)) => a.iter().zip(b).map(|(x, y)| x.conj() * y).sum(),
            (Storage::Sparse(a), _) if a.len() <= other.nnz_hint() => {
                a.iter().map(|(&i, x)| x.conj() * other.get(i)).sum()
            }
            _ => other.entries().map(|(i, y)| self.get(i).conj() * y).sum(),
        })
    }

    fn nnz_hint(&self) -> usize {
        match &self.storage {
            Storage::Dense(v) => v.len(),
            Storage::Sparse(m) => m.len(),
        }
    }

    /// `self += a·x`.
    pub fn axpy(&mut self, a: C64, x: &StateVector) -> Result<(), HilbertError> {
        self.check(x)?;
        match (&mut self.storage, &x.storage) {
            (Storage::Dense(v), Storage::Dense(w)) => v.iter_mut().zip(w).for_each(|(p, q)| *p += a * q),
            _ => {
                for (i, y) in x.entries() {
                    if y != zero() {
                        self.add_at(i, a * y);
                    }
                }
            }
        }
        Ok(())
    }

    pub fn sub(&self, x: &StateVector) -> Result<StateVector, HilbertError> {
        let mut out = self.clone();
        out.axpy(C64::new(-1.0, 0.0), x)?;
        Ok(out)
    }

    pub fn add(&self, x: &StateVector) -> Result<StateVector, HilbertError> {
        let mut out = self.clone();
        out.axpy(C64::new(1.0, 0.0), x)?;
        Ok(out)
    }

    /// Drop entries with magnitude at most `tol` (sparse storage only).
    pub fn prune(&mut self, tol: f64) {
        if let Storage::Sparse(m) = &mut self.storage {
            m.retain(|_, x| x.norm() > tol);
        }
    }

    pub fn to_sparse(&self) -> StateVector {
        Self::from_entries(&self.basis, self.entries().filter(|e| e.1 != zero()))
    }

    pub fn to_dense(&self) -> Result<StateVector, HilbertError> {
        let mut out = Self::zeros_dense(&self.basis)?;
        for (i, x) in self.entries() {
            out.add_at(i, x);
        }
        Ok(out)
    }

    /// Keep only components where every link is strictly below the cutoff.
    pub fn project_interior(&self) -> StateVector {
        let mut out = self.zeros_like();
        for (i, x) in self.entries() {
            if x != zero() && self.basis.is_interior(i) {
                out.add_at(i, x);
            }
        }
        out
    }

    /// Same amplitudes re-expressed on a basis over a superset of links;
    /// extra links are placed in `|0,0,0⟩`.
    pub fn extend_to(&self, target: &Arc<ProductBasis>) -> Result<StateVector, HilbertError> {
        if target.jmax() != self.basis.jmax() {
            return Err(HilbertError::BasisMismatch);
        }
        let map: Vec<(u64, usize)> =
            self.basis.links().iter().map(|&l| Ok((target.stride(target.position(l)?), 0))).collect::<Result<_, HilbertError>>()?;
        let mut out = StateVector::zeros_sparse(target);
        for (i, x) in self.entries() {
            if x == zero() {
                continue;
            }
            let mut j = 0u64;
            for (p, (stride, _)) in map.iter().enumerate() {
                j += self.basis.digit(i, p) as u64 * stride;
            }
            out.add_at(j, x);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::TorusLattice;
    use crate::repkernel::HalfInt;
    use rand::SeedableRng;

    #[test]
    fn inner_products_agree_across_storage() {
        let lat = TorusLattice::new(2).unwrap();
        let b = ProductBasis::new(lat.links().take(4).collect(), HalfInt::HALF).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let x = StateVector::random_dense(&b, &mut rng).unwrap();
        let y = StateVector::random_on(&b, &[0, 3, 17, 600], &mut rng);
        let d = x.inner(&y).unwrap();
        let s = x.to_sparse().inner(&y).unwrap();
        let t = x.inner(&y.to_dense().unwrap()).unwrap();
        assert!((d - s).norm() < 1e-14 && (d - t).norm() < 1e-14);
        assert!((x.norm() - 1.0).abs() < 1e-14);
        let conj = y.inner(&x).unwrap().conj();
        assert!((conj - d).norm() < 1e-14);
    }

    #[test]
    fn extend_and_interior() {
        let lat = TorusLattice::new(2).unwrap();
        let small = ProductBasis::new(vec![lat.link_from_index(3)], HalfInt::HALF).unwrap();
        let big = ProductBasis::full(&lat, HalfInt::HALF).unwrap();
        let v = StateVector::basis_state(&small, 2);
        let w = v.extend_to(&big).unwrap();
        assert_eq!(w.get(2 * big.stride(3)), C64::new(1.0, 0.0));
        assert_eq!(w.project_interior().nnz(), 0);
        assert_eq!(StateVector::basis_state(&big, 0).project_interior().nnz(), 1);
    }
}
