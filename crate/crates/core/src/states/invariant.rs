//! The gauge-invariant subspace spanned by embedded spin networks, with
//! coordinates, projections and matrix elements of invariant operators.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::hilbert::{embedded_entries, enumerate_spin_networks, HilbertError, Operator, ProductBasis, SpinNetworkConfig, StateVector};
use crate::lattice::TorusLattice;
use crate::repkernel::HalfInt;

pub struct InvariantSpace {
    lattice: TorusLattice,
    jmax: HalfInt,
    basis: Arc<ProductBasis>,
    configs: Vec<SpinNetworkConfig>,
    vectors: Vec<Vec<(u64, f64)>>,
    /// Reverse map in compressed form: product index `keys[r]` appears in the
    /// spin networks `members[offsets[r]..offsets[r + 1]]`.
    keys: Vec<u64>,
    offsets: Vec<usize>,
    members: Vec<(u32, f64)>,
}

impl InvariantSpace {
    pub fn new(lat: &TorusLattice, jmax: HalfInt) -> Result<Self, HilbertError> {
        let basis = ProductBasis::full(lat, jmax)?;
        let configs = enumerate_spin_networks(lat, jmax);
        let vectors = configs.iter().map(|cfg| embedded_entries(lat, cfg, &basis)).collect::<Result<Vec<_>, _>>()?;
        let mut flat: Vec<(u64, u32, f64)> =
            vectors.iter().enumerate().flat_map(|(k, e)| e.iter().map(move |&(i, v)| (i, k as u32, v))).collect();
        flat.sort_unstable_by_key(|x| (x.0, x.1));
        let mut keys = Vec::new();
        let mut offsets = Vec::new();
        for (r, &(i, _, _)) in flat.iter().enumerate() {
            if keys.last() != Some(&i) {
                keys.push(i);
                offsets.push(r);
            }
        }
        offsets.push(flat.len());
        let members = flat.into_iter().map(|(_, k, v)| (k, v)).collect();
        Ok(Self { lattice: *lat, jmax, basis, configs, vectors, keys, offsets, members })
    }

    pub fn lattice(&self) -> &TorusLattice {
        &self.lattice
    }

    pub fn jmax(&self) -> HalfInt {
        self.jmax
    }

    pub fn basis(&self) -> &Arc<ProductBasis> {
        &self.basis
    }

    pub fn configs(&self) -> &[SpinNetworkConfig] {
        &self.configs
    }

    pub fn dim(&self) -> usize {
        self.configs.len()
    }

    /// Number of product states touched by some spin network.
    pub fn support_size(&self) -> usize {
        self.keys.len()
    }

    fn members_of(&self, index: u64) -> &[(u32, f64)] {
        match self.keys.binary_search(&index) {
            Ok(r) => &self.members[self.offsets[r]..self.offsets[r + 1]],
            Err(_) => &[],
        }
    }

    pub fn vector(&self, k: usize) -> StateVector {
        StateVector::from_entries(&self.basis, self.vectors[k].iter().map(|&(i, v)| (i, C64::new(v, 0.0))))
    }

    /// `Σ_k c_k |SN_k⟩`.
    pub fn embed(&self, coeffs: &[C64]) -> StateVector {
        let mut out = StateVector::zeros_sparse(&self.basis);
        for (k, c) in coeffs.iter().enumerate() {
            if c.norm() == 0.0 {
                continue;
            }
            for &(i, v) in &self.vectors[k] {
                out.add_at(i, c * v);
            }
        }
        out
    }

    /// `⟨SN_k | v⟩` for every `k`.
    pub fn coordinates(&self, v: &StateVector) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.dim()];
        for (i, x) in v.entries() {
            for &(k, a) in self.members_of(i) {
                out[k as usize] += x * a;
            }
        }
        out
    }

    /// `‖v − P v‖` with `P` the projector onto the invariant subspace.
    pub fn residual(&self, v: &StateVector) -> Result<f64, HilbertError> {
        let p = self.embed(&self.coordinates(v));
        Ok(v.sub(&p)?.norm())
    }

    /// `⟨SN_i | O | SN_k⟩`; exact for operators that preserve gauge invariance.
    pub fn matrix_of(&self, op: &Operator) -> Result<DMatrix<C64>, HilbertError> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for k in 0..n {
            let w = op.apply(&self.vector(k))?;
            let col = self.coordinates(&w);
            for (i, c) in col.into_iter().enumerate() {
                m[(i, k)] = c;
            }
        }
        Ok(m)
    }
}
