//! Physical operators: electric fields, holonomies, Gauss generators, vertex
//! Casimirs, plaquettes, the Hamiltonian and its gap term, Wilson loops and
//! charge strings, vortex operators and gauge twirls.

mod gauge;
mod hamiltonian;
mod link;
mod plaquette;
mod vortex;

pub use gauge::{gauge_twirl, gauss_generator, vertex_casimir};
pub use hamiltonian::{delta_hamiltonian, hamiltonian, DeltaHamiltonian, Hamiltonian};
pub use link::{
    directed_holonomy, electric_field, electric_matrix, holonomy_matrix, link_holonomy, side_rotation,
    side_rotation_matrix,
};
pub use plaquette::{
    path_holonomy, plaquette_energy, plaquette_holonomy, string_matrix, string_operator, wilson_loop,
    wilson_loop_trace,
};
pub use vortex::{transported_axes, vortex_operator, Tier, VortexOperator, VortexSpec};

use nalgebra::Matrix2;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hilbert::{HilbertError, LocalOp};
use crate::lattice::LatticeError;
use crate::repkernel::HalfInt;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OperatorError {
    #[error("path is not closed")]
    OpenPath,
    #[error("tier-1 vortex needs a strip of length 1, got {0}")]
    TierMismatch(usize),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
}

/// Which end of a link an electric field rotates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    /// Left (outgoing) end, `E₊`, acting on `m₊`.
    Plus,
    /// Right (incoming) end, `E₋`, acting on `m₋`.
    Minus,
}

/// A 2×2 matrix whose entries are local operators, e.g. `U_{αβ}` or a path
/// product of holonomies. Index 0 is `m = +½`, index 1 is `m = −½`.
#[derive(Clone, Debug)]
pub struct OpMatrix(pub [[LocalOp; 2]; 2]);

impl OpMatrix {
    pub fn from_fn(mut f: impl FnMut(usize, usize) -> LocalOp) -> Self {
        OpMatrix([[f(0, 0), f(0, 1)], [f(1, 0), f(1, 1)]])
    }

    /// The c-number matrix `g` times the identity operator.
    pub fn scalar(jmax: HalfInt, g: &Matrix2<C64>) -> Self {
        Self::from_fn(|a, b| LocalOp::scalar(jmax, g[(a, b)]))
    }

    pub fn identity(jmax: HalfInt) -> Self {
        Self::scalar(jmax, &Matrix2::identity())
    }

    pub fn get(&self, a: usize, b: usize) -> &LocalOp {
        &self.0[a][b]
    }

    /// Matrix product with operator products in order: `(AB)_{ik} = Σ_j A_{ij} B_{jk}`.
    pub fn mul(&self, other: &OpMatrix) -> OpMatrix {
        Self::from_fn(|i, k| self.0[i][0].mul(&other.0[0][k]).add(&self.0[i][1].mul(&other.0[1][k])))
    }

    /// `(A†)_{ij} = (A_{ji})†`.
    pub fn dagger(&self) -> OpMatrix {
        Self::from_fn(|i, j| self.0[j][i].adjoint())
    }

    pub fn trace(&self) -> LocalOp {
        self.0[0][0].add(&self.0[1][1])
    }

    /// `g · A` for a c-number matrix `g`.
    pub fn left_mul(&self, g: &Matrix2<C64>) -> OpMatrix {
        Self::from_fn(|i, k| self.0[0][k].scale(g[(i, 0)]).add(&self.0[1][k].scale(g[(i, 1)])))
    }

    /// `A · g` for a c-number matrix `g`.
    pub fn right_mul(&self, g: &Matrix2<C64>) -> OpMatrix {
        Self::from_fn(|i, k| self.0[i][0].scale(g[(0, k)]).add(&self.0[i][1].scale(g[(1, k)])))
    }

    pub fn sub(&self, other: &OpMatrix) -> OpMatrix {
        Self::from_fn(|i, j| self.0[i][j].sub(&other.0[i][j]))
    }

    pub fn map(&self, mut f: impl FnMut(&LocalOp) -> LocalOp) -> OpMatrix {
        Self::from_fn(|i, j| f(&self.0[i][j]))
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(LocalOp::max_abs).fold(0.0, f64::max)
    }

    pub fn max_abs_interior(&self) -> f64 {
        self.0.iter().flatten().map(LocalOp::max_abs_interior).fold(0.0, f64::max)
    }
}
