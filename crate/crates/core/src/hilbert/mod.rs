//! The truncated many-body Hilbert space: per-link bases `|j, m₊, m₋⟩` with
//! `j ≤ jmax`, product bases over link sets, sparse operators, Krylov
//! solvers, and the gauge-invariant spin-network basis.

mod basis;
mod krylov;
mod operator;
mod sparse;
mod spin_network;
mod state;

pub use basis::ProductBasis;
pub use krylov::{expm_apply, expm_apply_map, lowest_eigenpairs, EigenPair, LinearMap, OperatorMap};
pub use operator::{local_expm, LocalOp, Operator};
pub use sparse::{SparseMatrix, PRUNE};
pub use spin_network::{embed_spin_network, embedded_entries, enumerate_spin_networks, leg_indices, site_singlet, SpinNetworkConfig};
pub use state::{Storage, StateVector};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::LinkId;
use crate::repkernel::HalfInt;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HilbertError {
    #[error("state and operator live on different bases")]
    BasisMismatch,
    #[error("link {0:?} is not part of the basis")]
    LinkNotInBasis(LinkId),
    #[error("dimension {0} exceeds the dense-storage limit")]
    TooLarge(u128),
    #[error("{what} did not converge (residual {residual:e})")]
    NoConvergence { what: &'static str, residual: f64 },
    #[error("invalid argument: {0}")]
    Invalid(String),
}

/// One basis state of a single link.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LinkState {
    pub j: HalfInt,
    pub m_plus: HalfInt,
    pub m_minus: HalfInt,
}

/// Single-link space truncated at `jmax`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinkSpace {
    jmax: HalfInt,
    states: Vec<LinkState>,
}

impl LinkSpace {
    pub fn new(jmax: HalfInt) -> Self {
        assert!(jmax.twice() >= 0, "jmax must be non-negative");
        Self { jmax, states: enumerate_link_basis(jmax) }
    }

    pub fn jmax(&self) -> HalfInt {
        self.jmax
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[LinkState] {
        &self.states
    }

    pub fn state(&self, i: usize) -> LinkState {
        self.states[i]
    }

    /// Offset of the spin-`j` block.
    pub fn block_offset(j: HalfInt) -> usize {
        (0..j.twice()).map(|t| ((t + 1) * (t + 1)) as usize).sum()
    }

    pub fn index(&self, s: LinkState) -> Option<usize> {
        if s.j > self.jmax || !s.j.admits(s.m_plus) || !s.j.admits(s.m_minus) {
            return None;
        }
        let d = s.j.dim();
        Some(Self::block_offset(s.j) + s.j.int_diff(s.m_plus) as usize * d + s.j.int_diff(s.m_minus) as usize)
    }

    /// Whether the state lies strictly below the cutoff (`j ≤ jmax − ½`).
    pub fn is_interior(&self, i: usize) -> bool {
        self.states[i].j.twice() < self.jmax.twice()
    }
}

/// Ascending `j`, then `m₊` descending, then `m₋` descending.
pub fn enumerate_link_basis(jmax: HalfInt) -> Vec<LinkState> {
    let mut out = Vec::new();
    for j in jmax.spins_up_to() {
        for m_plus in j.projections() {
            for m_minus in j.projections() {
                out.push(LinkState { j, m_plus, m_minus });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn link_space_dimensions() {
        assert_eq!(LinkSpace::new(HalfInt::ZERO).dim(), 1);
        assert_eq!(LinkSpace::new(HalfInt::HALF).dim(), 5);
        assert_eq!(LinkSpace::new(HalfInt::ONE).dim(), 14);
        assert_eq!(LinkSpace::new(HalfInt::THREE_HALVES).dim(), 30);
    }

    #[test]
    fn link_index_roundtrip() {
        let space = LinkSpace::new(HalfInt::THREE_HALVES);
        for (i, s) in space.states().iter().enumerate() {
            assert_eq!(space.index(*s), Some(i));
        }
        let first = space.state(1);
        assert_eq!((first.j, first.m_plus, first.m_minus), (HalfInt::HALF, HalfInt::HALF, HalfInt::HALF));
    }
}
