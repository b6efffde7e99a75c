//! State builders: analytic ground states in every `Z₂ ⊗ Z₂` sector, the
//! numerical ground space, electric pairs, vortices and dyons.

mod excitations;
mod ground;
mod invariant;

pub use excitations::{
    dyon_state, electric_pair_state, expectation, vortex_state, ExcitedState, StringRoute,
};
pub use ground::{
    analytic_ground_state, coordinate_expectation, numeric_ground_space, sector_diagnostics, sector_phase, sector_sums,
    span_overlap, trivial_amplitudes, GroundStateSpec, InvariantObservables, SectorConvention, SectorDiagnostics,
    SectorState,
};
pub use invariant::InvariantSpace;

use thiserror::Error;

use crate::hilbert::HilbertError;
use crate::operators::OperatorError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StateError {
    #[error("{0} has zero norm")]
    ZeroNorm(&'static str),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
}
