//! Experiments on the order–disorder algebra: Wilson loops conjugated by
//! vortex operators, braiding overlaps, Dirac-string invisibility and
//! deformation, and the gauge-invariance probe of vortex states.

mod algebra;
mod braid;
mod dirac;
mod rotation;

pub use algebra::{
    below_cutoff, conjugate, fit_operator_rotation, max_abs_where, reversal_defect, tier_one_cases, wilson_thooft_check,
    wilson_thooft_on_state, CaseCheck, WilsonThooftReport,
};
pub use braid::{braid_overlap_experiment, BraidExperimentSpec, BraidResult};
pub use dirac::{
    gauge_invariance_probe, string_deformation_check, string_invisibility_report, DeformationReport, InvisibilityReport,
    LinkDeviation, PlaquetteDeviation, SiteProbe,
};
pub use rotation::{extract_rotation, fit_left_factor, winding_number, ExtractedRotation};

use thiserror::Error;

use crate::hilbert::HilbertError;
use crate::operators::OperatorError;
use crate::repkernel::RepError;
use crate::states::StateError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BraidingError {
    #[error("loop is open or winds around the torus")]
    NotContractible,
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
}
