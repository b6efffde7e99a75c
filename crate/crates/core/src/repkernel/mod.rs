//! Exact SU(2) representation theory used throughout the lattice code:
//! half-integer labels, Clebsch–Gordan coefficients, Wigner matrices,
//! adjoint rotations, Haar quadrature and site intertwiners.

mod cg;
mod halfint;
mod quadrature;
mod site;
mod su2;
mod wigner;

pub use cg::{cg, cg_coefficient, clebsch_gordan};
pub use halfint::{parity_sign, triangle, HalfInt};
pub use quadrature::{gauss_legendre, haar_quadrature, haar_quadrature_total};
pub use site::{
    contract_site_network, eta_phase, site_projector_tensor, twelve_j_second_kind, zn_phase, SectorCharge, SiteKey, SiteTensor, TwelveJLabel,
    TORUS2_SITE_LEGS,
};
pub use su2::{adjoint_rotation, fundamental_generators, rotate, su2_from_axis_angle, AxisAngle, SU2Element};
pub use wigner::{generators, small_d, spin_matrices, wigner_d};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RepError {
    #[error("magnetic label {m} is not allowed for spin {j}")]
    InvalidProjection { j: HalfInt, m: HalfInt },
    #[error("rotation axis must be a unit vector (norm {0})")]
    AxisNotUnit(f64),
    #[error("{0} must be finite")]
    NonFinite(&'static str),
}
