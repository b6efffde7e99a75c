//! Excited states: electric pairs created by Wilson strings, vortices
//! created by the disorder operator, and their composites (dyons).

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::StateError;
use crate::hilbert::{Operator, StateVector};
use crate::lattice::{Site, TorusLattice};
use crate::operators::{path_holonomy, VortexOperator};

/// Which of the two L-shaped shortest paths carries the string.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StringRoute {
    /// Along x first, then y.
    RowFirst,
    /// Along y first, then x.
    ColumnFirst,
}

/// A normalised excited state together with its norm before normalisation.
#[derive(Clone, Debug)]
pub struct ExcitedState {
    pub state: StateVector,
    pub norm: f64,
}

impl ExcitedState {
    fn from_raw(raw: StateVector, what: &'static str) -> Result<Self, StateError> {
        let norm = raw.norm();
        if norm < 1e-14 {
            return Err(StateError::ZeroNorm(what));
        }
        Ok(Self { state: raw.scaled(C64::new(1.0 / norm, 0.0)), norm })
    }
}

/// `⟨v|O|v⟩ / ⟨v|v⟩`.
pub fn expectation(op: &Operator, v: &StateVector) -> Result<C64, StateError> {
    let w = op.apply(v)?;
    Ok(v.inner(&w)? / v.norm_sqr())
}

fn string_entry(lat: &TorusLattice, from: Site, to: Site, alpha: usize, beta: usize, route: StringRoute, v: &StateVector) -> Result<StateVector, StateError> {
    let path = match route {
        StringRoute::RowFirst => lat.string_path(from, to),
        StringRoute::ColumnFirst => lat.string_path_column_first(from, to),
    }
    .map_err(crate::operators::OperatorError::from)?;
    let gamma = path_holonomy(&path, v.basis().jmax());
    Ok(gamma.get(alpha, beta).apply(v)?)
}

/// `Γ_{αβ}(n′, n)|ground⟩`: a fundamental charge at `n′` and its conjugate at `n`.
pub fn electric_pair_state(
    lat: &TorusLattice,
    ground: &StateVector,
    from: Site,
    to: Site,
    alpha: usize,
    beta: usize,
    route: StringRoute,
) -> Result<ExcitedState, StateError> {
    ExcitedState::from_raw(string_entry(lat, from, to, alpha, beta, route, ground)?, "electric pair state")
}

/// `Σ|ground⟩`.
pub fn vortex_state(sigma: &VortexOperator, ground: &StateVector) -> Result<ExcitedState, StateError> {
    ExcitedState::from_raw(sigma.apply(ground)?, "vortex state")
}

/// `Σ Γ_{αβ}(n′, n)|ground⟩`.
#[allow(clippy::too_many_arguments)]
pub fn dyon_state(
    lat: &TorusLattice,
    sigma: &VortexOperator,
    ground: &StateVector,
    from: Site,
    to: Site,
    alpha: usize,
    beta: usize,
    route: StringRoute,
) -> Result<ExcitedState, StateError> {
    let pair = string_entry(lat, from, to, alpha, beta, route, ground)?;
    ExcitedState::from_raw(sigma.apply(&pair)?, "dyon state")
}
