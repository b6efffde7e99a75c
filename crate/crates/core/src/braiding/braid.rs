//! The braiding overlap: a charge carried around a closed loop with and
//! without a vortex inside, read out as a 2×2 matrix on the charge index.

use serde::Serialize;

use super::rotation::{extract_rotation, fit_left_factor, winding_number, ExtractedRotation};
use super::BraidingError;
use crate::hilbert::StateVector;
use crate::lattice::{DirectedLink, Site, TorusLattice};
use crate::operators::{path_holonomy, vortex_operator, wilson_loop, VortexSpec};
use crate::states::{analytic_ground_state, GroundStateSpec, InvariantSpace, StringRoute};

#[derive(Clone, Debug, Serialize)]
pub struct BraidExperimentSpec {
    pub ground: GroundStateSpec,
    pub vortex: VortexSpec,
    /// The charge `n` that is carried around; the loop is based here.
    pub charge: Site,
    /// The partner charge `n′` at the other end of the string.
    pub partner: Site,
    pub route: StringRoute,
    pub loop_path: Vec<DirectedLink>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BraidResult {
    /// Winding numbers of the loop around `p1` and `p2`.
    pub winding: (i32, i32),
    /// `M` fitted over both string indices `β`.
    pub rotation: ExtractedRotation,
    /// `M` fitted separately for `β = 0, 1`.
    pub per_beta: Vec<ExtractedRotation>,
    /// `‖F − M I‖ / ‖F‖` over all components.
    pub fit_residual: f64,
    /// `‖I‖` summed over components, before any normalisation.
    pub initial_norm: f64,
}

fn four<E>(mut f: impl FnMut(usize, usize) -> Result<StateVector, E>) -> Result<[[StateVector; 2]; 2], E> {
    Ok([[f(0, 0)?, f(0, 1)?], [f(1, 0)?, f(1, 1)?]])
}

/// Builds `|I⟩_{ᾱβ} = Σ Γ_{ᾱβ}(n, n′)|ψ⟩` and
/// `|F⟩_{αβ} = Σ_ᾱ W_{αᾱ}(𝒞) |I⟩_{ᾱβ}` and fits `F ≈ M·I` by least squares.
pub fn braid_overlap_experiment(lat: &TorusLattice, space: &InvariantSpace, spec: &BraidExperimentSpec, tol: f64) -> Result<BraidResult, BraidingError> {
    let jmax = space.jmax();
    let (p1, p2) = spec.vortex.strip.ends;
    let winding = (
        winding_number(lat, spec.charge, &spec.loop_path, p1).ok_or(BraidingError::NotContractible)?,
        winding_number(lat, spec.charge, &spec.loop_path, p2).ok_or(BraidingError::NotContractible)?,
    );
    let psi = analytic_ground_state(space, spec.ground)?.state(space);
    let sigma = vortex_operator(lat, &spec.vortex, jmax, tol)?;
    let path = match spec.route {
        StringRoute::RowFirst => lat.string_path(spec.charge, spec.partner),
        StringRoute::ColumnFirst => lat.string_path_column_first(spec.charge, spec.partner),
    }
    .map_err(crate::operators::OperatorError::from)?;
    let gamma = path_holonomy(&path, jmax);
    let w = wilson_loop(lat, &spec.loop_path, jmax)?;
    let initial = four(|a, b| -> Result<StateVector, BraidingError> { Ok(sigma.apply(&gamma.get(a, b).apply(&psi)?)?) })?;
    let fin = four(|a, b| -> Result<StateVector, BraidingError> {
        let mut acc = w.get(a, 0).apply(&initial[0][b])?;
        acc.axpy(num_complex::Complex64::new(1.0, 0.0), &w.get(a, 1).apply(&initial[1][b])?)?;
        Ok(acc)
    })?;
    let initial_norm = initial.iter().flatten().map(StateVector::norm_sqr).sum::<f64>().sqrt();
    if initial_norm < 1e-14 {
        return Err(BraidingError::Invalid("initial braid state vanishes".into()));
    }
    let inner = |a: &StateVector, b: &StateVector| a.inner(b).expect("same basis");
    let m = fit_left_factor(&fin, &initial, &[0, 1], inner);
    let per_beta = (0..2).map(|b| extract_rotation(&fit_left_factor(&fin, &initial, &[b], inner))).collect();
    let mut res = 0.0;
    let mut tot = 0.0;
    for a in 0..2 {
        for b in 0..2 {
            let mut r = fin[a][b].clone();
            for g in 0..2 {
                r.axpy(-m[(a, g)], &initial[g][b])?;
            }
            res += r.norm_sqr();
            tot += fin[a][b].norm_sqr();
        }
    }
    Ok(BraidResult { winding, rotation: extract_rotation(&m), per_beta, fit_residual: (res / tot).sqrt(), initial_norm })
}
