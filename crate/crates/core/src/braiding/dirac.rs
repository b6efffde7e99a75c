//! Dirac-string diagnostics: invisibility of the strip away from its ends,
//! deformation of the strip by a gauge transformation, and the local
//! gauge-invariance probe of vortex states.

use num_complex::Complex64 as C64;
use serde::Serialize;

use super::algebra::conjugate;
use super::BraidingError;
use crate::hilbert::{LocalOp, StateVector};
use crate::lattice::{LinkId, PlaquetteId, Site, TorusLattice};
use crate::operators::{gauge_twirl, link_holonomy, plaquette_energy, plaquette_holonomy, vertex_casimir, OpMatrix, VortexOperator};
use crate::repkernel::{AxisAngle, HalfInt};
use crate::states::InvariantSpace;

#[derive(Clone, Debug, Serialize)]
pub struct LinkDeviation {
    pub link: LinkId,
    /// `"first rung"`, `"rung"`, or `"support"` for a non-rung link of `Σ`'s support.
    pub role: String,
    /// Compared against: `g U`, `D(ω̂_s) U` or `U`.
    pub expected: String,
    pub full: f64,
    pub interior: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PlaquetteDeviation {
    pub plaquette: PlaquetteId,
    pub holonomy_full: f64,
    pub holonomy_interior: f64,
    pub energy_full: f64,
    pub energy_interior: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvisibilityReport {
    pub links: Vec<LinkDeviation>,
    /// `Σ W(p) Σ⁻¹ − W(p)` and `Σ B_p Σ⁻¹ − B_p` for the middle plaquettes.
    pub middle: Vec<PlaquetteDeviation>,
    /// Plaquettes none of whose links meet the support of `Σ`.
    pub untouched_plaquettes: usize,
    /// `max |Σ†Σ − 1|` on the full and interior local spaces.
    pub unitarity_full: f64,
    pub unitarity_interior: f64,
}

/// `D(ω̂) = cos(ω/2) + i sin(ω/2) ω̂·σ` for an operator-valued axis.
fn operator_rotation(axis: &[LocalOp; 3], omega: f64, jmax: HalfInt) -> OpMatrix {
    let (c, s) = ((omega / 2.0).cos(), (omega / 2.0).sin());
    let i = C64::new(0.0, s);
    let scalar = |z: C64| LocalOp::scalar(jmax, z);
    // σ₁ = [[0,1],[1,0]], σ₂ = [[0,−i],[i,0]], σ₃ = diag(1,−1)
    OpMatrix::from_fn(|a, b| match (a, b) {
        (0, 0) => scalar(C64::new(c, 0.0)).add(&axis[2].scale(i)),
        (1, 1) => scalar(C64::new(c, 0.0)).sub(&axis[2].scale(i)),
        (0, 1) => axis[0].scale(i).add(&axis[1].scale(i * C64::new(0.0, -1.0))),
        _ => axis[0].scale(i).add(&axis[1].scale(i * C64::new(0.0, 1.0))),
    })
}

/// Link-by-link and middle-plaquette comparison of `Σ O Σ⁻¹` with `O`.
///
/// Every link of `Σ`'s support except the rungs must be untouched; the first
/// rung picks up `g` and the later rungs the transported `D(ω̂_s)`; middle
/// plaquettes must come back unchanged when the rotations cancel.
pub fn string_invisibility_report(lat: &TorusLattice, sigma: &VortexOperator) -> Result<InvisibilityReport, BraidingError> {
    let jmax = sigma.jmax;
    let strip = &sigma.spec.strip;
    let (s, s_inv) = sigma.to_local();
    let omega = sigma.spec.axis_angle.angle();
    let support: Vec<LinkId> = s.links().to_vec();
    let mut links = Vec::new();
    for &l in &support {
        let u = OpMatrix::from_fn(|a, b| link_holonomy(l, a, b, jmax));
        let f = conjugate(&s, &s_inv, &u);
        let (role, expected, want) = match strip.rungs.iter().position(|&r| r == l) {
            Some(0) => ("first rung", "g U", u.left_mul(&sigma.base_rotation())),
            Some(k) => ("rung", "D(ω̂_s) U", operator_rotation(&sigma.axes[k], omega, jmax).mul(&u)),
            None => ("support", "U", u.clone()),
        };
        let diff = f.sub(&want);
        links.push(LinkDeviation { link: l, role: role.into(), expected: expected.into(), full: diff.max_abs(), interior: diff.max_abs_interior() });
    }
    let mut middle = Vec::new();
    for &p in &strip.middle {
        let w = plaquette_holonomy(lat, p, jmax);
        let dw = conjugate(&s, &s_inv, &w).sub(&w);
        let b = plaquette_energy(lat, p, jmax);
        let db = s.mul(&b).mul(&s_inv).sub(&b);
        middle.push(PlaquetteDeviation {
            plaquette: p,
            holonomy_full: dw.max_abs(),
            holonomy_interior: dw.max_abs_interior(),
            energy_full: db.max_abs(),
            energy_interior: db.max_abs_interior(),
        });
    }
    let untouched_plaquettes = lat.plaquettes().filter(|&p| lat.plaquette_links(p).iter().all(|d| !support.contains(&d.link))).count();
    let defect = s.adjoint().mul(&s).sub(&LocalOp::identity(jmax));
    Ok(InvisibilityReport { links, middle, untouched_plaquettes, unitarity_full: defect.max_abs(), unitarity_interior: defect.max_abs_interior() })
}

#[derive(Clone, Debug, Serialize)]
pub struct DeformationReport {
    pub site: Site,
    /// `|⟨Σψ|I_s Σψ⟩| / ‖Σψ‖²`.
    pub overlap: f64,
    /// `‖I_s Σψ − Σψ‖ / ‖Σψ‖`.
    pub distance: f64,
    /// `max_k ‖I_s v_k − v_k‖` over the spin-network basis.
    pub invariant_defect: f64,
    /// `‖I_s e − e‖` for a product state with a spin on a star link.
    pub noninvariant_change: f64,
    /// `max |(I_sΣ) U (I_sΣ)⁻¹ − U|` for the rung (expected 0) and for the
    /// other three legs of the star (expected non-zero for `ω ≠ 0`).
    pub rung_change: f64,
    pub other_leg_changes: [f64; 3],
}

/// Compares `Σ|ψ⟩` with `I_s Σ|ψ⟩`, where `I_s = exp(−iω ω̂·G)` at the
/// bottom site of rung `s`; only `s = 0` has a c-number axis.
pub fn string_deformation_check(
    lat: &TorusLattice,
    sigma: &VortexOperator,
    space: &InvariantSpace,
    psi: &StateVector,
    s: usize,
) -> Result<DeformationReport, BraidingError> {
    if s != 0 {
        return Err(BraidingError::Invalid("the deformation check needs the c-number axis of rung 0".into()));
    }
    let jmax = sigma.jmax;
    let rung = sigma.spec.strip.rungs[s];
    let site = rung.site;
    let twirl = gauge_twirl(lat, site, &sigma.spec.axis_angle, jmax);
    let sv = sigma.apply(psi)?;
    let moved = twirl.apply(&sv)?;
    let n2 = sv.norm_sqr();
    let overlap = sv.inner(&moved)?.norm() / n2;
    let distance = moved.sub(&sv)?.norm() / n2.sqrt();
    let mut invariant_defect = 0.0f64;
    for k in 0..space.dim() {
        let v = space.vector(k);
        invariant_defect = invariant_defect.max(twirl.apply(&v)?.sub(&v)?.norm());
    }
    let basis = psi.basis();
    let pos = basis.position(rung)?;
    let e = StateVector::basis_state(basis, basis.stride(pos)); // first spin-½ state on the rung
    let noninvariant_change = twirl.apply(&e)?.sub(&e)?.norm();

    let (sl, sl_inv) = sigma.to_local();
    let inv_twirl = gauge_twirl(lat, site, &AxisAngle::new(sigma.spec.axis_angle.axis(), -sigma.spec.axis_angle.angle())?, jmax);
    let c = twirl.mul(&sl);
    let c_inv = sl_inv.mul(&inv_twirl);
    let change = |l: LinkId| {
        let u = OpMatrix::from_fn(|a, b| link_holonomy(l, a, b, jmax));
        conjugate(&c, &c_inv, &u).sub(&u).max_abs()
    };
    let others: Vec<LinkId> = lat.star_links(site).iter().map(|x| x.0).filter(|&l| l != rung).collect();
    Ok(DeformationReport {
        site,
        overlap,
        distance,
        invariant_defect,
        noninvariant_change,
        rung_change: change(rung),
        other_leg_changes: [change(others[0]), change(others[1]), change(others[2])],
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SiteProbe {
    pub site: Site,
    /// `‖A_n Σψ‖ / ‖Σψ‖`.
    pub casimir_norm: f64,
    /// Whether the star of `n` meets the support of `Σ`.
    pub touches_strip: bool,
}

/// Per-site `‖A_n Σ|ψ⟩‖` for a gauge-invariant `ψ`.
pub fn gauge_invariance_probe(lat: &TorusLattice, sigma: &VortexOperator, psi: &StateVector) -> Result<Vec<SiteProbe>, BraidingError> {
    let sv = sigma.apply(psi)?;
    let norm = sv.norm();
    let support: Vec<LinkId> = sigma.to_local().0.links().to_vec();
    lat.sites()
        .map(|site| {
            let a = vertex_casimir(lat, site, sigma.jmax).apply(&sv)?;
            let touches_strip = lat.star_links(site).iter().any(|x| support.contains(&x.0));
            Ok(SiteProbe { site, casimir_norm: a.norm() / norm, touches_strip })
        })
        .collect()
}

