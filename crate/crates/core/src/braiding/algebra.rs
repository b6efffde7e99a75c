//! Operator-level order–disorder algebra: conjugating Wilson loops and
//! plaquettes by a vortex operator and comparing with the rotated forms.

use nalgebra::Matrix2;
use num_complex::Complex64 as C64;
use serde::Serialize;

use super::rotation::{extract_rotation, fit_left_factor, winding_number, ExtractedRotation};
use super::BraidingError;
use crate::hilbert::{LinkState, LocalOp, StateVector};
use crate::lattice::{DirectedLink, LinkId, Site, TorusLattice};
use crate::operators::{directed_holonomy, path_holonomy, wilson_loop, OpMatrix, Tier, VortexOperator};
use crate::repkernel::HalfInt;

/// `S A S⁻¹` entrywise.
pub fn conjugate(s: &LocalOp, s_inv: &LocalOp, a: &OpMatrix) -> OpMatrix {
    a.map(|x| s.mul(x).mul(s_inv))
}

/// Largest entry of every component restricted to local states passing `keep`.
pub fn max_abs_where(m: &OpMatrix, keep: impl Fn(LinkId, LinkState) -> bool + Copy) -> f64 {
    m.0.iter()
        .flatten()
        .map(|op| {
            let links = op.links().to_vec();
            op.max_abs_restricted(|states| links.iter().zip(states).all(|(&l, &s)| keep(l, s)))
        })
        .fold(0.0, f64::max)
}

/// Least-squares `D` with `F ≈ D·W` in the Frobenius product of local operators.
pub fn fit_operator_rotation(f: &OpMatrix, w: &OpMatrix) -> Matrix2<C64> {
    fit_left_factor(&f.0, &w.0, &[0, 1], |a, b| a.frobenius_inner(b))
}

#[derive(Clone, Debug, Serialize)]
pub struct WilsonThooftReport {
    /// Winding numbers of the loop around `p1` and `p2`.
    pub winding: (i32, i32),
    pub fitted: ExtractedRotation,
    /// `max |ΣWΣ⁻¹ − D W|` with the fitted `D`.
    pub deviation: f64,
    /// `max |ΣWΣ⁻¹ − W|`.
    pub identity_deviation: f64,
    /// `max |½ Tr(ΣWΣ⁻¹ W†) − cos(ω_fit/2)|` on the interior subspace; a
    /// base-point independent reading of the angle.
    pub trace_deviation_interior: f64,
    pub vortex_angle: f64,
}

/// Conjugates the Wilson loop of a closed path by `Σ` and fits the result
/// to a c-number rotation acting from the left.
pub fn wilson_thooft_check(lat: &TorusLattice, sigma: &VortexOperator, start: Site, path: &[DirectedLink]) -> Result<WilsonThooftReport, BraidingError> {
    let (p1, p2) = sigma.spec.strip.ends;
    let winding = (
        winding_number(lat, start, path, p1).ok_or(BraidingError::NotContractible)?,
        winding_number(lat, start, path, p2).ok_or(BraidingError::NotContractible)?,
    );
    let w = wilson_loop(lat, path, sigma.jmax)?;
    let (s, s_inv) = sigma.to_local();
    let f = conjugate(&s, &s_inv, &w);
    let d = fit_operator_rotation(&f, &w);
    let fitted = extract_rotation(&d);
    let deviation = f.sub(&w.left_mul(&d)).max_abs();
    let identity_deviation = f.sub(&w).max_abs();
    let half_trace = f.mul(&w.dagger()).trace().scale(C64::new(0.5, 0.0));
    let cosine = (fitted.angle / 2.0).cos();
    let trace_deviation_interior = half_trace.sub(&LocalOp::scalar(sigma.jmax, C64::new(cosine, 0.0))).max_abs_interior();
    Ok(WilsonThooftReport { winding, fitted, deviation, identity_deviation, trace_deviation_interior, vortex_angle: sigma.spec.axis_angle.angle() })
}

/// The same fit evaluated on a state: `ΣW_{αβ}Σ⁻¹|ψ⟩ ≈ Σ_γ D_{αγ} W_{γβ}|ψ⟩`.
/// Returns the extracted rotation and the relative residual.
pub fn wilson_thooft_on_state(sigma: &VortexOperator, w: &OpMatrix, psi: &StateVector) -> Result<(ExtractedRotation, f64), BraidingError> {
    let (s, s_inv) = sigma.to_local();
    let f = conjugate(&s, &s_inv, w);
    let apply = |m: &OpMatrix| -> Result<[[StateVector; 2]; 2], BraidingError> {
        let v = |a: usize, b: usize| m.get(a, b).apply(psi);
        Ok([[v(0, 0)?, v(0, 1)?], [v(1, 0)?, v(1, 1)?]])
    };
    let fv = apply(&f)?;
    let wv = apply(w)?;
    let d = fit_left_factor(&fv, &wv, &[0, 1], |a, b| a.inner(b).expect("same basis"));
    let mut res = 0.0;
    let mut tot = 0.0;
    for a in 0..2 {
        for b in 0..2 {
            let mut r = fv[a][b].clone();
            for g in 0..2 {
                r.axpy(-d[(a, g)], &wv[g][b])?;
            }
            res += r.norm_sqr();
            tot += fv[a][b].norm_sqr();
        }
    }
    Ok((extract_rotation(&d), (res / tot).sqrt()))
}

/// `max |Σ₂Σ₁ W Σ₁⁻¹Σ₂⁻¹ − W|`: a braid followed by its reverse.
pub fn reversal_defect(lat: &TorusLattice, first: &VortexOperator, second: &VortexOperator, path: &[DirectedLink]) -> Result<f64, BraidingError> {
    let w = wilson_loop(lat, path, first.jmax)?;
    let (s1, s1i) = first.to_local();
    let (s2, s2i) = second.to_local();
    let f = conjugate(&s2, &s2i, &conjugate(&s1, &s1i, &w));
    Ok(f.sub(&w).max_abs())
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseCheck {
    pub name: String,
    /// Which basis states the comparison covers.
    pub region: String,
    pub max_abs_error: f64,
}

/// End-plaquette conjugation identities for a single-rung (tier-1) vortex.
///
/// Case I (`p1`, the rung is its right edge):
/// `Σ W(p1) Σ⁻¹ = U_B g U_R U_T† U_L†` exactly, and `= D(ω̂′) W(p1)` with
/// the operator-valued `D(ω̂′) = U_B g U_B†` wherever `U_B U_B† = 1`.
/// Case III (`p2`, the rung is its left edge): `Σ W(p2) Σ⁻¹ = W(p2) g†`.
pub fn tier_one_cases(lat: &TorusLattice, sigma: &VortexOperator) -> Result<Vec<CaseCheck>, BraidingError> {
    if sigma.spec.tier != Tier::One {
        return Err(BraidingError::Invalid("end-plaquette cases need a tier-1 vortex".into()));
    }
    let jmax = sigma.jmax;
    let g = sigma.base_rotation();
    let (s, s_inv) = sigma.to_local();
    let (p1, p2) = sigma.spec.strip.ends;
    let mut out = Vec::new();

    let legs1 = lat.plaquette_links(p1);
    let w1 = path_holonomy(&legs1, jmax);
    let f1 = conjugate(&s, &s_inv, &w1);
    let ub = directed_holonomy(legs1[0], jmax);
    let exact1 = ub.right_mul(&g).mul(&path_holonomy(&legs1[1..], jmax));
    out.push(CaseCheck { name: "case I exact form".into(), region: "full".into(), max_abs_error: f1.sub(&exact1).max_abs() });
    let rotated = ub.right_mul(&g).mul(&ub.dagger()).mul(&w1);
    let bottom = legs1[0].link;
    let deep = move |l: LinkId, st: LinkState| {
        let limit = if l == bottom { jmax.twice() - 2 } else { jmax.twice() - 1 };
        st.j.twice() <= limit
    };
    out.push(CaseCheck {
        name: "case I transported-axis form".into(),
        region: "deep interior".into(),
        max_abs_error: max_abs_where(&f1.sub(&rotated), deep),
    });

    let w2 = path_holonomy(&lat.plaquette_links(p2), jmax);
    let f2 = conjugate(&s, &s_inv, &w2);
    out.push(CaseCheck { name: "case III".into(), region: "full".into(), max_abs_error: f2.sub(&w2.right_mul(&g.adjoint())).max_abs() });
    Ok(out)
}

/// Whether every link state lies at least `depth` half-units below `jmax`.
pub fn below_cutoff(jmax: HalfInt, depth: i32) -> impl Fn(LinkId, LinkState) -> bool + Copy {
    move |_, s| s.j.twice() <= jmax.twice() - depth
}

