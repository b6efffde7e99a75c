//! Browser demo: three read-only views of the lab exposed to JavaScript.
//! Every export returns a JSON string; failures come back as
//! `{"error": "..."}` so the page never has to catch exceptions.

use std::cell::OnceCell;
use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde_json::{json, Value};
use su2_toric::hilbert::{Operator, StateVector};
use su2_toric::lattice::TorusLattice;
use su2_toric::operators::{plaquette_energy, vortex_operator, Tier, VortexSpec};
use su2_toric::repkernel::{adjoint_rotation, su2_from_axis_angle, twelve_j_second_kind, wigner_d, AxisAngle, HalfInt, TwelveJLabel};
use su2_toric::states::{analytic_ground_state, expectation, vortex_state, GroundStateSpec, InvariantSpace};
use wasm_bindgen::prelude::*;

/// Largest spin accepted by [`rotation`].
pub const MAX_ROTATION_TWICE: i32 = 8;
/// Largest cutoff accepted by [`twelve_j_table`].
pub const MAX_TABLE_TWICE: i32 = 2;

fn respond(result: Result<Value, String>) -> String {
    match result {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

fn complex_rows(m: impl Iterator<Item = Vec<C64>>) -> Value {
    Value::Array(m.map(|row| Value::Array(row.into_iter().map(|z| json!([z.re, z.im])).collect())).collect())
}

pub fn rotation_value(j_twice: i32, axis: [f64; 3], omega: f64) -> Result<Value, String> {
    if !(0..=MAX_ROTATION_TWICE).contains(&j_twice) {
        return Err(format!("spin must be between 0 and {}", f64::from(MAX_ROTATION_TWICE) / 2.0));
    }
    if !omega.is_finite() {
        return Err("angle must be finite".into());
    }
    let aa = AxisAngle::from_direction(axis, omega).map_err(|e| e.to_string())?;
    let g = su2_from_axis_angle(&aa);
    let j = HalfInt::from_twice(j_twice);
    let d = wigner_d(j, &g);
    let n = d.nrows();
    let defect = (d.adjoint() * &d - nalgebra::DMatrix::<C64>::identity(n, n)).iter().map(|z| z.norm()).fold(0.0, f64::max);
    let r = adjoint_rotation(&g);
    Ok(json!({
        "spin": j.to_string(),
        "axis": aa.axis(),
        "angle": aa.angle(),
        "su2": complex_rows((0..2).map(|a| (0..2).map(|b| g.0[(a, b)]).collect())),
        "adjoint": (0..3).map(|a| (0..3).map(|b| r[(a, b)]).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "wigner_d": complex_rows((0..n).map(|a| (0..n).map(|b| d[(a, b)]).collect())),
        "unitarity_defect": defect,
    }))
}

/// Wigner D-matrix of spin `j_twice / 2` for the rotation by `omega` about
/// `(x, y, z)`, with the SU(2) element and its adjoint 3×3 rotation.
#[wasm_bindgen]
pub fn rotation(j_twice: i32, x: f64, y: f64, z: f64, omega: f64) -> String {
    respond(rotation_value(j_twice, [x, y, z], omega))
}

struct SmallTorus {
    lat: TorusLattice,
    ground: StateVector,
    plaquettes: Vec<Operator>,
}

thread_local! {
    static TORUS: OnceCell<Result<SmallTorus, String>> = const { OnceCell::new() };
}

fn small_torus() -> Result<SmallTorus, String> {
    let lat = TorusLattice::new(2).map_err(|e| e.to_string())?;
    let jmax = HalfInt::HALF;
    let space = InvariantSpace::new(&lat, jmax).map_err(|e| e.to_string())?;
    let ground = analytic_ground_state(&space, GroundStateSpec::trivial()).map_err(|e| e.to_string())?.state(&space);
    let plaquettes = lat.plaquettes().map(|p| Operator::from(plaquette_energy(&lat, p, jmax))).collect();
    Ok(SmallTorus { lat, ground, plaquettes })
}

pub fn vortex_energy_value(omega: f64, axis: [f64; 3]) -> Result<Value, String> {
    if !omega.is_finite() || omega.abs() > 4.0 * PI {
        return Err("angle must lie in [-4pi, 4pi]".into());
    }
    TORUS.with(|cell| {
        let t = cell.get_or_init(small_torus).as_ref().map_err(Clone::clone)?;
        let lat = &t.lat;
        let spec = VortexSpec {
            strip: lat.ladder_strip(lat.plaquette(0, 0), lat.plaquette(1, 0)).map_err(|e| e.to_string())?,
            axis_angle: AxisAngle::from_direction(axis, omega).map_err(|e| e.to_string())?,
            tier: Tier::One,
        };
        let sigma = vortex_operator(lat, &spec, HalfInt::HALF, 1e-12).map_err(|e| e.to_string())?;
        let v = vortex_state(&sigma, &t.ground).map_err(|e| e.to_string())?;
        let read = |psi: &StateVector| -> Result<Vec<f64>, String> {
            t.plaquettes.iter().map(|b| expectation(b, psi).map(|x| x.re).map_err(|e| e.to_string())).collect()
        };
        Ok(json!({
            "omega": omega,
            "jmax": "1/2",
            "ground": read(&t.ground)?,
            "vortex": read(&v.state)?,
            "untruncated_end_plaquette": 1.0 - (omega / 2.0).cos(),
        }))
    })
}

/// Plaquette energies `⟨B_p⟩` on the 2×2 torus at `jmax = ½` before and
/// after a single-rung vortex pair with angle `omega` about `(x, y, z)`.
#[wasm_bindgen]
pub fn vortex_energy(omega: f64, x: f64, y: f64, z: f64) -> String {
    respond(vortex_energy_value(omega, [x, y, z]))
}

pub fn twelve_j_value(jmax_twice: i32) -> Result<Value, String> {
    if !(1..=MAX_TABLE_TWICE).contains(&jmax_twice) {
        return Err(format!("cutoff must be 1/2 or 1 (twice: 1..={MAX_TABLE_TWICE})"));
    }
    let rows: Vec<Value> = TwelveJLabel::enumerate(HalfInt::from_twice(jmax_twice))
        .iter()
        .map(|l| (l, twelve_j_second_kind(l)))
        .filter(|(_, v)| v.abs() > 1e-14)
        .map(|(l, v)| {
            json!({
                "links": l.links.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "intertwiners": l.intertwiners.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "value": v,
            })
        })
        .collect();
    Ok(json!({ "jmax": HalfInt::from_twice(jmax_twice).to_string(), "rows": rows }))
}

/// Non-zero 12-j amplitudes of the 2×2 torus with every spin up to
/// `jmax_twice / 2`.
#[wasm_bindgen]
pub fn twelve_j_table(jmax_twice: i32) -> String {
    respond(twelve_j_value(jmax_twice))
}
