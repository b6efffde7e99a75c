//! The exported functions, exercised natively (they only build and parse
//! JSON strings, so no browser is needed).

use std::f64::consts::PI;

use serde_json::Value;
use su2_toric_demo::{rotation, twelve_j_table, vortex_energy};

fn parse(s: String) -> Value {
    serde_json::from_str(&s).expect("exports return JSON")
}

#[test]
fn spin_half_rotation_is_the_su2_element() {
    let r = parse(rotation(1, 0.0, 0.0, 1.0, PI / 2.0));
    assert!(r.get("error").is_none(), "{r}");
    assert_eq!(r["su2"], r["wigner_d"]);
    assert!(r["unitarity_defect"].as_f64().unwrap() < 1e-14);
    // a quarter turn about z maps x to ±y in the adjoint representation
    let adj: Vec<Vec<f64>> = serde_json::from_value(r["adjoint"].clone()).unwrap();
    assert!(adj[2][2] > 1.0 - 1e-14);
    assert!(adj[0][0].abs() < 1e-14 && (adj[0][1].abs() - 1.0).abs() < 1e-14);
}

#[test]
fn higher_spins_stay_unitary_and_bad_input_is_reported() {
    for t in 0..=8 {
        let r = parse(rotation(t, 0.3, -0.5, 0.8, 1.1));
        let rows = r["wigner_d"].as_array().unwrap();
        assert_eq!(rows.len(), (t + 1) as usize);
        assert!(r["unitarity_defect"].as_f64().unwrap() < 1e-12);
    }
    assert!(parse(rotation(20, 0.0, 0.0, 1.0, 1.0)).get("error").is_some());
    assert!(parse(rotation(1, 0.0, 0.0, 0.0, 1.0)).get("error").is_some());
}

#[test]
fn vortex_energy_matches_the_lab_at_a_half_turn() {
    let r = parse(vortex_energy(PI, 0.3, -0.5, 0.8));
    assert!(r.get("error").is_none(), "{r}");
    let vortex: Vec<f64> = serde_json::from_value(r["vortex"].clone()).unwrap();
    let ground: Vec<f64> = serde_json::from_value(r["ground"].clone()).unwrap();
    assert_eq!(vortex.len(), 4);
    // at omega = pi the end plaquette sits at 1 - cos(pi/2) = 1 already at jmax = 1/2
    assert!((vortex[0] - 1.0).abs() < 1e-10);
    assert!(ground.iter().all(|b| (b - ground[0]).abs() < 1e-12));
    let zero = parse(vortex_energy(0.0, 0.0, 0.0, 1.0));
    let (a, b): (Vec<f64>, Vec<f64>) = (serde_json::from_value(zero["vortex"].clone()).unwrap(), serde_json::from_value(zero["ground"].clone()).unwrap());
    assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-12));
}

#[test]
fn twelve_j_table_lists_non_zero_amplitudes() {
    let r = parse(twelve_j_table(1));
    let rows = r["rows"].as_array().unwrap();
    assert!(!rows.is_empty());
    let trivial = rows.iter().find(|row| row["links"].as_array().unwrap().iter().all(|j| j == "0")).expect("all-zero label");
    assert!((trivial["value"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!(parse(twelve_j_table(5)).get("error").is_some());
}
