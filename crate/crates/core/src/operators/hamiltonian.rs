//! The Hamiltonian `H = A Σ_n A_n + B Σ_p B_p` and the gap term
//! `ΔH = C Σ_n (α A_n − B_{p(n)})²`.

use std::sync::Arc;

use num_complex::Complex64 as C64;

use super::gauge::vertex_casimir;
use super::plaquette::plaquette_energy;
use crate::hilbert::{HilbertError, LocalOp, Operator, StateVector};
use crate::lattice::TorusLattice;
use crate::repkernel::HalfInt;

#[derive(Clone, Debug)]
pub struct Hamiltonian {
    pub a: f64,
    pub b: f64,
    /// `A_n` in lattice site order.
    pub casimirs: Vec<Arc<LocalOp>>,
    /// `B_p` in lattice plaquette order.
    pub magnetic: Vec<Arc<LocalOp>>,
}

pub fn hamiltonian(lat: &TorusLattice, jmax: HalfInt, a: f64, b: f64) -> Hamiltonian {
    Hamiltonian {
        a,
        b,
        casimirs: lat.sites().map(|s| Arc::new(vertex_casimir(lat, s, jmax))).collect(),
        magnetic: lat.plaquettes().map(|p| Arc::new(plaquette_energy(lat, p, jmax))).collect(),
    }
}

impl Hamiltonian {
    pub fn electric(&self) -> Operator {
        Operator::sum(self.casimirs.iter().map(|o| (C64::new(1.0, 0.0), Operator::Local(o.clone()))).collect())
    }

    pub fn magnetic_sum(&self) -> Operator {
        Operator::sum(self.magnetic.iter().map(|o| (C64::new(1.0, 0.0), Operator::Local(o.clone()))).collect())
    }

    pub fn operator(&self) -> Operator {
        Operator::sum(vec![(C64::new(self.a, 0.0), self.electric()), (C64::new(self.b, 0.0), self.magnetic_sum())])
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector, HilbertError> {
        self.operator().apply(v)
    }
}

#[derive(Clone, Debug)]
pub struct DeltaHamiltonian {
    pub c: f64,
    pub alpha: f64,
    /// `α A_n − B_{p(n)}` with `p(n)` the plaquette whose lower-left corner is `n`.
    pub terms: Vec<Operator>,
}

pub fn delta_hamiltonian(h: &Hamiltonian, c: f64, alpha: f64) -> DeltaHamiltonian {
    let terms = h
        .casimirs
        .iter()
        .zip(&h.magnetic)
        .map(|(a, b)| {
            Operator::sum(vec![
                (C64::new(alpha, 0.0), Operator::Local(a.clone())),
                (C64::new(-1.0, 0.0), Operator::Local(b.clone())),
            ])
        })
        .collect();
    DeltaHamiltonian { c, alpha, terms }
}

impl DeltaHamiltonian {
    pub fn operator(&self) -> Operator {
        Operator::sum(
            self.terms.iter().map(|t| (C64::new(self.c, 0.0), Operator::product(vec![t.clone(), t.clone()]))).collect(),
        )
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector, HilbertError> {
        self.operator().apply(v)
    }
}
