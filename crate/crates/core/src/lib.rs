//! Numerical laboratory for SU(2) lattice gauge theory on an `L × L` torus in
//! the magnetic (spin-network) representation: truncated link Hilbert spaces,
//! gauge and flux operators, toric-code-like ground states, vortex and charge
//! excitations, and braiding diagnostics.

pub mod braiding;
pub mod hilbert;
pub mod lattice;
pub mod operators;
pub mod repkernel;
pub mod states;
