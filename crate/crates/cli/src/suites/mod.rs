//! The named experiments behind the subcommands. Each returns a
//! [`VerificationReport`](crate::report::VerificationReport); gated checks
//! decide the exit status, probes are recorded only.

pub mod algebra;
pub mod braid;
pub mod excite;
pub mod ground;

use std::f64::consts::PI;

use rand::Rng;
use su2_toric::hilbert::{LinkSpace, ProductBasis, StateVector};
use su2_toric::lattice::{Dir, DirectedLink, TorusLattice};
use su2_toric::operators::{vortex_operator, Tier, VortexOperator, VortexSpec};
use su2_toric::repkernel::{AxisAngle, HalfInt};

use crate::report::{Check, VerificationReport};

/// Topical reference ids carried by every check.
pub mod refs {
    pub const CANONICAL: &str = "canonical-commutators";
    pub const FIELD_ALGEBRA: &str = "electric-field-algebra";
    pub const TRANSPORT: &str = "left-right-transport";
    pub const CASIMIR: &str = "left-right-casimir";
    pub const EIGENBASIS: &str = "link-eigenbasis";
    pub const GAUSS: &str = "gauss-generators";
    pub const COMMUTING: &str = "commuting-terms";
    pub const WILSON: &str = "noncontractible-wilson-loops";
    pub const SPIN_NETWORKS: &str = "spin-network-basis";
    pub const TWELVE_J: &str = "twelve-j-amplitudes";
    pub const SECTORS: &str = "topological-sectors";
    pub const ELECTRIC: &str = "electric-charges";
    pub const STRING: &str = "string-independence";
    pub const VORTEX: &str = "vortex-pair-creation";
    pub const VORTEX_ENERGY: &str = "vortex-energy";
    pub const GAP: &str = "gap-term";
    pub const ORDER_DISORDER: &str = "wilson-thooft-algebra";
    pub const BRAIDING: &str = "braiding-overlap";
    pub const DIRAC: &str = "dirac-string";
    pub const GAUGE_PROBE: &str = "vortex-gauge-invariance";
    pub const PLUMBING: &str = "artifact-plumbing";
}

/// Runs a section; an error becomes a failed check and a note instead of
/// aborting the whole experiment, so partial results are kept.
pub(crate) fn section(report: &mut VerificationReport, name: &str, paper_ref: &str, f: impl FnOnce(&mut VerificationReport) -> anyhow::Result<()>) {
    if let Err(e) = f(report) {
        report.note(format!("{name}: {e:#}"));
        report.push(Check::exact(format!("{name}: completed"), paper_ref, f64::INFINITY, 0.0).with_note(format!("{e:#}")));
    }
}

pub(crate) fn step(lat: &TorusLattice, x: isize, y: isize, dir: Dir, forward: bool) -> DirectedLink {
    DirectedLink { link: lat.link(x, y, dir), forward }
}

/// The vortex pair sits on plaquettes (0,0) and (1,0); the rung is the
/// y-link at (1,0).
pub(crate) fn tier_one_vortex(lat: &TorusLattice, aa: AxisAngle, jmax: HalfInt, tol: f64) -> anyhow::Result<VortexOperator> {
    let spec = VortexSpec { strip: lat.ladder_strip(lat.plaquette(0, 0), lat.plaquette(1, 0))?, axis_angle: aa, tier: Tier::One };
    Ok(vortex_operator(lat, &spec, jmax, tol)?)
}

/// Plaquette (0,0) counter-clockwise from the rung's foot, rung first.
pub(crate) fn enclosing_loop(lat: &TorusLattice) -> Vec<DirectedLink> {
    vec![step(lat, 1, 0, Dir::Y, true), step(lat, 0, 1, Dir::X, false), step(lat, 0, 0, Dir::Y, false), step(lat, 0, 0, Dir::X, true)]
}

/// Plaquette (1,1) from the rung's foot; encloses neither vortex on L = 2.
pub(crate) fn distant_loop(lat: &TorusLattice) -> Vec<DirectedLink> {
    vec![step(lat, 1, 1, Dir::Y, false), step(lat, 1, 1, Dir::X, true), step(lat, 0, 1, Dir::Y, true), step(lat, 1, 0, Dir::X, false)]
}

/// Two plaquettes stacked in y above (0,0), from the rung's foot (L ≥ 3).
pub(crate) fn tall_enclosing_loop(lat: &TorusLattice) -> Vec<DirectedLink> {
    vec![
        step(lat, 1, 0, Dir::Y, true),
        step(lat, 1, 1, Dir::Y, true),
        step(lat, 0, 2, Dir::X, false),
        step(lat, 0, 1, Dir::Y, false),
        step(lat, 0, 0, Dir::Y, false),
        step(lat, 0, 0, Dir::X, true),
    ]
}

/// The angles swept by the vortex-energy trend, plus the configured one.
pub(crate) fn swept_angles(omega: f64) -> Vec<f64> {
    let mut out = vec![PI / 2.0, PI, 2.0 * PI];
    if out.iter().all(|w| (w - omega).abs() > 1e-12) {
        out.push(omega);
    }
    out
}

/// Random vectors for commutator tests: dense when the space is small
/// enough, otherwise sparse on random basis states.
pub(crate) fn random_vectors<R: Rng>(basis: &std::sync::Arc<ProductBasis>, count: usize, rng: &mut R) -> anyhow::Result<Vec<StateVector>> {
    const DENSE_LIMIT: u64 = 1 << 21;
    const SPARSE_SUPPORT: usize = 64;
    (0..count)
        .map(|_| {
            if basis.dim() <= DENSE_LIMIT {
                Ok(StateVector::random_dense(basis, rng)?)
            } else {
                let idx: Vec<u64> = (0..SPARSE_SUPPORT).map(|_| rng.gen_range(0..basis.dim())).collect();
                Ok(StateVector::random_on(basis, &dedup(idx), rng))
            }
        })
        .collect()
}

/// Random vectors supported on link states with `j ≤ jmax − ½` only.
pub(crate) fn random_interior_vectors<R: Rng>(basis: &std::sync::Arc<ProductBasis>, count: usize, rng: &mut R) -> Vec<StateVector> {
    const SUPPORT: usize = 64;
    let inner = LinkSpace::block_offset(basis.jmax());
    let links = basis.links().len();
    (0..count)
        .map(|_| {
            let idx: Vec<u64> = (0..SUPPORT).map(|_| basis.index_of(&(0..links).map(|_| rng.gen_range(0..inner)).collect::<Vec<_>>())).collect();
            StateVector::random_on(basis, &dedup(idx), rng)
        })
        .collect()
}

fn dedup(mut v: Vec<u64>) -> Vec<u64> {
    v.sort_unstable();
    v.dedup();
    v
}
