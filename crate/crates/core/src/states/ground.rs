//! Analytic ground states in the four `Z₂ ⊗ Z₂` sectors, the numerical
//! ground space of `H` on the invariant subspace, and sector diagnostics.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::{InvariantSpace, StateError};
use crate::hilbert::{lowest_eigenpairs, Operator, SpinNetworkConfig, StateVector};
use crate::lattice::{Dir, TorusLattice};
use crate::operators::{plaquette_energy, wilson_loop_trace};
use crate::repkernel::{contract_site_network, twelve_j_second_kind, zn_phase, HalfInt, SectorCharge, TwelveJLabel};

/// How the sector phase treats the strip sums `𝒥_x, 𝒥_y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SectorConvention {
    /// `η^{𝒥}` with `η = e^{2πip/N}` taken literally; for half-integer sums
    /// at `N = 2` this is `i^{2p𝒥}`, a complex fourfold pattern.
    Literal,
    /// `η^{2𝒥}`: the centre element acting on every strip link, `(−1)^{2p𝒥}`
    /// at `N = 2`. These are the eigenstates of the winding Wilson loops.
    Center,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundStateSpec {
    pub sector: SectorCharge,
    pub convention: SectorConvention,
}

impl GroundStateSpec {
    pub fn new(p: i64, q: i64, convention: SectorConvention) -> Self {
        Self { sector: SectorCharge::new(p, q, 2), convention }
    }

    pub fn trivial() -> Self {
        Self::new(0, 0, SectorConvention::Center)
    }
}

/// `(𝒥_x, 𝒥_y)`: link spins summed over `𝒮_y` and `𝒮_x` respectively.
pub fn sector_sums(lat: &TorusLattice, cfg: &SpinNetworkConfig) -> (HalfInt, HalfInt) {
    let sum = |strip: Vec<_>| strip.into_iter().fold(HalfInt::ZERO, |acc, l| acc + cfg.link_spins[lat.link_index(l)]);
    (sum(lat.twist_strip(Dir::Y, 0)), sum(lat.twist_strip(Dir::X, 0)))
}

/// Phase multiplying the trivial-sector amplitude of a configuration.
pub fn sector_phase(sector: SectorCharge, sums: (HalfInt, HalfInt), convention: SectorConvention) -> C64 {
    let n = i64::from(sector.n);
    // 2𝒥 is an integer; the literal power η^𝒥 is e^{πi p (2𝒥)/N}.
    let (tx, ty) = (i64::from(sums.0.twice()), i64::from(sums.1.twice()));
    let (p, q) = (i64::from(sector.p), i64::from(sector.q));
    match convention {
        SectorConvention::Literal => zn_phase(p * tx, 2 * sector.n) * zn_phase(q * ty, 2 * sector.n),
        SectorConvention::Center => zn_phase((p * tx).rem_euclid(n), sector.n) * zn_phase((q * ty).rem_euclid(n), sector.n),
    }
}

/// Trivial-sector amplitude of every configuration: the closed contraction
/// of the site tensors. On the 2×2 torus the precomputed 12-j path is used.
pub fn trivial_amplitudes(space: &InvariantSpace) -> Vec<f64> {
    let lat = space.lattice();
    space
        .configs()
        .iter()
        .map(|cfg| {
            if lat.size() == 2 {
                let mut links = [HalfInt::ZERO; 8];
                links.copy_from_slice(&cfg.link_spins);
                let mut intertwiners = [HalfInt::ZERO; 4];
                intertwiners.copy_from_slice(&cfg.intertwiners);
                twelve_j_second_kind(&TwelveJLabel { links, intertwiners })
            } else {
                contract_site_network(&cfg.site_data(lat))
            }
        })
        .collect()
}

/// A state of the invariant subspace in spin-network coordinates.
#[derive(Clone, Debug)]
pub struct SectorState {
    pub spec: GroundStateSpec,
    /// Normalised coordinates.
    pub coeffs: Vec<C64>,
    /// Norm before normalisation.
    pub norm: f64,
}

impl SectorState {
    pub fn state(&self, space: &InvariantSpace) -> StateVector {
        space.embed(&self.coeffs)
    }
}

/// `Σ_cfg η-phase × amplitude × |cfg⟩`, normalised.
pub fn analytic_ground_state(space: &InvariantSpace, spec: GroundStateSpec) -> Result<SectorState, StateError> {
    if spec.sector.n != 2 {
        return Err(StateError::Unsupported(format!("sector states need N = 2 (got {})", spec.sector.n)));
    }
    let lat = space.lattice();
    let amps = trivial_amplitudes(space);
    let mut coeffs: Vec<C64> = space
        .configs()
        .iter()
        .zip(&amps)
        .map(|(cfg, &a)| sector_phase(spec.sector, sector_sums(lat, cfg), spec.convention) * a)
        .collect();
    let norm = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(StateError::ZeroNorm("analytic ground state"));
    }
    coeffs.iter_mut().for_each(|c| *c /= norm);
    Ok(SectorState { spec, coeffs, norm })
}

/// Invariant operators as matrices in spin-network coordinates.
pub struct InvariantObservables {
    /// `B_p` in plaquette order.
    pub plaquettes: Vec<DMatrix<C64>>,
    /// `½ Tr W_{γx}` along the x-winding loop through the origin.
    pub wilson_x: DMatrix<C64>,
    /// `½ Tr W_{γy}`.
    pub wilson_y: DMatrix<C64>,
}

impl InvariantObservables {
    pub fn new(space: &InvariantSpace) -> Result<Self, StateError> {
        let lat = space.lattice();
        let jmax = space.jmax();
        let plaquettes = lat
            .plaquettes()
            .map(|p| space.matrix_of(&Operator::from(plaquette_energy(lat, p, jmax))))
            .collect::<Result<Vec<_>, _>>()?;
        let origin = lat.site(0, 0);
        let half = C64::new(0.5, 0.0);
        let loop_matrix = |dir: Dir| -> Result<DMatrix<C64>, StateError> {
            let tr = wilson_loop_trace(lat, &lat.noncontractible_loop(dir, origin), jmax)?;
            Ok(space.matrix_of(&Operator::from(tr))? * half)
        };
        Ok(Self { plaquettes, wilson_x: loop_matrix(Dir::X)?, wilson_y: loop_matrix(Dir::Y)? })
    }

    /// `B Σ_p B_p` (the electric term vanishes on this subspace).
    pub fn hamiltonian(&self, b: f64) -> DMatrix<C64> {
        let n = self.wilson_x.nrows();
        self.plaquettes.iter().fold(DMatrix::zeros(n, n), |acc, m| acc + m) * C64::new(b, 0.0)
    }
}

/// `⟨c|M|c⟩ / ⟨c|c⟩`.
pub fn coordinate_expectation(m: &DMatrix<C64>, c: &[C64]) -> C64 {
    let v = DVector::from_column_slice(c);
    (v.adjoint() * m * &v)[(0, 0)] / v.norm_squared()
}

/// The `k` lowest eigenpairs of `H = B Σ B_p` on the invariant subspace,
/// eigenvectors in spin-network coordinates.
pub fn numeric_ground_space(obs: &InvariantObservables, b: f64, k: usize, tol: f64, seed: u64) -> Result<Vec<(f64, Vec<C64>)>, StateError> {
    let h = obs.hamiltonian(b);
    let pairs = lowest_eigenpairs(&h, k, tol, seed)?;
    Ok(pairs.into_iter().map(|p| (p.value, p.vector)).collect())
}

/// Squared length of the projection of a unit vector onto the span of `states`.
pub fn span_overlap(states: &[Vec<C64>], v: &[C64]) -> f64 {
    let n = v.len();
    let a = DMatrix::from_fn(n, states.len(), |i, k| states[k][i]);
    let q = a.qr().q();
    let x = DVector::from_column_slice(v);
    (q.adjoint() * x).norm_squared()
}

#[derive(Clone, Debug, Serialize)]
pub struct SectorDiagnostics {
    pub jmax: HalfInt,
    pub convention: SectorConvention,
    pub sectors: Vec<SectorCharge>,
    /// `|⟨ψ_a|ψ_b⟩|` row-major.
    pub gram_abs: Vec<Vec<f64>>,
    pub gram_determinant: f64,
    pub wilson_x: Vec<f64>,
    pub wilson_y: Vec<f64>,
    /// `⟨B_p⟩` averaged over plaquettes, per sector.
    pub plaquette_energy: Vec<f64>,
}

pub fn sector_diagnostics(space: &InvariantSpace, obs: &InvariantObservables, convention: SectorConvention) -> Result<SectorDiagnostics, StateError> {
    let sectors = SectorCharge::z2_all().to_vec();
    let states = sectors
        .iter()
        .map(|&sector| analytic_ground_state(space, GroundStateSpec { sector, convention }))
        .collect::<Result<Vec<_>, _>>()?;
    let n = states.len();
    let gram = DMatrix::from_fn(n, n, |a, b| states[a].coeffs.iter().zip(&states[b].coeffs).map(|(x, y)| x.conj() * y).sum::<C64>());
    let gram_abs = (0..n).map(|a| (0..n).map(|b| gram[(a, b)].norm()).collect()).collect();
    let np = obs.plaquettes.len() as f64;
    Ok(SectorDiagnostics {
        jmax: space.jmax(),
        convention,
        sectors,
        gram_abs,
        gram_determinant: gram.determinant().re,
        wilson_x: states.iter().map(|s| coordinate_expectation(&obs.wilson_x, &s.coeffs).re).collect(),
        wilson_y: states.iter().map(|s| coordinate_expectation(&obs.wilson_y, &s.coeffs).re).collect(),
        plaquette_energy: states
            .iter()
            .map(|s| obs.plaquettes.iter().map(|m| coordinate_expectation(m, &s.coeffs).re).sum::<f64>() / np)
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(j: HalfInt) -> InvariantSpace {
        InvariantSpace::new(&TorusLattice::new(2).unwrap(), j).unwrap()
    }

    #[test]
    fn literal_phase_is_fourfold_for_half_integer_sums() {
        let s = SectorCharge::new(1, 0, 2);
        let half = (HalfInt::HALF, HalfInt::ZERO);
        let lit = sector_phase(s, half, SectorConvention::Literal);
        assert!((lit - C64::new(0.0, 1.0)).norm() < 1e-15);
        let cen = sector_phase(s, half, SectorConvention::Center);
        assert!((cen + 1.0).norm() < 1e-15);
        let one = (HalfInt::ONE, HalfInt::ZERO);
        assert!((sector_phase(s, one, SectorConvention::Literal) + 1.0).norm() < 1e-15);
        assert!((sector_phase(s, one, SectorConvention::Center) - 1.0).norm() < 1e-15);
    }

    #[test]
    fn trivial_amplitudes_agree_with_general_contraction() {
        let sp = space(HalfInt::ONE);
        let lat = *sp.lattice();
        for (cfg, a) in sp.configs().iter().zip(trivial_amplitudes(&sp)) {
            assert!((contract_site_network(&cfg.site_data(&lat)) - a).abs() < 1e-12);
        }
    }

    #[test]
    fn ground_state_energy_drops_with_cutoff() {
        let mut energies = Vec::new();
        for j in [HalfInt::HALF, HalfInt::ONE] {
            let sp = space(j);
            let obs = InvariantObservables::new(&sp).unwrap();
            let d = sector_diagnostics(&sp, &obs, SectorConvention::Center).unwrap();
            energies.push(d.plaquette_energy[0]);
            assert!(d.gram_determinant > 0.0);
        }
        assert!(energies[1] < energies[0], "{energies:?}");
    }

    #[test]
    fn sector_phases_flip_winding_loops() {
        let sp = space(HalfInt::ONE);
        let obs = InvariantObservables::new(&sp).unwrap();
        let d = sector_diagnostics(&sp, &obs, SectorConvention::Center).unwrap();
        // (0,0), (1,0), (0,1), (1,1): the sign of ⟨W_γx⟩ follows p, that of ⟨W_γy⟩ follows q.
        let sx = [1.0, -1.0, 1.0, -1.0];
        let sy = [1.0, 1.0, -1.0, -1.0];
        for k in 0..4 {
            assert!(d.wilson_x[k] * sx[k] > 0.0, "{:?}", d.wilson_x);
            assert!(d.wilson_y[k] * sy[k] > 0.0, "{:?}", d.wilson_y);
        }
    }

    #[test]
    fn numeric_ground_energy_is_nonnegative_and_below_analytic() {
        let sp = space(HalfInt::HALF);
        let obs = InvariantObservables::new(&sp).unwrap();
        let pairs = numeric_ground_space(&obs, 1.0, 4, 1e-9, 7).unwrap();
        let psi = analytic_ground_state(&sp, GroundStateSpec::trivial()).unwrap();
        let e_analytic = coordinate_expectation(&obs.hamiltonian(1.0), &psi.coeffs).re;
        assert!(pairs[0].0 >= -1e-10);
        assert!(pairs[0].0 <= e_analytic + 1e-10);
    }
}
