//! Shared, lazily built resources for one process: invariant subspaces,
//! their observable matrices and the analytic sector states, per cutoff.

use std::collections::BTreeMap;
use std::rc::Rc;

use su2_toric::hilbert::StateVector;
use su2_toric::lattice::TorusLattice;
use su2_toric::repkernel::HalfInt;
use su2_toric::states::{analytic_ground_state, GroundStateSpec, InvariantObservables, InvariantSpace, SectorConvention, SectorState};

use crate::config::RunConfig;

pub struct Lab {
    config: RunConfig,
    spaces: BTreeMap<i32, Rc<InvariantSpace>>,
    observables: BTreeMap<i32, Rc<InvariantObservables>>,
    sectors: BTreeMap<(i32, [i64; 2], bool), Rc<SectorState>>,
}

impl Lab {
    pub fn new(config: RunConfig) -> Self {
        Self { config, spaces: BTreeMap::new(), observables: BTreeMap::new(), sectors: BTreeMap::new() }
    }

    pub fn config(&self) -> &RunConfig {
        &self.config
    }

    /// Replaces the configuration, keeping cached resources (they depend
    /// only on the lattice and the cutoff).
    pub fn reconfigure(&mut self, config: RunConfig) {
        self.config = config;
    }

    /// The 2×2 torus on which every state-level experiment runs.
    pub fn small_lattice(&self) -> TorusLattice {
        TorusLattice::new(2).expect("L = 2 is valid")
    }

    pub fn space(&mut self, jmax: HalfInt) -> anyhow::Result<Rc<InvariantSpace>> {
        if let Some(s) = self.spaces.get(&jmax.twice()) {
            return Ok(s.clone());
        }
        let space = Rc::new(InvariantSpace::new(&self.small_lattice(), jmax)?);
        self.spaces.insert(jmax.twice(), space.clone());
        Ok(space)
    }

    pub fn observables(&mut self, jmax: HalfInt) -> anyhow::Result<Rc<InvariantObservables>> {
        if let Some(o) = self.observables.get(&jmax.twice()) {
            return Ok(o.clone());
        }
        let space = self.space(jmax)?;
        let obs = Rc::new(InvariantObservables::new(&space)?);
        self.observables.insert(jmax.twice(), obs.clone());
        Ok(obs)
    }

    pub fn sector(&mut self, jmax: HalfInt, sector: [i64; 2], convention: SectorConvention) -> anyhow::Result<Rc<SectorState>> {
        let key = (jmax.twice(), sector, convention == SectorConvention::Center);
        if let Some(s) = self.sectors.get(&key) {
            return Ok(s.clone());
        }
        let space = self.space(jmax)?;
        let state = Rc::new(analytic_ground_state(&space, GroundStateSpec::new(sector[0], sector[1], convention))?);
        self.sectors.insert(key, state.clone());
        Ok(state)
    }

    /// The configured sector's ground state as a product-basis vector.
    pub fn ground_vector(&mut self, jmax: HalfInt) -> anyhow::Result<StateVector> {
        let sector = self.config.sector;
        let space = self.space(jmax)?;
        Ok(self.sector(jmax, sector, SectorConvention::Center)?.state(&space))
    }
}
