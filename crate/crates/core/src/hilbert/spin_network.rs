//! Gauge-invariant spin-network basis: link spins plus one intermediate spin
//! per site, embedded as products of normalised four-leg singlets.

use std::sync::Arc;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::{HilbertError, LinkSpace, ProductBasis, StateVector};
use crate::lattice::{LinkEnd, TorusLattice};
use crate::repkernel::{cg, eta_phase, triangle, HalfInt};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpinNetworkConfig {
    /// Spin on every link, in lattice link order.
    pub link_spins: Vec<HalfInt>,
    /// Intermediate spin `j12 = j34` at every site, in lattice site order.
    pub intertwiners: Vec<HalfInt>,
}

impl SpinNetworkConfig {
    /// Leg spins `[out-x, out-y, in-x, in-y]` at a site.
    pub fn leg_spins(&self, lat: &TorusLattice, site: usize) -> [HalfInt; 4] {
        leg_indices(lat, site).map(|l| self.link_spins[l])
    }

    pub fn is_valid(&self, lat: &TorusLattice) -> bool {
        self.link_spins.len() == lat.num_links()
            && self.intertwiners.len() == lat.num_sites()
            && (0..lat.num_sites()).all(|s| {
                let j = self.leg_spins(lat, s);
                let k = self.intertwiners[s];
                triangle(j[0], j[1], k) && triangle(j[2], j[3], k)
            })
    }

    /// Inputs for [`crate::repkernel::contract_site_network`].
    pub fn site_data(&self, lat: &TorusLattice) -> Vec<([usize; 4], [HalfInt; 4], HalfInt)> {
        (0..lat.num_sites()).map(|s| (leg_indices(lat, s), self.leg_spins(lat, s), self.intertwiners[s])).collect()
    }
}

/// Link indices of the star legs `[out-x, out-y, in-x, in-y]` of a site.
pub fn leg_indices(lat: &TorusLattice, site: usize) -> [usize; 4] {
    lat.star_links(lat.site_from_index(site)).map(|(l, _)| lat.link_index(l))
}

/// All configurations with link spins `≤ jmax` whose two triangles close at
/// every site, in lexicographic order of (link spins, intertwiners). The
/// intertwiners are internal labels and range up to `2 jmax`.
pub fn enumerate_spin_networks(lat: &TorusLattice, jmax: HalfInt) -> Vec<SpinNetworkConfig> {
    let nl = lat.num_links();
    let spins: Vec<HalfInt> = jmax.spins_up_to().collect();
    let couplings: Vec<HalfInt> = HalfInt::from_twice(2 * jmax.twice()).spins_up_to().collect();
    let legs: Vec<[usize; 4]> = (0..lat.num_sites()).map(|s| leg_indices(lat, s)).collect();
    // sites become checkable once their largest leg index is assigned
    let mut ready: Vec<Vec<usize>> = vec![Vec::new(); nl];
    for (s, l) in legs.iter().enumerate() {
        ready[*l.iter().max().unwrap()].push(s);
    }
    let mut out = Vec::new();
    let mut cur = vec![HalfInt::ZERO; nl];
    fn parity_ok(cur: &[HalfInt], legs: &[usize; 4]) -> bool {
        legs.iter().map(|&l| cur[l].twice()).sum::<i32>() % 2 == 0
    }
    fn recurse(
        k: usize,
        cur: &mut Vec<HalfInt>,
        spins: &[HalfInt],
        couplings: &[HalfInt],
        legs: &[[usize; 4]],
        ready: &[Vec<usize>],
        out: &mut Vec<SpinNetworkConfig>,
    ) {
        if k == cur.len() {
            let mut partial: Vec<Vec<HalfInt>> = vec![Vec::new()];
            for l in legs {
                let j = l.map(|i| cur[i]);
                let mut next = Vec::new();
                for p in &partial {
                    for &k12 in couplings {
                        if triangle(j[0], j[1], k12) && triangle(j[2], j[3], k12) {
                            let mut q = p.clone();
                            q.push(k12);
                            next.push(q);
                        }
                    }
                }
                partial = next;
            }
            out.extend(partial.into_iter().map(|intertwiners| SpinNetworkConfig { link_spins: cur.clone(), intertwiners }));
            return;
        }
        for &j in spins {
            cur[k] = j;
            if ready[k].iter().all(|&s| parity_ok(cur, &legs[s])) {
                recurse(k + 1, cur, spins, couplings, legs, ready, out);
            }
        }
        cur[k] = HalfInt::ZERO;
    }
    recurse(0, &mut cur, &spins, &couplings, &legs, &ready, &mut out);
    out
}

/// Normalised singlet of four legs coupled as (12)(34) through `j12`:
/// `η^{j12}_{A} C^{j12 A}_{j1 a1, j2 a2} C^{j12,−A}_{j3 b3, j4 b4}`, listed as
/// `([a1, a2, b3, b4], value)`.
pub fn site_singlet(j: [HalfInt; 4], j12: HalfInt) -> Vec<([HalfInt; 4], f64)> {
    let mut out = Vec::new();
    if !triangle(j[0], j[1], j12) || !triangle(j[2], j[3], j12) {
        return out;
    }
    for a1 in j[0].projections() {
        for a2 in j[1].projections() {
            let a = a1 + a2;
            if !j12.admits(a) {
                continue;
            }
            let c12 = cg(j[0], a1, j[1], a2, j12, a);
            for b3 in j[2].projections() {
                let b4 = -a - b3;
                if !j[3].admits(b4) {
                    continue;
                }
                let v = eta_phase(j12, a) * c12 * cg(j[2], b3, j[3], b4, j12, -a);
                if v != 0.0 {
                    out.push(([a1, a2, b3, b4], v));
                }
            }
        }
    }
    out
}

/// The product-basis vector of a spin network: one singlet per site over the
/// half-link labels (`m₊` of outgoing legs, `m₋` of incoming legs).
pub fn embed_spin_network(
    lat: &TorusLattice,
    cfg: &SpinNetworkConfig,
    basis: &Arc<ProductBasis>,
) -> Result<StateVector, HilbertError> {
    let entries = embedded_entries(lat, cfg, basis)?;
    Ok(StateVector::from_entries(basis, entries.into_iter().map(|(i, v)| (i, C64::new(v, 0.0)))))
}

/// Raw `(index, amplitude)` list of an embedded spin network.
pub fn embedded_entries(
    lat: &TorusLattice,
    cfg: &SpinNetworkConfig,
    basis: &Arc<ProductBasis>,
) -> Result<Vec<(u64, f64)>, HilbertError> {
    if !cfg.is_valid(lat) {
        return Err(HilbertError::Invalid("spin network violates a site triangle".into()));
    }
    if cfg.link_spins.iter().any(|&j| j > basis.jmax()) {
        return Err(HilbertError::Invalid("spin network exceeds the basis cutoff".into()));
    }
    // j-dependent part of every link digit
    let mut base = 0u64;
    let mut strides = Vec::with_capacity(lat.num_links());
    for (li, link) in lat.links().enumerate() {
        let s = basis.stride(basis.position(link)?);
        strides.push(s);
        base += s * LinkSpace::block_offset(cfg.link_spins[li]) as u64;
    }
    let mut acc: Vec<(u64, f64)> = vec![(base, 1.0)];
    for site in 0..lat.num_sites() {
        let legs = leg_indices(lat, site);
        let ends = lat.star_links(lat.site_from_index(site)).map(|(_, e)| e);
        let j = legs.map(|l| cfg.link_spins[l]);
        let singlet = site_singlet(j, cfg.intertwiners[site]);
        let offs: Vec<(u64, f64)> = singlet
            .iter()
            .map(|(m, v)| {
                let mut off = 0u64;
                for k in 0..4 {
                    let jj = j[k];
                    let step = match ends[k] {
                        LinkEnd::Left => jj.dim() as u64,
                        LinkEnd::Right => 1,
                    };
                    off += strides[legs[k]] * step * jj.int_diff(m[k]) as u64;
                }
                (off, *v)
            })
            .collect();
        let mut next = Vec::with_capacity(acc.len() * offs.len());
        for &(i, v) in &acc {
            for &(o, t) in &offs {
                next.push((i + o, v * t));
            }
        }
        acc = next;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repkernel::TwelveJLabel;

    #[test]
    fn counts_match_twelve_j_labels() {
        let lat = TorusLattice::new(2).unwrap();
        for jmax in [HalfInt::HALF, HalfInt::ONE] {
            let cfgs = enumerate_spin_networks(&lat, jmax);
            assert_eq!(cfgs.len(), TwelveJLabel::enumerate(jmax).len());
            assert!(cfgs.iter().all(|c| c.is_valid(&lat)));
            assert!(cfgs.iter().any(|c| c.link_spins.iter().all(|&j| j == HalfInt::ZERO)));
        }
    }

    #[test]
    fn single_half_link_is_absent() {
        let lat = TorusLattice::new(2).unwrap();
        let cfgs = enumerate_spin_networks(&lat, HalfInt::HALF);
        assert!(!cfgs.iter().any(|c| c.link_spins.iter().filter(|&&j| j == HalfInt::HALF).count() == 1));
    }

    #[test]
    fn singlets_are_normalised() {
        let h = HalfInt::from_twice;
        for j in [[h(1), h(1), h(1), h(1)], [h(2), h(1), h(1), h(2)], [h(2), h(2), h(2), h(2)]] {
            for t in 0..=4 {
                let s = site_singlet(j, h(t));
                if !s.is_empty() {
                    let n: f64 = s.iter().map(|e| e.1 * e.1).sum();
                    assert!((n - 1.0).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn embedded_vectors_are_orthonormal() {
        let lat = TorusLattice::new(2).unwrap();
        let basis = ProductBasis::full(&lat, HalfInt::HALF).unwrap();
        let cfgs = enumerate_spin_networks(&lat, HalfInt::HALF);
        let vecs: Vec<StateVector> = cfgs.iter().map(|c| embed_spin_network(&lat, c, &basis).unwrap()).collect();
        for (a, va) in vecs.iter().enumerate() {
            for (b, vb) in vecs.iter().enumerate() {
                let g = va.inner(vb).unwrap();
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((g - C64::new(want, 0.0)).norm() < 1e-10);
            }
        }
        let zero = vecs[0].sorted_entries(0.0);
        assert_eq!(zero, vec![(0, C64::new(1.0, 0.0))]);
    }
}
