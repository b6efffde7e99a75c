//! Site intertwiners: the group-integral projector at a four-valent vertex
//! and the closed 2×2-torus contraction built from four of them.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use super::cg::cg;
use super::halfint::{parity_sign, triangle, HalfInt};

/// `η^j_m = (-1)^{j-m} / √(2j+1)`.
pub fn eta_phase(j: HalfInt, m: HalfInt) -> f64 {
    parity_sign(j.int_diff(m)) / (j.dim() as f64).sqrt()
}

/// Centre element `exp(2πi·charge/N)` of SU(N).
pub fn zn_phase(charge: i64, n: u32) -> C64 {
    assert!(n >= 1, "Z_N needs N >= 1");
    C64::from_polar(1.0, 2.0 * std::f64::consts::PI * charge.rem_euclid(i64::from(n)) as f64 / f64::from(n))
}

/// Pair of Z_N centre charges labelling a topological sector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SectorCharge {
    pub p: u32,
    pub q: u32,
    pub n: u32,
}

impl SectorCharge {
    pub fn new(p: i64, q: i64, n: u32) -> Self {
        assert!(n >= 2, "Z_N sectors need N >= 2");
        let m = i64::from(n);
        SectorCharge { p: p.rem_euclid(m) as u32, q: q.rem_euclid(m) as u32, n }
    }

    /// `(η_x, η_y)`.
    pub fn phases(&self) -> (C64, C64) {
        (zn_phase(i64::from(self.p), self.n), zn_phase(i64::from(self.q), self.n))
    }

    /// The four Z_2 sectors in order (0,0), (1,0), (0,1), (1,1).
    pub fn z2_all() -> [SectorCharge; 4] {
        [(0, 0), (1, 0), (0, 1), (1, 1)].map(|(p, q)| SectorCharge::new(p, q, 2))
    }
}

/// Key of one site-tensor entry: magnetic labels on the four legs and the
/// intermediate spin coupling legs 1 and 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SiteKey {
    pub m: [HalfInt; 4],
    pub j12: HalfInt,
}

/// Real-valued coefficients of the site group integral.
///
/// Legs 1, 2 are the outgoing x and y links, legs 3, 4 the incoming ones;
/// `m` on every leg is the link's inner magnetic label (the index summed over
/// when two sites share the link).
pub type SiteTensor = BTreeMap<SiteKey, f64>;

/// Coefficients of the Haar integral over the gauge rotation at one site,
/// expanded in normalised singlets labelled by `j12`:
///
/// `K · (-1)^{2(j3+j4)} · (-1)^{j3-m3+j4-m4} · η^{j12}_{m12} · C^{j12 m12}_{j1 m1, j2 m2} · C^{j12,-m12}_{j3,-m3; j4,-m4}`
///
/// with `K = ∏ (2j_i+1)^{1/4}`. The `(-1)^{2(j3+j4)}` factor comes from the
/// phase convention of the right-handed link labels and is what the direct
/// quadrature of the integrand produces.
pub fn site_projector_tensor(j: [HalfInt; 4]) -> SiteTensor {
    let mut out = SiteTensor::new();
    let k: f64 = j.iter().map(|ji| (ji.dim() as f64).powf(0.25)).product();
    let convention = parity_sign(j[2].twice() + j[3].twice());
    let lo = (j[0] - j[1]).twice().abs().max((j[2] - j[3]).twice().abs());
    let hi = (j[0] + j[1]).twice().min((j[2] + j[3]).twice());
    for t12 in (lo..=hi).step_by(2) {
        let j12 = HalfInt::from_twice(t12);
        if !triangle(j[0], j[1], j12) || !triangle(j[2], j[3], j12) {
            continue;
        }
        for m1 in j[0].projections() {
            for m2 in j[1].projections() {
                let m12 = m1 + m2;
                if !j12.admits(m12) {
                    continue;
                }
                let c12 = cg(j[0], m1, j[1], m2, j12, m12);
                for m3 in j[2].projections() {
                    let m4 = m1 + m2 - m3;
                    if !j[3].admits(m4) {
                        continue;
                    }
                    let c34 = cg(j[2], -m3, j[3], -m4, j12, -m12);
                    let phase = parity_sign(j[2].int_diff(m3) + j[3].int_diff(m4));
                    let v = k * convention * phase * eta_phase(j12, m12) * c12 * c34;
                    if v != 0.0 {
                        out.insert(SiteKey { m: [m1, m2, m3, m4], j12 }, v);
                    }
                }
            }
        }
    }
    out
}

/// Labels of the 2×2-torus spin network.
///
/// `links` follows the lattice link order `(x, y, dir)` →
/// `2·(y·2 + x) + (dir − 1)`; `intertwiners` follows site order
/// `(0,0), (1,0), (0,1), (1,1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwelveJLabel {
    pub links: [HalfInt; 8],
    pub intertwiners: [HalfInt; 4],
}

/// Legs `[out-x, out-y, in-x, in-y]` of every site of the 2×2 torus as link
/// indices.
pub const TORUS2_SITE_LEGS: [[usize; 4]; 4] = [[0, 1, 2, 5], [2, 3, 0, 7], [4, 5, 6, 1], [6, 7, 4, 3]];

impl TwelveJLabel {
    pub fn leg_spins(&self, site: usize) -> [HalfInt; 4] {
        TORUS2_SITE_LEGS[site].map(|l| self.links[l])
    }

    /// Both triangle conditions hold at every site.
    pub fn is_admissible(&self) -> bool {
        (0..4).all(|s| {
            let j = self.leg_spins(s);
            let j12 = self.intertwiners[s];
            triangle(j[0], j[1], j12) && triangle(j[2], j[3], j12)
        })
    }

    /// All admissible labels with every link spin at most `jmax` (the
    /// intertwiners then range up to `2 jmax`).
    pub fn enumerate(jmax: HalfInt) -> Vec<TwelveJLabel> {
        let spins: Vec<HalfInt> = jmax.spins_up_to().collect();
        let couplings: Vec<HalfInt> = HalfInt::from_twice(2 * jmax.twice()).spins_up_to().collect();
        let mut out = Vec::new();
        let n = spins.len();
        let mut idx = [0usize; 8];
        loop {
            let links = idx.map(|i| spins[i]);
            let mut partial: Vec<[HalfInt; 4]> = vec![[HalfInt::ZERO; 4]];
            for s in 0..4 {
                let j = TORUS2_SITE_LEGS[s].map(|l| links[l]);
                let mut next = Vec::new();
                for p in &partial {
                    for &j12 in &couplings {
                        if triangle(j[0], j[1], j12) && triangle(j[2], j[3], j12) {
                            let mut q = *p;
                            q[s] = j12;
                            next.push(q);
                        }
                    }
                }
                partial = next;
            }
            out.extend(partial.into_iter().map(|intertwiners| TwelveJLabel { links, intertwiners }));
            // odometer
            let mut k = 0;
            loop {
                if k == 8 {
                    return out;
                }
                idx[k] += 1;
                if idx[k] < n {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }
}

/// Partial contraction over a set of open links, keyed by their magnetic labels.
struct Partial {
    links: Vec<usize>,
    entries: FxHashMap<Vec<HalfInt>, f64>,
}

impl Partial {
    fn from_site(legs: [usize; 4], j: [HalfInt; 4], j12: HalfInt) -> Self {
        let entries = site_projector_tensor(j)
            .into_iter()
            .filter(|(k, _)| k.j12 == j12)
            .map(|(k, v)| (k.m.to_vec(), v))
            .collect();
        Partial { links: legs.to_vec(), entries }
    }

    fn contract(&self, other: &Partial) -> Partial {
        let shared: Vec<usize> = self.links.iter().copied().filter(|l| other.links.contains(l)).collect();
        let pos = |links: &[usize], l: usize| links.iter().position(|&x| x == l).unwrap();
        let a_shared: Vec<usize> = shared.iter().map(|&l| pos(&self.links, l)).collect();
        let b_shared: Vec<usize> = shared.iter().map(|&l| pos(&other.links, l)).collect();
        let a_open: Vec<usize> = (0..self.links.len()).filter(|i| !a_shared.contains(i)).collect();
        let b_open: Vec<usize> = (0..other.links.len()).filter(|i| !b_shared.contains(i)).collect();
        let mut grouped: FxHashMap<Vec<HalfInt>, Vec<(Vec<HalfInt>, f64)>> = FxHashMap::default();
        for (k, &v) in &other.entries {
            let key: Vec<HalfInt> = b_shared.iter().map(|&i| k[i]).collect();
            let rest: Vec<HalfInt> = b_open.iter().map(|&i| k[i]).collect();
            grouped.entry(key).or_default().push((rest, v));
        }
        let mut entries: FxHashMap<Vec<HalfInt>, f64> = FxHashMap::default();
        for (k, &v) in &self.entries {
            let key: Vec<HalfInt> = a_shared.iter().map(|&i| k[i]).collect();
            if let Some(list) = grouped.get(&key) {
                let head: Vec<HalfInt> = a_open.iter().map(|&i| k[i]).collect();
                for (rest, w) in list {
                    let mut full = head.clone();
                    full.extend_from_slice(rest);
                    *entries.entry(full).or_insert(0.0) += v * w;
                }
            }
        }
        let mut links: Vec<usize> = a_open.iter().map(|&i| self.links[i]).collect();
        links.extend(b_open.iter().map(|&i| other.links[i]));
        Partial { links, entries }
    }

    fn scalar(&self) -> f64 {
        assert!(self.links.is_empty());
        self.entries.values().sum()
    }
}

/// Closed contraction of site projectors over every shared link label.
///
/// Each entry gives a site's legs `[out-x, out-y, in-x, in-y]` as link
/// indices, the spins on those legs and the site's intermediate spin. Sites
/// are absorbed in the given order. Zero when any site triangle fails.
pub fn contract_site_network(sites: &[([usize; 4], [HalfInt; 4], HalfInt)]) -> f64 {
    for (_, j, j12) in sites {
        if !triangle(j[0], j[1], *j12) || !triangle(j[2], j[3], *j12) {
            return 0.0;
        }
    }
    let mut acc = Partial { links: Vec::new(), entries: std::iter::once((Vec::new(), 1.0)).collect() };
    for (legs, j, j12) in sites {
        acc = acc.contract(&Partial::from_site(*legs, *j, *j12));
        if acc.entries.is_empty() {
            return 0.0;
        }
    }
    acc.scalar()
}

/// The closed contraction of four site projectors on the 2×2 torus (the 12-j
/// symbol of the second kind, including the `∏ √(2j+1)` prefactor carried by
/// the site tensors). Zero when any site triangle fails.
///
/// Contraction order: sites (0,0)–(1,0), then (1,1)–(0,1), then the join.
pub fn twelve_j_second_kind(label: &TwelveJLabel) -> f64 {
    if !label.is_admissible() {
        return 0.0;
    }
    let site = |s: usize| Partial::from_site(TORUS2_SITE_LEGS[s], label.leg_spins(s), label.intertwiners[s]);
    let ab = site(0).contract(&site(1));
    let cd = site(3).contract(&site(2));
    ab.contract(&cd).scalar()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(t: i32) -> HalfInt {
        HalfInt::from_twice(t)
    }

    #[test]
    fn eta_values() {
        assert!((eta_phase(h(0), h(0)) - 1.0).abs() < 1e-15);
        assert!((eta_phase(h(1), h(-1)) + 1.0 / 2f64.sqrt()).abs() < 1e-15);
        assert!((zn_phase(1, 2) + 1.0).norm() < 1e-15);
        assert!((zn_phase(1, 4) - C64::i()).norm() < 1e-15);
        assert!((zn_phase(0, 3) - 1.0).norm() < 1e-15);
    }

    #[test]
    fn singlet_site_tensor() {
        let t = site_projector_tensor([h(1), h(1), h(0), h(0)]);
        assert_eq!(t.len(), 2);
        let k = 2f64.sqrt();
        for (key, v) in &t {
            assert_eq!(key.j12, HalfInt::ZERO);
            let want = k * cg(h(1), key.m[0], h(1), key.m[1], h(0), h(0));
            assert!((v - want).abs() < 1e-15);
        }
    }

    #[test]
    fn trivial_twelve_j() {
        let label = TwelveJLabel { links: [HalfInt::ZERO; 8], intertwiners: [HalfInt::ZERO; 4] };
        assert!((twelve_j_second_kind(&label) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn inadmissible_label_vanishes() {
        let mut links = [HalfInt::ZERO; 8];
        links[0] = HalfInt::HALF;
        let label = TwelveJLabel { links, intertwiners: [HalfInt::ZERO; 4] };
        assert!(!label.is_admissible());
        assert_eq!(twelve_j_second_kind(&label), 0.0);
    }

    #[test]
    fn enumeration_counts_are_consistent() {
        let labels = TwelveJLabel::enumerate(HalfInt::HALF);
        assert!(labels.iter().all(TwelveJLabel::is_admissible));
        assert!(labels.contains(&TwelveJLabel { links: [HalfInt::ZERO; 8], intertwiners: [HalfInt::ZERO; 4] }));
    }
}
