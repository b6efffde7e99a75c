//! Gauss generators `Gᵃ(n)`, vertex Casimirs `A_n`, and gauge twirls
//! `I_n = exp(−iω ω̂·G(n))`.

use num_complex::Complex64 as C64;

use super::link::{electric_field, side_rotation};
use super::Side;
use crate::hilbert::LocalOp;
use crate::lattice::{LinkEnd, LinkId, Site, TorusLattice};
use crate::repkernel::{su2_from_axis_angle, wigner_d, AxisAngle, HalfInt};

fn star(lat: &TorusLattice, site: Site) -> ([LinkId; 4], [Side; 4]) {
    let s = lat.star_links(site);
    let side = |e: LinkEnd| match e {
        LinkEnd::Left => Side::Plus,
        LinkEnd::Right => Side::Minus,
    };
    (s.map(|x| x.0), s.map(|x| side(x.1)))
}

/// `Gᵃ(n)`: `E₊ᵃ` on the outgoing and `E₋ᵃ` on the incoming links of the star.
pub fn gauss_generator(lat: &TorusLattice, site: Site, a: usize, jmax: HalfInt) -> LocalOp {
    let (links, sides) = star(lat, site);
    let mut g = LocalOp::zero(jmax).embed(&[]);
    for k in 0..4 {
        g = g.add(&electric_field(links[k], sides[k], a, jmax));
    }
    g.embed(&links)
}

/// `A_n = Σ_a Gᵃ(n) Gᵃ(n)`.
pub fn vertex_casimir(lat: &TorusLattice, site: Site, jmax: HalfInt) -> LocalOp {
    let (links, _) = star(lat, site);
    let mut acc = LocalOp::zero(jmax).embed(&links);
    for a in 0..3 {
        let g = gauss_generator(lat, site, a, jmax);
        acc = acc.add(&g.mul(&g));
    }
    acc
}

/// `exp(−iω ω̂·G(n))`, built exactly as a product of per-leg Wigner
/// rotations since the four legs commute and every leg is block-diagonal in `j`.
pub fn gauge_twirl(lat: &TorusLattice, site: Site, aa: &AxisAngle, jmax: HalfInt) -> LocalOp {
    let (links, sides) = star(lat, site);
    let ginv = su2_from_axis_angle(aa).inverse();
    let mut acc = LocalOp::identity(jmax);
    for k in 0..4 {
        // exp(−iω ω̂·Jᵀ) = D(g⁻¹)ᵀ on the rotated index
        acc = acc.mul(&side_rotation(links[k], jmax, sides[k], |j| wigner_d(j, &ginv).transpose()));
    }
    acc.embed(&links).scale(C64::new(1.0, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{embed_spin_network, enumerate_spin_networks, local_expm, ProductBasis};
    use crate::operators::{directed_holonomy, OpMatrix};
    use crate::lattice::DirectedLink;
    use nalgebra::Matrix2;

    fn lat() -> TorusLattice {
        TorusLattice::new(2).unwrap()
    }

    #[test]
    fn generator_algebra_at_one_site() {
        let l = lat();
        let j = HalfInt::HALF;
        let s = l.site(0, 0);
        let g: Vec<LocalOp> = (0..3).map(|a| gauss_generator(&l, s, a, j)).collect();
        // measured structure constant sign: [G¹, G²] = −i G³ (see crate docs)
        for (a, b, c) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            let lhs = g[a].commutator(&g[b]);
            assert!(lhs.max_abs_diff(&g[c].scale(C64::new(0.0, -1.0))) < 1e-12);
        }
        let other = gauss_generator(&l, l.site(1, 0), 0, j);
        assert!(g[1].commutator(&other).max_abs() < 1e-12);
    }

    #[test]
    fn casimir_vanishes_on_spin_networks() {
        let l = lat();
        let j = HalfInt::HALF;
        let basis = ProductBasis::full(&l, j).unwrap();
        let cas: Vec<LocalOp> = l.sites().map(|s| vertex_casimir(&l, s, j)).collect();
        for cfg in enumerate_spin_networks(&l, j) {
            let v = embed_spin_network(&l, &cfg, &basis).unwrap();
            for a in &cas {
                assert!(a.apply(&v).unwrap().norm() < 1e-12);
            }
        }
    }

    #[test]
    fn twirl_matches_exponential() {
        let l = lat();
        let j = HalfInt::HALF;
        let s = l.site(1, 0);
        let aa = AxisAngle::from_direction([0.3, -0.5, 0.8], 1.3).unwrap();
        let n = aa.axis();
        let mut gen = LocalOp::zero(j);
        for a in 0..3 {
            gen = gen.axpy(C64::new(0.0, -aa.angle() * n[a]), &gauss_generator(&l, s, a, j));
        }
        let expm = local_expm(&gen, 1e-14);
        let twirl = gauge_twirl(&l, s, &aa, j);
        assert!(twirl.max_abs_diff(&expm) < 1e-12);
        let unit = twirl.mul(&twirl.adjoint()).sub(&LocalOp::identity(j).embed(twirl.links()));
        assert!(unit.max_abs() < 1e-12);
    }

    #[test]
    fn twirl_transforms_holonomies_covariantly() {
        // I U(l) I⁻¹ = g⁻¹ U for l leaving the site, U g for l entering it
        let l = lat();
        let j = HalfInt::ONE;
        let s = l.site(0, 0);
        let aa = AxisAngle::from_direction([1.0, 2.0, -0.5], 2.1).unwrap();
        let g = su2_from_axis_angle(&aa);
        let ginv: Matrix2<C64> = g.inverse().0;
        let twirl = gauge_twirl(&l, s, &aa, j);
        let tinv = twirl.adjoint();
        for (link, end) in l.star_links(s) {
            let u = directed_holonomy(DirectedLink { link, forward: true }, j);
            let conj = u.map(|x| twirl.mul(x).mul(&tinv));
            let want: OpMatrix = match end {
                LinkEnd::Left => u.left_mul(&ginv),
                LinkEnd::Right => u.right_mul(&g.0),
            };
            assert!(conj.sub(&want).max_abs() < 1e-12);
        }
    }
}
