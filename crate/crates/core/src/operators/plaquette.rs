//! Path-ordered holonomy products: plaquettes `W(p)`, magnetic terms `B_p`,
//! Wilson loops and Wilson charge strings `Γ`.

use num_complex::Complex64 as C64;

use super::link::directed_holonomy;
use super::{OpMatrix, OperatorError};
use crate::hilbert::LocalOp;
use crate::lattice::{DirectedLink, PlaquetteId, Site, TorusLattice};
use crate::repkernel::HalfInt;

/// Ordered product of the holonomies along a path (first step leftmost).
pub fn path_holonomy(path: &[DirectedLink], jmax: HalfInt) -> OpMatrix {
    let mut acc: Option<OpMatrix> = None;
    for d in path {
        let u = directed_holonomy(*d, jmax);
        acc = Some(match acc {
            None => u,
            Some(a) => a.mul(&u),
        });
    }
    acc.unwrap_or_else(|| OpMatrix::identity(jmax))
}

/// `W(p) = U(n;1) U(n+1̂;2) U†(n+2̂;1) U†(n;2)`.
pub fn plaquette_holonomy(lat: &TorusLattice, p: PlaquetteId, jmax: HalfInt) -> OpMatrix {
    path_holonomy(&lat.plaquette_links(p), jmax)
}

/// `B_p = 1 − ¼ Tr[W(p) + W†(p)]`.
pub fn plaquette_energy(lat: &TorusLattice, p: PlaquetteId, jmax: HalfInt) -> LocalOp {
    let tr = plaquette_holonomy(lat, p, jmax).trace();
    let links: Vec<_> = lat.plaquette_links(p).iter().map(|d| d.link).collect();
    let sym = tr.add(&tr.adjoint()).scale(C64::new(-0.25, 0.0));
    LocalOp::identity(jmax).embed(&links).add(&sym)
}

/// Holonomy matrix of a closed path.
pub fn wilson_loop(lat: &TorusLattice, path: &[DirectedLink], jmax: HalfInt) -> Result<OpMatrix, OperatorError> {
    let start = path.first().map(|d| lat.endpoints(*d).0).ok_or(OperatorError::OpenPath)?;
    if lat.walk(start, path) != Some(start) {
        return Err(OperatorError::OpenPath);
    }
    Ok(path_holonomy(path, jmax))
}

/// `Tr W(γ)` of a closed path (divide by 2 for the normalised loop).
pub fn wilson_loop_trace(lat: &TorusLattice, path: &[DirectedLink], jmax: HalfInt) -> Result<LocalOp, OperatorError> {
    Ok(wilson_loop(lat, path, jmax)?.trace())
}

/// `Γ(n′, n)` as a full 2×2 operator matrix along the canonical path.
pub fn string_matrix(lat: &TorusLattice, from: Site, to: Site, jmax: HalfInt) -> Result<OpMatrix, OperatorError> {
    Ok(path_holonomy(&lat.string_path(from, to)?, jmax))
}

/// `Γ_{αβ}(n′, n)` along the canonical path from `n′` to `n`.
pub fn string_operator(
    lat: &TorusLattice,
    from: Site,
    to: Site,
    alpha: usize,
    beta: usize,
    jmax: HalfInt,
) -> Result<LocalOp, OperatorError> {
    Ok(string_matrix(lat, from, to, jmax)?.get(alpha, beta).clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{ProductBasis, StateVector};
    use crate::lattice::Dir;
    use crate::operators::gauss_generator;

    #[test]
    fn vacuum_expectations() {
        let lat = TorusLattice::new(2).unwrap();
        let j = HalfInt::HALF;
        let basis = ProductBasis::full(&lat, j).unwrap();
        let vac = StateVector::basis_state(&basis, 0);
        let p = lat.plaquette(0, 0);
        let tr = plaquette_holonomy(&lat, p, j).trace();
        assert!(vac.inner(&tr.apply(&vac).unwrap()).unwrap().norm() < 1e-14);
        let b = plaquette_energy(&lat, p, j);
        assert!((vac.inner(&b.apply(&vac).unwrap()).unwrap() - C64::new(1.0, 0.0)).norm() < 1e-14);
        assert!(b.matrix().hermiticity_defect() < 1e-14);
    }

    #[test]
    fn plaquette_is_gauge_covariant() {
        let lat = TorusLattice::new(2).unwrap();
        let j = HalfInt::HALF;
        let tr = plaquette_holonomy(&lat, lat.plaquette(1, 1), j).trace();
        for s in lat.sites() {
            for a in 0..3 {
                assert!(gauss_generator(&lat, s, a, j).commutator(&tr).max_abs() < 1e-12);
            }
        }
    }

    #[test]
    fn open_paths_are_rejected() {
        let lat = TorusLattice::new(2).unwrap();
        let path = lat.string_path(lat.site(0, 0), lat.site(1, 0)).unwrap();
        assert_eq!(wilson_loop(&lat, &path, HalfInt::HALF).unwrap_err(), OperatorError::OpenPath);
        let gx = lat.noncontractible_loop(Dir::X, lat.site(0, 0));
        assert!(wilson_loop(&lat, &gx, HalfInt::HALF).is_ok());
    }
}
