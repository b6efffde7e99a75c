//! Independent checks of the link and site operators: Haar integration of
//! the holonomy in the group-function picture, the left/right field
//! relation through the holonomy, a brute-force kernel count of the vertex
//! Casimirs, and the spin-network overlap with the flat connection.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use su2_toric::hilbert::{embedded_entries, enumerate_spin_networks, LinkSpace, ProductBasis, StateVector};
use su2_toric::lattice::TorusLattice;
use su2_toric::operators::{electric_matrix, gauss_generator, holonomy_matrix, vertex_casimir, Side};
use su2_toric::repkernel::{contract_site_network, fundamental_generators, haar_quadrature_total, wigner_d, HalfInt};

fn sign(k: i32) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

#[test]
fn holonomy_matches_haar_integral_of_group_functions() {
    let jmax = HalfInt::THREE_HALVES;
    let space = LinkSpace::new(jmax);
    let nodes = haar_quadrature_total(HalfInt::from_twice(7));
    // Wavefunctions ⟨g|j, m₊, m₋⟩ = (−1)^{j−m₋} √(2j+1) D^j_{m₊, −m₋}(g) at every node.
    let psi: Vec<Vec<C64>> = nodes
        .iter()
        .map(|(g, _)| {
            let ds: Vec<DMatrix<C64>> = jmax.spins_up_to().map(|j| wigner_d(j, g)).collect();
            space
                .states()
                .iter()
                .map(|s| {
                    let d = &ds[s.j.twice() as usize];
                    let row = s.j.int_diff(s.m_plus) as usize;
                    let col = s.j.int_diff(-s.m_minus) as usize;
                    d[(row, col)] * sign(s.j.int_diff(s.m_minus)) * (s.j.dim() as f64).sqrt()
                })
                .collect()
        })
        .collect();
    let n = space.dim();
    for alpha in 0..2 {
        for beta in 0..2 {
            let mut want = DMatrix::<C64>::zeros(n, n);
            for ((g, w), p) in nodes.iter().zip(&psi) {
                let gab = g.0[(alpha, beta)] * *w;
                for a in 0..n {
                    let ca = p[a].conj() * gab;
                    for b in 0..n {
                        want[(a, b)] += ca * p[b];
                    }
                }
            }
            let got = holonomy_matrix(jmax, alpha, beta).to_dense();
            let err = (got - want).camax();
            assert!(err < 1e-12, "U_{alpha}{beta}: {err}");
        }
    }
}

#[test]
fn right_field_is_left_field_transported_through_the_holonomy() {
    let jmax = HalfInt::THREE_HALVES;
    let space = LinkSpace::new(jmax);
    let t = fundamental_generators();
    let u: Vec<Vec<DMatrix<C64>>> = (0..2).map(|a| (0..2).map(|b| holonomy_matrix(jmax, a, b).to_dense()).collect()).collect();
    let keep: Vec<usize> = (0..space.dim()).filter(|&i| space.state(i).j <= HalfInt::ONE).collect();
    for a in 0..3 {
        let n = space.dim();
        let mut rhs = DMatrix::<C64>::zeros(n, n);
        for b in 0..3 {
            let ep = electric_matrix(jmax, Side::Plus, b).to_dense();
            for i in 0..2 {
                for j in 0..2 {
                    for k in 0..2 {
                        for l in 0..2 {
                            let c = t[a][(i, j)] * t[b][(k, l)];
                            if c.norm() == 0.0 {
                                continue;
                            }
                            // (U†)_{jk} = (U_{kj})†
                            rhs += (u[k][j].adjoint() * &ep * &u[l][i]) * c;
                        }
                    }
                }
            }
        }
        rhs *= C64::new(-2.0, 0.0);
        let em = electric_matrix(jmax, Side::Minus, a).to_dense();
        let err = keep.iter().flat_map(|&r| keep.iter().map(move |&c| (r, c))).map(|(r, c)| (em[(r, c)] - rhs[(r, c)]).norm()).fold(0.0, f64::max);
        assert!(err < 1e-12, "a = {a}: {err}");
    }
}

#[test]
fn casimir_kernel_dimension_equals_spin_network_count() {
    let lat = TorusLattice::new(2).unwrap();
    let jmax = HalfInt::HALF;
    let basis = ProductBasis::full(&lat, jmax).unwrap();
    let sites: Vec<_> = lat.sites().collect();
    let gz: Vec<_> = sites.iter().map(|&s| gauss_generator(&lat, s, 2, jmax)).collect();
    let casimirs: Vec<_> = sites.iter().map(|&s| vertex_casimir(&lat, s, jmax)).collect();
    // The kernel lies where every site has zero total G³; group those basis
    // states by their link spins, which no Casimir changes.
    let mut blocks: std::collections::BTreeMap<Vec<i32>, Vec<u64>> = Default::default();
    for idx in 0..basis.dim() {
        let e = StateVector::basis_state(&basis, idx);
        let neutral = gz.iter().all(|g| g.apply(&e).unwrap().norm() < 1e-12);
        if neutral {
            let spins = lat.links().map(|l| basis.link_state(idx, l).unwrap().j.twice()).collect();
            blocks.entry(spins).or_default().push(idx);
        }
    }
    let mut kernel = 0;
    for members in blocks.values() {
        let pos: std::collections::HashMap<u64, usize> = members.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let n = members.len();
        let mut m = DMatrix::<C64>::zeros(n, n);
        for (c, &idx) in members.iter().enumerate() {
            let e = StateVector::basis_state(&basis, idx);
            for a in &casimirs {
                for (r, v) in a.apply(&e).unwrap().entries() {
                    m[(pos[&r], c)] += v;
                }
            }
        }
        kernel += m.symmetric_eigenvalues().iter().filter(|x| x.abs() < 1e-9).count();
    }
    assert_eq!(kernel, enumerate_spin_networks(&lat, jmax).len());
}

/// `⟨SN|1⟩` with `|1⟩ = ⊗_links Σ_j √(2j+1) Σ_m (−1)^{j+m} |j, m, −m⟩`,
/// the truncated delta function at the identity on every link.
fn flat_overlaps(lat: &TorusLattice, jmax: HalfInt) -> Vec<(f64, f64)> {
    let basis = ProductBasis::full(lat, jmax).unwrap();
    let links: Vec<_> = lat.links().collect();
    enumerate_spin_networks(lat, jmax)
        .iter()
        .map(|cfg| {
            let overlap: f64 = embedded_entries(lat, cfg, &basis)
                .unwrap()
                .into_iter()
                .map(|(idx, a)| {
                    links
                        .iter()
                        .map(|&l| {
                            let s = basis.link_state(idx, l).unwrap();
                            if s.m_minus != -s.m_plus {
                                0.0
                            } else {
                                (s.j.dim() as f64).sqrt() * sign((s.j + s.m_plus).twice() / 2)
                            }
                        })
                        .product::<f64>()
                        * a
                })
                .sum();
            (overlap, contract_site_network(&cfg.site_data(lat)))
        })
        .collect()
}

fn assert_proportional(pairs: &[(f64, f64)]) {
    let (o0, c0) = pairs[0];
    assert!(o0.abs() > 1e-12 && c0.abs() > 1e-12);
    let ratio = o0 / c0;
    for &(o, c) in pairs {
        assert!((o - ratio * c).abs() < 1e-10 * (1.0 + o.abs()), "overlap {o}, contraction {c}, ratio {ratio}");
    }
}

#[test]
fn site_contraction_is_the_flat_connection_overlap() {
    let lat2 = TorusLattice::new(2).unwrap();
    assert_proportional(&flat_overlaps(&lat2, HalfInt::HALF));
    assert_proportional(&flat_overlaps(&lat2, HalfInt::ONE));
}
