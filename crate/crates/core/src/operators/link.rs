//! Single-link operators: electric fields `E±ᵃ` and holonomy entries `U_{αβ}`.
//!
//! The basis state `|j, m₊, m₋⟩` has wavefunction
//! `(−1)^{j−m₋} √(2j+1) D^j_{m₊,−m₋}(g)`. In this basis `E₊ᵃ` acts on `m₊`
//! and `E₋ᵃ` on `m₋`, both as the transposed spin matrices, which is what
//! `[E₊ᵃ, U] = Tᵃ U` and `[E₋ᵃ, U] = −U Tᵃ` require.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::{OpMatrix, Side};
use crate::hilbert::{LinkSpace, LocalOp, SparseMatrix};
use crate::lattice::{DirectedLink, LinkId};
use crate::repkernel::{cg, parity_sign, spin_matrices, HalfInt};

fn half_label(index: usize) -> HalfInt {
    if index == 0 {
        HalfInt::HALF
    } else {
        -HalfInt::HALF
    }
}

/// Applies a per-spin `(2j+1)×(2j+1)` matrix `X_j` to the `m₊` or `m₋` index
/// of a single link: `⟨j, k'| · |j, k⟩ = X_j[k', k]` with `k = j − m`.
pub fn side_rotation_matrix(jmax: HalfInt, side: Side, mut block: impl FnMut(HalfInt) -> DMatrix<C64>) -> SparseMatrix {
    let space = LinkSpace::new(jmax);
    let mut triplets = Vec::new();
    for j in jmax.spins_up_to() {
        let x = block(j);
        let d = j.dim();
        let off = LinkSpace::block_offset(j);
        for kp in 0..d {
            for km in 0..d {
                for k2 in 0..d {
                    // column state (kp, km); the acted-on index moves to k2
                    let (row, val) = match side {
                        Side::Plus => (off + k2 * d + km, x[(k2, kp)]),
                        Side::Minus => (off + kp * d + k2, x[(k2, km)]),
                    };
                    if val.norm() > 0.0 {
                        triplets.push((row, off + kp * d + km, val));
                    }
                }
            }
        }
    }
    SparseMatrix::from_triplets(space.dim(), space.dim(), triplets)
}

/// [`side_rotation_matrix`] as a local operator on `link`.
pub fn side_rotation(link: LinkId, jmax: HalfInt, side: Side, block: impl FnMut(HalfInt) -> DMatrix<C64>) -> LocalOp {
    LocalOp::new(vec![link], jmax, side_rotation_matrix(jmax, side, block))
}

/// Single-link matrix of `E±ᵃ`, `a ∈ {0, 1, 2}`.
pub fn electric_matrix(jmax: HalfInt, side: Side, a: usize) -> SparseMatrix {
    side_rotation_matrix(jmax, side, |j| spin_matrices(j)[a].transpose())
}

pub fn electric_field(link: LinkId, side: Side, a: usize, jmax: HalfInt) -> LocalOp {
    LocalOp::new(vec![link], jmax, electric_matrix(jmax, side, a))
}

/// Single-link matrix of `U_{αβ}` (indices 0 ↔ `+½`, 1 ↔ `−½`), with spin
/// transitions above `jmax` projected out.
pub fn holonomy_matrix(jmax: HalfInt, alpha: usize, beta: usize) -> SparseMatrix {
    let space = LinkSpace::new(jmax);
    let a = half_label(alpha);
    let b = half_label(beta);
    let h = HalfInt::HALF;
    let mut triplets = Vec::new();
    for (col, s) in space.states().iter().enumerate() {
        let mp = s.m_plus + a;
        let mm = s.m_minus - b;
        for jt in [s.j.twice() - 1, s.j.twice() + 1] {
            if jt < 0 || jt > jmax.twice() {
                continue;
            }
            let big = HalfInt::from_twice(jt);
            if !big.admits(mp) || !big.admits(mm) {
                continue;
            }
            let phase = parity_sign(s.j.int_diff(s.m_minus) + big.int_diff(mm));
            let norm = ((s.j.dim() as f64) / (big.dim() as f64)).sqrt();
            let v = phase * norm * cg(s.j, s.m_plus, h, a, big, mp) * cg(s.j, -s.m_minus, h, b, big, -mm);
            if v != 0.0 {
                let row = space
                    .index(crate::hilbert::LinkState { j: big, m_plus: mp, m_minus: mm })
                    .expect("target state lies in the truncated space");
                triplets.push((row, col, C64::new(v, 0.0)));
            }
        }
    }
    SparseMatrix::from_triplets(space.dim(), space.dim(), triplets)
}

pub fn link_holonomy(link: LinkId, alpha: usize, beta: usize, jmax: HalfInt) -> LocalOp {
    LocalOp::new(vec![link], jmax, holonomy_matrix(jmax, alpha, beta))
}

/// `U(l)` for a forward step, `U†(l)` for a backward one.
pub fn directed_holonomy(d: DirectedLink, jmax: HalfInt) -> OpMatrix {
    let u = OpMatrix::from_fn(|a, b| link_holonomy(d.link, a, b, jmax));
    if d.forward {
        u
    } else {
        u.dagger()
    }
}
