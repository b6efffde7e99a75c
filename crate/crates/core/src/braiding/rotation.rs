//! Reading an SU(2) rotation out of a fitted 2×2 matrix, least-squares
//! fits of left-multiplying matrices, and loop winding numbers.

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64 as C64;
use serde::{Serialize, Serializer};

use crate::lattice::{DirectedLink, Dir, PlaquetteId, Site, TorusLattice};
use crate::repkernel::fundamental_generators;

fn serialize_matrix<S: Serializer>(m: &Matrix2<C64>, s: S) -> Result<S::Ok, S::Error> {
    let rows: Vec<Vec<[f64; 2]>> = (0..2).map(|i| (0..2).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect();
    rows.serialize(s)
}

fn serialize_complex<S: Serializer>(c: &C64, s: S) -> Result<S::Ok, S::Error> {
    [c.re, c.im].serialize(s)
}

/// A 2×2 matrix split into its nearest real multiple of an SU(2) element
/// `scale · (cos(ω/2) + i sin(ω/2) n̂·σ)` and the remainder.
#[derive(Clone, Debug, Serialize)]
pub struct ExtractedRotation {
    #[serde(serialize_with = "serialize_matrix")]
    pub matrix: Matrix2<C64>,
    #[serde(serialize_with = "serialize_matrix")]
    pub unitary: Matrix2<C64>,
    /// Non-negative weight of the SU(2) part.
    pub scale: f64,
    #[serde(serialize_with = "serialize_complex")]
    pub trace: C64,
    /// Rotation angle `ω ∈ [0, 2π]`.
    pub angle: f64,
    pub axis: [f64; 3],
    /// Frobenius norm of `matrix − scale · unitary`.
    pub residual: f64,
}

/// Projects onto the real span of `{1, iσ₁, iσ₂, iσ₃}` (orthogonal in the
/// real Frobenius product), then reads off angle and axis.
pub fn extract_rotation(m: &Matrix2<C64>) -> ExtractedRotation {
    let sigma = fundamental_generators().map(|t| t * C64::new(2.0, 0.0));
    let q0 = m.trace().re / 2.0;
    let q: [f64; 3] = std::array::from_fn(|k| (sigma[k] * m).trace().im / 2.0);
    let qn = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    let scale = (q0 * q0 + qn * qn).sqrt();
    let mut quat = Matrix2::identity() * C64::new(q0, 0.0);
    for k in 0..3 {
        quat += sigma[k] * C64::new(0.0, q[k]);
    }
    let unitary = if scale > 0.0 { quat / C64::new(scale, 0.0) } else { Matrix2::identity() };
    let axis = if qn > 1e-300 { q.map(|x| x / qn) } else { [0.0, 0.0, 1.0] };
    ExtractedRotation {
        matrix: *m,
        unitary,
        scale,
        trace: m.trace(),
        angle: 2.0 * qn.atan2(q0),
        axis,
        residual: (m - quat).norm(),
    }
}

/// Least-squares `D` in `F_{αβ} ≈ Σ_γ D_{αγ} W_{γβ}` over the given
/// columns `β`, for any objects with a Hermitian inner product.
pub fn fit_left_factor<T>(f: &[[T; 2]; 2], w: &[[T; 2]; 2], betas: &[usize], inner: impl Fn(&T, &T) -> C64) -> Matrix2<C64> {
    let mut gram = Matrix2::<C64>::zeros();
    for g in 0..2 {
        for h in 0..2 {
            gram[(g, h)] = betas.iter().map(|&b| inner(&w[g][b], &w[h][b])).sum();
        }
    }
    let inv = gram.try_inverse().unwrap_or_else(Matrix2::zeros);
    let mut d = Matrix2::zeros();
    for a in 0..2 {
        let rhs = Vector2::from_fn(|g, _| betas.iter().map(|&b| inner(&w[g][b], &f[a][b])).sum::<C64>());
        let row = inv * rhs;
        d[(a, 0)] = row[0];
        d[(a, 1)] = row[1];
    }
    d
}

/// Winding number of a contractible closed path around a plaquette centre,
/// summed over all periodic images; `None` if the path is open or winds
/// around the torus.
pub fn winding_number(lat: &TorusLattice, start: Site, path: &[DirectedLink], p: PlaquetteId) -> Option<i32> {
    if lat.walk(start, path) != Some(start) {
        return None;
    }
    let l = lat.size() as i64;
    let (mut x, mut y) = (start.x as i64, start.y as i64);
    // (x, y_from, y_to) of every vertical step in the lift
    let mut vertical = Vec::new();
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (x, x, y, y);
    for d in path {
        let s = if d.forward { 1 } else { -1 };
        match d.link.dir {
            Dir::X => x += s,
            Dir::Y => {
                vertical.push((x, y, y + s));
                y += s;
            }
        }
        xmin = xmin.min(x);
        xmax = xmax.max(x);
        ymin = ymin.min(y);
        ymax = ymax.max(y);
    }
    if (x, y) != (start.x as i64, start.y as i64) {
        return None;
    }
    let mut total = 0;
    let (px, py) = (p.base.x as i64, p.base.y as i64);
    for a in (xmin - px).div_euclid(l) - 1..=(xmax - px).div_euclid(l) + 1 {
        for b in (ymin - py).div_euclid(l) - 1..=(ymax - py).div_euclid(l) + 1 {
            // centre (cx + ½, cy + ½); count signed crossings of the ray to +x
            let (cx, cy) = (px + a * l, py + b * l);
            for &(vx, y0, y1) in &vertical {
                if vx > cx && y0.min(y1) == cy {
                    total += if y1 > y0 { 1 } else { -1 };
                }
            }
        }
    }
    Some(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repkernel::{su2_from_axis_angle, AxisAngle};

    #[test]
    fn extraction_recovers_scaled_rotation() {
        for omega in [0.0, 0.4, std::f64::consts::PI, 5.5, 2.0 * std::f64::consts::PI] {
            let aa = AxisAngle::from_direction([1.0, -2.0, 0.5], omega).unwrap();
            let g = su2_from_axis_angle(&aa).0 * C64::new(0.7, 0.0);
            let r = extract_rotation(&g);
            assert!((r.angle - omega).abs() < 1e-12, "{} vs {omega}", r.angle);
            assert!((r.scale - 0.7).abs() < 1e-12 && r.residual < 1e-12);
        }
    }

    #[test]
    fn least_squares_recovers_exact_left_factor() {
        let g = su2_from_axis_angle(&AxisAngle::from_direction([0.3, 0.1, 1.0], 1.3).unwrap()).0;
        let w = [[C64::new(1.0, 0.5), C64::new(-0.2, 0.0)], [C64::new(0.4, -1.0), C64::new(2.0, 0.3)]];
        let wm = Matrix2::from_fn(|i, j| w[i][j]);
        let fm = g * wm;
        let f = [[fm[(0, 0)], fm[(0, 1)]], [fm[(1, 0)], fm[(1, 1)]]];
        let d = fit_left_factor(&f, &w, &[0, 1], |a, b| a.conj() * b);
        assert!((d - g).norm() < 1e-12);
    }

    #[test]
    fn plaquette_boundary_winds_once() {
        let lat = TorusLattice::new(3).unwrap();
        let p = lat.plaquette(1, 2);
        let path = lat.plaquette_links(p);
        assert_eq!(winding_number(&lat, p.base, &path, p), Some(1));
        assert_eq!(winding_number(&lat, p.base, &path, lat.plaquette(0, 2)), Some(0));
        let rev: Vec<_> = path.iter().rev().map(|d| DirectedLink { link: d.link, forward: !d.forward }).collect();
        assert_eq!(winding_number(&lat, p.base, &rev, p), Some(-1));
        assert_eq!(winding_number(&lat, lat.site(0, 0), &lat.noncontractible_loop(Dir::X, lat.site(0, 0)), p), None);
    }
}
