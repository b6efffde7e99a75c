//! SU(2) group elements, axis–angle labels and the adjoint map to SO(3).

use nalgebra::{Matrix2, Matrix3, Vector3};
use num_complex::Complex64 as C64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::RepError;

const FOUR_PI: f64 = 4.0 * std::f64::consts::PI;

/// Rotation axis (unit vector) with an angle in `[0, 4π)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxisAngle {
    axis: [f64; 3],
    angle: f64,
}

impl AxisAngle {
    /// Requires `‖axis‖ = 1` to within `1e-12`; the angle is wrapped into `[0, 4π)`.
    pub fn new(axis: [f64; 3], angle: f64) -> Result<Self, RepError> {
        let norm = axis.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > 1e-12 {
            return Err(RepError::AxisNotUnit(norm));
        }
        if !angle.is_finite() {
            return Err(RepError::NonFinite("angle"));
        }
        Ok(Self { axis, angle: angle.rem_euclid(FOUR_PI) })
    }

    /// Normalises a non-zero direction vector first.
    pub fn from_direction(dir: [f64; 3], angle: f64) -> Result<Self, RepError> {
        let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(norm > 1e-300) || !norm.is_finite() {
            return Err(RepError::AxisNotUnit(norm));
        }
        Self::new([dir[0] / norm, dir[1] / norm, dir[2] / norm], angle)
    }

    pub fn axis(&self) -> [f64; 3] {
        self.axis
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }
}

/// A 2×2 special unitary matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SU2Element(pub Matrix2<C64>);

impl SU2Element {
    pub fn identity() -> Self {
        Self(Matrix2::identity())
    }

    /// `g = cos(ω/2)·1 + i sin(ω/2) n·σ = exp(i ω n·σ/2)`.
    pub fn from_axis_angle(aa: &AxisAngle) -> Self {
        let [nx, ny, nz] = aa.axis;
        let (s, c) = (aa.angle / 2.0).sin_cos();
        let i = C64::i();
        Self(Matrix2::new(
            C64::new(c, s * nz),
            i * s * C64::new(nx, -ny),
            i * s * C64::new(nx, ny),
            C64::new(c, -s * nz),
        ))
    }

    /// Euler parametrisation `e^{-iασ₃/2} e^{-iβσ₂/2} e^{-iγσ₃/2}`.
    pub fn from_euler(alpha: f64, beta: f64, gamma: f64) -> Self {
        let rz = |t: f64| {
            Matrix2::new(C64::from_polar(1.0, -t / 2.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::from_polar(1.0, t / 2.0))
        };
        let (s, c) = (beta / 2.0).sin_cos();
        let ry = Matrix2::new(C64::new(c, 0.0), C64::new(-s, 0.0), C64::new(s, 0.0), C64::new(c, 0.0));
        Self(rz(alpha) * ry * rz(gamma))
    }

    /// Haar-random element from a uniformly distributed unit quaternion.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        use rand_distr_normal as normal;
        let q: [f64; 4] = std::array::from_fn(|_| normal(rng));
        let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        let [a0, a1, a2, a3] = q.map(|x| x / n);
        Self(Matrix2::new(C64::new(a0, a3), C64::new(a2, a1), C64::new(-a2, a1), C64::new(a0, -a3)))
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn mul(&self, other: &SU2Element) -> Self {
        Self(self.0 * other.0)
    }

    /// Recover an axis–angle label with angle in `[0, 2π]`.
    pub fn to_axis_angle(&self) -> AxisAngle {
        let m = &self.0;
        let c = ((m[(0, 0)] + m[(1, 1)]).re / 2.0).clamp(-1.0, 1.0);
        // i sin(ω/2) n·σ = (g - g†)/2
        let nz = ((m[(0, 0)] - m[(1, 1)]) / 2.0).im;
        let nx = ((m[(0, 1)] + m[(1, 0)]) / 2.0).im;
        let ny = ((m[(0, 1)] - m[(1, 0)]) / 2.0).re;
        let s = (nx * nx + ny * ny + nz * nz).sqrt();
        let angle = 2.0 * s.atan2(c);
        if s < 1e-300 {
            AxisAngle { axis: [0.0, 0.0, 1.0], angle: angle.rem_euclid(FOUR_PI) }
        } else {
            AxisAngle { axis: [nx / s, ny / s, nz / s], angle }
        }
    }
}

/// `cos(ω/2)·σ⁰ + i sin(ω/2) ω̂·σ`.
pub fn su2_from_axis_angle(aa: &AxisAngle) -> SU2Element {
    SU2Element::from_axis_angle(aa)
}

/// Box–Muller standard normal; keeps the dependency list to `rand` itself.
fn rand_distr_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Generators `Tᵃ = σᵃ/2` of the fundamental representation.
pub fn fundamental_generators() -> [Matrix2<C64>; 3] {
    let z = C64::new(0.0, 0.0);
    let h = C64::new(0.5, 0.0);
    let ih = C64::new(0.0, 0.5);
    [
        Matrix2::new(z, h, h, z),
        Matrix2::new(z, -ih, ih, z),
        Matrix2::new(h, z, z, -h),
    ]
}

/// `R^{ab}(g) = 2 Tr(Tᵃ g Tᵇ g†)`, the adjoint image of `g` in SO(3).
///
/// It satisfies `g (v·σ) g† = (R(g)ᵀ v)·σ`; for a rotation about `ẑ` by `ω`
/// it is the active rotation by `−ω` about the same axis.
pub fn adjoint_rotation(g: &SU2Element) -> Matrix3<f64> {
    let t = fundamental_generators();
    let gd = g.0.adjoint();
    Matrix3::from_fn(|a, b| 2.0 * (t[a] * g.0 * t[b] * gd).trace().re)
}

/// Apply `R` to a 3-vector.
pub fn rotate(r: &Matrix3<f64>, v: [f64; 3]) -> [f64; 3] {
    let w = r * Vector3::from(v);
    [w[0], w[1], w[2]]
}
