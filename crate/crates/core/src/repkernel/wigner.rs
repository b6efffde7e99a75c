//! Spin-j representation matrices.
//!
//! Rows and columns are indexed by position `k = j - m`, i.e. the magnetic
//! label decreases along the diagonal.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::halfint::HalfInt;
use super::su2::SU2Element;

fn factorial(n: i32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * f64::from(k))
}

fn binomial(n: i32, k: i32) -> f64 {
    if k < 0 || k > n {
        0.0
    } else {
        factorial(n) / (factorial(k) * factorial(n - k))
    }
}

/// Spin matrices `(Jˣ, Jʸ, Jᶻ)` for spin `j` in the Condon–Shortley phase.
pub fn spin_matrices(j: HalfInt) -> [DMatrix<C64>; 3] {
    let d = j.dim();
    let jv = j.value();
    let mut jp = DMatrix::<C64>::zeros(d, d);
    for k in 1..d {
        // column k has m = j - k, raised into row k-1
        let m = jv - k as f64;
        jp[(k - 1, k)] = C64::new(((jv - m) * (jv + m + 1.0)).sqrt(), 0.0);
    }
    let jm = jp.adjoint();
    let jx = (&jp + &jm) * C64::new(0.5, 0.0);
    let jy = (&jp - &jm) * C64::new(0.0, -0.5);
    let jz = DMatrix::from_fn(d, d, |r, c| if r == c { C64::new(jv - r as f64, 0.0) } else { C64::new(0.0, 0.0) });
    [jx, jy, jz]
}

/// `D^j(g)` with entries `D_{m m'} = <j m| g |j m'>`, built from the action of
/// `g` on degree-`2j` polynomials in two variables.
pub fn wigner_d(j: HalfInt, g: &SU2Element) -> DMatrix<C64> {
    let d = j.dim();
    let tj = j.twice();
    let (a, b) = (g.0[(0, 0)], g.0[(0, 1)]);
    let (c, e) = (g.0[(1, 0)], g.0[(1, 1)]);
    DMatrix::from_fn(d, d, |row, col| {
        // j + m = tj/2*2 - row ... in integer form: j+m = (tj - 2row)/2 + tj/2
        let jpm = tj - row as i32; // 2j - row = j + m  (since m = j - row)
        let jmm = row as i32; // j - m
        let p = tj - col as i32; // j + m'
        let q = col as i32; // j - m'
        let mut acc = C64::new(0.0, 0.0);
        for k in 0..=p {
            let l = jpm - k;
            if l < 0 || l > q {
                continue;
            }
            acc += binomial(p, k)
                * binomial(q, l)
                * a.powi(k)
                * c.powi(p - k)
                * b.powi(l)
                * e.powi(q - l);
        }
        acc * (factorial(jpm) * factorial(jmm) / (factorial(p) * factorial(q))).sqrt()
    })
}

/// Wigner's small-d matrix `d^j_{m m'}(β) = <j m| e^{-iβJʸ} |j m'>`.
pub fn small_d(j: HalfInt, beta: f64) -> DMatrix<f64> {
    let d = j.dim();
    let tj = j.twice();
    let (s, c) = (beta / 2.0).sin_cos();
    DMatrix::from_fn(d, d, |row, col| {
        let jpm = tj - row as i32;
        let jmm = row as i32;
        let jpmp = tj - col as i32;
        let jmmp = col as i32;
        // m - m' = col - row
        let dm = col as i32 - row as i32;
        let kmin = 0.max(-dm);
        let kmax = jpmp.min(jmm);
        let num = (factorial(jpm) * factorial(jmm) * factorial(jpmp) * factorial(jmmp)).sqrt();
        let mut acc = 0.0;
        for k in kmin..=kmax {
            let sign = if (k + dm).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            let den = factorial(jpmp - k) * factorial(k) * factorial(dm + k) * factorial(jmm - k);
            acc += sign * num / den * c.powi(jpmp + jmm - 2 * k) * s.powi(dm + 2 * k);
        }
        acc
    })
}

/// The generators `Tᵃ` in spin `j`, identical to [`spin_matrices`].
pub fn generators(j: HalfInt) -> [DMatrix<C64>; 3] {
    spin_matrices(j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repkernel::su2::AxisAngle;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn expm(a: &DMatrix<C64>) -> DMatrix<C64> {
        // plain Taylor series with scaling; matrices here are tiny
        let n = a.nrows();
        let s = 8;
        let scaled = a / C64::new(f64::from(1 << s), 0.0);
        let mut term = DMatrix::<C64>::identity(n, n);
        let mut sum = term.clone();
        for k in 1..30 {
            term = &term * &scaled / C64::new(k as f64, 0.0);
            sum += &term;
        }
        for _ in 0..s {
            sum = &sum * &sum;
        }
        sum
    }

    #[test]
    fn spin_half_reproduces_group_element() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = SU2Element::random(&mut rng);
        let d = wigner_d(HalfInt::HALF, &g);
        for r in 0..2 {
            for c in 0..2 {
                assert!((d[(r, c)] - g.0[(r, c)]).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn homomorphism_and_unitarity() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for tj in 0..=6 {
            let j = HalfInt::from_twice(tj);
            let g = SU2Element::random(&mut rng);
            let h = SU2Element::random(&mut rng);
            let dg = wigner_d(j, &g);
            let dh = wigner_d(j, &h);
            let dgh = wigner_d(j, &g.mul(&h));
            assert!((&dg * &dh - dgh).norm() < 1e-12);
            let n = j.dim();
            assert!((&dg * dg.adjoint() - DMatrix::identity(n, n)).norm() < 1e-12);
        }
    }

    #[test]
    fn exponential_of_generators() {
        let aa = AxisAngle::from_direction([0.2, -0.7, 0.4], 2.3).unwrap();
        let g = SU2Element::from_axis_angle(&aa);
        for tj in 0..=5 {
            let j = HalfInt::from_twice(tj);
            let [jx, jy, jz] = spin_matrices(j);
            let n = aa.axis();
            let gen = (jx * C64::new(n[0], 0.0) + jy * C64::new(n[1], 0.0) + jz * C64::new(n[2], 0.0))
                * C64::new(0.0, aa.angle());
            assert!((expm(&gen) - wigner_d(j, &g)).norm() < 1e-11, "j = {j}");
        }
    }

    #[test]
    fn small_d_matches_rotation_about_y() {
        for tj in 0..=6 {
            let j = HalfInt::from_twice(tj);
            let beta = 0.77;
            let g = SU2Element::from_axis_angle(&AxisAngle::new([0.0, 1.0, 0.0], -beta).unwrap());
            let full = wigner_d(j, &g);
            let small = small_d(j, beta);
            for r in 0..j.dim() {
                for c in 0..j.dim() {
                    assert!((full[(r, c)] - C64::new(small[(r, c)], 0.0)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn spin_algebra() {
        for tj in 1..=4 {
            let j = HalfInt::from_twice(tj);
            let [x, y, z] = spin_matrices(j);
            let comm = &x * &y - &y * &x;
            assert!((comm - &z * C64::i()).norm() < 1e-13);
            let cas = &x * &x + &y * &y + &z * &z;
            let jv = j.value();
            assert!((cas - DMatrix::identity(j.dim(), j.dim()) * C64::new(jv * (jv + 1.0), 0.0)).norm() < 1e-12);
        }
    }
}
