//! Product-rule quadrature for the normalised Haar measure on SU(2).

use super::halfint::HalfInt;
use super::su2::SU2Element;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Nodes and weights (summing to one) integrating `D^{j1}_{..} conj(D^{j2}_{..})`
/// exactly for `j1, j2 ≤ bandlimit`.
pub fn haar_quadrature(bandlimit: HalfInt) -> Vec<(SU2Element, f64)> {
    haar_quadrature_total(bandlimit + bandlimit)
}

/// Nodes and weights integrating any product of representation matrix
/// elements `D^{j1}(g) ⊗ ... ⊗ D^{jk}(g)` (or their conjugates) exactly when
/// `j1 + ... + jk ≤ total`.
///
/// Euler angles: `α ∈ [0, 2π)` and `γ ∈ [0, 4π)` use the trapezoid rule,
/// `cos β` uses Gauss–Legendre.
pub fn haar_quadrature_total(total: HalfInt) -> Vec<(SU2Element, f64)> {
    let two_b = total.twice().max(0) as usize;
    let n_alpha = two_b + 1;
    let n_gamma = 2 * two_b + 2;
    let n_beta = two_b / 2 + 2;
    let (xs, ws) = gauss_legendre(n_beta);
    let norm = 1.0 / (2.0 * n_alpha as f64 * n_gamma as f64);
    let mut out = Vec::with_capacity(n_alpha * n_beta * n_gamma);
    for ia in 0..n_alpha {
        let alpha = 2.0 * std::f64::consts::PI * ia as f64 / n_alpha as f64;
        for (x, w) in xs.iter().zip(&ws) {
            let beta = x.clamp(-1.0, 1.0).acos();
            for ig in 0..n_gamma {
                let gamma = 4.0 * std::f64::consts::PI * ig as f64 / n_gamma as f64;
                out.push((SU2Element::from_euler(alpha, beta, gamma), w * norm));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repkernel::{wigner_d, HalfInt};
    use num_complex::Complex64 as C64;

    #[test]
    fn legendre_rule_is_exact_for_polynomials() {
        let (x, w) = gauss_legendre(5);
        for p in 0..10 {
            let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(p)).sum();
            let want = if p % 2 == 1 { 0.0 } else { 2.0 / (p as f64 + 1.0) };
            assert!((s - want).abs() < 1e-14, "p = {p}");
        }
    }

    #[test]
    fn weights_sum_to_one() {
        let q = haar_quadrature(HalfInt::ONE);
        let s: f64 = q.iter().map(|(_, w)| w).sum();
        assert!((s - 1.0).abs() < 1e-13);
    }

    #[test]
    fn schur_orthogonality() {
        // ∫ D^j_{ab} conj(D^j'_{cd}) = δ δ δ / (2j+1)
        let q = haar_quadrature(HalfInt::THREE_HALVES);
        for tj in 0..=3 {
            for tjp in 0..=3 {
                let (j, jp) = (HalfInt::from_twice(tj), HalfInt::from_twice(tjp));
                let mut acc = vec![C64::new(0.0, 0.0); j.dim() * j.dim() * jp.dim() * jp.dim()];
                for (g, w) in &q {
                    let d = wigner_d(j, g);
                    let dp = wigner_d(jp, g);
                    let mut idx = 0;
                    for a in 0..j.dim() {
                        for b in 0..j.dim() {
                            for c in 0..jp.dim() {
                                for e in 0..jp.dim() {
                                    acc[idx] += d[(a, b)] * dp[(c, e)].conj() * *w;
                                    idx += 1;
                                }
                            }
                        }
                    }
                }
                let mut idx = 0;
                for a in 0..j.dim() {
                    for b in 0..j.dim() {
                        for c in 0..jp.dim() {
                            for e in 0..jp.dim() {
                                let want = if tj == tjp && a == c && b == e { 1.0 / j.dim() as f64 } else { 0.0 };
                                assert!((acc[idx] - C64::new(want, 0.0)).norm() < 1e-13);
                                idx += 1;
                            }
                        }
                    }
                }
            }
        }
    }
}
