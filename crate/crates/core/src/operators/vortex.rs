//! Vortex-pair operators `Σ_ω(p₂, p₁)` on horizontal ladder strips.
//!
//! Tier 1 (one rung) is the exact rotation `D^j(ω̂, ω)ᵀ` of the rung's `m₊`
//! index. Tier 2 is the ordered product `exp(X₀) exp(X₁) …` over rungs with
//! `X_s = iω Σ_a ω̂ᵃ_s E₊ᵃ(s)` and operator-valued axes from the parallel
//! transport `ω̂_{h+1} = R(U_B†(h) W(h)) ω̂_h`, axis factors to the left.

use nalgebra::Matrix2;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::link::{directed_holonomy, electric_field, side_rotation};
use super::plaquette::plaquette_holonomy;
use super::{OpMatrix, OperatorError, Side};
use crate::hilbert::{local_expm, HilbertError, LocalOp, Operator, StateVector};
use crate::lattice::{DirectedLink, LadderStrip, TorusLattice};
use crate::repkernel::{fundamental_generators, su2_from_axis_angle, wigner_d, AxisAngle, HalfInt};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Tier {
    One,
    Two,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VortexSpec {
    pub strip: LadderStrip,
    pub axis_angle: AxisAngle,
    pub tier: Tier,
}

/// Operator-valued rotation axes `ω̂_s`, one `[ω̂¹, ω̂², ω̂³]` per rung.
pub fn transported_axes(lat: &TorusLattice, strip: &LadderStrip, axis: [f64; 3], jmax: HalfInt) -> Vec<[LocalOp; 3]> {
    let t = fundamental_generators();
    let mut axes = vec![axis.map(|x| LocalOp::scalar(jmax, C64::new(x, 0.0)))];
    for h in 0..strip.rails.len() {
        let ub = directed_holonomy(DirectedLink { link: strip.rails[h], forward: true }, jmax);
        let m: OpMatrix = ub.dagger().mul(&plaquette_holonomy(lat, strip.middle[h], jmax));
        // products M_{jk} (M_{il})†, indexed [j][k][i][l]
        let md = m.map(LocalOp::adjoint);
        let mut prod: Vec<LocalOp> = Vec::with_capacity(16);
        for j in 0..2 {
            for k in 0..2 {
                for i in 0..2 {
                    for l in 0..2 {
                        prod.push(m.get(j, k).mul(md.get(i, l)));
                    }
                }
            }
        }
        let prev = axes.last().unwrap();
        let next: [LocalOp; 3] = std::array::from_fn(|a| {
            let mut acc = LocalOp::zero(jmax);
            for (b, wb) in prev.iter().enumerate() {
                let mut r = LocalOp::zero(jmax);
                for j in 0..2 {
                    for k in 0..2 {
                        for i in 0..2 {
                            for l in 0..2 {
                                let c = t[a][(i, j)] * t[b][(k, l)] * 2.0;
                                if c.norm() > 0.0 {
                                    r = r.axpy(c, &prod[((j * 2 + k) * 2 + i) * 2 + l]);
                                }
                            }
                        }
                    }
                }
                acc = acc.add(&r.mul(wb));
            }
            acc
        });
        axes.push(next);
    }
    axes
}

/// `Σ` as an ordered list of factors together with its exact inverse.
#[derive(Clone, Debug)]
pub struct VortexOperator {
    pub spec: VortexSpec,
    pub jmax: HalfInt,
    /// `ω̂_s` per rung.
    pub axes: Vec<[LocalOp; 3]>,
    /// `X_s` per rung (for `s = 0` the closed form is used instead).
    pub generators: Vec<LocalOp>,
    factors: Vec<Operator>,
    inverse_factors: Vec<Operator>,
    tol: f64,
}

pub fn vortex_operator(
    lat: &TorusLattice,
    spec: &VortexSpec,
    jmax: HalfInt,
    tol: f64,
) -> Result<VortexOperator, OperatorError> {
    if spec.tier == Tier::One && spec.strip.length != 1 {
        return Err(OperatorError::TierMismatch(spec.strip.length));
    }
    if tol <= 0.0 {
        return Err(OperatorError::Hilbert(HilbertError::Invalid("tolerance must be positive".into())));
    }
    let omega = spec.axis_angle.angle();
    let axis = spec.axis_angle.axis();
    let g = su2_from_axis_angle(&spec.axis_angle);
    let ginv = g.inverse();
    let rung0 = spec.strip.rungs[0];
    let first = side_rotation(rung0, jmax, Side::Plus, |j| wigner_d(j, &g).transpose());
    let first_inv = side_rotation(rung0, jmax, Side::Plus, |j| wigner_d(j, &ginv).transpose());
    let axes = match spec.tier {
        Tier::One => vec![axis.map(|x| LocalOp::scalar(jmax, C64::new(x, 0.0)))],
        Tier::Two => transported_axes(lat, &spec.strip, axis, jmax),
    };
    let mut generators = Vec::new();
    for (s, ax) in axes.iter().enumerate() {
        let rung = spec.strip.rungs[s];
        let mut x = LocalOp::zero(jmax);
        for (a, w) in ax.iter().enumerate() {
            x = x.add(&w.mul(&electric_field(rung, Side::Plus, a, jmax)));
        }
        generators.push(x.scale(C64::new(0.0, omega)));
    }
    let mut factors = vec![Operator::from(first)];
    let mut inverse_factors = vec![Operator::from(first_inv)];
    for x in generators.iter().skip(1) {
        factors.push(Operator::exp(Operator::from(x.clone()), tol));
        inverse_factors.insert(0, Operator::exp(Operator::from(x.scale(C64::new(-1.0, 0.0))), tol));
    }
    Ok(VortexOperator { spec: spec.clone(), jmax, axes, generators, factors, inverse_factors, tol })
}

impl VortexOperator {
    /// `Σ = exp(X₀) exp(X₁) …`.
    pub fn operator(&self) -> Operator {
        Operator::product(self.factors.clone())
    }

    /// `Σ⁻¹ = … exp(−X₁) exp(−X₀)`.
    pub fn inverse(&self) -> Operator {
        Operator::product(self.inverse_factors.clone())
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector, HilbertError> {
        self.operator().apply(v)
    }

    pub fn apply_inverse(&self, v: &StateVector) -> Result<StateVector, HilbertError> {
        self.inverse().apply(v)
    }

    /// The fixed base rotation `D^{1/2}(ω̂₀, ω)`.
    pub fn base_rotation(&self) -> Matrix2<C64> {
        su2_from_axis_angle(&self.spec.axis_angle).0
    }

    /// Collapse `Σ` and `Σ⁻¹` into local operators on the strip support;
    /// tier-2 factors are exponentiated by scaling and squaring.
    pub fn to_local(&self) -> (LocalOp, LocalOp) {
        let collapse = |ops: &[Operator]| {
            let mut acc = LocalOp::identity(self.jmax);
            for o in ops {
                let f = match o {
                    Operator::Exp { generator, .. } => {
                        local_expm(&generator.to_local(self.jmax).expect("generator is local"), self.tol * 1e-2)
                    }
                    other => other.to_local(self.jmax).expect("factor is local"),
                };
                acc = acc.mul(&f);
            }
            acc
        };
        (collapse(&self.factors), collapse(&self.inverse_factors))
    }

    /// `‖Σ†Σ v − v‖` for a given vector.
    pub fn unitarity_defect(&self, v: &StateVector) -> Result<f64, HilbertError> {
        let sv = self.apply(v)?;
        let back = self.operator().adjoint().apply(&sv)?;
        Ok(back.sub(v)?.norm())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::link_holonomy;

    fn spec(lat: &TorusLattice, omega: f64, tier: Tier, p2x: isize) -> VortexSpec {
        VortexSpec {
            strip: lat.ladder_strip(lat.plaquette(0, 0), lat.plaquette(p2x, 0)).unwrap(),
            axis_angle: AxisAngle::from_direction([0.2, 0.7, -0.4], omega).unwrap(),
            tier,
        }
    }

    #[test]
    fn tier_one_requires_a_single_rung() {
        let lat = TorusLattice::new(3).unwrap();
        let err = vortex_operator(&lat, &spec(&lat, 1.0, Tier::One, 2), HalfInt::HALF, 1e-12).unwrap_err();
        assert_eq!(err, OperatorError::TierMismatch(2));
    }

    #[test]
    fn tier_one_rotates_the_rung() {
        let lat = TorusLattice::new(2).unwrap();
        let j = HalfInt::ONE;
        for omega in [0.0, 1.1, std::f64::consts::TAU] {
            let v = vortex_operator(&lat, &spec(&lat, omega, Tier::One, 1), j, 1e-12).unwrap();
            let (s, sinv) = v.to_local();
            let rung = v.spec.strip.rungs[0];
            let u = OpMatrix::from_fn(|a, b| link_holonomy(rung, a, b, j));
            let conj = u.map(|x| s.mul(x).mul(&sinv));
            assert!(conj.sub(&u.left_mul(&v.base_rotation())).max_abs() < 1e-12);
            assert!(s.mul(&sinv).sub(&LocalOp::identity(j).embed(s.links())).max_abs() < 1e-12);
        }
    }

    #[test]
    fn tier_two_factors_invert() {
        let lat = TorusLattice::new(3).unwrap();
        let j = HalfInt::HALF;
        let v = vortex_operator(&lat, &spec(&lat, 0.9, Tier::Two, 2), j, 1e-12).unwrap();
        assert_eq!(v.axes.len(), 2);
        let (s, sinv) = v.to_local();
        let id = LocalOp::identity(j).embed(s.links());
        assert!(s.mul(&sinv).sub(&id).max_abs() < 1e-9);
    }
}
