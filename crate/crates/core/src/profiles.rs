//! Self-similar profiles near the singular point.
//!
//! With ζ = v/(9x)^{1/3}, the stationary solutions of v∂ₓG = ∂ᵥᵥG homogeneous
//! of degree 3γ under (x, v) → (λ³x, λv) are G_γ = x^γ Λ_γ(ζ), where
//! Λ_γ(ζ) = U(−γ, 2/3, −ζ³). The adjoint profiles F_β = x^β Φ_β(y) solve
//! v∂ₓF + ∂ᵥᵥF = 0 with y = v³/(9x) and Φ_β(y) = U(−β, 2/3, y). Note the
//! opposite sign conventions: G uses −ζ³, F uses +ζ³.

use crate::error::{Error, Result};
use crate::exponents::{k_gamma, RestitutionConstants, NINE_TWO_THIRDS};
use crate::quad;
use crate::specfun::{self, rgamma, tricomi_u};
use serde::{Deserialize, Serialize};

const TWO_THIRDS: f64 = 2.0 / 3.0;

/// 9^{1/3}.
pub const NINE_CUBE_ROOT: f64 = 2.080_083_823_051_904;

/// The phase-space point together with both similarity variables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimilarityPoint {
    pub x: f64,
    pub v: f64,
    /// ζ = v/(9x)^{1/3}.
    pub zeta: f64,
    /// y = v³/(9x), the argument of the adjoint profile.
    pub y: f64,
}

impl SimilarityPoint {
    pub fn new(x: f64, v: f64) -> Result<Self> {
        if !(x > 0.0 && x.is_finite() && v.is_finite()) {
            return Err(Error::Domain(format!(
                "similarity variables need x > 0, got (x, v) = ({x}, {v})"
            )));
        }
        Ok(Self {
            x,
            v,
            zeta: v / (9.0 * x).cbrt(),
            y: v * v * v / (9.0 * x),
        })
    }

    /// Argument −ζ³ of U in Λ_γ.
    pub fn g_argument(&self) -> f64 {
        -self.zeta.powi(3)
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma.is_finite() && gamma > -5.0 / 6.0 - 1e-12 && gamma <= 1.0 / 6.0 + 1e-12 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "profile exponent must lie in (-5/6, 1/6], got {gamma}"
        )))
    }
}

/// Λ_γ(ζ) = U(−γ, 2/3, −ζ³).
pub fn lambda_gamma(gamma: f64, zeta: f64) -> Result<f64> {
    check_gamma(gamma)?;
    tricomi_u(-gamma, TWO_THIRDS, -zeta * zeta * zeta)
}

/// Λ′_γ(ζ) = −3γ ζ² U(1 − γ, 5/3, −ζ³).
pub fn lambda_gamma_prime(gamma: f64, zeta: f64) -> Result<f64> {
    check_gamma(gamma)?;
    let a = -gamma;
    if a == 0.0 {
        return Ok(0.0);
    }
    if zeta == 0.0 {
        // ζ²U(a+1, 5/3, −ζ³) → Γ(2/3)/Γ(a+1).
        return Ok(3.0 * a * specfun::gamma(TWO_THIRDS)? * rgamma(a + 1.0));
    }
    Ok(3.0 * a * zeta * zeta * tricomi_u(a + 1.0, 5.0 / 3.0, -zeta * zeta * zeta)?)
}

/// Λ₋₂/₃(ζ) from its integral representation 3∫_{−∞}^ζ exp(s³ − ζ³) ds,
/// written as 3∫₀^∞ exp(−u(3ζ² − 3ζu + u²)) du.
pub fn lambda_m23_oracle(zeta: f64) -> Result<f64> {
    let z = zeta;
    let est = quad::gauss_kronrod_to_infinity(
        |u| (-u * (3.0 * z * z - 3.0 * z * u + u * u)).exp(),
        0.0,
        1e-15,
        1e-13,
    )?;
    Ok(3.0 * est.value)
}

/// G_γ(x, v) = x^γ Λ_γ(v/(9x)^{1/3}).
pub fn g_gamma(gamma: f64, x: f64, v: f64) -> Result<f64> {
    let p = SimilarityPoint::new(x, v)?;
    Ok(x.powf(gamma) * lambda_gamma(gamma, p.zeta)?)
}

/// ∂ᵥG_γ(x, v) = x^{γ−1/3} 9^{−1/3} Λ′_γ(ζ).
pub fn g_gamma_dv(gamma: f64, x: f64, v: f64) -> Result<f64> {
    let p = SimilarityPoint::new(x, v)?;
    Ok(x.powf(gamma - 1.0 / 3.0) / NINE_CUBE_ROOT * lambda_gamma_prime(gamma, p.zeta)?)
}

/// lim_{x→0⁺} G_γ(x, v): |v|^{3γ}/9^γ for v < 0 and K_γ v^{3γ}/9^γ for v > 0.
pub fn boundary_value_g(gamma: f64, v: f64) -> f64 {
    let base = v.abs().powf(3.0 * gamma) / 9f64.powf(gamma);
    if v < 0.0 {
        base
    } else {
        k_gamma(gamma) * base
    }
}

/// Φ_β(y) = U(−β, 2/3, y).
pub fn phi_beta(beta: f64, y: f64) -> Result<f64> {
    tricomi_u(-beta, TWO_THIRDS, y)
}

/// F_β(x, v) = x^β Φ_β(v³/(9x)) with β = β(r).
pub fn f_beta(constants: &RestitutionConstants, x: f64, v: f64) -> Result<f64> {
    let p = SimilarityPoint::new(x, v)?;
    Ok(x.powf(constants.beta) * phi_beta(constants.beta, p.y)?)
}

/// Coefficient of the homogeneous part of the supersolution,
/// 9^{2/3}(1 − r²)/(2(2 + r²)), fixed by S(0, −v) = S(0, rv).
pub fn supersolution_c2(r: f64) -> f64 {
    NINE_TWO_THIRDS * (1.0 - r * r) / (2.0 * (2.0 + r * r))
}

/// Q(z) = z²/2 + c₂ U(−2/3, 2/3, z³/9).
pub fn supersolution_q(constants: &RestitutionConstants, z: f64) -> Result<f64> {
    let c2 = supersolution_c2(constants.r);
    let u = if c2 == 0.0 {
        0.0
    } else {
        tricomi_u(-TWO_THIRDS, TWO_THIRDS, z * z * z / 9.0)?
    };
    Ok(0.5 * z * z + c2 * u)
}

/// S(x, v) = x^{2/3} Q(v/x^{1/3}), a solution of ∂ᵥᵥS + v∂ₓS = 1 satisfying
/// the wall condition S(0, −v) = S(0, rv).
pub fn supersolution_s(constants: &RestitutionConstants, x: f64, v: f64) -> Result<f64> {
    let r = constants.r;
    if r > 1.0 {
        return Err(Error::Domain(format!(
            "supersolution requires r <= 1, got {r}"
        )));
    }
    let p = SimilarityPoint::new(x, v)?;
    let c2 = supersolution_c2(r);
    if c2 == 0.0 {
        return Ok(0.5 * v * v);
    }
    Ok(0.5 * v * v + c2 * x.powf(TWO_THIRDS) * tricomi_u(-TWO_THIRDS, TWO_THIRDS, p.y)?)
}

/// First derivative by Richardson-extrapolated central differences
/// (error O(h⁴)).
pub fn richardson_first<F: Fn(f64) -> Result<f64>>(f: F, x: f64, h: f64) -> Result<f64> {
    let d = |h: f64| -> Result<f64> { Ok((f(x + h)? - f(x - h)?) / (2.0 * h)) };
    let (d1, d2) = (d(h)?, d(0.5 * h)?);
    Ok((4.0 * d2 - d1) / 3.0)
}

/// Second derivative by Richardson-extrapolated central differences
/// (error O(h⁴)).
pub fn richardson_second<F: Fn(f64) -> Result<f64>>(f: F, x: f64, h: f64) -> Result<f64> {
    let f0 = f(x)?;
    let d = |h: f64| -> Result<f64> { Ok((f(x + h)? - 2.0 * f0 + f(x - h)?) / (h * h)) };
    let (d1, d2) = (d(h)?, d(0.5 * h)?);
    Ok((4.0 * d2 - d1) / 3.0)
}

/// The exponent selecting one of the two self-similar solutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProfileExponent {
    /// γ = −2/3, the profile carrying a nonzero flux into the origin.
    MinusTwoThirds,
    /// γ = α(r), the flux-free profile.
    Alpha,
}

impl ProfileExponent {
    pub fn value(self, constants: &RestitutionConstants) -> f64 {
        match self {
            Self::MinusTwoThirds => -TWO_THIRDS,
            Self::Alpha => constants.alpha,
        }
    }
}

/// Which function a [`SelfSimilarProfile`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProfileKind {
    /// G_γ, a stationary solution of the forward equation.
    Forward,
    /// F_β, a stationary solution of the adjoint equation.
    Adjoint,
    /// The explicit supersolution S.
    Supersolution,
}

/// An immutable profile evaluator bound to one restitution coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelfSimilarProfile {
    pub kind: ProfileKind,
    /// Homogeneity exponent: γ for G, β for F, 2/3 for S.
    pub gamma: f64,
    pub constants: RestitutionConstants,
    /// Supersolution coefficient c₂ for this r.
    pub c2: f64,
}

impl SelfSimilarProfile {
    pub fn forward(constants: RestitutionConstants, exponent: ProfileExponent) -> Self {
        Self {
            kind: ProfileKind::Forward,
            gamma: exponent.value(&constants),
            c2: supersolution_c2(constants.r),
            constants,
        }
    }

    pub fn adjoint(constants: RestitutionConstants) -> Self {
        Self {
            kind: ProfileKind::Adjoint,
            gamma: constants.beta,
            c2: supersolution_c2(constants.r),
            constants,
        }
    }

    pub fn supersolution(constants: RestitutionConstants) -> Self {
        Self {
            kind: ProfileKind::Supersolution,
            gamma: TWO_THIRDS,
            c2: supersolution_c2(constants.r),
            constants,
        }
    }

    pub fn value(&self, x: f64, v: f64) -> Result<f64> {
        match self.kind {
            ProfileKind::Forward => g_gamma(self.gamma, x, v),
            ProfileKind::Adjoint => f_beta(&self.constants, x, v),
            ProfileKind::Supersolution => supersolution_s(&self.constants, x, v),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::critical_r;
    use crate::specfun::gamma;
    use approx::assert_relative_eq;

    const M23: f64 = -TWO_THIRDS;

    #[test]
    fn lambda_golden_values() {
        assert_relative_eq!(lambda_gamma(M23, -3.0).unwrap(), 0.108_522_197_045_274_96, max_relative = 1e-12);
        assert_relative_eq!(lambda_m23_oracle(-3.0).unwrap(), 0.108_522_197_045_274_96, max_relative = 1e-11);
        assert_eq!(lambda_gamma(0.0, 2.3).unwrap(), 1.0);
    }

    #[test]
    fn lambda_matches_integral_oracle() {
        for z in [-3.0, 0.0, 1.0, 3.0] {
            assert_relative_eq!(lambda_gamma(M23, z).unwrap(), lambda_m23_oracle(z).unwrap(), max_relative = 1e-8);
        }
    }

    #[test]
    fn lambda_slope_at_origin() {
        assert_relative_eq!(lambda_gamma_prime(M23, 0.0).unwrap(), 3.0, max_relative = 1e-13);
        let fd = richardson_first(|z| lambda_gamma(M23, z), 0.0, 1e-3).unwrap();
        assert!((fd - 3.0).abs() < 1e-6);
    }

    #[test]
    fn lambda_prime_matches_difference_quotient() {
        for g in [M23, -0.75, -0.3, 0.1] {
            for z in [-4.0f64, -1.3, -1e-4, 0.7, 2.5, 6.0] {
                let h = 1e-4 * (1.0 + z.abs());
                let fd = (lambda_gamma(g, z + h).unwrap() - lambda_gamma(g, z - h).unwrap()) / (2.0 * h);
                let an = lambda_gamma_prime(g, z).unwrap();
                assert!((fd - an).abs() < 1e-6 * (1.0 + an.abs()), "γ={g} ζ={z}: {fd} vs {an}");
            }
        }
    }

    #[test]
    fn lambda_tails() {
        let z: f64 = -20.0;
        assert!((lambda_gamma(M23, z).unwrap() * z * z - 1.0).abs() < 1e-2);
        assert!((lambda_m23_oracle(z).unwrap() * z * z - 1.0).abs() < 1e-2);
        let g = -0.3;
        let z: f64 = 200.0;
        assert_relative_eq!(lambda_gamma(g, z).unwrap(), k_gamma(g) * z.powf(3.0 * g), max_relative = 1e-4);
    }

    #[test]
    fn g_wall_limit_and_condition() {
        let c = RestitutionConstants::new(0.1).unwrap();
        for g in [M23, c.alpha] {
            let eps = 1e-9;
            let left = g_gamma(g, eps, -1.0).unwrap();
            assert!((left / boundary_value_g(g, -1.0) - 1.0).abs() < 1e-3);
            let right = g_gamma(g, eps, c.r).unwrap();
            assert!((left - c.r * c.r * right).abs() / left < 1e-3);
        }
    }

    #[test]
    fn g_homogeneity() {
        let g = RestitutionConstants::new(0.1).unwrap().alpha;
        for (x, v) in [(0.3, -0.4), (1.2, 0.9), (0.05, 0.0)] {
            let base = g_gamma(g, x, v).unwrap();
            assert_relative_eq!(g_gamma(g, 8.0 * x, 2.0 * v).unwrap(), 2f64.powf(3.0 * g) * base, max_relative = 1e-10);
            assert_relative_eq!(g_gamma(g, x / 8.0, v / 2.0).unwrap(), 0.5f64.powf(3.0 * g) * base, max_relative = 1e-10);
        }
    }

    #[test]
    fn f_beta_wall_condition_and_growth() {
        let c = RestitutionConstants::new(0.1).unwrap();
        let eps = 1e-9;
        let a = f_beta(&c, eps, c.r).unwrap();
        let b = f_beta(&c, eps, -1.0).unwrap();
        assert!((a - b).abs() / b < 1e-3);
        let y: f64 = 1e6;
        assert!((phi_beta(c.beta, y).unwrap() / y.powf(c.beta) - 1.0).abs() < 1e-3);
        let crit = RestitutionConstants::new(critical_r()).unwrap();
        assert_eq!(f_beta(&crit, 0.4, -0.7).unwrap(), 1.0);
    }

    #[test]
    fn supersolution_elastic_case() {
        let c = RestitutionConstants::new(1.0).unwrap();
        for (x, v) in [(0.2, -1.5), (3.0, 0.4)] {
            assert_eq!(supersolution_s(&c, x, v).unwrap(), 0.5 * v * v);
        }
    }

    #[test]
    fn supersolution_center_value_is_negative() {
        let c = RestitutionConstants::new(0.5).unwrap();
        let q0 = supersolution_q(&c, 0.0).unwrap();
        let want = supersolution_c2(0.5) * gamma(1.0 / 3.0).unwrap() / gamma(-1.0 / 3.0).unwrap();
        assert_relative_eq!(q0, want, max_relative = 1e-12);
        assert!(q0 < 0.0);
    }

    #[test]
    fn supersolution_wall_condition() {
        for r in [0.1, 0.3, 0.5, 0.9] {
            let c = RestitutionConstants::new(r).unwrap();
            let eps = 1e-9;
            let ratio = supersolution_s(&c, eps, -1.0).unwrap() / supersolution_s(&c, eps, r).unwrap();
            assert!((ratio - 1.0).abs() < 1e-3, "r = {r}: {ratio}");
        }
        let c = RestitutionConstants::new(2.0).unwrap();
        assert!(supersolution_s(&c, 1.0, 1.0).is_err());
    }

    #[test]
    fn similarity_point_fields() {
        let p = SimilarityPoint::new(0.3, -0.8).unwrap();
        assert_relative_eq!(p.zeta.powi(3), p.y, max_relative = 1e-14);
        assert_relative_eq!(p.g_argument(), -p.y, max_relative = 1e-14);
        assert!(SimilarityPoint::new(0.0, 1.0).is_err());
    }
}
