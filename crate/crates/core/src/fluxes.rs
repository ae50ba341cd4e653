//! Flux identities of the self-similar profiles, evaluated by quadrature so
//! they can be checked against their closed forms.

use crate::error::{Error, Result};
use crate::exponents::{alpha_of_r, k_gamma, RestitutionConstants, NINE_TWO_THIRDS, PI_OVER_SQRT3};
use crate::profiles::{g_gamma, g_gamma_dv, lambda_gamma};
use crate::quad;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

const TWO_THIRDS: f64 = 2.0 / 3.0;

/// The excised rectangle R_{δ,b} = {0 ≤ x ≤ bδ³, −δ ≤ v ≤ rδ}.
///
/// It is invariant under the bounce map: a particle leaving the wall from
/// inside with velocity ≤ rδ arrived with velocity ≥ −δ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExcisionDomain {
    pub delta: f64,
    pub b: f64,
    pub r: f64,
}

impl ExcisionDomain {
    pub fn new(delta: f64, b: f64, r: f64) -> Result<Self> {
        if !(delta > 0.0 && b > 0.0 && r > 0.0) || !(delta.is_finite() && b.is_finite() && r.is_finite()) {
            return Err(Error::Domain(format!(
                "excision domain needs positive delta, b, r; got ({delta}, {b}, {r})"
            )));
        }
        Ok(Self { delta, b, r })
    }

    /// Width bδ³ in x.
    pub fn x_extent(&self) -> f64 {
        self.b * self.delta.powi(3)
    }

    pub fn v_min(&self) -> f64 {
        -self.delta
    }

    pub fn v_max(&self) -> f64 {
        self.r * self.delta
    }

    pub fn contains(&self, x: f64, v: f64) -> bool {
        (0.0..=self.x_extent()).contains(&x) && v >= self.v_min() && v <= self.v_max()
    }

    /// Smallest scale s such that (x, v) lies in the rectangle of scale s
    /// with the same aspect b.
    pub fn gauge(&self, x: f64, v: f64) -> f64 {
        let sx = (x.max(0.0) / self.b).cbrt();
        let sv = if v > 0.0 { v / self.r } else { -v };
        sx.max(sv)
    }
}

/// ∫_{−M}^{M} ζ Λ₋₂/₃(ζ) dζ, which tends to π/√3 as M → ∞.
pub fn zeta_lambda_moment(m: f64) -> Result<f64> {
    if !(m > 0.0 && m.is_finite()) {
        return Err(Error::Domain(format!("moment cutoff must be positive, got {m}")));
    }
    let f = |z: f64| z * lambda_gamma(-TWO_THIRDS, z).unwrap_or(f64::NAN);
    let mut total = 0.0;
    // Break points separate the O(1) core from the algebraic tails.
    let mut knots = vec![-m, 0.0, m];
    for k in [1.0, 4.0, 16.0] {
        if k < m {
            knots.push(-k);
            knots.push(k);
        }
    }
    knots.sort_by(f64::total_cmp);
    for w in knots.windows(2) {
        total += quad::gauss_kronrod(f, w[0], w[1], 1e-12, 1e-12)?.value;
    }
    Ok(total)
}

/// 9^{2/3}[log r + π/√3], the flux of G₋₂/₃ through ∂R_{δ,b}.
pub fn boundary_flux_closed_form(r: f64) -> f64 {
    NINE_TWO_THIRDS * (r.ln() + PI_OVER_SQRT3)
}

/// Flux of G_γ into R_{δ,b} through its boundary in {x > 0}:
/// the two horizontal edges contribute ∓∫∂ᵥG dx and the vertical edge
/// x = bδ³ contributes ∫ vG dv.
pub fn boundary_flux(gamma: f64, domain: &ExcisionDomain) -> Result<f64> {
    let alpha = alpha_of_r(domain.r)?;
    if (gamma + TWO_THIRDS).abs() > 1e-12 && (gamma - alpha).abs() > 1e-12 {
        return Err(Error::Domain(format!(
            "boundary flux is defined for gamma = -2/3 or alpha(r) = {alpha}, got {gamma}"
        )));
    }
    let xe = domain.x_extent();
    let (vlo, vhi) = (domain.v_min(), domain.v_max());
    let edge = |v: f64| -> Result<f64> {
        let mut err = None;
        let est = quad::tanh_sinh(
            |x| match g_gamma_dv(gamma, x, v) {
                Ok(d) => d,
                Err(e) => {
                    err = Some(e);
                    0.0
                }
            },
            0.0,
            xe,
            1e-12,
        )?;
        match err {
            Some(e) => Err(e),
            None => Ok(est.value),
        }
    };
    let top = edge(vhi)?;
    let bottom = edge(vlo)?;
    let mut err = None;
    let side = quad::gauss_kronrod(
        |v| match g_gamma(gamma, xe, v) {
            Ok(g) => g * v,
            Err(e) => {
                err = Some(e);
                0.0
            }
        },
        vlo,
        vhi,
        1e-12,
        1e-12,
    )?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok(-top + bottom + side.value)
}

/// w Δ(w) with Δ(w) = Λ_α(w)Λ_β(−w) − Λ_α(−w)Λ_β(w).
pub fn c_star_integrand(constants: &RestitutionConstants, w: f64) -> Result<f64> {
    let (a, b) = (constants.alpha, constants.beta);
    let delta = lambda_gamma(a, w)? * lambda_gamma(b, -w)? - lambda_gamma(a, -w)? * lambda_gamma(b, w)?;
    Ok(w * delta)
}

/// Result of the quadrature representation of C★.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CStarQuadrature {
    /// C★ including the extrapolated tail.
    pub value: f64,
    /// ∫₀^R wΔ(w) dw.
    pub integral: f64,
    /// Fitted ∫_R^∞ wΔ(w) dw.
    pub tail: f64,
    /// Exponent p of the fitted tail c·w^{−p}.
    pub tail_exponent: f64,
}

/// Least-squares slope of log|f| against log w at the given nodes.
pub fn log_log_slope(ws: &[f64], fs: &[f64]) -> f64 {
    let n = ws.len() as f64;
    let xs: Vec<f64> = ws.iter().map(|w| w.ln()).collect();
    let ys: Vec<f64> = fs.iter().map(|f| f.abs().ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// C★ = 9^{2/3}[−∫₀^∞ wΔ(w) dw − 2cos(π(β + 1/3)) log r], with the integral
/// truncated at R and the remainder fitted to c·w^{−p} on [R/2.5, R].
pub fn c_star_quadrature(constants: &RestitutionConstants, big_r: f64) -> Result<CStarQuadrature> {
    if !constants.is_subcritical() {
        return Err(Error::Domain(format!(
            "C* quadrature is defined for 0 < r < r_c, got r = {}",
            constants.r
        )));
    }
    if !(big_r > 1.0 && big_r.is_finite()) {
        return Err(Error::Domain(format!("cutoff R must exceed 1, got {big_r}")));
    }
    let f = |w: f64| c_star_integrand(constants, w).unwrap_or(f64::NAN);
    let mut knots = vec![0.0, 1.0];
    let mut k = 4.0;
    while k < big_r {
        knots.push(k);
        k *= 4.0;
    }
    knots.push(big_r);
    let mut integral = 0.0;
    for w in knots.windows(2) {
        integral += quad::gauss_kronrod(f, w[0], w[1], 1e-13, 1e-11)?.value;
    }
    let ws: Vec<f64> = (0..8).map(|i| big_r / 2.5 * (2.5f64).powf(i as f64 / 7.0)).collect();
    let fs: Vec<f64> = ws.iter().map(|&w| f(w)).collect();
    if fs.iter().any(|v| !v.is_finite()) {
        return Err(Error::Quadrature {
            estimate: integral,
            error: f64::NAN,
        });
    }
    let p = -log_log_slope(&ws, &fs);
    let f_r = *fs.last().unwrap_or(&0.0);
    let tail = if p > 1.0 { f_r * big_r / (p - 1.0) } else { f64::NAN };
    if !tail.is_finite() {
        return Err(Error::Quadrature {
            estimate: integral,
            error: f64::INFINITY,
        });
    }
    let log_term = 2.0 * (PI * (constants.beta + 1.0 / 3.0)).cos() * constants.r.ln();
    Ok(CStarQuadrature {
        value: NINE_TWO_THIRDS * (-(integral + tail) - log_term),
        integral,
        tail,
        tail_exponent: p,
    })
}

/// K_α and K_β coincide, which makes the C★ integrand decay faster than 1/w.
pub fn wall_ratio_gap(constants: &RestitutionConstants) -> f64 {
    k_gamma(constants.alpha) - k_gamma(constants.beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn moment_integrand_vanishes_at_origin() {
        assert_eq!(0.0 * lambda_gamma(-TWO_THIRDS, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn moment_approaches_pi_over_sqrt3() {
        let m50 = zeta_lambda_moment(50.0).unwrap();
        assert!((m50 - PI_OVER_SQRT3).abs() < 5e-3, "{m50}");
    }

    #[test]
    fn rectangle_geometry() {
        let d = ExcisionDomain::new(0.5, 2.0, 0.1).unwrap();
        assert_relative_eq!(d.x_extent(), 0.25);
        assert!(d.contains(0.2, -0.4));
        assert!(!d.contains(0.2, 0.06));
        assert_relative_eq!(d.gauge(0.25, 0.0), 0.5, max_relative = 1e-14);
        assert_relative_eq!(d.gauge(0.0, 0.05), 0.5, max_relative = 1e-14);
        assert!(ExcisionDomain::new(-1.0, 1.0, 0.1).is_err());
    }

    #[test]
    fn flux_of_m23_profile() {
        for r in [0.1, 0.3] {
            let d = ExcisionDomain::new(1.0, 1e-4, r).unwrap();
            let q = boundary_flux(-TWO_THIRDS, &d).unwrap();
            assert_relative_eq!(q, boundary_flux_closed_form(r), max_relative = 1e-3);
        }
    }

    #[test]
    fn flux_rejects_other_exponents() {
        let d = ExcisionDomain::new(1.0, 1.0, 0.1).unwrap();
        assert!(boundary_flux(-0.5, &d).is_err());
    }

    #[test]
    fn c_star_integrand_at_zero() {
        let c = RestitutionConstants::new(0.05).unwrap();
        assert_eq!(c_star_integrand(&c, 0.0).unwrap(), 0.0);
        assert!(wall_ratio_gap(&c).abs() < 1e-12);
    }
}
