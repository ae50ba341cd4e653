//! Critical exponents and the scalar constants derived from a restitution
//! coefficient r.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

const THIRD: f64 = 1.0 / 3.0;

/// 9^{2/3}.
pub const NINE_TWO_THIRDS: f64 = 4.326_748_710_922_225;

/// π/√3, the value of −log r_c.
pub const PI_OVER_SQRT3: f64 = 1.813_799_364_234_217_8;

/// The restitution coefficient separating collapse from non-collapse,
/// exp(−π/√3).
pub fn critical_r() -> f64 {
    (-PI_OVER_SQRT3).exp()
}

/// y_r(x) = (2 + 3x) log r + log(2 cos(π(x + 1/3))); its zeros in (−5/6, 1/6)
/// are −2/3 and α(r).
pub fn exponent_residual(r: f64, x: f64) -> f64 {
    (2.0 + 3.0 * x) * r.ln() + (2.0 * (PI * (x + THIRD)).cos()).ln()
}

/// d/dx of [`exponent_residual`].
pub fn exponent_residual_slope(r: f64, x: f64) -> f64 {
    3.0 * r.ln() - PI * (PI * (x + THIRD)).tan()
}

/// −3β log r + log(2 sin(π(1/6 − β))), which vanishes at β(r).
pub fn beta_residual(r: f64, beta: f64) -> f64 {
    -3.0 * beta * r.ln() + (2.0 * (PI * (1.0 / 6.0 - beta)).sin()).ln()
}

/// K_γ = 2 cos(π(γ + 1/3)), the ratio of the two wall limits of Λ_γ.
pub fn k_gamma(gamma: f64) -> f64 {
    2.0 * (PI * (gamma + THIRD)).cos()
}

fn check_r(r: f64) -> Result<()> {
    if r.is_finite() && r > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "restitution coefficient must be positive and finite, got {r}"
        )))
    }
}

/// α(r): the root of the exponent equation in (−5/6, 1/6) other than −2/3.
pub fn alpha_of_r(r: f64) -> Result<f64> {
    check_r(r)?;
    let rc = critical_r();
    if r == rc {
        return Ok(-2.0 * THIRD);
    }
    // y_r is concave with its maximum at x_rc, which separates the two roots.
    let x_rc = ((3.0 / PI) * r.ln()).atan() / PI - THIRD;
    let (mut lo, mut hi) = if r < rc {
        (-5.0 / 6.0, x_rc)
    } else {
        (x_rc, 1.0 / 6.0)
    };
    // The residual is −∞ at the outer end and positive at x_rc.
    let outer_is_lo = r < rc;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let y = exponent_residual(r, mid);
        let inner_side = y > 0.0;
        if inner_side == outer_is_lo {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < 1e-12 {
            break;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..2 {
        let y = exponent_residual(r, x);
        let next = x - y / exponent_residual_slope(r, x);
        if next > lo && next < hi && exponent_residual(r, next).abs() <= y.abs() {
            x = next;
        }
    }
    Ok(x)
}

/// β(r) = −α(r) − 2/3, the exponent of the adjoint profile.
pub fn beta_of_r(r: f64) -> Result<f64> {
    Ok(-alpha_of_r(r)? - 2.0 * THIRD)
}

/// κ = −9^{2/3}[log r + π/√3], the rate constant linking a₋₂/₃ to mass
/// transfer into the singular point. Positive exactly when r < r_c.
pub fn kappa_of_r(r: f64) -> Result<f64> {
    check_r(r)?;
    Ok(-NINE_TWO_THIRDS * (r.ln() + PI_OVER_SQRT3))
}

/// The coupling constant C★ for 0 < r < r_c.
pub fn c_star_closed_form(r: f64) -> Result<f64> {
    check_r(r)?;
    if r >= critical_r() {
        return Err(Error::Domain(format!(
            "C* is only defined for 0 < r < r_c = {}, got r = {r}",
            critical_r()
        )));
    }
    let alpha = alpha_of_r(r)?;
    let beta = -alpha - 2.0 * THIRD;
    let bracket = (PI / 3.0) * ((PI * alpha).sin() + 3f64.sqrt() * (PI * alpha).cos())
        - 2.0 * (PI * (beta + THIRD)).cos() * r.ln();
    Ok(NINE_TWO_THIRDS * bracket)
}

/// Every scalar derived from r, computed once.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RestitutionConstants {
    pub r: f64,
    pub r_c: f64,
    pub alpha: f64,
    pub beta: f64,
    pub k_alpha: f64,
    pub kappa: f64,
    /// `None` for r ≥ r_c, where C★ is not defined.
    pub c_star: Option<f64>,
}

impl RestitutionConstants {
    pub fn new(r: f64) -> Result<Self> {
        let alpha = alpha_of_r(r)?;
        let r_c = critical_r();
        Ok(Self {
            r,
            r_c,
            alpha,
            beta: -alpha - 2.0 * THIRD,
            k_alpha: k_gamma(alpha),
            kappa: kappa_of_r(r)?,
            c_star: if r < r_c {
                Some(c_star_closed_form(r)?)
            } else {
                None
            },
        })
    }

    pub fn is_subcritical(&self) -> bool {
        self.r < self.r_c
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn constants_match_closed_forms() {
        assert_relative_eq!(NINE_TWO_THIRDS, 9f64.powf(2.0 / 3.0), max_relative = 1e-15);
        assert_relative_eq!(PI_OVER_SQRT3, PI / 3f64.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn critical_value() {
        assert_relative_eq!(critical_r(), 0.163_033_534_821_580_46, max_relative = 1e-15);
        // −2/3 is a double root at r_c.
        let rc = critical_r();
        assert!(exponent_residual(rc, -2.0 / 3.0).abs() < 1e-12);
        assert!(exponent_residual_slope(rc, -2.0 / 3.0).abs() < 1e-12);
        assert_eq!(alpha_of_r(rc).unwrap(), -2.0 / 3.0);
    }

    #[test]
    fn alpha_golden_values() {
        let cases = [
            (0.01, -0.811_923_966_144_144_6),
            (0.05, -0.770_091_421_732_412_1),
            (0.1, -0.724_436_214_918_163_5),
            (0.3, -0.533_617_597_772_925_4),
            (0.5, -1.0 / 3.0),
            (1.0, 0.0),
            (2.0, 0.136_677_032_055_442_1),
            (10.0, 0.166_161_615_396_486_1),
        ];
        for (r, want) in cases {
            let a = alpha_of_r(r).unwrap();
            assert!((a - want).abs() < 1e-12, "r = {r}: {a} vs {want}");
        }
    }

    #[test]
    fn alpha_brackets_by_regime() {
        let a = alpha_of_r(0.05).unwrap();
        assert!(a > -5.0 / 6.0 && a < -2.0 / 3.0);
        let a = alpha_of_r(0.5).unwrap();
        assert!(a > -2.0 / 3.0 && a < 1.0 / 6.0);
    }

    #[test]
    fn alpha_limits() {
        assert!((alpha_of_r(1e-6).unwrap() + 5.0 / 6.0).abs() < 1e-3);
        assert!((alpha_of_r(1e6).unwrap() - 1.0 / 6.0).abs() < 1e-3);
    }

    #[test]
    fn beta_values() {
        assert!((beta_of_r(1.0).unwrap() + 2.0 / 3.0).abs() < 1e-12);
        assert!(beta_of_r(critical_r()).unwrap().abs() < 1e-15);
        assert!((beta_of_r(1e-6).unwrap() - 1.0 / 6.0).abs() < 1e-3);
    }

    #[test]
    fn kappa_values() {
        assert!(kappa_of_r(critical_r()).unwrap().abs() < 1e-14);
        assert_relative_eq!(kappa_of_r(1.0).unwrap(), -7.847_854_061_071_95, max_relative = 1e-13);
        assert_relative_eq!(kappa_of_r(0.1).unwrap(), 2.114_853_021_828_765_5, max_relative = 1e-13);
        let rc = critical_r();
        for i in 0..50 {
            let r = rc * (i as f64 + 0.5) / 50.0;
            assert!(kappa_of_r(r).unwrap() > 0.0);
        }
        assert!(kappa_of_r(0.0).is_err());
    }

    #[test]
    fn c_star_values() {
        let cases = [
            (0.01, -6.363_104_926_701_003),
            (0.05, -3.766_970_919_245_542),
            (0.1, -1.852_275_155_239_775),
        ];
        for (r, want) in cases {
            assert_relative_eq!(c_star_closed_form(r).unwrap(), want, max_relative = 1e-11);
        }
        assert!(c_star_closed_form(0.999 * critical_r()).unwrap().abs() < 0.05);
        assert!(c_star_closed_form(0.2).is_err());
        assert!(c_star_closed_form(critical_r()).is_err());
    }

    #[test]
    fn record_is_consistent() {
        let c = RestitutionConstants::new(0.1).unwrap();
        assert!(c.is_subcritical());
        assert_eq!(c.beta, -c.alpha - 2.0 / 3.0);
        assert_relative_eq!(c.k_alpha, c.r.powf(3.0 * c.beta), max_relative = 1e-10);
        assert!(c.c_star.unwrap() < 0.0);
        let c = RestitutionConstants::new(0.5).unwrap();
        assert!(c.c_star.is_none());
    }
}
