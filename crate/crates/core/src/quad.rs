//! Quadrature rules: adaptive Gauss–Kronrod for smooth integrands and
//! double-exponential rules for endpoint singularities and half-lines.

use crate::error::{Error, Result};
use std::f64::consts::FRAC_PI_2;

/// A quadrature value together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn kronrod15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Globally adaptive 15-point Gauss–Kronrod quadrature on a finite interval.
///
/// Bisects the interval with the largest error estimate until the summed
/// estimate is below `max(abs_tol, rel_tol·|I|)`.
pub fn gauss_kronrod<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<Estimate> {
    const MAX_INTERVALS: usize = 4000;
    if a == b {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    let (v, e) = kronrod15(&mut f, a, b);
    let mut parts: Vec<(f64, f64, f64, f64)> = vec![(a, b, v, e)];
    loop {
        let value: f64 = parts.iter().map(|p| p.2).sum();
        let error: f64 = parts.iter().map(|p| p.3).sum();
        if !value.is_finite() || !error.is_finite() {
            return Err(Error::Quadrature {
                estimate: value,
                error,
            });
        }
        if error <= abs_tol.max(rel_tol * value.abs()) {
            return Ok(Estimate { value, error });
        }
        if parts.len() >= MAX_INTERVALS {
            return Err(Error::Quadrature {
                estimate: value,
                error,
            });
        }
        let worst = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let (lo, hi, _, _) = parts.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            // Interval cannot be split further in floating point.
            return Err(Error::Quadrature {
                estimate: value,
                error,
            });
        }
        let (v1, e1) = kronrod15(&mut f, lo, mid);
        let (v2, e2) = kronrod15(&mut f, mid, hi);
        parts.push((lo, mid, v1, e1));
        parts.push((mid, hi, v2, e2));
    }
}

/// Adaptive Gauss–Kronrod on `[a, ∞)` through the map `x = a + t/(1−t)`.
pub fn gauss_kronrod_to_infinity<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<Estimate> {
    gauss_kronrod(
        |t| {
            let s = 1.0 - t;
            let x = a + t / s;
            let w = 1.0 / (s * s);
            let y = f(x) * w;
            if y.is_finite() {
                y
            } else {
                0.0
            }
        },
        0.0,
        1.0,
        abs_tol,
        rel_tol,
    )
}

/// Shared level-refinement driver for double-exponential rules.
///
/// `term(t)` returns the transformed integrand times the Jacobian at `t`.
fn double_exponential<F: FnMut(f64) -> f64>(
    mut term: F,
    t_lo: f64,
    t_hi: f64,
    rel_tol: f64,
) -> Result<Estimate> {
    const MAX_LEVEL: u32 = 9;
    let mut h = 1.0_f64;
    let mut sum = 0.0;
    let n_lo = (t_lo / h).ceil() as i64;
    let n_hi = (t_hi / h).floor() as i64;
    for j in n_lo..=n_hi {
        sum += term(j as f64 * h);
    }
    let mut prev = sum * h;
    for _level in 1..=MAX_LEVEL {
        h *= 0.5;
        let n_lo = (t_lo / h).ceil() as i64;
        let n_hi = (t_hi / h).floor() as i64;
        for j in n_lo..=n_hi {
            if j % 2 != 0 {
                sum += term(j as f64 * h);
            }
        }
        let cur = sum * h;
        let err = (cur - prev).abs();
        if !cur.is_finite() {
            return Err(Error::Quadrature {
                estimate: cur,
                error: f64::INFINITY,
            });
        }
        if err <= rel_tol * cur.abs() || err < 1e-300 {
            return Ok(Estimate {
                value: cur,
                error: err,
            });
        }
        prev = cur;
    }
    Err(Error::Quadrature {
        estimate: prev,
        error: f64::NAN,
    })
}

/// Tanh–sinh quadrature on `[a, b]`; tolerates integrable endpoint
/// singularities. The integrand is never evaluated at the endpoints.
pub fn tanh_sinh<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, rel_tol: f64) -> Result<Estimate> {
    if a == b {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    let half = 0.5 * (b - a);
    double_exponential(
        |t| {
            let u = FRAC_PI_2 * t.sinh();
            // Distance from the nearer endpoint, computed without cancellation.
            let d = half * 2.0 / (1.0 + (2.0 * u.abs()).exp());
            let cu = u.cosh();
            let w = half * FRAC_PI_2 * t.cosh() / (cu * cu);
            if d == 0.0 || w == 0.0 {
                return 0.0;
            }
            let x = if t < 0.0 { a + d } else { b - d };
            if x <= a.min(b) || x >= a.max(b) {
                return 0.0;
            }
            f(x) * w
        },
        -6.0,
        6.0,
        rel_tol,
    )
}

/// Exp–sinh quadrature on `[a, ∞)` for integrands decaying at infinity,
/// possibly singular at `a`.
pub fn exp_sinh<F: FnMut(f64) -> f64>(mut f: F, a: f64, rel_tol: f64) -> Result<Estimate> {
    double_exponential(
        |t| {
            let s = (FRAC_PI_2 * t.sinh()).exp();
            if s == 0.0 || !s.is_finite() {
                return 0.0;
            }
            let y = f(a + s) * s * FRAC_PI_2 * t.cosh();
            if y.is_finite() {
                y
            } else {
                0.0
            }
        },
        -6.5,
        4.5,
        rel_tol,
    )
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            dp = n as f64 * (x * p - p0) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn kronrod_polynomial_exact() {
        let e = gauss_kronrod(|x| x.powi(7) - 3.0 * x, -1.0, 2.0, 1e-14, 1e-14).unwrap();
        assert_relative_eq!(e.value, 255.0 / 8.0 - 4.5, max_relative = 1e-13);
    }

    #[test]
    fn kronrod_oscillatory() {
        let e = gauss_kronrod(|x| (20.0 * x).sin(), 0.0, 3.0, 1e-13, 1e-13).unwrap();
        assert_relative_eq!(e.value, (1.0 - (60.0f64).cos()) / 20.0, max_relative = 1e-11);
    }

    #[test]
    fn half_line_gaussian() {
        let e = gauss_kronrod_to_infinity(|x| (-x * x).exp(), 0.0, 1e-13, 1e-13).unwrap();
        assert_relative_eq!(e.value, std::f64::consts::PI.sqrt() / 2.0, max_relative = 1e-11);
    }

    #[test]
    fn tanh_sinh_endpoint_singularity() {
        let e = tanh_sinh(|x| x.powf(-5.0 / 6.0), 0.0, 1.0, 1e-12).unwrap();
        assert_relative_eq!(e.value, 6.0, max_relative = 1e-10);
    }

    #[test]
    fn exp_sinh_gamma_integral() {
        // Γ(1/6) = ∫ s^{-5/6} e^{-s} ds
        let e = exp_sinh(|s| s.powf(-5.0 / 6.0) * (-s).exp(), 0.0, 1e-13).unwrap();
        assert_relative_eq!(e.value, 5.566_316_001_780_235, max_relative = 1e-11);
    }

    #[test]
    fn legendre_integrates_degree_2n_minus_1() {
        let rule = gauss_legendre(6);
        let s: f64 = rule.iter().map(|&(x, w)| w * x.powi(10)).sum();
        assert_relative_eq!(s, 2.0 / 11.0, max_relative = 1e-13);
        let total: f64 = rule.iter().map(|p| p.1).sum();
        assert_relative_eq!(total, 2.0, max_relative = 1e-14);
    }
}
