//! Lattice toy model: a walker on {0, h, 2h, …} stepping ±h every h² time
//! units, with escape probability λ from the site 0.
//!
//! The occupation probabilities obey
//! Pₙ(k+1) = ½(Pₙ₋₁(k) + Pₙ₊₁(k)) for n ≥ 2,
//! P₁(k+1) = ½P₂(k) + λP₀(k),  P₀(k+1) = ½P₁(k) + (1 − λ)P₀(k).
//! As h → 0, Pₙ/h tends to a solution of ∂ₜU = ½∂ₓₓU with a Neumann
//! (λ = 1), Dirichlet (λ = 0) or dynamic (λ = μh) condition at x = 0.

use crate::error::{Error, Result};
use crate::linalg::solve_tridiagonal;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Centre and width of the initial Gaussian bump.
pub const BUMP_CENTRE: f64 = 1.0;
pub const BUMP_WIDTH: f64 = 0.2;

/// Occupation probabilities of the half-lattice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeDist {
    pub h: f64,
    pub lambda: f64,
    /// P₀ … P_N; the last site reflects.
    pub p: Vec<f64>,
    /// Steps taken.
    pub k: u64,
}

/// The continuum boundary condition a lattice is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BoundaryRegime {
    /// ∂ₓU(0, t) = 0.
    Neumann,
    /// U(0, t) = 0.
    Dirichlet,
    /// Uₜ(0, t) = μUₓ(0, t).
    Dynamic { mu: f64 },
}

fn bump(x: f64) -> f64 {
    let z = (x - BUMP_CENTRE) / BUMP_WIDTH;
    if z.abs() > 5.0 {
        0.0
    } else {
        (-0.5 * z * z).exp()
    }
}

/// Heat kernel of ∂ₜU = ½∂ₓₓU applied to the untruncated bump, centred at c.
fn gaussian(x: f64, c: f64, t: f64) -> f64 {
    let s2 = BUMP_WIDTH * BUMP_WIDTH + t;
    (-(x - c).powi(2) / (2.0 * s2)).exp() / (2.0 * PI * s2).sqrt()
}

impl LatticeDist {
    /// Samples a profile on sites n ≥ 1 of a lattice reaching ⌈4/h⌉ and
    /// normalizes it to unit mass.
    pub fn from_profile(h: f64, lambda: f64, profile: impl Fn(f64) -> f64) -> Result<Self> {
        if !(h > 0.0 && h < 1.0) {
            return Err(Error::Domain(format!("lattice spacing must lie in (0, 1), got {h}")));
        }
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::Domain(format!("escape probability must lie in [0, 1], got {lambda}")));
        }
        let n_sites = (4.0 / h).ceil() as usize + 1;
        let mut p: Vec<f64> = (0..n_sites)
            .map(|n| if n == 0 { 0.0 } else { h * profile(n as f64 * h).max(0.0) })
            .collect();
        let total: f64 = p.iter().sum();
        if !(total > 0.0) {
            return Err(Error::Domain("initial profile has no mass on the lattice".into()));
        }
        p.iter_mut().for_each(|x| *x /= total);
        Ok(Self { h, lambda, p, k: 0 })
    }

    /// The standard initial condition: a Gaussian bump at x = 1, width 0.2,
    /// truncated at five widths.
    pub fn gaussian_bump(h: f64, lambda: f64) -> Result<Self> {
        Self::from_profile(h, lambda, bump)
    }

    /// Macroscopic time k·h².
    pub fn time(&self) -> f64 {
        self.k as f64 * self.h * self.h
    }

    pub fn total_mass(&self) -> f64 {
        self.p.iter().sum()
    }

    /// Mass away from the site 0.
    pub fn interior_mass(&self) -> f64 {
        self.p[1..].iter().sum()
    }

    /// Steps until time t (rounded down to whole steps).
    pub fn evolve_to(&mut self, t: f64) {
        let target = (t / (self.h * self.h)).round() as u64;
        let mut scratch = self.p.clone();
        while self.k < target {
            step_into(&self.p, &mut scratch, self.lambda);
            std::mem::swap(&mut self.p, &mut scratch);
            self.k += 1;
        }
    }
}

fn step_into(p: &[f64], out: &mut [f64], lambda: f64) {
    let n = p.len() - 1;
    out[0] = 0.5 * p[1] + (1.0 - lambda) * p[0];
    out[1] = 0.5 * p[2] + lambda * p[0];
    for i in 2..n {
        out[i] = 0.5 * (p[i - 1] + p[i + 1]);
    }
    out[n] = 0.5 * p[n - 1] + 0.5 * p[n];
}

/// One synchronous update of the master equation.
pub fn step_master(dist: &LatticeDist) -> LatticeDist {
    let mut out = vec![0.0; dist.p.len()];
    step_into(&dist.p, &mut out, dist.lambda);
    LatticeDist {
        h: dist.h,
        lambda: dist.lambda,
        p: out,
        k: dist.k + 1,
    }
}

/// Crank–Nicolson solution of ∂ₜU = ½∂ₓₓU on [0, 4] with the dynamic
/// condition Uₜ = μUₓ at 0 (mass m = U(0)/(2μ) stored at the origin) and
/// a reflecting end, from the bump initial data. Returns nodal values on
/// the grid x_j = j·dx.
pub fn dynamic_reference(mu: f64, dx: f64, t: f64) -> Result<Vec<f64>> {
    if !(mu > 0.0) {
        return Err(Error::Domain(format!("dynamic boundary needs mu > 0, got {mu}")));
    }
    let n = (4.0 / dx).ceil() as usize + 1;
    let mut u: Vec<f64> = (0..n).map(|j| bump(j as f64 * dx) / (BUMP_WIDTH * (2.0 * PI).sqrt())).collect();
    // Mass weights: the boundary node also carries the point mass.
    let mut w = vec![dx; n];
    w[0] = 0.5 * dx + 1.0 / (2.0 * mu);
    w[n - 1] = 0.5 * dx;
    let steps = (t / dx).ceil().max(1.0) as usize;
    let dt = t / steps as f64;
    let k = 0.5 / dx; // conductance: flux ½(U_{j+1} − U_j)/dx
    let (mut lo, mut di, mut up) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    for j in 0..n {
        let left = if j > 0 { k } else { 0.0 };
        let right = if j + 1 < n { k } else { 0.0 };
        lo[j] = -0.5 * dt * left;
        up[j] = -0.5 * dt * right;
        di[j] = w[j] + 0.5 * dt * (left + right);
    }
    let mut rhs = vec![0.0; n];
    for _ in 0..steps {
        for j in 0..n {
            let left = if j > 0 { k * (u[j - 1] - u[j]) } else { 0.0 };
            let right = if j + 1 < n { k * (u[j + 1] - u[j]) } else { 0.0 };
            rhs[j] = w[j] * u[j] + 0.5 * dt * (left + right);
        }
        solve_tridiagonal(&lo, &di, &up, &mut rhs);
        u.copy_from_slice(&rhs);
    }
    Ok(u)
}

/// Lattice versus continuum at the lattice's current time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContinuumComparison {
    /// max over sites n ≥ 1 with nh ≤ 3 of |Pₙ/h − U(nh, t)|.
    pub max_error: f64,
    /// P₀.
    pub m_lattice: f64,
    /// 1 − ∫U of the reference.
    pub m_reference: f64,
    /// U(0, t) of the reference.
    pub u0_reference: f64,
    /// Set when fewer than 100 steps have been taken.
    pub early_time_warning: bool,
}

/// Compares Pₙ/h with the continuum solution for the given boundary regime.
pub fn continuum_compare(dist: &LatticeDist, bc: BoundaryRegime) -> Result<ContinuumComparison> {
    let t = dist.time();
    let h = dist.h;
    let n_cmp = ((3.0 / h).floor() as usize).min(dist.p.len() - 1);
    let (reference, m_reference, u0): (Box<dyn Fn(usize) -> f64>, f64, f64) = match bc {
        BoundaryRegime::Neumann => (
            Box::new(move |n| {
                let x = n as f64 * h;
                gaussian(x, BUMP_CENTRE, t) + gaussian(x, -BUMP_CENTRE, t)
            }),
            0.0,
            2.0 * gaussian(0.0, BUMP_CENTRE, t),
        ),
        BoundaryRegime::Dirichlet => {
            // Mass lost through x = 0 is 2·P(N(1, σ²+t) < 0).
            let s = (BUMP_WIDTH * BUMP_WIDTH + t).sqrt();
            let lost = crate::quad::gauss_kronrod(|x| 2.0 * gaussian(x, BUMP_CENTRE, t), -12.0 * s, 0.0, 1e-15, 1e-12)?.value;
            (
                Box::new(move |n| {
                    let x = n as f64 * h;
                    gaussian(x, BUMP_CENTRE, t) - gaussian(x, -BUMP_CENTRE, t)
                }),
                lost,
                0.0,
            )
        }
        BoundaryRegime::Dynamic { mu } => {
            let refine = 8usize;
            let dx = h / refine as f64;
            let u = dynamic_reference(mu, dx, t)?;
            // Trapezoid mass of the profile; the rest sits at the origin.
            let interior = dx * (u.iter().sum::<f64>() - 0.5 * (u[0] + u[u.len() - 1]));
            let u0 = u[0];
            (Box::new(move |n| u[n * refine]), 1.0 - interior, u0)
        }
    };
    let max_error = (1..=n_cmp)
        .map(|n| (dist.p[n] / h - reference(n)).abs())
        .fold(0.0, f64::max);
    Ok(ContinuumComparison {
        max_error,
        m_lattice: dist.p[0],
        m_reference,
        u0_reference: u0,
        early_time_warning: dist.k < 100,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn flat_profile_is_stationary_inside() {
        let mut d = LatticeDist::from_profile(0.05, 1.0, |_| 1.0).unwrap();
        let flat = d.p[10];
        d = step_master(&d);
        for n in 2..d.p.len() - 2 {
            assert_relative_eq!(d.p[n], flat, max_relative = 1e-14);
        }
    }

    #[test]
    fn trapped_mass_never_decreases() {
        let mut d = LatticeDist::gaussian_bump(1.0 / 64.0, 0.0).unwrap();
        let mut last = d.p[0];
        for _ in 0..5000 {
            d = step_master(&d);
            assert!(d.p[0] >= last);
            last = d.p[0];
        }
        assert!(last > 0.0);
    }

    #[test]
    fn mass_is_conserved() {
        let mut d = LatticeDist::gaussian_bump(1.0 / 64.0, 0.3).unwrap();
        let m0 = d.total_mass();
        d.evolve_to(10_000.0 * d.h * d.h);
        assert_eq!(d.k, 10_000);
        assert!((d.total_mass() - m0).abs() < 1e-12);
    }

    #[test]
    fn dynamic_reference_conserves_mass() {
        let mu = 1.0;
        let dx = 1.0 / 256.0;
        let total = |u: &[f64]| dx * (u.iter().sum::<f64>() - 0.5 * (u[0] + u[u.len() - 1])) + u[0] / (2.0 * mu);
        let start = total(&dynamic_reference(mu, dx, 0.0).unwrap());
        let end = total(&dynamic_reference(mu, dx, 0.25).unwrap());
        assert!((start - 1.0).abs() < 1e-5, "{start}");
        assert!((end - start).abs() < 1e-12, "{start} {end}");
    }

    #[test]
    fn early_time_is_flagged() {
        let d = LatticeDist::gaussian_bump(1.0 / 32.0, 1.0).unwrap();
        assert!(continuum_compare(&d, BoundaryRegime::Neumann).unwrap().early_time_warning);
    }
}
