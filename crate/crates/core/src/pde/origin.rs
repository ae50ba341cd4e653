//! Singular-point treatment by excision.
//!
//! Near a corner the density behaves like a_α G_α + a₋₂/₃ G₋₂/₃. Cells with
//! x + |v|³ < δ (local coordinates) form the hole, cells with
//! δ ≤ x + |v|³ ≤ 8δ the fitting ring. Each step the two coefficients are fitted
//! on the ring and the boundary condition fixes one of them. G_α carries no
//! flux into the corner and G₋₂/₃ carries κ per unit coefficient, so the
//! corner exchanges κ·a₋₂/₃·dt of mass with the hole cells.

use super::grid::Grid;
use super::PhaseSpaceField;
use crate::error::{Error, Result};
use crate::exponents::RestitutionConstants;
use crate::linalg::{least_squares_1, least_squares_2};
use crate::profiles::g_gamma;
use serde::{Deserialize, Serialize};

const MINUS_TWO_THIRDS: f64 = -2.0 / 3.0;

/// Fits whose design matrix is worse conditioned than this are refused.
pub const MAX_FIT_CONDITION: f64 = 1e6;

/// Behaviour of the singular point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OriginBc {
    /// a_α = 0: arriving mass stays at the origin.
    Trapping,
    /// a₋₂/₃ = 0: nothing is absorbed.
    Nontrapping,
    /// a_α = μ★m: the origin releases mass at rate μ★.
    PartialTrapping { mu_star: f64 },
    /// r > r_c; a₋₂/₃ = 0 is the only mass-preserving choice.
    Supercritical,
}

impl OriginBc {
    pub fn check(&self, constants: &RestitutionConstants) -> Result<()> {
        let sub = constants.is_subcritical();
        match self {
            Self::Trapping if !sub => Err(Error::Config(format!(
                "trapping is defined only for r < r_c, got r = {}",
                constants.r
            ))),
            Self::PartialTrapping { .. } if !sub => Err(Error::Config(format!(
                "partial trapping is defined only for r < r_c, got r = {}",
                constants.r
            ))),
            Self::PartialTrapping { mu_star } if !(*mu_star > 0.0) => {
                Err(Error::Config(format!("partial trapping needs mu_star > 0, got {mu_star}")))
            }
            Self::Supercritical if constants.r <= constants.r_c => Err(Error::Config(format!(
                "the supercritical condition needs r > r_c, got r = {}",
                constants.r
            ))),
            _ => Ok(()),
        }
    }
}

/// Singular-point bookkeeping for one corner.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OriginState {
    /// Mass sitting at the corner.
    pub m: f64,
    /// Coefficients after the boundary condition was imposed.
    pub a_alpha: f64,
    pub a_m23: f64,
    /// Unconstrained ring fit.
    pub fit_alpha: f64,
    pub fit_m23: f64,
    pub bc: OriginBc,
}

/// Precomputed hole and ring of one corner.
#[derive(Debug, Clone, PartialEq)]
pub struct Excision {
    pub delta: f64,
    /// The corner at x = L of a strip, seen through (x, v) → (L − x, −v).
    pub mirrored: bool,
    pub hole: Vec<usize>,
    pub ring: Vec<usize>,
    hole_alpha: Vec<f64>,
    hole_m23: Vec<f64>,
    /// Ring basis divided by the profile magnitude.
    ring_alpha: Vec<f64>,
    ring_m23: Vec<f64>,
    ring_weight: Vec<f64>,
    /// Condition number of the weighted two-profile design matrix.
    pub condition: f64,
}

impl Excision {
    pub fn new(grid: &Grid, constants: &RestitutionConstants, delta: f64, mirrored: bool) -> Result<Self> {
        let alpha = constants.alpha;
        let length = grid.length();
        let mut ex = Self {
            delta,
            mirrored,
            hole: Vec::new(),
            ring: Vec::new(),
            hole_alpha: Vec::new(),
            hole_m23: Vec::new(),
            ring_alpha: Vec::new(),
            ring_m23: Vec::new(),
            ring_weight: Vec::new(),
            condition: f64::INFINITY,
        };
        for j in 0..grid.nv() {
            for i in 0..grid.nx() {
                let (mut x, mut v) = (grid.x_centres[i], grid.v_centres[j]);
                if mirrored {
                    x = length - x;
                    v = -v;
                }
                if x > 0.5 * length {
                    continue;
                }
                let gauge = x + v.abs().powi(3);
                if gauge > 8.0 * delta {
                    continue;
                }
                let ga = g_gamma(alpha, x, v)?;
                let gm = g_gamma(MINUS_TWO_THIRDS, x, v)?;
                if gauge < delta {
                    ex.hole.push(grid.idx(i, j));
                    ex.hole_alpha.push(ga);
                    ex.hole_m23.push(gm);
                } else {
                    let w = 1.0 / (ga + gm);
                    ex.ring.push(grid.idx(i, j));
                    ex.ring_alpha.push(ga * w);
                    ex.ring_m23.push(gm * w);
                    ex.ring_weight.push(w);
                }
            }
        }
        if ex.hole.is_empty() || ex.ring.len() < 4 {
            return Err(Error::Config(format!(
                "excision scale {delta} is not resolved: {} hole and {} ring cells",
                ex.hole.len(),
                ex.ring.len()
            )));
        }
        let zeros = vec![0.0; ex.ring.len()];
        ex.condition = least_squares_2(&ex.ring_alpha, &ex.ring_m23, &zeros).2;
        Ok(ex)
    }

    fn weighted_ring(&self, values: &[f64]) -> Vec<f64> {
        self.ring.iter().zip(&self.ring_weight).map(|(&k, w)| values[k] * w).collect()
    }

    /// Unconstrained (a_α, a₋₂/₃).
    pub fn fit(&self, values: &[f64]) -> Result<(f64, f64)> {
        if self.condition > MAX_FIT_CONDITION {
            return Err(Error::IllConditioned { cond: self.condition });
        }
        let y = self.weighted_ring(values);
        let (a, b, _) = least_squares_2(&self.ring_alpha, &self.ring_m23, &y);
        Ok((a, b))
    }

    /// (a_α, a₋₂/₃) with the boundary condition imposed.
    pub fn constrained_fit(&self, values: &[f64], bc: OriginBc, m: f64) -> (f64, f64) {
        let y = self.weighted_ring(values);
        match bc {
            OriginBc::Trapping => (0.0, least_squares_1(&self.ring_m23, &y)),
            OriginBc::Nontrapping | OriginBc::Supercritical => (least_squares_1(&self.ring_alpha, &y), 0.0),
            OriginBc::PartialTrapping { mu_star } => {
                let a = mu_star * m;
                let rest: Vec<f64> = y.iter().zip(&self.ring_alpha).map(|(p, g)| p - a * g).collect();
                (a, least_squares_1(&self.ring_m23, &rest))
            }
        }
    }

    /// Writes a_α G_α + a₋₂/₃ G₋₂/₃ into the hole cells.
    pub fn imprint(&self, values: &mut [f64], a_alpha: f64, a_m23: f64) {
        for (n, &k) in self.hole.iter().enumerate() {
            values[k] = a_alpha * self.hole_alpha[n] + a_m23 * self.hole_m23[n];
        }
    }

    /// Moves `dm` of mass from the hole to the corner (dm < 0 releases mass
    /// into the hole with the shape of G_α). Removal is capped by the mass the
    /// hole holds; returns the amount actually moved.
    pub fn exchange(&self, grid: &Grid, values: &mut [f64], dm: f64) -> f64 {
        let area = |k: usize| grid.area(k % grid.nx());
        if dm >= 0.0 {
            let held: f64 = self.hole.iter().map(|&k| values[k] * area(k)).sum();
            if held <= 0.0 {
                return 0.0;
            }
            let take = dm.min(held);
            let keep = 1.0 - take / held;
            for &k in &self.hole {
                values[k] *= keep;
            }
            take
        } else {
            let norm: f64 = self.hole.iter().zip(&self.hole_alpha).map(|(&k, g)| g * area(k)).sum();
            for (&k, g) in self.hole.iter().zip(&self.hole_alpha) {
                values[k] += -dm * g / norm;
            }
            dm
        }
    }

    /// Writes an arbitrary function of the local coordinates into the hole and
    /// ring cells; used to build test fields.
    pub fn fill_with(&self, grid: &Grid, values: &mut [f64], mut f: impl FnMut(f64, f64) -> f64) {
        let length = grid.length();
        for &k in self.hole.iter().chain(&self.ring) {
            let (i, j) = (k % grid.nx(), k / grid.nx());
            let (mut x, mut v) = (grid.x_centres[i], grid.v_centres[j]);
            if self.mirrored {
                x = length - x;
                v = -v;
            }
            values[k] = f(x, v);
        }
    }
}

/// Unconstrained two-profile fit of a field on the ring of one corner.
pub fn fit_origin_coeffs(field: &PhaseSpaceField, excision: &Excision) -> Result<(f64, f64)> {
    excision.fit(&field.values)
}
