//! Monte Carlo simulation of the inelastic Brownian particle
//! dX = V dt, dV = √2 dB on x > 0, with V ↦ −rV at each wall hit.

use crate::error::{Error, Result};
use crate::stats::{ks_two_sample, median, wilson_interval, KsResult};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Position, velocity and time of one particle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParticleState {
    pub x: f64,
    pub v: f64,
    pub t: f64,
}

/// One wall hit: arrival velocity v_in < 0 and departure v_out = −r·v_in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BounceRecord {
    pub t_n: f64,
    pub v_in: f64,
    pub v_out: f64,
}

/// Simulation parameters shared by all paths of an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimConfig {
    pub r: f64,
    /// Largest time step.
    pub h_max: f64,
    pub t_max: f64,
    /// Post-bounce speed below which a collapse verdict is considered.
    pub eps_v: f64,
    /// Position below which a collapse verdict is considered.
    pub eps_x: f64,
    pub n_paths: usize,
    pub seed: u64,
    pub x0: f64,
    pub v0: f64,
    /// c in h = min(h_max, c·(x^{2/3} + v²)).
    pub step_scale: f64,
    pub bounce_cap: u64,
    /// Bounces needed before a collapse verdict can be issued.
    pub min_bounces: u64,
    /// Number of leading bounce records kept per path.
    pub record_limit: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            r: 0.05,
            h_max: 1e-2,
            t_max: 50.0,
            eps_v: 1e-6,
            eps_x: 1e-12,
            n_paths: 10_000,
            seed: 1,
            x0: 1.0,
            v0: 0.0,
            step_scale: 0.01,
            bounce_cap: 10_000_000,
            min_bounces: 3,
            record_limit: 64,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("r", self.r),
            ("h_max", self.h_max),
            ("t_max", self.t_max),
            ("eps_v", self.eps_v),
            ("eps_x", self.eps_x),
            ("step_scale", self.step_scale),
        ];
        for (name, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {value}")));
            }
        }
        if self.eps_v >= 1.0 || self.eps_x >= 1.0 {
            return Err(Error::Config("collapse thresholds must be small".into()));
        }
        if self.x0 < 0.0 || !self.v0.is_finite() || !self.x0.is_finite() {
            return Err(Error::Config(format!(
                "initial state must have x0 >= 0, got ({}, {})",
                self.x0, self.v0
            )));
        }
        if self.n_paths == 0 {
            return Err(Error::Config("n_paths must be positive".into()));
        }
        Ok(())
    }

    fn step_size(&self, s: &ParticleState) -> f64 {
        let local = self.step_scale * (s.x.cbrt().powi(2) + s.v * s.v);
        self.h_max.min(local).min(self.t_max - s.t).max(1e-300)
    }
}

/// Result of one simulated trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryOutcome {
    pub collapsed: bool,
    pub t_final: f64,
    pub bounce_count: u64,
    /// The first `record_limit` bounces.
    pub bounces: Vec<BounceRecord>,
    pub rng_seed: u64,
    /// Index of the random substream used by this path.
    pub path: u64,
    pub final_state: ParticleState,
}

/// Exact transition of (X, V) over a time h driven by two standard normals:
/// the noise in (X − X₀ − V₀h, V − V₀) has covariance [[2h³/3, h²], [h², 2h]].
pub fn step_exact(state: ParticleState, h: f64, g1: f64, g2: f64) -> ParticleState {
    let sv = (2.0 * h).sqrt();
    let dv = sv * g1;
    // Cholesky: cov/std(V) = h²/√(2h); residual variance 2h³/3 − h³/2 = h³/6.
    let dx = 0.5 * h * sv * g1 + (h * h * h / 6.0).sqrt() * g2;
    ParticleState {
        x: state.x + state.v * h + dx,
        v: state.v + dv,
        t: state.t + h,
    }
}

/// Post-bounce velocity −r·v_in.
pub fn bounce_velocity(v_in: f64, r: f64) -> f64 {
    -r * v_in
}

/// Crossing time in (0, h) and velocity there, from the cubic Hermite
/// interpolant through the step end points.
fn locate_crossing(a: &ParticleState, b: &ParticleState, h: f64) -> (f64, f64) {
    let pos = |s: f64| {
        let u = s / h;
        let (u2, u3) = (u * u, u * u * u);
        (2.0 * u3 - 3.0 * u2 + 1.0) * a.x
            + (u3 - 2.0 * u2 + u) * h * a.v
            + (-2.0 * u3 + 3.0 * u2) * b.x
            + (u3 - u2) * h * b.v
    };
    let vel = |s: f64| {
        let u = s / h;
        let u2 = u * u;
        (6.0 * u2 - 6.0 * u) * a.x / h
            + (3.0 * u2 - 4.0 * u + 1.0) * a.v
            + (-6.0 * u2 + 6.0 * u) * b.x / h
            + (3.0 * u2 - 2.0 * u) * b.v
    };
    let (mut lo, mut hi) = (0.0, h);
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if pos(mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let tau = 0.5 * (lo + hi);
    (tau, vel(tau).min(-f64::MIN_POSITIVE))
}

/// Ratio-based estimate of the time left before bounces accumulate, from
/// the last three inter-bounce intervals; infinite if they are not shrinking.
fn remaining_time(intervals: &[f64; 3]) -> f64 {
    let (d0, d2) = (intervals[0], intervals[2]);
    if !(d0 > 0.0) {
        return f64::INFINITY;
    }
    // Geometric mean ratio over two intervals.
    let q = (d2 / d0).sqrt();
    if q < 1.0 {
        d2 * q / (1.0 - q)
    } else {
        f64::INFINITY
    }
}

/// Post-bounce speed below which the remaining motion is not representable
/// in double precision; reaching it counts as collapse.
const SPEED_UNDERFLOW: f64 = 1e-100;

/// Everything [`advance_with_wall`] reports about a trajectory segment.
#[derive(Debug, Clone, PartialEq)]
pub struct Advance {
    pub state: ParticleState,
    pub bounces: Vec<BounceRecord>,
    pub bounce_count: u64,
    pub collapsed: bool,
}

/// Advances until `cfg.t_max`, a collapse verdict, or (if `first_hit_only`)
/// the first wall hit.
fn advance<R: Rng>(
    mut s: ParticleState,
    cfg: &SimConfig,
    rng: &mut R,
    first_hit_only: bool,
) -> Result<Advance> {
    let mut bounces = Vec::new();
    let mut count = 0u64;
    // Inter-bounce intervals are measured on a clock reset at each bounce,
    // since near collapse they fall below the resolution of t.
    let mut intervals = [f64::NAN; 3];
    let mut clock = 0.0;
    while s.t < cfg.t_max {
        let h = cfg.step_size(&s);
        let g1: f64 = rng.sample(StandardNormal);
        let g2: f64 = rng.sample(StandardNormal);
        let next = step_exact(s, h, g1, g2);
        if next.x >= 0.0 {
            s = next;
            clock += h;
            continue;
        }
        let (tau, v_in) = locate_crossing(&s, &next, h);
        let v_out = bounce_velocity(v_in, cfg.r);
        let rec = BounceRecord {
            t_n: s.t + tau,
            v_in,
            v_out,
        };
        count += 1;
        if bounces.len() < cfg.record_limit {
            bounces.push(rec);
        }
        s = ParticleState {
            x: 0.0,
            v: v_out,
            t: rec.t_n,
        };
        if first_hit_only {
            break;
        }
        intervals.rotate_left(1);
        intervals[2] = clock + tau;
        clock = 0.0;
        let verdict = v_out < SPEED_UNDERFLOW
            || (count >= cfg.min_bounces.max(3)
                && v_out < cfg.eps_v
                && s.x < cfg.eps_x
                && remaining_time(&intervals) < cfg.eps_v * cfg.eps_v);
        if verdict {
            return Ok(Advance {
                state: s,
                bounces,
                bounce_count: count,
                collapsed: true,
            });
        }
        if count >= cfg.bounce_cap {
            return Err(Error::BounceCap {
                cap: cfg.bounce_cap,
                t: s.t,
            });
        }
    }
    Ok(Advance {
        state: s,
        bounces,
        bounce_count: count,
        collapsed: false,
    })
}

/// Advances a particle until `cfg.t_max` or a collapse verdict, bouncing at
/// the wall with V ↦ −rV.
pub fn advance_with_wall<R: Rng>(state: ParticleState, cfg: &SimConfig, rng: &mut R) -> Result<Advance> {
    if state.x < 0.0 {
        return Err(Error::Domain(format!("particle starts outside the half-line at x = {}", state.x)));
    }
    advance(state, cfg, rng, false)
}

/// The random stream for one path: ChaCha8 keyed by the seed, with the path
/// index as stream id.
pub fn path_rng(seed: u64, path: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path);
    rng
}

/// Simulates one path of an experiment.
pub fn simulate_path(cfg: &SimConfig, path: u64) -> Result<TrajectoryOutcome> {
    let mut rng = path_rng(cfg.seed, path);
    let start = ParticleState {
        x: cfg.x0,
        v: cfg.v0,
        t: 0.0,
    };
    let adv = advance_with_wall(start, cfg, &mut rng)?;
    Ok(TrajectoryOutcome {
        collapsed: adv.collapsed,
        t_final: adv.state.t,
        bounce_count: adv.bounce_count,
        bounces: adv.bounces,
        rng_seed: cfg.seed,
        path,
        final_state: adv.state,
    })
}

/// All paths of an experiment, in path order.
pub fn run_paths(cfg: &SimConfig) -> Result<Vec<Result<TrajectoryOutcome>>> {
    cfg.validate()?;
    Ok((0..cfg.n_paths as u64)
        .into_par_iter()
        .map(|p| simulate_path(cfg, p))
        .collect())
}

/// Aggregate of a collapse experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollapseSummary {
    pub r: f64,
    pub n_paths: usize,
    pub collapsed: usize,
    /// Paths still moving at t_max.
    pub survived: usize,
    /// Paths stopped by the bounce cap without a verdict.
    pub capped: usize,
    pub fraction: f64,
    /// 95% Wilson interval of the collapse fraction.
    pub ci_low: f64,
    pub ci_high: f64,
    pub mean_bounces: f64,
    /// Mean collapse time among collapsed paths (NaN if none).
    pub mean_collapse_time: f64,
    /// Mean of log(v_out(n+1)/v_out(n)) over recorded bounces.
    pub mean_log_speed_ratio: f64,
}

/// Summarizes per-path results.
pub fn summarize(cfg: &SimConfig, outcomes: &[Result<TrajectoryOutcome>]) -> CollapseSummary {
    let mut collapsed = 0usize;
    let mut survived = 0usize;
    let mut capped = 0usize;
    let mut bounce_total = 0.0;
    let mut t_collapse = 0.0;
    let mut log_ratio_sum = 0.0;
    let mut log_ratio_n = 0usize;
    for o in outcomes {
        match o {
            Ok(o) => {
                if o.collapsed {
                    collapsed += 1;
                    t_collapse += o.t_final;
                } else {
                    survived += 1;
                }
                bounce_total += o.bounce_count as f64;
                for w in o.bounces.windows(2) {
                    log_ratio_sum += (w[1].v_out / w[0].v_out).ln();
                    log_ratio_n += 1;
                }
            }
            Err(_) => capped += 1,
        }
    }
    let n = outcomes.len();
    let (ci_low, ci_high) = wilson_interval(collapsed, n, 1.96);
    CollapseSummary {
        r: cfg.r,
        n_paths: n,
        collapsed,
        survived,
        capped,
        fraction: collapsed as f64 / n as f64,
        ci_low,
        ci_high,
        mean_bounces: bounce_total / (collapsed + survived).max(1) as f64,
        mean_collapse_time: if collapsed > 0 {
            t_collapse / collapsed as f64
        } else {
            f64::NAN
        },
        mean_log_speed_ratio: if log_ratio_n > 0 {
            log_ratio_sum / log_ratio_n as f64
        } else {
            f64::NAN
        },
    }
}

/// Runs `cfg.n_paths` trajectories and reports the collapse statistics.
pub fn collapse_experiment(cfg: &SimConfig) -> Result<CollapseSummary> {
    let outcomes = run_paths(cfg)?;
    Ok(summarize(cfg, &outcomes))
}

/// Collapse experiments at each restitution coefficient, same seed.
pub fn collapse_sweep(rs: &[f64], base: &SimConfig) -> Result<Vec<CollapseSummary>> {
    rs.iter()
        .map(|&r| collapse_experiment(&SimConfig { r, ..*base }))
        .collect()
}

/// Linear interpolation of the r at which the collapse fraction falls
/// through 1/2, if the sweep brackets it.
pub fn half_collapse_crossing(sweep: &[CollapseSummary]) -> Option<f64> {
    sweep.windows(2).find_map(|w| {
        let (a, b) = (&w[0], &w[1]);
        if a.fraction >= 0.5 && b.fraction < 0.5 {
            Some(a.r + (a.fraction - 0.5) / (a.fraction - b.fraction) * (b.r - a.r))
        } else {
            None
        }
    })
}

/// Parameters of a first-return experiment, stated for launch speed 1 and
/// rescaled to speed b by (x, v, t) → (b³x, bv, b²t).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HittingConfig {
    pub t_max: f64,
    pub h_max: f64,
    /// Launch position off the wall.
    pub eps_x: f64,
    pub step_scale: f64,
}

impl Default for HittingConfig {
    fn default() -> Self {
        Self {
            t_max: 100.0,
            h_max: 1e-2,
            eps_x: 1e-9,
            step_scale: 0.01,
        }
    }
}

/// First-return samples from (0⁺, b).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HittingSample {
    pub b: f64,
    /// First return times.
    pub t1: Vec<f64>,
    /// Speeds at first return.
    pub h1: Vec<f64>,
    /// Paths that had not returned by the (rescaled) time limit.
    pub unreturned: usize,
}

/// Samples the first return time and speed of a particle launched from the
/// wall with velocity b.
pub fn hitting_statistics(b: f64, n_paths: usize, seed: u64, base: &HittingConfig) -> Result<HittingSample> {
    if !(b > 0.0 && b.is_finite()) {
        return Err(Error::Domain(format!("launch speed must be positive, got {b}")));
    }
    let cfg = SimConfig {
        r: 1.0,
        h_max: base.h_max * b * b,
        t_max: base.t_max * b * b,
        eps_x: base.eps_x * b * b * b,
        n_paths,
        seed,
        x0: base.eps_x * b * b * b,
        v0: b,
        step_scale: base.step_scale,
        record_limit: 1,
        ..SimConfig::default()
    };
    cfg.validate()?;
    let hits: Vec<Option<(f64, f64)>> = (0..n_paths as u64)
        .into_par_iter()
        .map(|p| {
            let mut rng = path_rng(seed, p);
            let start = ParticleState {
                x: cfg.x0,
                v: cfg.v0,
                t: 0.0,
            };
            advance(start, &cfg, &mut rng, true)
                .ok()
                .and_then(|a| a.bounces.first().map(|r| (r.t_n, -r.v_in)))
        })
        .collect();
    let mut t1 = Vec::with_capacity(n_paths);
    let mut h1 = Vec::with_capacity(n_paths);
    let mut unreturned = 0;
    for h in hits {
        match h {
            Some((t, v)) => {
                t1.push(t);
                h1.push(v);
            }
            None => unreturned += 1,
        }
    }
    Ok(HittingSample {
        b,
        t1,
        h1,
        unreturned,
    })
}

/// KS comparison of two hitting samples after rescaling to launch speed 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingTest {
    pub time: KsResult,
    pub speed: KsResult,
    pub median_t1_a: f64,
    pub median_t1_b: f64,
}

pub fn compare_rescaled(a: &HittingSample, b: &HittingSample) -> ScalingTest {
    let rescale = |s: &HittingSample| -> (Vec<f64>, Vec<f64>) {
        (
            s.t1.iter().map(|t| t / (s.b * s.b)).collect(),
            s.h1.iter().map(|h| h / s.b).collect(),
        )
    };
    let (ta, ha) = rescale(a);
    let (tb, hb) = rescale(b);
    ScalingTest {
        time: ks_two_sample(&ta, &tb),
        speed: ks_two_sample(&ha, &hb),
        median_t1_a: median(&ta),
        median_t1_b: median(&tb),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn deterministic_limit_of_step() {
        let s = ParticleState { x: 1.0, v: -0.5, t: 2.0 };
        let n = step_exact(s, 1e-3, 0.0, 0.0);
        assert_relative_eq!(n.x, 1.0 - 0.5e-3, max_relative = 1e-15);
        assert_eq!(n.v, -0.5);
        assert_relative_eq!(n.t, 2.001);
    }

    #[test]
    fn bounce_map() {
        assert_eq!(bounce_velocity(-2.0, 0.5), 1.0);
    }

    #[test]
    fn step_moments() {
        let h: f64 = 0.01;
        let mut rng = path_rng(7, 0);
        let n = 1_000_000;
        let (mut svv, mut sxx, mut sxv) = (0.0, 0.0, 0.0);
        let s0 = ParticleState { x: 0.0, v: 0.0, t: 0.0 };
        for _ in 0..n {
            let s = step_exact(s0, h, rng.sample(StandardNormal), rng.sample(StandardNormal));
            svv += s.v * s.v;
            sxx += s.x * s.x;
            sxv += s.x * s.v;
        }
        let n = n as f64;
        assert!((svv / n / (2.0 * h) - 1.0).abs() < 0.01);
        assert!((sxx / n / (2.0 * h.powi(3) / 3.0) - 1.0).abs() < 0.02);
        assert!((sxv / n / (h * h) - 1.0).abs() < 0.02);
    }

    #[test]
    fn crossing_is_inside_step() {
        let a = ParticleState { x: 0.01, v: -1.0, t: 0.0 };
        let b = ParticleState { x: -0.01, v: -1.0, t: 0.02 };
        let (tau, v) = locate_crossing(&a, &b, 0.02);
        assert_relative_eq!(tau, 0.01, max_relative = 1e-9);
        assert_relative_eq!(v, -1.0, max_relative = 1e-9);
    }

    #[test]
    fn same_seed_same_outcome() {
        let cfg = SimConfig { n_paths: 3, t_max: 5.0, ..SimConfig::default() };
        let a = simulate_path(&cfg, 2).unwrap();
        let b = simulate_path(&cfg, 2).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, simulate_path(&cfg, 1).unwrap());
    }

    #[test]
    fn config_validation() {
        assert!(SimConfig { eps_v: 0.0, ..SimConfig::default() }.validate().is_err());
        assert!(SimConfig { x0: -1.0, ..SimConfig::default() }.validate().is_err());
        assert!(SimConfig::default().validate().is_ok());
    }

    #[test]
    fn crossing_half_level() {
        let mk = |r: f64, fraction: f64| CollapseSummary {
            r,
            n_paths: 1,
            collapsed: 0,
            survived: 0,
            capped: 0,
            fraction,
            ci_low: 0.0,
            ci_high: 1.0,
            mean_bounces: 0.0,
            mean_collapse_time: 0.0,
            mean_log_speed_ratio: 0.0,
        };
        let s = [mk(0.1, 0.9), mk(0.2, 0.3), mk(0.3, 0.0)];
        assert_relative_eq!(half_collapse_crossing(&s).unwrap(), 0.1 + 0.4 / 0.6 * 0.1, max_relative = 1e-12);
    }
}
