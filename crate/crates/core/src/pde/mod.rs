//! Finite-volume solver for ∂ₜP + v∂ₓP = ∂ᵥᵥP with the inelastic wall and
//! an excised singular point.
//!
//! A step is: free streaming with wall re-emission, implicit velocity
//! diffusion, then for each corner a ring fit, the boundary-condition
//! projection and the origin-mass update dm/dt = κ·a₋₂/₃, drawn from (or
//! returned to) the excised cells so that interior plus origin mass is
//! conserved exactly.

pub mod diffusion;
pub mod grid;
pub mod origin;
pub mod transport;

pub use grid::{Grid, Mode};
pub use origin::{fit_origin_coeffs, Excision, OriginBc, OriginState};
pub use transport::{apply_wall, wall_flux_balance, WallMap};

use crate::error::{Error, Result};
use crate::exponents::RestitutionConstants;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::Arc;

/// Gaussian initial density centred at (x0, v0).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Blob {
    pub x0: f64,
    pub v0: f64,
    pub sigma_x: f64,
    pub sigma_v: f64,
    /// Adds the reflected copy centred at (−x0, −v0), which makes the datum
    /// the restriction of a whole-line datum symmetric under (x, v) → (−x, −v).
    pub image: bool,
}

impl Default for Blob {
    fn default() -> Self {
        Self {
            x0: 0.5,
            v0: 0.0,
            sigma_x: 0.1,
            sigma_v: 0.5,
            image: false,
        }
    }
}

fn gaussian_2d(mean: (f64, f64), cov: [f64; 3], x: f64, v: f64) -> f64 {
    let [sxx, sxv, svv] = cov;
    let det = sxx * svv - sxv * sxv;
    let (dx, dv) = (x - mean.0, v - mean.1);
    let q = (svv * dx * dx - 2.0 * sxv * dx * dv + sxx * dv * dv) / det;
    (-0.5 * q).exp() / (2.0 * PI * det.sqrt())
}

impl Blob {
    /// Whole-line solution at time t: the blob pushed through the Kolmogorov
    /// kernel, a Gaussian with mean (x0 + v0t, v0) and covariance
    /// [[σx² + σv²t² + 2t³/3, σv²t + t²], [σv²t + t², σv² + 2t]].
    pub fn evolved(&self, t: f64, x: f64, v: f64) -> f64 {
        let (sx2, sv2) = (self.sigma_x.powi(2), self.sigma_v.powi(2));
        let cov = [
            sx2 + sv2 * t * t + 2.0 * t.powi(3) / 3.0,
            sv2 * t + t * t,
            sv2 + 2.0 * t,
        ];
        let mut p = gaussian_2d((self.x0 + self.v0 * t, self.v0), cov, x, v);
        if self.image {
            p += gaussian_2d((-self.x0 - self.v0 * t, -self.v0), cov, x, v);
        }
        p
    }
}

/// Solver configuration. Unset optional fields take derived defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PdeConfig {
    pub mode: Mode,
    pub bc: OriginBc,
    pub r: f64,
    /// Extent in x of the half-line domain; the strip always has length 1.
    pub length: f64,
    pub nx: usize,
    pub nv: usize,
    pub vmax: f64,
    /// Excision scale; defaults to 0.02 of the domain length.
    pub delta: Option<f64>,
    /// Width of the x-cells at a wall; defaults to δ/8.
    pub finest_dx: Option<f64>,
    /// Time step; defaults to `cfl` times the transport limit.
    pub dt: Option<f64>,
    pub cfl: f64,
    pub t_end: f64,
    /// Initial mass at each corner.
    pub m0: f64,
    pub blob: Blob,
}

impl Default for PdeConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Halfline,
            bc: OriginBc::Nontrapping,
            r: 0.1,
            length: 3.0,
            nx: 120,
            nv: 160,
            vmax: 5.0,
            delta: None,
            finest_dx: None,
            dt: None,
            cfl: 0.9,
            t_end: 0.5,
            m0: 0.0,
            blob: Blob::default(),
        }
    }
}

impl PdeConfig {
    pub fn domain_length(&self) -> f64 {
        match self.mode {
            Mode::Halfline => self.length,
            Mode::Strip => 1.0,
        }
    }

    pub fn excision_scale(&self) -> f64 {
        self.delta.unwrap_or(0.02 * self.domain_length())
    }
}

/// Gridded density, values indexed by [`Grid::idx`].
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpaceField {
    pub grid: Arc<Grid>,
    pub values: Vec<f64>,
    pub t: f64,
}

impl PhaseSpaceField {
    pub fn zeros(grid: Arc<Grid>) -> Self {
        let n = grid.nx() * grid.nv();
        Self {
            grid,
            values: vec![0.0; n],
            t: 0.0,
        }
    }

    /// Cell-average quadrature of P over the grid.
    pub fn mass(&self) -> f64 {
        let g = &self.grid;
        let nx = g.nx();
        self.values.iter().enumerate().map(|(k, p)| p * g.area(k % nx)).sum()
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.idx(i, j)]
    }

    /// max |F(x, v) − F(L − x, −v)| relative to max |F|.
    pub fn symmetry_residual(&self) -> f64 {
        let g = &self.grid;
        let (nx, nv) = (g.nx(), g.nv());
        let mut diff: f64 = 0.0;
        let mut top: f64 = 0.0;
        for j in 0..nv {
            for i in 0..nx {
                let p = self.at(i, j);
                top = top.max(p.abs());
                diff = diff.max((p - self.at(nx - 1 - i, nv - 1 - j)).abs());
            }
        }
        if top > 0.0 {
            diff / top
        } else {
            0.0
        }
    }
}

/// Interior mass plus origin masses.
pub fn total_mass(field: &PhaseSpaceField, origins: &[OriginState]) -> f64 {
    field.mass() + origins.iter().map(|o| o.m).sum::<f64>()
}

/// One row of the mass time series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassRecord {
    pub t: f64,
    pub interior_mass: f64,
    pub m: f64,
    pub a_alpha: f64,
    pub a_m23: f64,
    pub fit_alpha: f64,
    pub fit_m23: f64,
    /// Mass at the corner x = 1 of the strip; zero on the half-line.
    pub m_far: f64,
}

/// Time-stepping state of one run.
#[derive(Debug, Clone)]
pub struct PdeSolver {
    pub config: PdeConfig,
    pub constants: RestitutionConstants,
    pub field: PhaseSpaceField,
    /// One entry per corner: (0, 0), and (1, 0) on the strip.
    pub origins: Vec<OriginState>,
    pub excisions: Vec<Excision>,
    pub dt: f64,
    /// Mass lost through x = L.
    pub outflow: f64,
    pub history: Vec<MassRecord>,
    wall: WallMap,
}

/// Builds the grid, the excision data and the normalized initial field.
pub fn init_field(config: &PdeConfig) -> Result<PdeSolver> {
    let constants = RestitutionConstants::new(config.r)?;
    if config.r > 1.0 {
        return Err(Error::Config(format!("restitution must satisfy 0 < r <= 1, got {}", config.r)));
    }
    config.bc.check(&constants)?;
    let length = config.domain_length();
    let delta = config.excision_scale();
    if !(delta > 0.0 && delta < 0.25 * length) {
        return Err(Error::Config(format!("excision scale {delta} must lie in (0, L/4)")));
    }
    if config.m0 < 0.0 || config.m0 >= 1.0 {
        return Err(Error::Config(format!("initial origin mass must lie in [0, 1), got {}", config.m0)));
    }
    let finest = config.finest_dx.unwrap_or(delta / 8.0);
    let grid = Arc::new(Grid::new(config.mode, length, config.nx, config.vmax, config.nv, finest)?);
    let limit = grid.transport_dt_limit();
    let dt = match config.dt {
        Some(dt) if dt > limit => {
            return Err(Error::Config(format!(
                "time step {dt} violates the transport stability limit {limit}"
            )))
        }
        Some(dt) if dt > 0.0 => dt,
        Some(dt) => return Err(Error::Config(format!("time step must be positive, got {dt}"))),
        None => config.cfl.clamp(0.05, 1.0) * limit,
    };
    let mut excisions = vec![Excision::new(&grid, &constants, delta, false)?];
    if config.mode == Mode::Strip {
        excisions.push(Excision::new(&grid, &constants, delta, true)?);
    }
    if let Some(ex) = excisions.iter().find(|e| e.condition > origin::MAX_FIT_CONDITION) {
        return Err(Error::IllConditioned { cond: ex.condition });
    }
    let mut field = PhaseSpaceField::zeros(grid.clone());
    for j in 0..grid.nv() {
        for i in 0..grid.nx() {
            field.values[grid.idx(i, j)] = config.blob.evolved(0.0, grid.x_centres[i], grid.v_centres[j]);
        }
    }
    for ex in &excisions {
        ex.imprint(&mut field.values, 0.0, 0.0);
    }
    let corners = excisions.len() as f64;
    let scale = (1.0 - corners * config.m0) / field.mass();
    if !(scale.is_finite() && scale > 0.0) {
        return Err(Error::Config("initial blob has no mass on the grid".into()));
    }
    field.values.iter_mut().for_each(|p| *p *= scale);
    let origins = excisions
        .iter()
        .map(|_| OriginState {
            m: config.m0,
            a_alpha: 0.0,
            a_m23: 0.0,
            fit_alpha: 0.0,
            fit_m23: 0.0,
            bc: config.bc,
        })
        .collect();
    let wall = WallMap::new(&grid, config.r);
    let mut solver = PdeSolver {
        config: config.clone(),
        constants,
        field,
        origins,
        excisions,
        dt,
        outflow: 0.0,
        history: Vec::new(),
        wall,
    };
    solver.record();
    Ok(solver)
}

impl PdeSolver {
    pub fn interior_mass(&self) -> f64 {
        self.field.mass()
    }

    pub fn total_mass(&self) -> f64 {
        total_mass(&self.field, &self.origins)
    }

    fn record(&mut self) {
        let o = self.origins[0];
        self.history.push(MassRecord {
            t: self.field.t,
            interior_mass: self.field.mass(),
            m: o.m,
            a_alpha: o.a_alpha,
            a_m23: o.a_m23,
            fit_alpha: o.fit_alpha,
            fit_m23: o.fit_m23,
            m_far: self.origins.get(1).map_or(0.0, |f| f.m),
        });
    }

    /// One split step of length dt.
    pub fn step(&mut self) -> Result<()> {
        let dt = self.dt;
        self.outflow += transport::transport(&mut self.field, &self.wall, dt);
        diffusion::diffuse(&mut self.field, dt);
        let kappa = self.constants.kappa;
        for (ex, o) in self.excisions.iter().zip(self.origins.iter_mut()) {
            let (fa, fm) = ex.fit(&self.field.values)?;
            o.fit_alpha = fa;
            o.fit_m23 = fm;
            let (a, b) = ex.constrained_fit(&self.field.values, o.bc, o.m);
            o.a_alpha = a;
            o.a_m23 = b;
            let grid = self.field.grid.clone();
            // Release is capped by the mass the corner holds.
            let dm = (kappa * b * dt).max(-o.m);
            o.m += ex.exchange(&grid, &mut self.field.values, dm);
            if o.m < -1e-9 {
                return Err(Error::NegativeOriginMass { m: o.m, t: self.field.t + dt });
            }
        }
        clip_negative(&mut self.field);
        self.field.t += dt;
        self.record();
        Ok(())
    }

    /// Steps until t_end (the last step is shortened to land on it).
    pub fn run_to(&mut self, t_end: f64) -> Result<()> {
        let base = self.dt;
        while self.field.t < t_end - 1e-12 * t_end.max(1.0) {
            self.dt = base.min(t_end - self.field.t);
            let res = self.step();
            self.dt = base;
            res?;
        }
        Ok(())
    }
}

/// Zeroes negative values and rescales the rest so the mass is unchanged.
fn clip_negative(field: &mut PhaseSpaceField) {
    if field.values.iter().all(|&p| p >= 0.0) {
        return;
    }
    let before = field.mass();
    field.values.iter_mut().for_each(|p| *p = p.max(0.0));
    let after = field.mass();
    if after > 0.0 && before > 0.0 {
        let s = before / after;
        field.values.iter_mut().for_each(|p| *p *= s);
    }
}

/// L¹ distance between the solver's field and the whole-line reference built
/// from the same blob, relative to the reference mass on the grid.
pub fn free_space_deviation(solver: &PdeSolver) -> f64 {
    let f = &solver.field;
    let g = &f.grid;
    let mut diff = 0.0;
    let mut norm = 0.0;
    for j in 0..g.nv() {
        for i in 0..g.nx() {
            let reference = solver.config.blob.evolved(f.t, g.x_centres[i], g.v_centres[j]);
            diff += (f.at(i, j) - reference).abs() * g.area(i);
            norm += reference * g.area(i);
        }
    }
    diff / norm
}

/// Time-marched steady state of the strip.
#[derive(Debug, Clone)]
pub struct SteadyState {
    pub solver: PdeSolver,
    /// (t, relative change per unit time) at each check.
    pub residuals: Vec<(f64, f64)>,
}

/// Marches a strip run until the relative L¹ change per unit time, origin
/// masses included, drops below `tol`.
pub fn steady_state_strip(config: &PdeConfig, tol: f64, max_time: f64) -> Result<SteadyState> {
    if config.mode != Mode::Strip {
        return Err(Error::Config("steady states are computed in strip mode".into()));
    }
    let mut solver = init_field(config)?;
    let window = 0.25;
    let mut residuals = Vec::new();
    let snapshot = |s: &PdeSolver| {
        let mut v = s.field.values.clone();
        v.extend(s.origins.iter().map(|o| o.m));
        v
    };
    let mut prev = snapshot(&solver);
    loop {
        let target = solver.field.t + window;
        solver.run_to(target)?;
        let now = snapshot(&solver);
        let g = &solver.field.grid;
        let nx = g.nx();
        let n_cells = now.len() - solver.origins.len();
        let weight = |k: usize| if k < n_cells { g.area(k % nx) } else { 1.0 };
        let change: f64 = now.iter().zip(&prev).enumerate().map(|(k, (a, b))| (a - b).abs() * weight(k)).sum();
        let size: f64 = now.iter().enumerate().map(|(k, a)| a.abs() * weight(k)).sum();
        let rate = change / size / window;
        residuals.push((solver.field.t, rate));
        if rate < tol {
            return Ok(SteadyState { solver, residuals });
        }
        if solver.field.t >= max_time {
            return Err(Error::NoConvergence {
                steps: solver.history.len(),
                residual: rate,
            });
        }
        prev = now;
    }
}
