//! Finite-volume grid on the phase half-plane or the strip.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Spatial domain: the half-line [0, L] (vacuum beyond L) or the strip
/// [0, 1] with an inelastic wall at each end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[serde(alias = "half-line")]
    Halfline,
    Strip,
}

/// Cell-centred grid; x-cells are geometrically graded away from each wall,
/// v-cells are uniform and symmetric about v = 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub mode: Mode,
    pub x_faces: Vec<f64>,
    pub x_centres: Vec<f64>,
    pub dx: Vec<f64>,
    pub v_centres: Vec<f64>,
    pub dv: f64,
    pub vmax: f64,
}

/// Widths of n cells covering `length`, the first of width `first`, growing
/// geometrically. Falls back to uniform cells when those are already finer.
pub fn graded_widths(length: f64, n: usize, first: f64) -> Vec<f64> {
    let uniform = length / n as f64;
    if first >= uniform {
        return vec![uniform; n];
    }
    // Solve first·(qⁿ − 1)/(q − 1) = length for q > 1.
    let total = |q: f64| first * (q.powi(n as i32) - 1.0) / (q - 1.0);
    let (mut lo, mut hi) = (1.0 + 1e-12, 2.0);
    while total(hi) < length {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if total(mid) < length {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let q = 0.5 * (lo + hi);
    let mut w: Vec<f64> = (0..n).map(|i| first * q.powi(i as i32)).collect();
    // Absorb rounding so the faces land exactly on the end point.
    let s: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x *= length / s);
    w
}

impl Grid {
    /// `finest` is the width of the cells touching a wall.
    pub fn new(mode: Mode, length: f64, nx: usize, vmax: f64, nv: usize, finest: f64) -> Result<Self> {
        if nx < 4 || nv < 4 || nv % 2 != 0 {
            return Err(Error::Config(format!("grid needs nx >= 4 and even nv >= 4, got {nx} x {nv}")));
        }
        if !(length > 0.0 && vmax > 0.0 && finest > 0.0) {
            return Err(Error::Config("grid extents must be positive".into()));
        }
        let dx = match mode {
            Mode::Halfline => graded_widths(length, nx, finest),
            Mode::Strip => {
                if nx % 2 != 0 {
                    return Err(Error::Config(format!("strip mode needs an even nx, got {nx}")));
                }
                let half = graded_widths(0.5 * length, nx / 2, finest);
                half.iter().chain(half.iter().rev()).copied().collect()
            }
        };
        let mut x_faces = Vec::with_capacity(nx + 1);
        x_faces.push(0.0);
        for w in &dx {
            x_faces.push(x_faces.last().unwrap() + w);
        }
        *x_faces.last_mut().unwrap() = length;
        let x_centres = x_faces.windows(2).map(|f| 0.5 * (f[0] + f[1])).collect();
        let dv = 2.0 * vmax / nv as f64;
        let v_centres = (0..nv).map(|j| -vmax + (j as f64 + 0.5) * dv).collect();
        Ok(Self {
            mode,
            x_faces,
            x_centres,
            dx,
            v_centres,
            dv,
            vmax,
        })
    }

    pub fn nx(&self) -> usize {
        self.dx.len()
    }

    pub fn nv(&self) -> usize {
        self.v_centres.len()
    }

    pub fn length(&self) -> f64 {
        *self.x_faces.last().unwrap()
    }

    /// Flat index of cell (x-cell i, v-cell j); rows are contiguous in x.
    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * self.nx() + i
    }

    pub fn area(&self, i: usize) -> f64 {
        self.dx[i] * self.dv
    }

    /// Largest time step the explicit transport tolerates (Courant number 1).
    pub fn transport_dt_limit(&self) -> f64 {
        let vfast = self.vmax - 0.5 * self.dv;
        self.dx.iter().copied().fold(f64::INFINITY, f64::min) / vfast
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn graded_cells_cover_the_interval() {
        let w = graded_widths(3.0, 100, 0.005);
        assert_relative_eq!(w.iter().sum::<f64>(), 3.0, max_relative = 1e-14);
        assert_relative_eq!(w[0], 0.005, max_relative = 1e-6);
        assert!(w.windows(2).all(|p| p[1] > p[0]));
        assert_eq!(graded_widths(1.0, 10, 0.5), vec![0.1; 10]);
    }

    #[test]
    fn strip_grid_is_mirror_symmetric() {
        let g = Grid::new(Mode::Strip, 1.0, 40, 4.0, 20, 0.002).unwrap();
        for i in 0..g.nx() {
            assert_relative_eq!(g.x_centres[i], 1.0 - g.x_centres[g.nx() - 1 - i], epsilon = 1e-14);
        }
        for j in 0..g.nv() {
            assert_relative_eq!(g.v_centres[j], -g.v_centres[g.nv() - 1 - j], epsilon = 1e-14);
        }
    }

    #[test]
    fn rejects_odd_velocity_count() {
        assert!(Grid::new(Mode::Halfline, 1.0, 10, 1.0, 9, 0.01).is_err());
    }
}
