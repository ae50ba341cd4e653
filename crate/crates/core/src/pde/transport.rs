//! Free streaming v∂ₓP in flux form with the inelastic wall.
//!
//! Each v-row is advanced by a MUSCL upwind step. Mass leaving a row through
//! a wall is re-emitted with speed scaled by r: the velocity cell
//! [−b, −a] maps onto [ra, rb] and its flux is split over the target cells
//! by overlap, so P(0, rv) = P(0, −v)/r² holds in the cell-averaged sense and
//! no mass is created or lost at the wall.

use super::grid::{Grid, Mode};
use super::PhaseSpaceField;

/// Redistribution of wall flux: for every arriving row, the receiving rows
/// and the share of the flux each receives.
#[derive(Debug, Clone, PartialEq)]
pub struct WallMap {
    pub r: f64,
    /// Indexed by arriving row at x = 0 (v < 0).
    pub targets: Vec<Vec<(usize, f64)>>,
}

impl WallMap {
    pub fn new(grid: &Grid, r: f64) -> Self {
        let nv = grid.nv();
        let dv = grid.dv;
        let mut targets = vec![Vec::new(); nv];
        for (j, &vj) in grid.v_centres.iter().enumerate() {
            if vj >= 0.0 {
                continue;
            }
            let (lo, hi) = (r * (-vj - 0.5 * dv), r * (-vj + 0.5 * dv));
            let width = hi - lo;
            for (k, &vk) in grid.v_centres.iter().enumerate() {
                if vk <= 0.0 {
                    continue;
                }
                let overlap = (hi.min(vk + 0.5 * dv) - lo.max(vk - 0.5 * dv)).max(0.0);
                if overlap > 0.0 {
                    targets[j].push((k, overlap / width));
                }
            }
        }
        Self { r, targets }
    }
}

/// Wall trace at x = 0: arriving rows keep their first-cell values, departing
/// rows receive the re-emitted density.
pub fn apply_wall(field: &PhaseSpaceField, r: f64) -> Vec<f64> {
    let g = &field.grid;
    let map = WallMap::new(g, r);
    let mut trace: Vec<f64> = (0..g.nv()).map(|j| if g.v_centres[j] < 0.0 { field.values[g.idx(0, j)] } else { 0.0 }).collect();
    for (j, t) in map.targets.iter().enumerate() {
        let flux = -g.v_centres[j] * trace[j];
        for &(k, share) in t {
            trace[k] += share * flux / g.v_centres[k];
        }
    }
    trace
}

/// (arriving, departing) particle flux ∫|v|P dv through x = 0 for a trace.
pub fn wall_flux_balance(grid: &Grid, trace: &[f64]) -> (f64, f64) {
    let mut arriving = 0.0;
    let mut departing = 0.0;
    for (j, &v) in grid.v_centres.iter().enumerate() {
        if v < 0.0 {
            arriving += -v * trace[j] * grid.dv;
        } else {
            departing += v * trace[j] * grid.dv;
        }
    }
    (arriving, departing)
}

fn van_leer(left: f64, right: f64) -> f64 {
    if left * right <= 0.0 {
        0.0
    } else {
        2.0 * left * right / (left + right)
    }
}

/// Limited slopes of one row.
fn slopes(grid: &Grid, row: &[f64], out: &mut [f64]) {
    let n = row.len();
    out[0] = 0.0;
    out[n - 1] = 0.0;
    for i in 1..n - 1 {
        let sl = (row[i] - row[i - 1]) / (grid.x_centres[i] - grid.x_centres[i - 1]);
        let sr = (row[i + 1] - row[i]) / (grid.x_centres[i + 1] - grid.x_centres[i]);
        out[i] = van_leer(sl, sr);
    }
}

/// One transport step of length dt. Returns the mass that left through x = L
/// (half-line mode only; zero on the strip).
pub fn transport(field: &mut PhaseSpaceField, map: &WallMap, dt: f64) -> f64 {
    let grid = field.grid.clone();
    let (nx, nv) = (grid.nx(), grid.nv());
    let mut slope = vec![0.0; nx];
    let mut flux = vec![0.0; nx + 1];
    // Mass per unit v leaving through the left and right walls, per row.
    let mut left_out = vec![0.0; nv];
    let mut right_out = vec![0.0; nv];
    let mut lost = 0.0;
    for j in 0..nv {
        let v = grid.v_centres[j];
        let row = &mut field.values[j * nx..(j + 1) * nx];
        slopes(&grid, row, &mut slope);
        // flux[i] is the mass per unit v crossing face i rightwards over dt.
        if v > 0.0 {
            flux[0] = 0.0;
            for i in 0..nx {
                flux[i + 1] = v * dt * (row[i] + 0.5 * slope[i] * (grid.dx[i] - v * dt));
            }
            right_out[j] = flux[nx];
        } else {
            flux[nx] = 0.0;
            for i in 0..nx {
                flux[i] = v * dt * (row[i] - 0.5 * slope[i] * (grid.dx[i] + v * dt));
            }
            left_out[j] = -flux[0];
        }
        // Walls and the far end contribute no inflow here; re-emission follows.
        for i in 0..nx {
            row[i] += (flux[i] - flux[i + 1]) / grid.dx[i];
        }
    }
    // Re-emission at x = 0.
    for (j, targets) in map.targets.iter().enumerate() {
        for &(k, share) in targets {
            field.values[k * nx] += share * left_out[j] / grid.dx[0];
        }
    }
    match grid.mode {
        Mode::Strip => {
            // The wall at x = 1 is the mirror image of the wall at x = 0.
            for (j, targets) in map.targets.iter().enumerate() {
                let src = nv - 1 - j;
                for &(k, share) in targets {
                    let dst = nv - 1 - k;
                    field.values[dst * nx + nx - 1] += share * right_out[src] / grid.dx[nx - 1];
                }
            }
        }
        Mode::Halfline => {
            lost = right_out.iter().sum::<f64>() * grid.dv;
        }
    }
    lost
}
