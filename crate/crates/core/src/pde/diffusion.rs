//! Backward-Euler velocity diffusion ∂ₜP = ∂ᵥᵥP with zero flux at |v| = V.

use super::PhaseSpaceField;
use crate::linalg::solve_tridiagonal;

/// Implicit diffusion step; unconditionally stable, positivity-preserving and
/// exactly conservative in every x-column.
pub fn diffuse(field: &mut PhaseSpaceField, dt: f64) {
    let grid = field.grid.clone();
    let (nx, nv) = (grid.nx(), grid.nv());
    let c = dt / (grid.dv * grid.dv);
    let lower: Vec<f64> = (0..nv).map(|j| if j > 0 { -c } else { 0.0 }).collect();
    let upper: Vec<f64> = (0..nv).map(|j| if j + 1 < nv { -c } else { 0.0 }).collect();
    let diag: Vec<f64> = (0..nv).map(|j| 1.0 - lower[j] - upper[j]).collect();
    let mut col = vec![0.0; nv];
    for i in 0..nx {
        for j in 0..nv {
            col[j] = field.values[j * nx + i];
        }
        solve_tridiagonal(&lower, &diag, &upper, &mut col);
        for j in 0..nv {
            field.values[j * nx + i] = col[j];
        }
    }
}
