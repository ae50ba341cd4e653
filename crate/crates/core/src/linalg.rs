//! Small dense and banded solvers.

/// Solves a tridiagonal system in place (Thomas algorithm).
/// `lower[i]` couples row i to i−1, `upper[i]` couples row i to i+1.
pub fn solve_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &mut [f64]) {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut beta = diag[0];
    rhs[0] /= beta;
    for i in 1..n {
        c[i - 1] = upper[i - 1] / beta;
        beta = diag[i] - lower[i] * c[i - 1];
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / beta;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= c[i] * rhs[i + 1];
    }
}

/// Least-squares fit of y ≈ c₁a + c₂b. Returns the coefficients and the
/// 2-norm condition number of the design matrix [a b].
pub fn least_squares_2(a: &[f64], b: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let dot = |p: &[f64], q: &[f64]| p.iter().zip(q).map(|(s, t)| s * t).sum::<f64>();
    let (aa, ab, bb) = (dot(a, a), dot(a, b), dot(b, b));
    let (ay, by) = (dot(a, y), dot(b, y));
    let det = aa * bb - ab * ab;
    // Eigenvalues of the Gram matrix; cond(A)² = λmax/λmin.
    let tr = aa + bb;
    let disc = (0.25 * (aa - bb).powi(2) + ab * ab).sqrt();
    let (lmax, lmin) = (0.5 * tr + disc, 0.5 * tr - disc);
    let cond = if lmin > 0.0 { (lmax / lmin).sqrt() } else { f64::INFINITY };
    ((bb * ay - ab * by) / det, (aa * by - ab * ay) / det, cond)
}

/// Least-squares fit of y ≈ c·a.
pub fn least_squares_1(a: &[f64], y: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(y).map(|(s, t)| s * t).sum();
    let den: f64 = a.iter().map(|s| s * s).sum();
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn tridiagonal_solver() {
        let (lo, di, up) = (vec![0.0, 1.0, 1.0], vec![4.0, 4.0, 4.0], vec![1.0, 1.0, 0.0]);
        let mut rhs = vec![5.0, 6.0, 5.0];
        solve_tridiagonal(&lo, &di, &up, &mut rhs);
        for x in rhs {
            assert_relative_eq!(x, 1.0, max_relative = 1e-14);
        }
    }

    #[test]
    fn two_column_fit_recovers_coefficients() {
        let a = [1.0, 2.0, 3.0, 4.0];
        let b = [1.0, 0.5, 0.25, 0.125];
        let y: Vec<f64> = a.iter().zip(&b).map(|(p, q)| 3.0 * p - 2.0 * q).collect();
        let (c1, c2, cond) = least_squares_2(&a, &b, &y);
        assert_relative_eq!(c1, 3.0, max_relative = 1e-12);
        assert_relative_eq!(c2, -2.0, max_relative = 1e-12);
        assert!(cond > 1.0 && cond.is_finite());
        let (_, _, cond) = least_squares_2(&a, &a, &y);
        assert!(cond > 1e6);
    }
}
