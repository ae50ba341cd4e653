use inelastic_kfp::sde::{hitting_statistics, HittingConfig};

/// Median first-return time for launch speed 1, from 2·10⁴ paths at
/// h_max = 2e-3, step scale 2.5e-3 (unreturned paths counted as +∞).
const GOLDEN_MEDIAN_T1: f64 = 13.713391402674631;
const GOLDEN_PATHS: f64 = 20_000.0;

#[test]
fn median_return_time_tracks_golden_value() {
    let n = 4000;
    let s = hitting_statistics(1.0, n, 77, &HittingConfig::default()).unwrap();
    assert!(s.h1.iter().all(|&h| h > 0.0));
    // Fraction below the golden median is binomial around 1/2.
    let below = s.t1.iter().filter(|&&t| t <= GOLDEN_MEDIAN_T1).count() as f64 / n as f64;
    let sigma = (0.25 / n as f64 + 0.25 / GOLDEN_PATHS).sqrt();
    assert!((below - 0.5).abs() < 3.0 * sigma, "fraction below golden median {below}");
}
