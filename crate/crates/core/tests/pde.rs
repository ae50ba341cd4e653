use approx::assert_relative_eq;
use inelastic_kfp::pde::*;
use inelastic_kfp::profiles::g_gamma;
use inelastic_kfp::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn halfline(bc: OriginBc, r: f64) -> PdeConfig {
    PdeConfig {
        bc,
        r,
        ..PdeConfig::default()
    }
}

#[test]
fn initial_field_is_normalized_and_graded() {
    let s = init_field(&halfline(OriginBc::Trapping, 0.1)).unwrap();
    assert!((s.total_mass() - 1.0).abs() < 1e-12);
    let g = &s.field.grid;
    let delta = s.config.excision_scale();
    assert_relative_eq!(delta, 0.06, max_relative = 1e-12);
    assert_relative_eq!(g.dx[0], delta / 8.0, max_relative = 1e-6);
    assert!(g.dx[g.nx() - 1] > g.length() / g.nx() as f64);
    assert!(s.excisions[0].condition < 1e3);
}

#[test]
fn incompatible_settings_are_refused() {
    let e = init_field(&halfline(OriginBc::PartialTrapping { mu_star: 5.0 }, 0.5)).unwrap_err();
    assert!(matches!(e, Error::Config(_)));
    assert!(init_field(&halfline(OriginBc::Supercritical, 0.1)).is_err());
    let cfg = PdeConfig {
        dt: Some(1.0),
        ..PdeConfig::default()
    };
    assert!(matches!(init_field(&cfg), Err(Error::Config(_))));
}

#[test]
fn elastic_wall_is_a_mirror() {
    let mut s = init_field(&halfline(OriginBc::Supercritical, 1.0)).unwrap();
    let g = s.field.grid.clone();
    for j in 0..g.nv() {
        let v = g.v_centres[j];
        s.field.values[g.idx(0, j)] = (-v * v).exp();
    }
    let trace = apply_wall(&s.field, 1.0);
    for j in 0..g.nv() {
        assert_relative_eq!(trace[j], trace[g.nv() - 1 - j], max_relative = 1e-12);
        assert_relative_eq!(trace[j], s.field.at(0, j), max_relative = 1e-12);
    }
}

#[test]
fn wall_flux_balances_for_random_data() {
    let mut s = init_field(&halfline(OriginBc::Supercritical, 0.3)).unwrap();
    let g = s.field.grid.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for j in 0..g.nv() {
        s.field.values[g.idx(0, j)] = rng.random::<f64>();
    }
    let (arriving, departing) = wall_flux_balance(&g, &apply_wall(&s.field, 0.3));
    assert!((arriving - departing).abs() < 1e-8 * arriving);
}

#[test]
fn ring_fit_recovers_the_expansion() {
    let mut s = init_field(&halfline(OriginBc::Trapping, 0.1)).unwrap();
    let alpha = s.constants.alpha;
    let g = s.field.grid.clone();
    let ex = s.excisions[0].clone();
    ex.fill_with(&g, &mut s.field.values, |x, v| g_gamma(alpha, x, v).unwrap());
    let (a, b) = fit_origin_coeffs(&s.field, &ex).unwrap();
    assert!((a - 1.0).abs() < 1e-6 && b.abs() < 1e-6, "{a} {b}");
    ex.fill_with(&g, &mut s.field.values, |x, v| {
        2.0 * g_gamma(-2.0 / 3.0, x, v).unwrap() + 3.0 * g_gamma(alpha, x, v).unwrap()
    });
    let (a, b) = fit_origin_coeffs(&s.field, &ex).unwrap();
    assert!((a - 3.0).abs() < 1e-6 && (b - 2.0).abs() < 1e-6, "{a} {b}");
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    ex.fill_with(&g, &mut s.field.values, |x, v| {
        g_gamma(alpha, x, v).unwrap() * (1.0 + 1e-3 * (2.0 * rng.random::<f64>() - 1.0))
    });
    let (a, _) = fit_origin_coeffs(&s.field, &ex).unwrap();
    assert!((a - 1.0).abs() < 1e-2, "{a}");
}

#[test]
fn nontrapping_conserves_interior_mass() {
    let mut s = init_field(&halfline(OriginBc::Nontrapping, 0.1)).unwrap();
    s.run_to(0.5).unwrap();
    assert!((s.interior_mass() - 1.0).abs() < 1e-3);
    assert!(s.history.iter().all(|h| h.m == 0.0));
    assert!((s.total_mass() - 1.0).abs() < 1e-3);
}

#[test]
fn trapping_moves_mass_to_the_origin() {
    let mut s = init_field(&halfline(OriginBc::Trapping, 0.1)).unwrap();
    s.run_to(0.5).unwrap();
    let o = s.origins[0];
    assert!(o.m > 0.0);
    assert!((o.m - (1.0 - s.interior_mass())).abs() < 2e-3);
    for w in s.history.windows(2) {
        assert!(w[1].m - w[0].m >= -1e-6 * s.dt);
        assert!(w[1].interior_mass <= w[0].interior_mass + 1e-12);
    }
}

#[test]
fn supercritical_run_keeps_its_mass() {
    let mut s = init_field(&halfline(OriginBc::Supercritical, 0.5)).unwrap();
    s.run_to(0.5).unwrap();
    assert!((s.interior_mass() - 1.0).abs() < 1e-3);
    assert_eq!(s.origins[0].m, 0.0);
}

#[test]
fn elastic_run_matches_free_space_kernel() {
    let cfg = PdeConfig {
        r: 1.0,
        bc: OriginBc::Supercritical,
        blob: Blob {
            image: true,
            ..Blob::default()
        },
        ..PdeConfig::default()
    };
    let mut s = init_field(&cfg).unwrap();
    s.run_to(0.25).unwrap();
    assert!(free_space_deviation(&s) < 0.05);
}

#[test]
fn velocity_refinement_keeps_interior_mass() {
    let run = |nv| {
        let mut s = init_field(&PdeConfig {
            nv,
            ..halfline(OriginBc::Trapping, 0.1)
        })
        .unwrap();
        s.run_to(0.5).unwrap();
        s.interior_mass()
    };
    assert!((run(160) - run(320)).abs() < 1e-3);
}

fn strip(bc: OriginBc, blob: Blob) -> PdeConfig {
    PdeConfig {
        mode: Mode::Strip,
        bc,
        nx: 80,
        nv: 120,
        vmax: 4.0,
        blob,
        ..PdeConfig::default()
    }
}

#[test]
fn nontrapping_strip_steady_state_is_symmetric() {
    let blob = Blob {
        x0: 0.3,
        v0: 0.5,
        ..Blob::default()
    };
    let st = steady_state_strip(&strip(OriginBc::Nontrapping, blob), 1e-3, 50.0).unwrap();
    assert!(st.solver.field.symmetry_residual() < 0.05);
    assert!((st.solver.total_mass() - 1.0).abs() < 1e-9);
}

#[test]
fn symmetric_data_load_both_corners_equally() {
    let mut s = init_field(&strip(OriginBc::Trapping, Blob::default())).unwrap();
    s.run_to(2.0).unwrap();
    let (m1, m2) = (s.origins[0].m, s.origins[1].m);
    assert!(m1 > 0.0 && (m1 - m2).abs() < 1e-3);
}

#[test]
fn trapping_strip_drains_into_the_corners() {
    let st = steady_state_strip(&strip(OriginBc::Trapping, Blob::default()), 1e-3, 200.0).unwrap();
    let s = &st.solver;
    assert!(s.interior_mass() < 1e-2);
    assert!(s.origins[0].m + s.origins[1].m > 0.99);
}

#[test]
fn strip_requires_strip_mode() {
    assert!(steady_state_strip(&PdeConfig::default(), 1e-3, 1.0).is_err());
}
