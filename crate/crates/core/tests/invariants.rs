use inelastic_kfp::exponents::{alpha_of_r, beta_of_r, beta_residual, critical_r, k_gamma};
use inelastic_kfp::lattice::{step_master, LatticeDist};
use inelastic_kfp::pde::diffusion::diffuse;
use inelastic_kfp::pde::*;
use inelastic_kfp::profiles::{g_gamma, lambda_gamma};
use inelastic_kfp::sde::{step_exact, ParticleState};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn alpha_solves_its_equation_and_increases(lr1 in -4.0f64..2.0, gap in 0.01f64..1.0) {
        let (r1, r2) = (10f64.powf(lr1), 10f64.powf(lr1 + gap));
        let (a1, a2) = (alpha_of_r(r1).unwrap(), alpha_of_r(r2).unwrap());
        prop_assert!(a1 < a2);
        prop_assert!((r1.powf(2.0 + 3.0 * a1) * k_gamma(a1) - 1.0).abs() < 1e-9);
        prop_assert!(a1 > -5.0 / 6.0 && a2 < 1.0 / 6.0);
    }

    #[test]
    fn beta_is_the_adjoint_exponent(lr in -4.0f64..0.0) {
        let r = 10f64.powf(lr);
        let b = beta_of_r(r).unwrap();
        prop_assert!((b + alpha_of_r(r).unwrap() + 2.0 / 3.0).abs() < 1e-12);
        prop_assert!(beta_residual(r, b).abs() < 1e-9);
        prop_assert_eq!(b > 0.0, r < critical_r());
    }

    #[test]
    fn lambda_stays_positive(gamma in -0.83f64..0.16, zeta in -8.0f64..8.0) {
        prop_assert!(lambda_gamma(gamma, zeta).unwrap() > 0.0);
    }

    #[test]
    fn g_is_homogeneous(x in 0.05f64..3.0, v in -2.0f64..2.0, l in 0.5f64..2.0) {
        let a = alpha_of_r(0.1).unwrap();
        for g in [-2.0 / 3.0, a] {
            let lhs = g_gamma(g, l * l * l * x, l * v).unwrap();
            let rhs = l.powf(3.0 * g) * g_gamma(g, x, v).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs.abs());
        }
    }

    #[test]
    fn exact_step_is_deterministic_without_noise(x in 0.0f64..2.0, v in -2.0f64..2.0, h in 1e-6f64..0.1) {
        let s = step_exact(ParticleState { x, v, t: 0.0 }, h, 0.0, 0.0);
        prop_assert!((s.x - (x + v * h)).abs() < 1e-14);
        prop_assert_eq!(s.v, v);
    }

    #[test]
    fn lattice_mass_is_conserved(
        lambda in 0.0f64..1.0,
        weights in prop::collection::vec(0.0f64..1.0, 8),
        steps in 1usize..200,
    ) {
        let mut d = LatticeDist::from_profile(1.0 / 16.0, lambda, |x| {
            let k = ((x * 2.0) as usize).min(7);
            weights[k] + 1e-3
        })
        .unwrap();
        let mut absorbing = LatticeDist { lambda: 0.0, ..d.clone() };
        for _ in 0..steps {
            d = step_master(&d);
            prop_assert!(d.p.iter().all(|&p| p >= 0.0));
            let next = step_master(&absorbing);
            prop_assert!(next.p[0] >= absorbing.p[0]);
            absorbing = next;
        }
        prop_assert!((d.total_mass() - 1.0).abs() < 1e-12);
        prop_assert!((absorbing.total_mass() - 1.0).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn wall_reemission_conserves_flux(r in 0.17f64..1.0, seed in 0u64..1000) {
        let s = init_field(&PdeConfig {
            bc: OriginBc::Supercritical,
            r,
            nx: 32,
            nv: 64,
            ..PdeConfig::default()
        })
        .unwrap();
        let mut field = s.field.clone();
        let g = field.grid.clone();
        for j in 0..g.nv() {
            let u = ((seed as f64 + 1.0) * (j as f64 + 0.5) * 0.618_033_988_7).fract();
            field.values[g.idx(0, j)] = u;
        }
        let (arriving, departing) = wall_flux_balance(&g, &apply_wall(&field, r));
        prop_assert!((arriving - departing).abs() <= 1e-10 * arriving);
    }

    #[test]
    fn velocity_diffusion_conserves_each_column(dt in 1e-4f64..0.5) {
        let s = init_field(&PdeConfig {
            bc: OriginBc::Nontrapping,
            nx: 32,
            nv: 64,
            ..PdeConfig::default()
        })
        .unwrap();
        let mut field = s.field.clone();
        let before = field.mass();
        diffuse(&mut field, dt);
        prop_assert!((field.mass() - before).abs() < 1e-12);
        prop_assert!(field.values.iter().all(|&p| p >= -1e-15));
    }
}
