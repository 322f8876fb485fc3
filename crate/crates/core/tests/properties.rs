//! Module-level invariants on randomized inputs.
//!
//! Runs standalone with `cargo test --test properties`; nothing here
//! propagates long ramps or regenerates sweep data.

use num_complex::Complex64;
use proptest::prelude::*;

use twobody_sta::analysis::fit_decay_rate;
use twobody_sta::correlations::{rspdm, trace_distance, two_body_from_eigenstate, Rspdm, TwoBodyState, UniformGrid};
use twobody_sta::numerics::quad::{integrate_pieces, QuadConfig};
use twobody_sta::ramps::{Ramp, SwitchingFunction};
use twobody_sta::specfun::{gamma, oscillator_values};
use twobody_sta::sta::StaPulse;
use twobody_sta::static2b::{eigenstate, energy_residual, even_energy};
use twobody_sta::tdse::{propagate, PropagatorConfig};

const BREAKS: [f64; 8] = [0.0, 0.5, 1.0, 2.5, 4.0, 6.0, 9.0, 15.0];

fn small_grid() -> UniformGrid {
    UniformGrid::new(6.0, 81).unwrap()
}

fn ground_rho(g: f64) -> Rspdm {
    rspdm(&two_body_from_eigenstate(&eigenstate(g, 0).unwrap(), &small_grid()).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn oscillator_functions_are_orthonormal(a in 0usize..40, b in 0usize..40) {
        let (l, m) = (14.0, 4001);
        let dx = 2.0 * l / (m - 1) as f64;
        let s: f64 = (0..m)
            .map(|k| {
                let u = oscillator_values(40, -l + k as f64 * dx);
                u[a] * u[b] * dx
            })
            .sum();
        let want = if a == b { 1.0 } else { 0.0 };
        prop_assert!((s - want).abs() < 1e-9);
    }

    #[test]
    fn gamma_recurrence(x in 0.05f64..30.0) {
        let (a, b) = (gamma(x + 1.0).unwrap(), x * gamma(x).unwrap());
        prop_assert!((a - b).abs() < 1e-12 * a.abs());
    }

    #[test]
    fn energies_solve_the_quantization_condition(g in -0.9f64..200.0) {
        let e = even_energy(g, 0).unwrap();
        prop_assert!(energy_residual(g, e).unwrap().abs() < 1e-10);
        prop_assert!(e < 1.5);
        let e1 = even_energy(g.max(0.0), 1).unwrap();
        prop_assert!(e1 > e);
    }

    #[test]
    fn energy_increases_with_coupling(g in -0.9f64..100.0, dg in 0.01f64..10.0) {
        prop_assert!(even_energy(g + dg, 0).unwrap() > even_energy(g, 0).unwrap());
    }

    #[test]
    fn eigenstates_are_normalized_and_orthogonal(g in 0.1f64..60.0) {
        let (a, b) = (eigenstate(g, 0).unwrap(), eigenstate(g, 1).unwrap());
        let q = QuadConfig::default();
        let norm = 2.0 * integrate_pieces(|x| a.density(x), &BREAKS, q).unwrap().value;
        let cross = 2.0 * integrate_pieces(|x| a.value(x) * b.value(x), &BREAKS, q).unwrap().value;
        prop_assert!((norm - 1.0).abs() < 1e-8);
        prop_assert!(cross.abs() < 1e-8);
    }

    #[test]
    fn cusp_condition(g in 0.1f64..500.0, branch in 0usize..3) {
        let st = eigenstate(g, branch).unwrap();
        prop_assert!((st.slope(0.0) - g * st.value(0.0)).abs() < 1e-9 * (1.0 + g.abs()) * st.value(0.0).abs().max(1.0));
    }

    #[test]
    fn switching_function_is_monotone_between_fixed_ends(t_f in 0.1f64..20.0, u in 0.0f64..1.0, v in 0.0f64..1.0) {
        let sf = SwitchingFunction::new(t_f).unwrap();
        prop_assert!(sf.eta(0.0).unwrap().abs() < 1e-14);
        prop_assert!((sf.eta(t_f).unwrap() - 1.0).abs() < 1e-12);
        let (lo, hi) = if u < v { (u, v) } else { (v, u) };
        prop_assert!(sf.eta(lo * t_f).unwrap() <= sf.eta(hi * t_f).unwrap() + 1e-15);
    }

    #[test]
    fn ramp_derivatives_match_central_differences(g_f in 1.0f64..40.0, t_f in 1.0f64..10.0, s in 0.05f64..0.95) {
        let t = s * t_f;
        let h = 1e-5 * t_f;
        for ramp in [
            Ramp::reference(0.0, g_f, t_f).unwrap(),
            Ramp::linear(0.0, g_f, t_f).unwrap(),
            Ramp::from_sta(StaPulse::design(0.0, g_f, t_f).unwrap()),
        ] {
            let (_, gd, gdd) = ramp.derivatives(t).unwrap();
            let fd = (ramp.g(t + h).unwrap() - ramp.g(t - h).unwrap()) / (2.0 * h);
            let fdd = (ramp.g_dot(t + h).unwrap() - ramp.g_dot(t - h).unwrap()) / (2.0 * h);
            prop_assert!((fd - gd).abs() < 1e-5 * (1.0 + gd.abs()));
            prop_assert!((fdd - gdd).abs() < 1e-4 * (1.0 + gdd.abs()));
        }
    }

    #[test]
    fn sta_pulse_hits_both_equilibria(g_f in 1.0f64..40.0, t_f in 1.0f64..10.0) {
        let p = StaPulse::design(0.0, g_f, t_f).unwrap();
        prop_assert!(p.g(0.0).unwrap().abs() < 1e-6);
        prop_assert!((p.g(t_f).unwrap() - g_f).abs() < 1e-6);
    }

    #[test]
    fn propagation_is_unitary(g_f in 0.0f64..30.0, t_f in 0.2f64..1.5) {
        let cfg = PropagatorConfig { n_max: 64, dt: 5e-3, ..Default::default() };
        let tr = propagate(&Ramp::reference(0.0, g_f, t_f).unwrap(), &cfg).unwrap();
        prop_assert!((tr.final_state.norm_sqr() - tr.initial.norm_sqr()).abs() < 1e-10);
    }

    #[test]
    fn decay_fit_recovers_synthetic_exponentials(alpha in 0.05f64..3.0, a in 0.01f64..10.0) {
        let pts: Vec<(f64, f64)> = (2..=8).map(|t| (t as f64, a * (-alpha * t as f64).exp())).collect();
        let fit = fit_decay_rate(&pts, [1.5, 8.0]).unwrap();
        prop_assert!((fit.alpha - alpha).abs() < 1e-9);
        prop_assert!((fit.intercept - a.ln()).abs() < 1e-8);
        prop_assert!((fit.r2 - 1.0).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn density_matrices_are_hermitian_unit_trace_and_positive(
        c in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 3),
        w in prop::collection::vec(0.4f64..1.5, 3),
    ) {
        let grid = small_grid();
        // an even relative wavefunction built from complex Gaussians
        let phi = |xs: &[f64]| -> twobody_sta::Result<Vec<Complex64>> {
            Ok(xs.iter().map(|&x| {
                c.iter().zip(&w).map(|(&(re, im), &s)| Complex64::new(re, im) * (-(x * x) / (2.0 * s * s)).exp()).sum::<Complex64>()
                    + Complex64::new(1e-3, 0.0) * (-x * x).exp()
            }).collect())
        };
        let st = TwoBodyState::from_relative(&grid, phi).unwrap().normalized().unwrap();
        prop_assert!(st.symmetry_residual() < 1e-12);
        let rho = rspdm(&st).unwrap();
        prop_assert!(rho.hermiticity_residual() < 1e-12);
        prop_assert!((rho.trace() - 1.0).abs() < 1e-10);
        prop_assert!(rho.eigenvalues().iter().all(|&l| l > -1e-9));
    }

    #[test]
    fn trace_distance_is_a_metric(ga in 0.0f64..50.0, gb in 0.0f64..50.0, gc in 0.0f64..50.0) {
        let (a, b, c) = (ground_rho(ga), ground_rho(gb), ground_rho(gc));
        let ab = trace_distance(&a, &b).unwrap();
        prop_assert!(trace_distance(&a, &a).unwrap() < 1e-12);
        prop_assert!((ab - trace_distance(&b, &a).unwrap()).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&ab));
        let via = trace_distance(&a, &c).unwrap() + trace_distance(&c, &b).unwrap();
        prop_assert!(ab <= via + 1e-12);
    }
}
