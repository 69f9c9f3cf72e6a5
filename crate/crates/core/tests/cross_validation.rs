//! The three propagators checked against each other.

use gaussbeam::gaussian::{integrate, reconstruct_wavefunction};
use gaussbeam::grid::SplitStepPropagator;
use gaussbeam::harness::builtin;
use gaussbeam::oracle::{exact_params, stationary_width_solution};
use gaussbeam::potential::{pt_tanh_gaussian, quadratic_linear, PtPotentialParams, QuadraticLinearParams};
use gaussbeam::{Complex64, GaussianParams, GridSpec, GridState, PhysicalConstants, Potential};
use rand::{Rng, SeedableRng};

const H1: PhysicalConstants = PhysicalConstants {
    hbar: 1.0,
    n_zero: 1.0,
};

fn rel_l2(a: &GridState, b: &GridState) -> f64 {
    a.distance(b).unwrap() / b.norm()
}

fn well(eta: f64) -> Potential {
    pt_tanh_gaussian(PtPotentialParams {
        gamma: 1.0,
        omega: 1.0,
        eta,
    })
    .unwrap()
}

#[test]
fn grid_follows_exact_gaussian_in_quadratic_potential() {
    let params = QuadraticLinearParams {
        omega: 1.0,
        gamma: 1.0,
    };
    let v = quadratic_linear(params).unwrap();
    let spec = GridSpec::new(20.0, 4096).unwrap();
    let prop = SplitStepPropagator::new(spec, &v, 1e-3, H1).unwrap();
    let mut rng = rand::rngs::StdRng::seed_from_u64(5);
    for _ in 0..4 {
        let initial = GaussianParams::new(
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-1.5..1.5),
            Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(0.5..2.0)),
            1.0,
            rng.gen_range(-1.0..1.0),
        );
        let mut psi = reconstruct_wavefunction(&initial, &spec).unwrap().state;
        prop.advance(&mut psi, 1000).unwrap();
        let exact = exact_params(&initial, params, 1.0, 1.0).unwrap();
        let target = reconstruct_wavefunction(&exact, &spec).unwrap().state;
        let err = rel_l2(&psi, &target);
        assert!(err < 1e-5, "relative L2 error {err:e} for {initial:?}");
    }
}

#[test]
fn gaussian_integrator_matches_oracle_with_phase() {
    let params = QuadraticLinearParams {
        omega: 1.3,
        gamma: 0.7,
    };
    let v = quadratic_linear(params).unwrap();
    let mut rng = rand::rngs::StdRng::seed_from_u64(8);
    for _ in 0..10 {
        let initial = GaussianParams::new(
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(0.3..2.5)),
            rng.gen_range(0.5..2.0),
            rng.gen_range(-1.0..1.0),
        );
        let traj = integrate(&initial, &v, 12.0, 1e-3, 500, &H1).unwrap();
        for s in &traj.samples {
            let exact = exact_params(&initial, params, 1.0, s.z).unwrap();
            let p = &s.params;
            assert!((p.q - exact.q).abs() < 1e-8, "q at z={}", s.z);
            assert!((p.p - exact.p).abs() < 1e-8, "p at z={}", s.z);
            assert!((p.b - exact.b).norm() < 1e-8, "b at z={}", s.z);
            assert!((p.norm / exact.norm - 1.0).abs() < 1e-7, "norm at z={}", s.z);
            assert!((p.alpha - exact.alpha).abs() < 1e-7, "alpha at z={}", s.z);
        }
    }
}

#[test]
fn stationary_width_solution_matches_integrator_for_any_omega() {
    for &(omega, gamma, q0, p0) in &[(1.0, 1.0, 0.5, 0.2), (0.6, 0.8, -1.0, 0.4), (1.7, -0.5, 0.3, -0.9)] {
        let v = quadratic_linear(QuadraticLinearParams { omega, gamma }).unwrap();
        let initial = GaussianParams::new(q0, p0, Complex64::new(0.0, omega), 1.0, 0.0);
        let traj = integrate(&initial, &v, 10.0, 1e-3, 250, &H1).unwrap();
        for s in &traj.samples {
            let exact = stationary_width_solution(q0, p0, gamma, omega, 1.0, s.z);
            assert!((s.params.q - exact.q).abs() < 1e-9);
            assert!((s.params.p - exact.p).abs() < 1e-9);
            assert!((s.params.norm / exact.norm_ratio - 1.0).abs() < 1e-9);
            assert!((s.params.b - Complex64::new(0.0, omega)).norm() < 1e-12);
        }
    }
}

fn terminal_state(v: &Potential, initial: &GaussianParams, spec: GridSpec, dz: f64, z: f64) -> GridState {
    let prop = SplitStepPropagator::new(spec, v, dz, H1).unwrap();
    let psi = reconstruct_wavefunction(initial, &spec).unwrap().state;
    prop.propagate(psi, z, usize::MAX, false).unwrap().final_state
}

#[test]
fn strang_splitting_is_second_order() {
    // Beam of the fig4-top scenario.
    let v = well(10.0);
    let initial = GaussianParams::new(-4.0, 0.0, Complex64::new(0.0, 1.0), 1.0, 0.0);
    let spec = GridSpec::new(80.0, 4096).unwrap();
    let z = 4.0;
    let coarse = 0.02;
    let reference = terminal_state(&v, &initial, spec, coarse / 8.0, z);
    let e1 = rel_l2(&terminal_state(&v, &initial, spec, coarse, z), &reference);
    let e2 = rel_l2(&terminal_state(&v, &initial, spec, coarse / 2.0, z), &reference);
    assert!(e1 / e2 >= 3.5, "error ratio {} ({e1:e}, {e2:e})", e1 / e2);
}

#[test]
fn grid_observables_converge_with_resolution() {
    let names = [
        "fig4-top", "fig4-mid", "fig5-top", "fig5-mid", "fig6-top", "fig6-mid", "fig6-bottom",
    ];
    for name in names {
        let s = builtin(name).unwrap();
        let v = s.potential.build().unwrap();
        let initial = s.initial.params();
        let observe = |n: usize| {
            let spec = GridSpec::new(80.0, n).unwrap();
            let prop = SplitStepPropagator::new(spec, &v, 1e-3, H1).unwrap();
            let psi = reconstruct_wavefunction(&initial, &spec).unwrap().state;
            let run = prop.propagate(psi, s.z_max, usize::MAX, false).unwrap();
            run.samples.last().unwrap().observables
        };
        let (a, b) = (observe(2048), observe(4096));
        for (what, x, y) in [
            ("norm", a.norm / b.norm, 1.0),
            ("mean_q", a.mean_q, b.mean_q),
            ("mean_p", a.mean_p, b.mean_p),
            ("delta_q", a.delta_q, b.delta_q),
        ] {
            assert!((x - y).abs() < 1e-8, "{name}: {what} {x} vs {y}");
        }
    }
}

#[test]
fn semiclassical_limit_improves_agreement_with_grid() {
    // Fixed q0/eta: larger wells make the quadratic expansion better.
    let mut errors = Vec::new();
    for (eta, q0) in [(5.0, 1.0), (10.0, 2.0), (15.0, 3.0)] {
        let v = well(eta);
        let initial = GaussianParams::new(q0, 0.0, Complex64::new(0.0, 1.0), 1.0, 0.0);
        let traj = integrate(&initial, &v, 10.0, 1e-3, 100, &H1).unwrap();
        let spec = GridSpec::new(8.0 * eta, 4096).unwrap();
        let prop = SplitStepPropagator::new(spec, &v, 1e-3, H1).unwrap();
        let psi = reconstruct_wavefunction(&initial, &spec).unwrap().state;
        let run = prop.propagate(psi, 10.0, 100, false).unwrap();
        let sup = traj
            .samples
            .iter()
            .zip(&run.samples)
            .map(|(g, r)| (g.params.q - r.observables.mean_q).abs())
            .fold(0.0, f64::max);
        errors.push(sup);
    }
    assert!(errors[0] > errors[1] && errors[1] > errors[2], "{errors:?}");
}
