mod common;

use common::{c, fd_gradient, line_min, random_signal, rng};
use nalgebra::DMatrix;
use ppr_core::algsolve::KernelMethod;
use ppr_core::itersolve::*;
use ppr_core::linalg::{CMat, CVec, HermEig};
use ppr_core::sigmodel::*;
use ppr_core::C64;
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn problem(n: usize, m: usize, seed: u64) -> (BivariateSignal, MeasurementScheme, MeasurementSet, LiftedProblem) {
    let x = random_signal(n, seed);
    let s = simple_scheme(m).unwrap();
    let y = measure(&x, &s);
    let p = LiftedProblem::new(&y, &s, n).unwrap();
    (x, s, y, p)
}

fn cvec(v: &[C64]) -> CVec {
    CVec::from_column_slice(v)
}

fn random_cvec(n: usize, r: &mut ChaCha8Rng) -> CVec {
    CVec::from_iterator(n, (0..n).map(|_| synth::complex_gaussian(r)))
}


#[test]
fn lifted_rows_match_kronecker_layout() {
    let (_, s, _, p) = problem(5, 9, 1);
    assert_eq!(p.c().shape(), (36, 10));
    for m in 0..9 {
        for (pi, b) in s.projections().iter().enumerate() {
            for (i, bi) in b.iter().enumerate() {
                for n in 0..5 {
                    let want = bi * C64::from_polar(1.0, -2.0 * std::f64::consts::PI * (m * n) as f64 / 9.0);
                    assert!((p.c()[(m * 4 + pi, i * 5 + n)] - want).norm() < 1e-14);
                }
            }
        }
    }
}

#[test]
fn lifted_reproduces_measure() {
    let (x, _, y, p) = problem(7, 13, 2);
    let u = p.apply(&cvec(&x.xi()));
    for (a, b) in u.iter().zip(y.values()) {
        assert!((a.norm_sqr() - b).abs() < 1e-12);
    }
}

#[test]
fn lifted_single_horizontal_projection_is_padded_dft() {
    let s = MeasurementScheme::new(6, vec![[c(1.0, 0.0), c(0.0, 0.0)]]).unwrap();
    let y = MeasurementSet::new(6, 1, vec![0.0; 6], 0.0).unwrap();
    let p = LiftedProblem::new(&y, &s, 4).unwrap();
    for m in 0..6 {
        for n in 0..4 {
            let w = C64::from_polar(1.0, -2.0 * std::f64::consts::PI * (m * n) as f64 / 6.0);
            assert!((p.c()[(m, n)] - w).norm() < 1e-14);
            assert_eq!(p.c()[(m, 4 + n)], c(0.0, 0.0));
        }
    }
}

#[test]
fn structured_lift_matches_dense() {
    let (_, _, _, p) = problem(6, 11, 3);
    let mut r = rng(4);
    let a = DMatrix::from_fn(12, 12, |_, _| synth::complex_gaussian(&mut r));
    let xi: CMat = &a * a.adjoint();
    let fast = p.lift_apply(&xi);
    let dense = p.lift_apply_dense(&xi);
    assert!(fast.iter().zip(&dense).all(|(u, v)| (u - v).abs() < 1e-11));
    let d: Vec<f64> = (0..p.y().len()).map(|_| r.random_range(-1.0..1.0)).collect();
    let fa = p.lift_adjoint(&d);
    let da = p.lift_adjoint_dense(&d);
    assert!((fa - da).iter().all(|z| z.norm() < 1e-11));
    // adjoint identity <A(Xi), d> = Re tr(Xi A*(d))
    let lhs: f64 = fast.iter().zip(&d).map(|(u, v)| u * v).sum();
    let rhs = (&xi * p.lift_adjoint(&d)).trace().re;
    assert!((lhs - rhs).abs() < 1e-9 * lhs.abs().max(1.0));
}

#[test]
fn objective_and_gradient_vanish_at_truth() {
    let (x, _, _, p) = problem(8, 15, 5);
    let xi = cvec(&x.xi());
    assert!(p.objective(&xi) < 1e-26);
    assert!(p.gradient(&xi).norm() < 1e-12);
    let rot = xi.map(|z| z * C64::from_polar(1.0, 0.9));
    let mut r = rng(6);
    let other = random_cvec(16, &mut r);
    let rot_other = other.map(|z| z * C64::from_polar(1.0, -2.1));
    assert!((p.objective(&other) - p.objective(&rot_other)).abs() < 1e-10 * p.objective(&other));
    let _ = rot;
}

/// Real gradient of `F` along `(Re, Im)` coordinates by central differences.

#[test]
fn gradient_matches_finite_differences() {
    let mut r = rng(7);
    for t in 0..10 {
        let n = r.random_range(1..=8);
        let (_, _, _, p) = problem(n, 2 * n + 1, 100 + t);
        let xi = random_cvec(2 * n, &mut r);
        let fd = fd_gradient(&p, &xi, 1e-6);
        let g = p.gradient(&xi) * c(2.0, 0.0);
        let rel = (&fd - &g).norm() / g.norm();
        assert!(rel < 1e-6, "{rel}");
    }
}

#[test]
fn optimal_step_is_line_minimum() {
    let mut r = rng(8);
    for t in 0..20 {
        let (_, _, _, p) = problem(5, 11, 200 + t);
        let psi = random_cvec(10, &mut r);
        let g = p.gradient(&psi);
        let mu = wf_optimal_step(&p, &psi, &g);
        let f = |m: f64| p.objective(&(&psi - &g * c(m, 0.0)));
        let fmu = f(mu);
        let gs = line_min(f, 4.0 * mu);
        assert!((gs - mu).abs() < 1e-6 * mu, "{gs} {mu}");
        for _ in 0..100 {
            let other = r.random_range(0.0..2.0 * mu);
            assert!(fmu <= f(other) + 1e-12 * fmu.abs().max(1.0));
        }
        let eps = 1e-6 * mu;
        let deriv = (f(mu + eps) - f(mu - eps)) / (2.0 * eps);
        assert!(deriv.abs() < 1e-5 * fmu.max(1.0), "{deriv}");
    }
}

#[test]
fn wf_exact_init_is_fixed_point() {
    let (x, _, _, p) = problem(10, 19, 9);
    let res = wf_solve(&p, &x.xi(), &WfOptions::default()).unwrap();
    assert!(res.iterations <= 2);
    assert!(res.converged);
    assert!(mse_realigned(&res.signal, &x).unwrap() < 1e-26);
}

#[test]
fn wf_from_sylvester_init_noiseless() {
    let (x, s, y, p) = problem(16, 31, 10);
    let init = init_sylvester(&y, &s, 16, KernelMethod::Right).unwrap();
    assert!(p.objective(&cvec(&init)) < 1e-20);
    let res = wf_solve(&p, &init, &WfOptions::default()).unwrap();
    assert!(mse_realigned(&res.signal, &x).unwrap() < 1e-20);
    assert_eq!(res.trace.len(), res.iterations);
}

#[test]
fn wf_trace_is_monotone_enough_and_records_time() {
    let (_, _, _, p) = problem(8, 15, 11);
    let init = init_spectral(&p, SpectralScaling::Multiply);
    let res = wf_solve(&p, &init, &WfOptions { tol: 0.0, max_iter: 50 }).unwrap();
    assert_eq!(res.iterations, 50);
    assert!(!res.converged);
    assert!(res.trace.last().unwrap().cost < p.objective(&cvec(&init)));
    assert!(res.trace.windows(2).all(|w| w[1].seconds >= w[0].seconds));
}

#[test]
fn wf_rejects_non_finite_init() {
    let (_, _, _, p) = problem(4, 7, 12);
    let mut init = vec![c(0.1, 0.0); 8];
    init[3] = c(f64::NAN, 0.0);
    assert!(matches!(wf_solve(&p, &init, &WfOptions::default()), Err(ppr_core::Error::Diverged { .. })));
}

#[test]
fn spectral_init_properties() {
    // a one-sparse spectrum on the M-point grid: a polarised tone
    let (n, m) = (15, 15);
    let tone: Vec<C64> = (0..n).map(|k| C64::from_polar(1.0, 2.0 * std::f64::consts::PI * (4 * k) as f64 / m as f64)).collect();
    let x = BivariateSignal::new(tone.clone(), tone.iter().map(|z| z * c(0.3, 0.6)).collect()).unwrap();
    let s = simple_scheme(15).unwrap();
    let p = LiftedProblem::new(&measure(&x, &s), &s, n).unwrap();
    let init = init_spectral(&p, SpectralScaling::Multiply);
    let corr = ppr_core::linalg::dot_h(&init, &x.xi()).norm() / (cvec(&init).norm() * x.norm());
    assert!(corr > 0.5, "{corr}");

    let y: Vec<f64> = p.y().iter().map(|v| v / p.y().len() as f64).collect();
    let ymat = p.lift_adjoint(&y);
    assert!(ppr_core::linalg::hermitian_defect(&ymat) < 1e-14);
    assert!(HermEig::new(&ymat).values.iter().all(|&l| l > -1e-12));

    let zero = MeasurementSet::new(m, 4, vec![0.0; 4 * m], 0.0).unwrap();
    let pz = p.with_data(&zero).unwrap();
    let e = init_spectral(&pz, SpectralScaling::Multiply);
    assert_eq!(e[0], c(1.0, 0.0));
    assert!(e[1..].iter().all(|z| *z == c(0.0, 0.0)));
}

#[test]
fn spectral_scaling_variants() {
    let (x, _, _, p) = problem(8, 15, 13);
    let a = init_spectral(&p, SpectralScaling::Multiply);
    let b = init_spectral(&p, SpectralScaling::Divide);
    let (na, nb) = (cvec(&a).norm(), cvec(&b).norm());
    let row_energy: f64 = p.c().iter().map(|z| z.norm_sqr()).sum();
    let lambda = (8.0 * p.y().iter().sum::<f64>() / row_energy).sqrt();
    assert!((na - lambda).abs() < 1e-12 && (nb - 1.0 / lambda).abs() < 1e-12);
    // same direction
    let cos = ppr_core::linalg::dot_h(&a, &b).norm() / (na * nb);
    assert!((cos - 1.0).abs() < 1e-12);
    let _ = x;
}

#[test]
fn spectral_scaling_comparison_at_moderate_snr() {
    // multiply-by-lambda reaches lower error than divide-by-lambda after
    // the same WF budget; this is why it is the default
    let s = simple_scheme(31).unwrap();
    let mut mul = 0.0;
    let mut div = 0.0;
    for k in 0..10u64 {
        let x = random_signal(16, 40 + k);
        let y = add_noise(&measure(&x, &s), sigma2_for_snr(&x, &s, 30.0).unwrap(), k);
        let p = LiftedProblem::new(&y, &s, 16).unwrap();
        let run = |sc| {
            let r = wf_solve(&p, &init_spectral(&p, sc), &WfOptions { tol: 1e-12, max_iter: 300 }).unwrap();
            relative_mse_db(&r.signal, &x).unwrap()
        };
        mul += run(SpectralScaling::Multiply) / 10.0;
        div += run(SpectralScaling::Divide) / 10.0;
    }
    assert!(mul < div, "multiply {mul} dB, divide {div} dB");
}

#[test]
fn random_phase_init_properties() {
    let (_, _, _, p) = problem(6, 11, 14);
    let a = init_random_phase(&p, 3);
    assert_eq!(a, init_random_phase(&p, 3));
    assert_ne!(a, init_random_phase(&p, 4));
    assert!(a.iter().all(|z| z.is_finite()));
    // in the row space of C^H: projecting onto it is the identity
    let v = cvec(&a);
    let proj = ppr_core::linalg::pinv(p.c(), 1e-12) * (p.c() * &v);
    assert!((proj - &v).norm() < 1e-10 * v.norm());
}

#[test]
fn sylvester_init_right_matches_algebraic_output() {
    let (x, s, y, _) = problem(9, 17, 15);
    for m in [KernelMethod::Right, KernelMethod::Left] {
        let init = init_sylvester(&y, &s, 9, m).unwrap();
        assert!(mse_realigned(&BivariateSignal::from_xi(&init), &x).unwrap() < 1e-18);
    }
}

#[test]
fn sylvester_init_beats_spectral_at_60db() {
    let s = simple_scheme(63).unwrap();
    let mut wins = 0;
    for k in 0..20u64 {
        let x = random_signal(32, 300 + k);
        let y = add_noise(&measure(&x, &s), sigma2_for_snr(&x, &s, 60.0).unwrap(), k);
        let p = LiftedProblem::new(&y, &s, 32).unwrap();
        let opts = WfOptions { tol: 1e-12, max_iter: 300 };
        let a = wf_solve(&p, &init_sylvester(&y, &s, 32, KernelMethod::Right).unwrap(), &opts).unwrap();
        let b = wf_solve(&p, &init_spectral(&p, SpectralScaling::Multiply), &opts).unwrap();
        let cost = |r: &WfResult| p.objective(&cvec(&r.signal.xi()));
        if cost(&a) < cost(&b) {
            wins += 1;
        }
    }
    assert!(wins >= 16, "{wins}/20");
}

#[test]
fn cubic_roots() {
    let r = real_cubic_roots(1.0, -6.0, 11.0, -6.0);
    let mut r = r.clone();
    r.sort_by(f64::total_cmp);
    assert!(r.len() == 3 && (r[0] - 1.0).abs() < 1e-12 && (r[1] - 2.0).abs() < 1e-12 && (r[2] - 3.0).abs() < 1e-12);
    let r = real_cubic_roots(1.0, 0.0, 1.0, -2.0);
    assert!(r.len() == 1 && (r[0] - 1.0).abs() < 1e-12);
    let r = real_cubic_roots(0.0, 1.0, -3.0, 2.0);
    assert_eq!(r.len(), 2);
}

#[test]
fn sdp_zero_data_with_penalty() {
    let s = simple_scheme(7).unwrap();
    let y = MeasurementSet::new(7, 4, vec![0.0; 28], 0.0).unwrap();
    let p = LiftedProblem::new(&y, &s, 4).unwrap();
    let res = sdp_solve(&p, &SdpOptions { lambda: 0.1, ..Default::default() }).unwrap();
    assert!(res.lifted.iter().all(|z| z.norm() == 0.0));
    assert!(res.signal.norm() == 0.0);
}

#[test]
fn sdp_recovers_generic_gaussian_problem() {
    // the relaxation is tight for generic (non-Fourier) sensing vectors
    let n = 8;
    let mut r = rng(16);
    let rows = 6 * 2 * n;
    let cm = DMatrix::from_fn(rows, 2 * n, |_, _| synth::complex_gaussian(&mut r));
    let x = random_signal(n, 17);
    let u = &cm * cvec(&x.xi());
    let p = LiftedProblem::from_matrix(cm, u.iter().map(|z| z.norm_sqr()).collect()).unwrap();
    let res = sdp_solve(&p, &SdpOptions { max_iter: 3000, ..Default::default() }).unwrap();
    assert!(res.converged);
    assert!(mse_realigned(&res.signal, &x).unwrap() < 1e-10);
}

#[test]
fn sdp_iterates_are_psd_and_cost_decreases() {
    let (_, _, _, p) = problem(6, 11, 18);
    let mut min_eig = f64::INFINITY;
    let res = sdp_solve_observed(&p, &SdpOptions { max_iter: 300, ..Default::default() }, |_, xi| {
        let e = HermEig::new(xi);
        let scale = e.values[0].abs().max(1e-300);
        min_eig = min_eig.min(e.values.last().unwrap() / scale);
    })
    .unwrap();
    assert!(min_eig >= -1e-12);
    let first = res.trace.first().unwrap().cost;
    let last = res.trace.last().unwrap().cost;
    assert!(last <= first);
    assert!(last <= 0.5 * p.y().iter().map(|v| v * v).sum::<f64>());
}

#[test]
fn sdp_penalised_certificate() {
    // at convergence with lambda > 0 the prox-gradient fixed-point residual is small
    let x = random_signal(5, 19);
    let s = simple_scheme(9).unwrap();
    let y = add_noise(&measure(&x, &s), 1e-4, 20);
    let p = LiftedProblem::new(&y, &s, 5).unwrap();
    let opts = SdpOptions::for_measurements(&y);
    assert!(opts.lambda > 0.0);
    let res = sdp_solve(&p, &SdpOptions { tol: 1e-10, max_iter: 20_000, ..opts }).unwrap();
    assert!(res.converged);
    assert!(res.trace.last().unwrap().residual < 10.0 * 1e-10);
}

#[test]
fn sdp_lambda_default_from_noise() {
    let (_, _, y, _) = problem(4, 7, 21);
    assert_eq!(SdpOptions::for_measurements(&y).lambda, 0.0);
    let y2 = add_noise(&y, 0.01, 1);
    let l = SdpOptions::for_measurements(&y2).lambda;
    let e: f64 = y2.values().iter().map(|v| v * v).sum();
    assert!((l - 28.0 * 0.01 / e).abs() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]
    #[test]
    fn prop_phase_orbit_stationarity(seed in 0u64..100_000, n in 1usize..8) {
        let (_, _, _, p) = problem(n, 2 * n + 1, seed);
        let mut r = rng(seed ^ 0xabc);
        let xi = random_cvec(2 * n, &mut r);
        let g = p.gradient(&xi);
        let jxi = xi.map(|z| z * c(0.0, 1.0));
        let inner: f64 = g.iter().zip(jxi.iter()).map(|(a, b)| (a.conj() * b).re).sum();
        prop_assert!(inner.abs() < 1e-10 * g.norm() * xi.norm());
    }

    #[test]
    fn prop_optimal_step_beats_fixed_step(seed in 0u64..100_000) {
        let (_, _, _, p) = problem(4, 9, seed);
        let mut r = rng(seed ^ 0x55);
        let psi = random_cvec(8, &mut r);
        let g = p.gradient(&psi);
        // sampled local Lipschitz estimate along the gradient
        let h = 1e-4;
        let gh = p.gradient(&(&psi - &g * c(h, 0.0)));
        let lip = (&g - gh).norm() / (h * g.norm());
        let mu = wf_optimal_step(&p, &psi, &g);
        let f = |m: f64| p.objective(&(&psi - &g * c(m, 0.0)));
        prop_assert!(f(mu) <= f(1.0 / lip) + 1e-12 * f(0.0));
    }
}
