mod common;

use common::{c, random_poly, random_signal, rng};
use nalgebra::Matrix2;
use ppr_core::algsolve::*;
use ppr_core::extpoly::{sylvester, DEFAULT_RANK_TOL};
use ppr_core::linalg::{numerical_rank, Svd};
use ppr_core::sigmodel::*;
use ppr_core::{Error, C64};
use proptest::prelude::*;
use rand::Rng;

fn noiseless(x: &BivariateSignal, method: KernelMethod) -> KernelSolution {
    kernel_solve(&gamma_from_signal(x), method, &KernelOptions::default()).unwrap()
}

#[test]
fn rank1_psd_cases() {
    let m = Matrix2::new(c(2.0, 0.0), c(0.5, 1.0), c(0.5, -1.0), c(1.0, 0.0));
    let r = rank1_psd(&m);
    assert!(r.determinant().norm() < 1e-14);
    let eig = nalgebra::Matrix2::new(2.0, 0.5, 0.5, 1.0); // real part only for a sanity bound
    assert!(r.trace().re <= m.trace().re + 1e-12 && r.trace().re > eig.trace() / 2.0);
    // oracle: largest eigenvalue of a Hermitian 2x2 and the residual is orthogonal
    let lam = 1.5 + (0.25f64 + 0.5f64.powi(2) + 1.0).sqrt();
    assert!((r.trace().re - lam).abs() < 1e-14);
    assert_eq!(rank1_psd(&(Matrix2::identity() * c(-1.0, 0.0))), Matrix2::zeros());
    let x = random_signal(4, 1);
    for f in spectral_matrices(&x, 7) {
        assert!((rank1_psd(&f) - f).iter().all(|z| z.norm() < 1e-13));
    }
}

#[test]
fn estimate_spectral_noiseless_and_zero() {
    let x = random_signal(10, 2);
    let s = simple_scheme(19).unwrap();
    let est = estimate_spectral(&measure(&x, &s), &s).unwrap();
    for (a, b) in est.iter().zip(spectral_matrices(&x, 19)) {
        assert!((a - b).iter().all(|z| z.norm() < 1e-10));
    }
    let zero = MeasurementSet::new(19, 4, vec![0.0; 76], 0.0).unwrap();
    assert!(estimate_spectral(&zero, &s).unwrap().iter().all(|f| *f == Matrix2::zeros()));
}

#[test]
fn estimate_spectral_noisy_outputs_are_rank_one_psd() {
    let x = random_signal(10, 3);
    let s = sphere_scheme(19, None).unwrap();
    let y = add_noise(&measure(&x, &s), 1e-2, 4);
    for f in estimate_spectral(&y, &s).unwrap() {
        assert!((f - f.adjoint()).iter().all(|z| z.norm() < 1e-14));
        assert!(f.trace().re >= 0.0);
        assert!(f.determinant().norm() < 1e-12 * f.norm_squared().max(1e-300));
    }
}

#[test]
fn estimator_rejects_mismatched_sizes() {
    let s = simple_scheme(9).unwrap();
    let y = MeasurementSet::new(8, 4, vec![0.0; 32], 0.0).unwrap();
    assert!(matches!(estimate_spectral(&y, &s), Err(Error::InvalidInput(_))));
}

#[test]
fn right_kernel_exact_recovery() {
    let x = random_signal(8, 5);
    let sol = noiseless(&x, KernelMethod::Right);
    assert!(mse_realigned(&sol.signal, &x).unwrap() < 1e-18);
    assert!(!sol.degenerate);
    let g = gamma_from_signal(&x);
    assert!((sol.signal.energy() - g.lag(0, 0, 0).re - g.lag(1, 1, 0).re).abs() < 1e-12);
}

#[test]
fn right_kernel_zero_second_component() {
    let mut x = random_signal(6, 6);
    x.component_mut(1).iter_mut().for_each(|v| *v = c(0.0, 0.0));
    let sol = noiseless(&x, KernelMethod::Right);
    assert!(sol.signal.x2().iter().all(|v| v.norm() < 1e-12));
    // the kernel is N-dimensional, so x1 is not identified
    assert!(sol.degenerate);
}

#[test]
fn left_kernel_exact_recovery() {
    let x = random_signal(8, 7);
    let sol = noiseless(&x, KernelMethod::Left);
    assert!(mse_realigned(&sol.signal, &x).unwrap() < 1e-16);
    assert!(!sol.degenerate);
}

#[test]
fn left_kernel_hankel_shape() {
    let g = gamma_from_signal(&random_signal(8, 8));
    let (h, _) = left_kernel_hankel(&g, 0).unwrap();
    assert_eq!(h.shape(), (8, 147));
}

#[test]
fn left_kernel_relative_phase() {
    let x = random_signal(8, 9);
    let g = gamma_from_signal(&x);
    let xh = noiseless(&x, KernelMethod::Left).signal;
    let cross: C64 = xh.x1().iter().zip(xh.x2()).map(|(a, b)| a * b.conj()).sum();
    let d = (cross.arg() - g.lag(0, 1, 0).arg()).rem_euclid(std::f64::consts::TAU);
    assert!(d.min(std::f64::consts::TAU - d) < 1e-8);
}

#[test]
fn left_kernel_errors() {
    let mut x = random_signal(5, 10);
    x.component_mut(1).iter_mut().for_each(|v| *v = c(0.0, 0.0));
    let r = left_kernel_solve(&gamma_from_signal(&x), &KernelOptions::default());
    assert!(matches!(r, Err(Error::InvalidAutocorrelation(_))));

    // components orthogonal at lag zero: x1 = (1, 0, 0, 1), x2 = (1, 1, 1, -1)
    let x = BivariateSignal::new(
        vec![c(1.0, 0.0), c(0.0, 0.0), c(0.5, 0.0), c(1.0, 0.0)],
        vec![c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)],
    )
    .unwrap();
    let g = gamma_from_signal(&x);
    assert!(g.lag(0, 1, 0).norm() < 1e-15);
    assert!(matches!(left_kernel_solve(&g, &KernelOptions::default()), Err(Error::PhaseLinkUndefined)));
    let opts = KernelOptions { phase_fallback: true, ..Default::default() };
    let sol = left_kernel_solve(&g, &opts).unwrap();
    assert!(mse_realigned(&sol.signal, &x).unwrap() < 1e-16);
}

#[test]
fn single_sample_signal() {
    let x = BivariateSignal::new(vec![c(0.3, 0.4)], vec![c(-1.0, 0.2)]).unwrap();
    for m in [KernelMethod::Right, KernelMethod::Left] {
        assert!(mse_realigned(&noiseless(&x, m).signal, &x).unwrap() < 1e-28);
    }
}

#[test]
fn pipeline_noiseless_n32() {
    let x = random_signal(32, 11);
    let s = simple_scheme(63).unwrap();
    let y = measure(&x, &s);
    for method in [KernelMethod::Right, KernelMethod::Left] {
        let cfg = AlgebraicConfig { method, ..Default::default() };
        let sol = solve_algebraic(&y, &s, &cfg).unwrap();
        assert_eq!(sol.signal.len(), 32);
        assert!(mse_realigned(&sol.signal, &x).unwrap() < 1e-16, "{method:?}");
    }
}

#[test]
fn pipeline_length_inference_and_oversampling() {
    let x = random_signal(6, 12);
    let s = simple_scheme(20).unwrap();
    let y = measure(&x, &s);
    let sol = solve_algebraic(&y, &s, &AlgebraicConfig { n: Some(6), ..Default::default() }).unwrap();
    assert!(mse_realigned(&sol.signal, &x).unwrap() < 1e-18);
    let s = simple_scheme(11).unwrap();
    let sol = solve_algebraic(&measure(&x, &s), &s, &AlgebraicConfig::default()).unwrap();
    assert_eq!(sol.signal.len(), 6);
    let cfg = AlgebraicConfig { n: Some(7), ..Default::default() };
    assert!(matches!(solve_algebraic(&measure(&x, &s), &s, &cfg), Err(Error::Underdetermined { .. })));
}

#[test]
fn pipeline_noisy_60db() {
    let s = simple_scheme(63).unwrap();
    let mut total = 0.0;
    for t in 0..20 {
        let x = random_signal(32, 100 + t);
        let y0 = measure(&x, &s);
        let y = add_noise(&y0, sigma2_for_snr(&x, &s, 60.0).unwrap(), t);
        let sol = solve_algebraic(&y, &s, &AlgebraicConfig::default()).unwrap();
        total += relative_mse_db(&sol.signal, &x).unwrap();
    }
    assert!(total / 20.0 < -20.0, "{}", total / 20.0);
}

#[test]
fn scaling_equivariance() {
    let x = random_signal(10, 13);
    let s = simple_scheme(19).unwrap();
    let y = measure(&x, &s);
    let k = 3.7f64;
    let mut y2 = y.clone();
    y2.values_mut().iter_mut().for_each(|v| *v *= k * k);
    for method in [KernelMethod::Right, KernelMethod::Left] {
        let cfg = AlgebraicConfig { method, ..Default::default() };
        let a = solve_algebraic(&y, &s, &cfg).unwrap().signal;
        let b = solve_algebraic(&y2, &s, &cfg).unwrap().signal;
        assert!(mse_realigned(&b, &a.scale(c(k, 0.0))).unwrap() < 1e-16 * k * k);
    }
}

#[test]
fn right_kernel_quotient_structure() {
    let mut r = rng(14);
    let (n, dq) = (7, 2);
    let q = random_poly(dq, &mut r);
    let r1 = random_poly(n - 1 - dq, &mut r);
    let r2 = random_poly(n - 1 - dq, &mut r);
    let x = BivariateSignal::new(q.multiply(&r1).into_coeffs(), q.multiply(&r2).into_coeffs()).unwrap();
    let g = gamma_from_signal(&x);
    let syl = sylvester(g.entry(0, 0), g.entry(1, 0), n - 1).unwrap();
    let svd = Svd::new(&syl);
    assert_eq!(2 * n - svd.rank(DEFAULT_RANK_TOL), dq + 1);
    // every kernel vector (-v2, v1) satisfies v1 R2 = v2 R1
    for k in (2 * n - dq - 1)..(2 * n) {
        let v = svd.right_vector(k);
        let v2 = ppr_core::extpoly::ExtPoly::new(v.iter().take(n).map(|z| -z).collect());
        let v1 = ppr_core::extpoly::ExtPoly::new(v.iter().skip(n).copied().collect());
        let d = v1.multiply(&r2).sub(&v2.multiply(&r1)).unwrap();
        assert!(d.max_abs() < 1e-10 * r1.max_abs().max(r2.max_abs()), "{}", d.max_abs());
    }
    // the flagged-degenerate contract
    assert!(right_kernel_solve(&g, &KernelOptions::default()).unwrap().degenerate);
}

#[test]
fn left_kernel_rank_law() {
    for (n, seed) in [(4, 15), (9, 16)] {
        let g = gamma_from_signal(&random_signal(n, seed));
        for j in 0..2 {
            let s = sylvester(g.entry(j, 0), g.entry(j, 1), 1).unwrap();
            assert_eq!(s.nrows(), 4 * n - 4);
            assert_eq!(s.nrows() - numerical_rank(&s, DEFAULT_RANK_TOL), n - 1);
        }
    }
}

#[test]
fn right_cheaper_than_left_at_n64() {
    let g = gamma_from_signal(&synth::chirped_pulse(64));
    let time = |m| {
        let t = std::time::Instant::now();
        kernel_solve(&g, m, &KernelOptions::default()).unwrap();
        t.elapsed()
    };
    let right = time(KernelMethod::Right);
    let left = time(KernelMethod::Left);
    assert!(2 * right < left, "right {right:?} left {left:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn prop_noiseless_exactness(seed in 0u64..100_000, n in 2usize..=16) {
        let x = random_signal(n, seed);
        for m in [KernelMethod::Right, KernelMethod::Left] {
            let e = mse_realigned(&noiseless(&x, m).signal, &x).unwrap();
            prop_assert!(e < 1e-14, "{:?} {}", m, e);
        }
    }

    #[test]
    fn prop_spectral_estimate_matches_rank_one(seed in 0u64..100_000, amp in 0.1f64..10.0) {
        let mut r = rng(seed);
        let x = random_signal(5, seed).scale(c(amp, 0.0));
        let s = simple_scheme(9).unwrap();
        let est = estimate_spectral(&measure(&x, &s), &s).unwrap();
        let f = spectral_matrices(&x, 9);
        let k: usize = r.random_range(0..9);
        prop_assert!((est[k] - f[k]).iter().all(|z| z.norm() < 1e-10 * amp * amp));
    }
}
