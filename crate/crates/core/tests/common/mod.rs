#![allow(dead_code)]

use ppr_core::extpoly::ExtPoly;
use ppr_core::itersolve::LiftedProblem;
use ppr_core::linalg::CVec;
use ppr_core::sigmodel::{synth, BivariateSignal};
use ppr_core::C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn random_poly(degree: usize, rng: &mut ChaCha8Rng) -> ExtPoly {
    ExtPoly::new((0..=degree).map(|_| synth::complex_gaussian(rng)).collect())
}

pub fn random_signal(n: usize, seed: u64) -> BivariateSignal {
    synth::random_signal(n, &mut rng(seed))
}

/// Largest coefficient difference relative to the largest coefficient of `b`.
pub fn poly_rel_diff(a: &ExtPoly, b: &ExtPoly) -> f64 {
    assert_eq!(a.degree(), b.degree());
    let d = a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    d / b.max_abs().max(f64::MIN_POSITIVE)
}

/// `(z - d)` for the planted root `d`, or its flipped counterpart
/// `(conj(d) z - 1)` which leaves `P P~` unchanged.
pub fn root_factor(d: C64, flipped: bool) -> ExtPoly {
    if flipped {
        ExtPoly::new(vec![c(-1.0, 0.0), d.conj()])
    } else {
        ExtPoly::new(vec![-d, c(1.0, 0.0)])
    }
}

pub fn naive_dft(x: &[C64], m: usize) -> Vec<C64> {
    (0..m)
        .map(|k| {
            x.iter()
                .enumerate()
                .map(|(n, v)| v * C64::from_polar(1.0, -2.0 * std::f64::consts::PI * (k * n) as f64 / m as f64))
                .sum()
        })
        .collect()
}

pub fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut x1, mut x2) = (b - g * (b - a), a + g * (b - a));
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
    }
    0.5 * (a + b)
}

/// Grid pre-scan to bracket the global minimum, then golden section.
pub fn line_min(f: impl Fn(f64) -> f64, hi: f64) -> f64 {
    let k = 4000;
    let (best, _) = (1..=k)
        .map(|i| (i, f(hi * i as f64 / k as f64)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    let h = hi / k as f64;
    golden_section(f, h * (best as f64 - 1.0), h * (best as f64 + 1.0))
}

/// Central differences of the objective along the real and imaginary axes.
pub fn fd_gradient(p: &LiftedProblem, xi: &CVec, h: f64) -> CVec {
    CVec::from_iterator(
        xi.len(),
        (0..xi.len()).map(|k| {
            let d = |dz: C64| {
                let mut a = xi.clone();
                let mut b = xi.clone();
                a[k] += dz * h;
                b[k] -= dz * h;
                (p.objective(&a) - p.objective(&b)) / (2.0 * h)
            };
            C64::new(d(c(1.0, 0.0)), d(c(0.0, 1.0)))
        }),
    )
}
