use rand::Rng;

use crate::extpoly::{sylvester, Root, RootOptions};
use crate::linalg::numerical_rank;
use crate::sigmodel::synth::complex_gaussian;
use crate::sigmodel::BivariateSignal;

/// `2(N-1) - rank Syl_1(X_1, X_2)`, the degree of the numerical common factor.
pub fn rank_deficiency_metric(x: &BivariateSignal, rank_tol: f64) -> usize {
    let n = x.len();
    if n < 2 {
        return 0;
    }
    let s = sylvester(&x.poly(0), &x.poly(1), 1).expect("components share a degree");
    2 * (n - 1) - numerical_rank(&s, rank_tol)
}

/// Smallest distance between a root of `X_1` and a root of `X_2`
/// (two roots at infinity count as distance 0).
pub fn root_separation(x: &BivariateSignal) -> f64 {
    let opts = RootOptions { cluster_tol: 0.0, ..Default::default() };
    let roots = |i: usize| x.poly(i).roots(&opts).map(|r| r.expanded()).unwrap_or_default();
    let (r1, r2) = (roots(0), roots(1));
    let mut best = f64::INFINITY;
    for a in &r1 {
        for b in &r2 {
            let d = match (a, b) {
                (Root::Infinity, Root::Infinity) => 0.0,
                (Root::Finite(p), Root::Finite(q)) => (p - q).norm(),
                _ => continue,
            };
            best = best.min(d);
        }
    }
    best
}

/// Add `CN(0, sigma2 I_2)` to one sample drawn uniformly.
pub fn perturb_single<R: Rng + ?Sized>(x: &BivariateSignal, sigma2: f64, rng: &mut R) -> BivariateSignal {
    let index = rng.random_range(0..x.len());
    perturb_at(x, sigma2, index, rng)
}

/// Add `CN(0, sigma2 I_2)` to sample `index`.
pub fn perturb_at<R: Rng + ?Sized>(
    x: &BivariateSignal,
    sigma2: f64,
    index: usize,
    rng: &mut R,
) -> BivariateSignal {
    let mut out = x.clone();
    let sd = sigma2.max(0.0).sqrt();
    for i in 0..2 {
        out.component_mut(i)[index] += complex_gaussian(rng) * sd;
    }
    out
}

/// Add `CN(0, sigma2 / N I_2)` to every sample, so the total perturbation
/// energy matches [`perturb_single`].
pub fn perturb_full<R: Rng + ?Sized>(x: &BivariateSignal, sigma2: f64, rng: &mut R) -> BivariateSignal {
    let mut out = x.clone();
    let sd = (sigma2.max(0.0) / x.len() as f64).sqrt();
    for i in 0..2 {
        for v in out.component_mut(i).iter_mut() {
            *v += complex_gaussian(rng) * sd;
        }
    }
    out
}
