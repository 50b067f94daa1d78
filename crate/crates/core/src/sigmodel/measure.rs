use nalgebra::Matrix2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{BivariateSignal, MeasurementScheme, MeasurementSet, SpectralSequence};
use crate::{Error, Result, C64};

/// `exp(-2 pi j k / M)` for `k = 0..M`.
pub(crate) fn twiddles(m: usize) -> Vec<C64> {
    (0..m)
        .map(|k| C64::from_polar(1.0, -2.0 * std::f64::consts::PI * k as f64 / m as f64))
        .collect()
}

/// M-point DFT of a sequence of length `N <= M` (zero padded) or `N > M` (aliased).
pub fn dft(x: &[C64], m: usize) -> Vec<C64> {
    let tw = twiddles(m);
    (0..m)
        .map(|k| {
            x.iter()
                .enumerate()
                .map(|(n, &v)| v * tw[(k * n) % m])
                .sum()
        })
        .collect()
}

pub fn spectral_matrices(x: &BivariateSignal, m: usize) -> SpectralSequence {
    let f1 = dft(x.x1(), m);
    let f2 = dft(x.x2(), m);
    f1.iter()
        .zip(&f2)
        .map(|(&a, &b)| {
            Matrix2::new(a * a.conj(), a * b.conj(), b * a.conj(), b * b.conj())
        })
        .collect()
}

/// Noiseless measurements `y[m, p] = |X1[m] b_p[0] + X2[m] b_p[1]|^2`.
pub fn measure(x: &BivariateSignal, scheme: &MeasurementScheme) -> MeasurementSet {
    let m = scheme.m();
    let f1 = dft(x.x1(), m);
    let f2 = dft(x.x2(), m);
    let mut values = Vec::with_capacity(m * scheme.p());
    for k in 0..m {
        for b in scheme.projections() {
            values.push((f1[k] * b[0] + f2[k] * b[1]).norm_sqr());
        }
    }
    MeasurementSet::new(m, scheme.p(), values, 0.0).expect("sizes agree by construction")
}

/// Add i.i.d. `N(0, sigma2)` noise from a ChaCha8 stream seeded with `seed`.
pub fn add_noise(y: &MeasurementSet, sigma2: f64, seed: u64) -> MeasurementSet {
    add_noise_with(y, sigma2, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn add_noise_with<R: Rng + ?Sized>(y: &MeasurementSet, sigma2: f64, rng: &mut R) -> MeasurementSet {
    let sd = sigma2.max(0.0).sqrt();
    let mut out = y.clone();
    for v in out.values_mut() {
        let e: f64 = rng.sample(StandardNormal);
        *v += sd * e;
    }
    out.sigma2 = y.sigma2 + sigma2.max(0.0);
    out
}

fn fourth_power_sum(x: &BivariateSignal, scheme: &MeasurementScheme) -> f64 {
    measure(x, scheme).values().iter().map(|v| v * v).sum()
}

/// `10 log10( sum |a_m^H X b_p|^4 / (M P sigma2) )`.
pub fn snr_db(x: &BivariateSignal, scheme: &MeasurementScheme, sigma2: f64) -> Result<f64> {
    if sigma2 <= 0.0 {
        return Err(Error::InfiniteSnr);
    }
    let s = fourth_power_sum(x, scheme);
    Ok(10.0 * (s / ((scheme.m() * scheme.p()) as f64 * sigma2)).log10())
}

/// Noise variance giving the requested SNR.
pub fn sigma2_for_snr(x: &BivariateSignal, scheme: &MeasurementScheme, snr_db: f64) -> Result<f64> {
    let s = fourth_power_sum(x, scheme);
    if s == 0.0 {
        return Err(Error::ZeroSignal);
    }
    Ok(s / ((scheme.m() * scheme.p()) as f64 * 10f64.powf(snr_db / 10.0)))
}

/// Rotate `xhat` by the global phase minimising `|e^{j phi} xhat - x|`.
pub fn align_phase(xhat: &BivariateSignal, x: &BivariateSignal) -> BivariateSignal {
    let s: C64 = x
        .xi()
        .iter()
        .zip(xhat.xi())
        .map(|(a, b)| a.conj() * b)
        .sum();
    if s.norm() == 0.0 {
        return xhat.clone();
    }
    xhat.scale(s.conj() / s.norm())
}

/// `min_phi |e^{j phi} xhat - x|_F^2`, computed on the aligned difference.
pub fn mse_realigned(xhat: &BivariateSignal, x: &BivariateSignal) -> Result<f64> {
    if xhat.len() != x.len() {
        return Err(Error::InvalidInput(format!(
            "length mismatch: {} vs {}",
            xhat.len(),
            x.len()
        )));
    }
    let a = align_phase(xhat, x);
    Ok(a
        .xi()
        .iter()
        .zip(x.xi())
        .map(|(p, q)| (p - q).norm_sqr())
        .sum())
}

/// `10 log10(mse / |X|^2)`.
pub fn relative_mse_db(xhat: &BivariateSignal, x: &BivariateSignal) -> Result<f64> {
    let e = x.energy();
    if e == 0.0 {
        return Err(Error::ZeroSignal);
    }
    Ok(10.0 * (mse_realigned(xhat, x)? / e).log10())
}
