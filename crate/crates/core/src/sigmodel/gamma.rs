use nalgebra::Matrix2;

use super::measure::twiddles;
use super::{BivariateSignal, SpectralSequence};
use crate::extpoly::ExtPoly;
use crate::{Error, Result, C64};

/// The 2x2 matrix polynomial of auto- and cross-correlations.
///
/// Entry `(i, j)` has ambient degree `2N - 2`; its coefficient at `z^n` is
/// `gamma_ij[n - N + 1]` with `gamma_ij[l] = sum_k x_i[k + l] conj(x_j[k])`.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaPolynomial {
    entries: [[ExtPoly; 2]; 2],
    n: usize,
}

impl GammaPolynomial {
    pub fn new(entries: [[ExtPoly; 2]; 2]) -> Result<Self> {
        let d = entries[0][0].degree();
        if entries.iter().flatten().any(|e| e.degree() != d) || !d.is_multiple_of(2) {
            return Err(Error::InvalidAutocorrelation(
                "entries must share an even ambient degree".into(),
            ));
        }
        Ok(GammaPolynomial { entries, n: d / 2 + 1 })
    }

    /// Signal length `N`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &ExtPoly {
        &self.entries[i][j]
    }

    /// `gamma_ij[lag]` for `|lag| <= N - 1`.
    pub fn lag(&self, i: usize, j: usize, lag: isize) -> C64 {
        let idx = lag + self.n as isize - 1;
        assert!(idx >= 0 && (idx as usize) < 2 * self.n - 1, "lag {lag} out of range");
        self.entries[i][j].coeff(idx as usize)
    }

    /// Largest violation of `Gamma_ji = conj_reflect(Gamma_ij)`, relative to the
    /// largest coefficient.
    pub fn symmetry_defect(&self) -> f64 {
        let scale = self
            .entries
            .iter()
            .flatten()
            .map(|e| e.max_abs())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let r = self.entries[i][j].conj_reflect();
                for (a, b) in r.coeffs().iter().zip(self.entries[j][i].coeffs()) {
                    worst = worst.max((a - b).norm());
                }
            }
        }
        worst / scale
    }

    /// Largest coefficient-wise relative difference to `other`.
    pub fn max_rel_diff(&self, other: &GammaPolynomial) -> f64 {
        let scale = self
            .entries
            .iter()
            .flatten()
            .map(|e| e.max_abs())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                for (a, b) in self.entries[i][j].coeffs().iter().zip(other.entries[i][j].coeffs()) {
                    worst = worst.max((a - b).norm());
                }
            }
        }
        worst / scale
    }
}

/// `Gamma_ij = X_i * conj_reflect(X_j)`.
pub fn gamma_from_signal(x: &BivariateSignal) -> GammaPolynomial {
    let p = [x.poly(0), x.poly(1)];
    let r = [p[0].conj_reflect(), p[1].conj_reflect()];
    let e = |i: usize, j: usize| p[i].multiply(&r[j]);
    GammaPolynomial::new([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
        .expect("products share degree 2N - 2")
}

/// Recover the correlation coefficients from `M >= 2N - 1` spectral matrices
/// by inverse DFT with the `z^{N-1}` phase shift removed.
#[allow(clippy::needless_range_loop)]
pub fn gamma_from_spectral(f: &SpectralSequence, n: usize) -> Result<GammaPolynomial> {
    let m = f.len();
    if n == 0 {
        return Err(Error::InvalidInput("signal length must be positive".into()));
    }
    if m < 2 * n - 1 {
        return Err(Error::Underdetermined { m, needed: 2 * n - 1 });
    }
    let tw = twiddles(m);
    let len = 2 * n - 1;
    let mut coeffs = vec![vec![vec![C64::new(0.0, 0.0); len]; 2]; 2];
    for k in 0..len {
        let shift = (k as i64 - (n as i64 - 1)).rem_euclid(m as i64) as usize;
        for (mi, fm) in f.iter().enumerate() {
            let w = tw[(mi * shift) % m].conj();
            for i in 0..2 {
                for j in 0..2 {
                    coeffs[i][j][k] += fm[(i, j)] * w;
                }
            }
        }
    }
    let inv = 1.0 / m as f64;
    let mk = |i: usize, j: usize| {
        ExtPoly::new(coeffs[i][j].iter().map(|c| c * inv).collect())
    };
    GammaPolynomial::new([[mk(0, 0), mk(0, 1)], [mk(1, 0), mk(1, 1)]])
}

/// `F[m] = exp(2 pi j m (N-1) / M) Gamma(exp(-2 pi j m / M))`.
pub fn spectral_from_gamma(g: &GammaPolynomial, m: usize) -> SpectralSequence {
    let tw = twiddles(m);
    let n = g.n();
    (0..m)
        .map(|mi| {
            let mut out = Matrix2::<C64>::zeros();
            for k in 0..(2 * n - 1) {
                let shift = (k as i64 - (n as i64 - 1)).rem_euclid(m as i64) as usize;
                let w = tw[(mi * shift) % m];
                for i in 0..2 {
                    for j in 0..2 {
                        out[(i, j)] += g.entry(i, j).coeff(k) * w;
                    }
                }
            }
            out
        })
        .collect()
}
