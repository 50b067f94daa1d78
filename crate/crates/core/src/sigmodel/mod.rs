//! Bivariate signals, polarimetric measurement schemes and the spectral and
//! autocorrelation objects derived from them.
//!
//! Conventions: a signal has two complex components `x1, x2` of length `N`,
//! stacked as `xi = [x1; x2]`. The DFT is `X[m] = sum_n x[n] exp(-2 pi j m n / M)`,
//! and measurement `(m, p)` is `|X1[m] b_p[0] + X2[m] b_p[1]|^2`.

mod gamma;
mod io;
mod measure;
mod scheme;
mod stokes;
pub mod synth;

pub use gamma::{gamma_from_signal, gamma_from_spectral, spectral_from_gamma, GammaPolynomial};
pub use io::{MeasurementFile, SignalFile};
pub use measure::{
    add_noise, add_noise_with, align_phase, dft, measure, mse_realigned, relative_mse_db,
    sigma2_for_snr, snr_db, spectral_matrices,
};
pub(crate) use measure::twiddles;
pub use scheme::{healpix_level0_centers, simple_scheme, sphere_projection, sphere_scheme};
pub use stokes::{generating_family, stokes_inverse, stokes_map, stokes_matrix, StokesVector};

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::linalg::norm2;
use crate::{Error, Result, C64};

/// Spectral matrices `X[m] X[m]^H`, one per frequency.
pub type SpectralSequence = Vec<Matrix2<C64>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SignalFile", into = "SignalFile")]
pub struct BivariateSignal {
    x1: Vec<C64>,
    x2: Vec<C64>,
}

impl BivariateSignal {
    pub fn new(x1: Vec<C64>, x2: Vec<C64>) -> Result<Self> {
        if x1.len() != x2.len() {
            return Err(Error::InvalidInput(format!(
                "component lengths differ: {} vs {}",
                x1.len(),
                x2.len()
            )));
        }
        if x1.is_empty() {
            return Err(Error::InvalidInput("empty signal".into()));
        }
        Ok(BivariateSignal { x1, x2 })
    }

    pub fn zeros(n: usize) -> Self {
        let z = vec![C64::new(0.0, 0.0); n];
        BivariateSignal { x1: z.clone(), x2: z }
    }

    /// Inverse of [`BivariateSignal::xi`]; panics on odd length.
    pub fn from_xi(xi: &[C64]) -> Self {
        assert!(xi.len().is_multiple_of(2) && !xi.is_empty(), "xi must have even positive length");
        let n = xi.len() / 2;
        BivariateSignal { x1: xi[..n].to_vec(), x2: xi[n..].to_vec() }
    }

    pub fn len(&self) -> usize {
        self.x1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x1.is_empty()
    }

    pub fn x1(&self) -> &[C64] {
        &self.x1
    }

    pub fn x2(&self) -> &[C64] {
        &self.x2
    }

    /// Component `i` in `{0, 1}`.
    pub fn component(&self, i: usize) -> &[C64] {
        match i {
            0 => &self.x1,
            1 => &self.x2,
            _ => panic!("component index {i} out of range"),
        }
    }

    pub fn component_mut(&mut self, i: usize) -> &mut [C64] {
        match i {
            0 => &mut self.x1,
            1 => &mut self.x2,
            _ => panic!("component index {i} out of range"),
        }
    }

    /// Sample `n` as a vector in C^2.
    pub fn sample(&self, n: usize) -> [C64; 2] {
        [self.x1[n], self.x2[n]]
    }

    /// `vec(X) = [x1; x2]`.
    pub fn xi(&self) -> Vec<C64> {
        let mut v = self.x1.clone();
        v.extend_from_slice(&self.x2);
        v
    }

    pub fn energy(&self) -> f64 {
        let n = norm2(&self.x1);
        let m = norm2(&self.x2);
        n * n + m * m
    }

    pub fn norm(&self) -> f64 {
        self.energy().sqrt()
    }

    pub fn scale(&self, s: C64) -> Self {
        BivariateSignal {
            x1: self.x1.iter().map(|z| z * s).collect(),
            x2: self.x2.iter().map(|z| z * s).collect(),
        }
    }

    /// Component polynomial `X_i(z) = sum_n x_i[n] z^n` in `C_{<= N-1}`.
    pub fn poly(&self, i: usize) -> crate::extpoly::ExtPoly {
        crate::extpoly::ExtPoly::new(self.component(i).to_vec())
    }

    /// Make the first entry of `xi` with modulus above `1e-9 |X|` real positive.
    pub fn canonical_phase(&self) -> Self {
        let xi = self.xi();
        let thr = 1e-9 * self.norm();
        match xi.iter().find(|z| z.norm() > thr) {
            Some(z) => self.scale(z.conj() / z.norm()),
            None => self.clone(),
        }
    }
}

/// Sampling grid size `M` and unit-norm projection vectors `b_0 .. b_{P-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementScheme {
    m: usize,
    projections: Vec<[C64; 2]>,
}

impl MeasurementScheme {
    pub fn new(m: usize, projections: Vec<[C64; 2]>) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidInput("M must be positive".into()));
        }
        if projections.is_empty() {
            return Err(Error::InvalidInput("at least one projection is required".into()));
        }
        for (index, b) in projections.iter().enumerate() {
            let norm = (b[0].norm_sqr() + b[1].norm_sqr()).sqrt();
            if (norm - 1.0).abs() > 1e-9 {
                return Err(Error::NonUnitProjection { index, norm });
            }
        }
        Ok(MeasurementScheme { m, projections })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn p(&self) -> usize {
        self.projections.len()
    }

    pub fn projections(&self) -> &[[C64; 2]] {
        &self.projections
    }

    pub fn projection(&self, p: usize) -> [C64; 2] {
        self.projections[p]
    }

    pub fn with_m(&self, m: usize) -> Result<Self> {
        Self::new(m, self.projections.clone())
    }
}

/// Real measurements `y[m, p]`, stored row-major (`p` fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSet {
    m: usize,
    p: usize,
    values: Vec<f64>,
    /// Additive noise variance the data was generated with (0 if noiseless).
    pub sigma2: f64,
}

impl MeasurementSet {
    pub fn new(m: usize, p: usize, values: Vec<f64>, sigma2: f64) -> Result<Self> {
        if values.len() != m * p {
            return Err(Error::InvalidInput(format!(
                "expected {} measurements, got {}",
                m * p,
                values.len()
            )));
        }
        Ok(MeasurementSet { m, p, values, sigma2 })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn get(&self, m: usize, p: usize) -> f64 {
        self.values[m * self.p + p]
    }

    /// All measurements at frequency `m`.
    pub fn row(&self, m: usize) -> &[f64] {
        &self.values[m * self.p..(m + 1) * self.p]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }
}
