//! Closed-form reconstruction: spectral matrices from Stokes measurements,
//! then the signal from the kernel of a Sylvester matrix built on the
//! autocorrelation polynomials.

use nalgebra::{DMatrix, Matrix2};
use serde::{Deserialize, Serialize};

use crate::exec::Exec;
use crate::extpoly::{sylvester, DEFAULT_RANK_TOL};
use crate::linalg::{dot_h, norm2, CMat, Svd};
use crate::sigmodel::{
    gamma_from_spectral, generating_family, stokes_inverse, stokes_matrix, BivariateSignal,
    GammaPolynomial, MeasurementScheme, MeasurementSet, SpectralSequence, StokesVector,
};
use crate::{Error, Result, C64};

/// Best positive semidefinite rank-one approximation `max(l, 0) u u^H` of a
/// Hermitian 2x2 matrix, `l` the largest eigenvalue.
pub fn rank1_psd(m: &Matrix2<C64>) -> Matrix2<C64> {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let b = (m[(0, 1)] + m[(1, 0)].conj()) * 0.5;
    let half = 0.5 * (a - d);
    let lam = 0.5 * (a + d) + half.hypot(b.norm());
    if lam <= 0.0 {
        return Matrix2::zeros();
    }
    let v = if a >= d {
        [C64::new(lam - d, 0.0), b.conj()]
    } else {
        [b, C64::new(lam - a, 0.0)]
    };
    let nv = v[0].norm_sqr() + v[1].norm_sqr();
    if nv == 0.0 {
        return Matrix2::new(
            C64::new(lam, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
        );
    }
    let s = lam / nv;
    Matrix2::from_fn(|i, j| v[i] * v[j].conj() * s)
}

/// Per-frequency least-squares Stokes inversion followed by rank-one projection.
#[derive(Debug, Clone)]
pub struct SpectralEstimator {
    d_pinv: DMatrix<f64>,
    p: usize,
}

impl SpectralEstimator {
    pub fn new(scheme: &MeasurementScheme) -> Result<Self> {
        let d = stokes_matrix(scheme);
        if !generating_family(scheme) {
            let s: Vec<f64> = d.singular_values().iter().copied().collect();
            return Err(Error::NotGenerating { rank: crate::linalg::rank_of_values(&s, 1e-10) });
        }
        let d_pinv = d
            .clone()
            .pseudo_inverse(1e-12)
            .map_err(|e| Error::InvalidInput(e.to_string()))?;
        Ok(SpectralEstimator { d_pinv, p: scheme.p() })
    }

    /// Rank-one spectral matrix estimate from the `P` measurements at one frequency.
    pub fn estimate_one(&self, row: &[f64]) -> Matrix2<C64> {
        let mut s = [0.0; 4];
        for (k, sk) in s.iter_mut().enumerate() {
            *sk = (0..self.p).map(|p| self.d_pinv[(k, p)] * row[p]).sum();
        }
        rank1_psd(&stokes_inverse(&StokesVector(s)))
    }

    pub fn estimate(&self, y: &MeasurementSet, exec: Exec) -> Result<SpectralSequence> {
        if y.p() != self.p {
            return Err(Error::InvalidInput(format!(
                "measurements have P = {} but the scheme has {}",
                y.p(),
                self.p
            )));
        }
        Ok(exec.map(y.m(), |m| self.estimate_one(y.row(m))))
    }
}

pub fn estimate_spectral(y: &MeasurementSet, scheme: &MeasurementScheme) -> Result<SpectralSequence> {
    if y.m() != scheme.m() {
        return Err(Error::InvalidInput(format!(
            "measurements have M = {} but the scheme has {}",
            y.m(),
            scheme.m()
        )));
    }
    SpectralEstimator::new(scheme)?.estimate(y, Exec::default())
}

/// Output of a kernel reconstruction.
#[derive(Debug, Clone)]
pub struct KernelSolution {
    pub signal: BivariateSignal,
    /// The kernel was not clearly one-dimensional (or, for the left-kernel
    /// method, the GCD step was ill-separated); the estimate may be arbitrary.
    pub degenerate: bool,
    /// Ratio of the second-smallest to the smallest relevant singular value.
    pub kernel_gap: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KernelMethod {
    Right,
    Left,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelOptions {
    pub rank_tol: f64,
    /// A kernel is flagged degenerate when the two smallest singular values
    /// are within this ratio of each other.
    pub gap_ratio: f64,
    /// When the lag-zero cross-correlation vanishes, tie the component phases
    /// through the lag of largest cross-correlation instead of failing.
    pub phase_fallback: bool,
}

impl Default for KernelOptions {
    fn default() -> Self {
        KernelOptions { rank_tol: DEFAULT_RANK_TOL, gap_ratio: 10.0, phase_fallback: false }
    }
}

fn energy(g: &GammaPolynomial) -> Result<(f64, f64)> {
    let e1 = g.lag(0, 0, 0).re;
    let e2 = g.lag(1, 1, 0).re;
    if !(e1 >= 0.0 && e2 >= 0.0 && e1 + e2 > 0.0) {
        return Err(Error::InvalidAutocorrelation(format!(
            "lag-zero autocorrelations must be nonnegative with positive sum (got {e1}, {e2})"
        )));
    }
    Ok((e1, e2))
}

fn gap(s: &[f64], rank_tol: f64, ratio: f64) -> (bool, f64) {
    let k = s.len();
    if k < 2 {
        return (false, f64::INFINITY);
    }
    let (smallest, second) = (s[k - 1], s[k - 2]);
    let g = if smallest > 0.0 { second / smallest } else { f64::INFINITY };
    let degenerate = g < ratio || second <= rank_tol * s[0];
    (degenerate, g)
}

/// Reconstruction from the one-dimensional right kernel of
/// `Syl_{N-1}(Gamma_11, Gamma_21)`, spanned by `(-x2, x1)` up to scale.
pub fn right_kernel_solve(g: &GammaPolynomial, opts: &KernelOptions) -> Result<KernelSolution> {
    let n = g.n();
    let (e1, e2) = energy(g)?;
    if n == 1 {
        return rank_one_sample(g, e1, e2);
    }
    let s = sylvester(g.entry(0, 0), g.entry(1, 0), n - 1)?;
    let svd = Svd::new(&s);
    let v = svd.right_vector(2 * n - 1);
    let scale = ((e1 + e2) / v.norm_squared()).sqrt();
    let x2: Vec<C64> = v.iter().take(n).map(|z| -z * scale).collect();
    let x1: Vec<C64> = v.iter().skip(n).map(|z| z * scale).collect();
    let (degenerate, kernel_gap) = gap(&svd.s, opts.rank_tol, opts.gap_ratio);
    Ok(KernelSolution { signal: BivariateSignal::new(x1, x2)?, degenerate, kernel_gap })
}

/// Square Hankel-type block `H[r][c] = u[r + c]` with `rows` rows.
fn hankel(u: &[C64], rows: usize) -> CMat {
    let cols = u.len() + 1 - rows;
    CMat::from_fn(rows, cols, |r, c| u[r + c])
}

/// Left singular vectors and values of a wide matrix `H` via `H^H = Q R`,
/// so only the small square factor `R^H` is decomposed.
fn fat_left_svd(h: &CMat) -> Svd {
    if h.ncols() <= 2 * h.nrows() {
        return Svd::new(h);
    }
    let r = h.adjoint().qr().r();
    Svd::new(&r.adjoint())
}

/// Stacked Hankel blocks `[H_N(u_1) ... H_N(u_{N-1})]` built from the
/// (conjugated) left kernel vectors of `Syl_1(Gamma_j1, Gamma_j2)`; shape
/// `N x (N-1)(3N-3)`. Also returns the singular values of the Sylvester matrix.
pub fn left_kernel_hankel(g: &GammaPolynomial, j: usize) -> Result<(CMat, Vec<f64>)> {
    let n = g.n();
    if n < 2 {
        return Err(Error::InvalidInput("the left-kernel method needs N >= 2".into()));
    }
    let s = sylvester(g.entry(j, 0), g.entry(j, 1), 1)?;
    let svd = Svd::new(&s);
    let size = s.nrows();
    let mut blocks = Vec::with_capacity(n - 1);
    for k in (size - (n - 1))..size {
        let u: Vec<C64> = svd.left_vector(k).iter().map(|z| z.conj()).collect();
        blocks.push(hankel(&u, n));
    }
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut h = CMat::zeros(n, cols);
    let mut off = 0;
    for b in &blocks {
        h.view_mut((0, off), (n, b.ncols())).copy_from(b);
        off += b.ncols();
    }
    Ok((h, svd.s))
}

/// Coefficients of `gcd(Gamma_j1, Gamma_j2)`, which is `x_j` up to a constant
/// when the components are coprime.
///
/// Vectors `u` with `u^T Syl_1 = 0` satisfy `h^T H_N(u) = 0` for the GCD
/// coefficient vector `h`. Both relations are bilinear, so the singular
/// vectors spanning the respective conjugate-linear kernels are conjugated.
fn left_gcd_vector(g: &GammaPolynomial, j: usize) -> Result<(Vec<C64>, f64)> {
    let n = g.n();
    let (h, sv) = left_kernel_hankel(g, j)?;
    let size = sv.len();
    let hs = fat_left_svd(&h);
    let w: Vec<C64> = hs.left_vector(n - 1).iter().map(|z| z.conj()).collect();
    let (_, hgap) = gap(&hs.s, 0.0, 0.0);
    let sgap = {
        let k = size - (n - 1);
        if k >= 1 && sv[k] > 0.0 { sv[k - 1] / sv[k] } else { f64::INFINITY }
    };
    Ok((w, hgap.min(sgap)))
}

/// Reconstruction from the left kernels of `Syl_1(Gamma_j1, Gamma_j2)`,
/// `j = 1, 2`, with magnitudes fixed by the lag-zero autocorrelations and the
/// relative phase by the lag-zero cross-correlation.
pub fn left_kernel_solve(g: &GammaPolynomial, opts: &KernelOptions) -> Result<KernelSolution> {
    let n = g.n();
    let (e1, e2) = energy(g)?;
    if n == 1 {
        return rank_one_sample(g, e1, e2);
    }
    if e1 <= 0.0 || e2 <= 0.0 {
        return Err(Error::InvalidAutocorrelation(format!(
            "the left-kernel method needs both lag-zero autocorrelations positive (got {e1}, {e2})"
        )));
    }
    let (w1, gap1) = left_gcd_vector(g, 0)?;
    let (w2, gap2) = left_gcd_vector(g, 1)?;
    let c1 = norm2(&w1) / e1.sqrt();
    let mag2 = norm2(&w2) / e2.sqrt();

    let g12 = g.lag(0, 1, 0);
    let link = dot_h(&w2, &w1);
    let tiny = 1e-12;
    let phase = if g12.norm() > tiny * (e1 * e2).sqrt() && link.norm() > tiny * norm2(&w1) * norm2(&w2) {
        g12.arg() - link.arg()
    } else if opts.phase_fallback {
        best_lag_phase(g, &w1, &w2)?
    } else {
        return Err(Error::PhaseLinkUndefined);
    };
    let c2 = C64::from_polar(mag2, phase);
    let x1 = w1.iter().map(|z| z / c1).collect();
    let x2 = w2.iter().map(|z| z / c2).collect();
    let kernel_gap = gap1.min(gap2);
    Ok(KernelSolution {
        signal: BivariateSignal::new(x1, x2)?,
        degenerate: kernel_gap < opts.gap_ratio,
        kernel_gap,
    })
}

fn best_lag_phase(g: &GammaPolynomial, w1: &[C64], w2: &[C64]) -> Result<f64> {
    let n = g.n() as isize;
    let lag = (-(n - 1)..n)
        .max_by(|&a, &b| g.lag(0, 1, a).norm().total_cmp(&g.lag(0, 1, b).norm()))
        .expect("nonempty lag range");
    let target = g.lag(0, 1, lag);
    let mut r = C64::new(0.0, 0.0);
    for k in 0..n {
        let i = k + lag;
        if (0..n).contains(&i) {
            r += w1[i as usize] * w2[k as usize].conj();
        }
    }
    if target.norm() == 0.0 || r.norm() == 0.0 {
        return Err(Error::PhaseLinkUndefined);
    }
    Ok(target.arg() - r.arg())
}

fn rank_one_sample(g: &GammaPolynomial, e1: f64, e2: f64) -> Result<KernelSolution> {
    let (x1, x2) = if e1 >= e2 {
        let a = e1.sqrt();
        (C64::new(a, 0.0), g.lag(1, 0, 0) / a)
    } else {
        let b = e2.sqrt();
        (g.lag(0, 1, 0) / b, C64::new(b, 0.0))
    };
    Ok(KernelSolution {
        signal: BivariateSignal::new(vec![x1], vec![x2])?,
        degenerate: false,
        kernel_gap: f64::INFINITY,
    })
}

pub fn kernel_solve(g: &GammaPolynomial, method: KernelMethod, opts: &KernelOptions) -> Result<KernelSolution> {
    match method {
        KernelMethod::Right => right_kernel_solve(g, opts),
        KernelMethod::Left => left_kernel_solve(g, opts),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgebraicConfig {
    pub method: KernelMethod,
    /// Signal length; `(M + 1) / 2` when absent.
    pub n: Option<usize>,
    pub kernel: KernelOptions,
}

impl Default for AlgebraicConfig {
    fn default() -> Self {
        AlgebraicConfig { method: KernelMethod::Right, n: None, kernel: KernelOptions::default() }
    }
}

/// Measurements to signal: spectral estimation, correlation recovery, kernel solve.
pub fn solve_algebraic(
    y: &MeasurementSet,
    scheme: &MeasurementScheme,
    cfg: &AlgebraicConfig,
) -> Result<KernelSolution> {
    let n = cfg.n.unwrap_or(y.m().div_ceil(2));
    let f = estimate_spectral(y, scheme)?;
    let g = gamma_from_spectral(&f, n)?;
    kernel_solve(&g, cfg.method, &cfg.kernel)
}
