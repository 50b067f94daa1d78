use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::LiftedProblem;
use crate::algsolve::{solve_algebraic, AlgebraicConfig, KernelMethod};
use crate::linalg::{lstsq, CVec, HermEig};
use crate::sigmodel::{MeasurementScheme, MeasurementSet};
use crate::{Result, C64};

/// How the spectral initialiser scales the leading eigenvector `v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SpectralScaling {
    /// `lambda v`, so the initial energy matches the measured energy.
    #[default]
    Multiply,
    /// `v / lambda`.
    Divide,
}

/// Starting point for Wirtinger flow.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum WfInit {
    Spectral,
    RandomPhase { seed: u64 },
    Sylvester(KernelMethod),
}

/// Leading eigenvector of `Y = (1/MP) sum_r y_r c_r c_r^H`, scaled by
/// `lambda = (N sum y / sum |c_r|^2)^{1/2}`.
///
/// All-zero data has no informative eigenvector; the first canonical basis
/// vector is returned.
pub fn init_spectral(prob: &LiftedProblem, scaling: SpectralScaling) -> Vec<C64> {
    let dim = prob.dim();
    let y = prob.y();
    if y.iter().all(|&v| v == 0.0) {
        let mut e = vec![C64::new(0.0, 0.0); dim];
        e[0] = C64::new(1.0, 0.0);
        return e;
    }
    let mp = y.len() as f64;
    let weights: Vec<f64> = y.iter().map(|v| v / mp).collect();
    let ymat = prob.lift_adjoint(&weights);
    let v = HermEig::new(&ymat).vector(0);
    let c = prob.c();
    let row_energy: f64 = c.iter().map(|z| z.norm_sqr()).sum();
    let lambda = (prob.n() as f64 * y.iter().sum::<f64>() / row_energy).max(0.0).sqrt();
    let s = match scaling {
        SpectralScaling::Multiply => lambda,
        SpectralScaling::Divide if lambda > 0.0 => 1.0 / lambda,
        SpectralScaling::Divide => 1.0,
    };
    v.iter().map(|z| z * s).collect()
}

/// `C^+ (y . exp(j phi))` with phases uniform on `[0, 2 pi)`.
pub fn init_random_phase(prob: &LiftedProblem, seed: u64) -> Vec<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = CVec::from_iterator(
        prob.y().len(),
        prob.y().iter().map(|&v| {
            let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            C64::from_polar(v, phi)
        }),
    );
    lstsq(prob.c(), &b).iter().copied().collect()
}

/// Algebraic reconstruction used as a starting point.
pub fn init_sylvester(
    y: &MeasurementSet,
    scheme: &MeasurementScheme,
    n: usize,
    method: KernelMethod,
) -> Result<Vec<C64>> {
    let cfg = AlgebraicConfig { method, n: Some(n), ..Default::default() };
    Ok(solve_algebraic(y, scheme, &cfg)?.signal.xi())
}

impl WfInit {
    pub fn build(
        &self,
        prob: &LiftedProblem,
        y: &MeasurementSet,
        scheme: &MeasurementScheme,
    ) -> Result<Vec<C64>> {
        Ok(match self {
            WfInit::Spectral => init_spectral(prob, SpectralScaling::Multiply),
            WfInit::RandomPhase { seed } => init_random_phase(prob, *seed),
            WfInit::Sylvester(method) => init_sylvester(y, scheme, prob.n(), *method)?,
        })
    }
}
