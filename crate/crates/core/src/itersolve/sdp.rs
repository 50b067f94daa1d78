use std::time::Instant;

use super::{LiftedProblem, TraceRow};
use crate::linalg::{frob, CMat, HermEig};
use crate::sigmodel::BivariateSignal;
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SdpOptions {
    /// Trace penalty; `1 / SNR` (linear) is the usual choice, `0` for noiseless data.
    pub lambda: f64,
    pub tol: f64,
    pub max_iter: usize,
    /// Power iterations used to estimate the Lipschitz constant.
    pub power_iters: usize,
    /// Reset the momentum whenever it points against the last step.
    pub restart: bool,
    /// Factor by which the step is tentatively enlarged each iteration
    /// before backtracking (1 keeps it nonincreasing).
    pub step_growth: f64,
}

impl Default for SdpOptions {
    fn default() -> Self {
        SdpOptions { lambda: 0.0, tol: 1e-9, max_iter: 10_000, power_iters: 30, restart: true, step_growth: 1.0 }
    }
}

impl SdpOptions {
    /// Defaults with `lambda = 1 / SNR` (linear), the SNR estimated from the
    /// data as `sum y^2 / (M P sigma2)`; `lambda = 0` when `sigma2` is unknown.
    pub fn for_measurements(y: &crate::sigmodel::MeasurementSet) -> Self {
        let energy: f64 = y.values().iter().map(|v| v * v).sum();
        let lambda = if y.sigma2 > 0.0 && energy > 0.0 {
            y.values().len() as f64 * y.sigma2 / energy
        } else {
            0.0
        };
        SdpOptions { lambda, ..Default::default() }
    }
}

#[derive(Debug, Clone)]
pub struct SdpResult {
    /// `sqrt(s0) u0` from the leading eigenpair of the lifted estimate.
    pub signal: BivariateSignal,
    pub lifted: CMat,
    pub trace: Vec<TraceRow>,
    pub iterations: usize,
    pub converged: bool,
    pub step: f64,
}

struct Smooth<'a> {
    prob: &'a LiftedProblem,
}

impl Smooth<'_> {
    /// Residual `A(Xi) - y`.
    fn residual(&self, xi: &CMat) -> Vec<f64> {
        self.prob
            .lift_apply(xi)
            .iter()
            .zip(self.prob.y())
            .map(|(a, y)| a - y)
            .collect()
    }

    fn value(r: &[f64]) -> f64 {
        0.5 * r.iter().map(|v| v * v).sum::<f64>()
    }

    fn lipschitz(&self, iters: usize) -> f64 {
        let d = self.prob.dim();
        let mut x = CMat::from_fn(d, d, |i, j| {
            if i == j {
                C64::new(1.0 + 0.1 * i as f64, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let mut lam = 0.0;
        for _ in 0..iters.max(1) {
            let nx = frob(&x);
            if nx == 0.0 {
                return 0.0;
            }
            x /= C64::new(nx, 0.0);
            let ax = self.prob.lift_apply(&x);
            x = self.prob.lift_adjoint(&ax);
            lam = frob(&x);
        }
        lam
    }
}

fn re_inner(a: &CMat, b: &CMat) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

fn trace_re(a: &CMat) -> f64 {
    (0..a.nrows()).map(|i| a[(i, i)].re).sum()
}

fn prox(z: &CMat, thr: f64) -> CMat {
    HermEig::new(z).rebuild(|l| (l - thr).max(0.0))
}

/// Solve `min 1/2 sum_r (y_r - c_r^H Xi c_r)^2 + lambda tr(Xi)` over `Xi >= 0`.
pub fn sdp_solve(prob: &LiftedProblem, opts: &SdpOptions) -> Result<SdpResult> {
    sdp_solve_observed(prob, opts, |_, _| {})
}

/// FISTA with backtracking; `observe(k, Xi_k)` sees every accepted iterate.
///
/// Stopping uses the normalised forward-backward residual
/// `|(Psi - Xi+)/t + grad f(Xi+) - grad f(Psi)|` divided by the largest of
/// `|grad f(Xi+)|`, `|(Psi - Xi+)/t - grad f(Psi)|` and `|A^*(y)|`.
pub fn sdp_solve_observed(
    prob: &LiftedProblem,
    opts: &SdpOptions,
    mut observe: impl FnMut(usize, &CMat),
) -> Result<SdpResult> {
    if opts.lambda < 0.0 {
        return Err(Error::InvalidInput("trace penalty must be nonnegative".into()));
    }
    let start = Instant::now();
    let f = Smooth { prob };
    let d = prob.dim();
    let lip = f.lipschitz(opts.power_iters);
    let mut t = if lip > 0.0 { 1.0 / lip } else { 1.0 };
    let scale = frob(&prob.lift_adjoint(prob.y())).max(f64::MIN_POSITIVE);

    let mut xi = CMat::zeros(d, d);
    let mut r_xi = f.residual(&xi);
    let mut g_xi = prob.lift_adjoint(&r_xi);
    let mut psi = xi.clone();
    let mut r_psi = r_xi.clone();
    let mut g_psi = g_xi.clone();
    let mut eta = 1.0f64;
    let mut trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0;

    for k in 1..=opts.max_iter {
        iterations = k;
        let f_psi = Smooth::value(&r_psi);
        t *= opts.step_growth;
        let (next, r_next) = loop {
            let cand = prox(&(&psi - &g_psi * C64::new(t, 0.0)), t * opts.lambda);
            let r_cand = f.residual(&cand);
            let diff = &cand - &psi;
            let bound = f_psi + re_inner(&g_psi, &diff) + frob(&diff).powi(2) / (2.0 * t);
            if Smooth::value(&r_cand) <= bound * (1.0 + 1e-12) + 1e-300 || t < 1e-300 {
                break (cand, r_cand);
            }
            t *= 0.5;
        };
        if next.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Diverged { iteration: k });
        }
        let g_next = prob.lift_adjoint(&r_next);
        observe(k, &next);

        let move_term = (&psi - &next) / C64::new(t, 0.0);
        let num = frob(&(&move_term + &g_next - &g_psi));
        let den = frob(&g_next).max(frob(&(&move_term - &g_psi))).max(scale);
        let residual = num / den;
        let cost = Smooth::value(&r_next) + opts.lambda * trace_re(&next);
        trace.push(TraceRow { k, cost, residual, seconds: start.elapsed().as_secs_f64() });

        if opts.restart && re_inner(&(&psi - &next), &(&next - &xi)) > 0.0 {
            eta = 1.0;
        }
        let eta_next = 0.5 * (1.0 + (1.0 + 4.0 * eta * eta).sqrt());
        let beta = (eta - 1.0) / eta_next;
        let cb = C64::new(beta, 0.0);
        psi = &next + (&next - &xi) * cb;
        r_psi = r_next.iter().zip(&r_xi).map(|(a, b)| a + beta * (a - b)).collect();
        g_psi = &g_next + (&g_next - &g_xi) * cb;
        xi = next;
        r_xi = r_next;
        g_xi = g_next;
        eta = eta_next;

        if residual < opts.tol {
            converged = true;
            break;
        }
    }

    let eig = HermEig::new(&xi);
    let s0 = eig.values[0].max(0.0);
    let v: Vec<C64> = eig.vector(0).iter().map(|z| z * s0.sqrt()).collect();
    Ok(SdpResult {
        signal: BivariateSignal::from_xi(&v),
        lifted: xi,
        trace,
        iterations,
        converged,
        step: t,
    })
}
