use std::time::Instant;

use super::cubic::real_cubic_roots;
use super::{LiftedProblem, TraceRow};
use crate::linalg::CVec;
use crate::sigmodel::BivariateSignal;
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WfOptions {
    /// Stop when `|xi_{k+1} - xi_k| / |xi_k| < tol`; `0` runs all iterations.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for WfOptions {
    fn default() -> Self {
        WfOptions { tol: 1e-12, max_iter: 2500 }
    }
}

#[derive(Debug, Clone)]
pub struct WfResult {
    pub signal: BivariateSignal,
    pub trace: Vec<TraceRow>,
    pub iterations: usize,
    pub converged: bool,
}

/// Coefficients of `e_r(mu) = |u_r - mu v_r|^2 - y_r = a + b mu + c mu^2`.
struct Ray {
    a: Vec<f64>,
    b: Vec<f64>,
    c: Vec<f64>,
}

impl Ray {
    fn new(u: &CVec, v: &CVec, y: &[f64]) -> Self {
        let a = u.iter().zip(y).map(|(z, y)| z.norm_sqr() - y).collect();
        let b = u.iter().zip(v.iter()).map(|(z, w)| -2.0 * (z.conj() * w).re).collect();
        let c = v.iter().map(|w| w.norm_sqr()).collect();
        Ray { a, b, c }
    }

    fn value(&self, mu: f64) -> f64 {
        0.5 * (0..self.a.len())
            .map(|r| (self.a[r] + mu * (self.b[r] + mu * self.c[r])).powi(2))
            .sum::<f64>()
    }

    /// `dF/dmu = 2 sum c^2 mu^3 + 3 sum bc mu^2 + sum(2ac + b^2) mu + sum ab`.
    fn derivative_coeffs(&self) -> [f64; 4] {
        let mut k = [0.0; 4];
        for r in 0..self.a.len() {
            let (a, b, c) = (self.a[r], self.b[r], self.c[r]);
            k[0] += a * b;
            k[1] += 2.0 * a * c + b * b;
            k[2] += 3.0 * b * c;
            k[3] += 2.0 * c * c;
        }
        k
    }
}

/// Exact minimiser over `mu > 0` of `F(psi - mu g)`.
///
/// `F` restricted to the ray is a quartic in `mu`; its stationary points are
/// the real roots of a cubic. Among the positive ones the root with the
/// smallest objective is chosen. If there is none (only possible through
/// rounding) a halving backtracking search from `mu = 1` is used instead.
pub fn wf_optimal_step(prob: &LiftedProblem, psi: &CVec, g: &CVec) -> f64 {
    let u = prob.apply(psi);
    let v = prob.apply(g);
    step_on_ray(&Ray::new(&u, &v, prob.y()))
}

fn step_on_ray(ray: &Ray) -> f64 {
    let k = ray.derivative_coeffs();
    if k[3] == 0.0 {
        return 0.0;
    }
    let roots = real_cubic_roots(k[3], k[2], k[1], k[0]);
    let best = roots
        .into_iter()
        .filter(|&mu| mu > 0.0 && mu.is_finite())
        .map(|mu| (mu, ray.value(mu)))
        .min_by(|a, b| a.1.total_cmp(&b.1));
    let f0 = ray.value(0.0);
    match best {
        Some((mu, f)) if f <= f0 => mu,
        _ => {
            let mut mu = 1.0;
            for _ in 0..200 {
                if ray.value(mu) < f0 {
                    return mu;
                }
                mu *= 0.5;
            }
            0.0
        }
    }
}

/// Accelerated Wirtinger flow from `init` (the stacked vector `xi_0`).
///
/// `psi = xi_k + (k+1)/(k+3) (xi_k - xi_{k-1})`, then an exact line search
/// along the gradient at `psi`.
pub fn wf_solve(prob: &LiftedProblem, init: &[C64], opts: &WfOptions) -> Result<WfResult> {
    if init.len() != prob.dim() {
        return Err(Error::InvalidInput(format!(
            "initial vector has length {} but 2N = {}",
            init.len(),
            prob.dim()
        )));
    }
    let start = Instant::now();
    let mut prev = CVec::from_column_slice(init);
    let mut cur = prev.clone();
    let mut trace = Vec::with_capacity(opts.max_iter.min(10_000));
    let mut converged = false;
    let mut iterations = 0;
    for k in 1..=opts.max_iter {
        iterations = k;
        let beta = (k as f64 + 1.0) / (k as f64 + 3.0);
        let psi = &cur + (&cur - &prev) * C64::new(beta, 0.0);
        let u = prob.apply(&psi);
        let g = prob.gradient_from(&u);
        let next = if g.iter().all(|z| *z == C64::new(0.0, 0.0)) {
            psi
        } else {
            let v = prob.apply(&g);
            let mu = step_on_ray(&Ray::new(&u, &v, prob.y()));
            &psi - &g * C64::new(mu, 0.0)
        };
        if next.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Diverged { iteration: k });
        }
        let denom = cur.norm();
        let step = (&next - &cur).norm();
        let residual = if denom > 0.0 { step / denom } else { step };
        let cost = prob.objective(&next);
        trace.push(TraceRow { k, cost, residual, seconds: start.elapsed().as_secs_f64() });
        prev = cur;
        cur = next;
        if residual < opts.tol {
            converged = true;
            break;
        }
    }
    Ok(WfResult {
        signal: BivariateSignal::from_xi(cur.as_slice()),
        trace,
        iterations,
        converged,
    })
}
