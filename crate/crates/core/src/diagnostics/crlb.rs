use crate::itersolve::LiftedProblem;
use crate::linalg::{CMat, CVec, HermEig};
use crate::sigmodel::{measure, BivariateSignal, MeasurementScheme};
use crate::{Error, Result, C64};

/// Augmented complex Fisher information `[[I, P], [conj P, conj I]]` of the
/// noisy intensity model, with
/// `I = sigma^-2 sum |c^H xi|^2 c c^H` and `P = sigma^-2 sum (c^H xi)^2 c c^T`.
pub fn fisher_information(x: &BivariateSignal, scheme: &MeasurementScheme, sigma2: f64) -> Result<CMat> {
    if sigma2 <= 0.0 {
        return Err(Error::InfiniteSnr);
    }
    let n = x.len();
    let prob = LiftedProblem::new(&measure(x, scheme), scheme, n)?;
    let c = prob.c();
    let s = prob.apply(&CVec::from_vec(x.xi()));
    let mut wi = c.clone();
    let mut wp = c.map(|z| z.conj());
    for r in 0..c.nrows() {
        wi.row_mut(r).scale_mut(s[r].norm_sqr());
        let f = s[r] * s[r];
        for k in 0..c.ncols() {
            wp[(r, k)] *= f;
        }
    }
    let inv = C64::new(1.0 / sigma2, 0.0);
    let i_mat = c.adjoint() * wi * inv;
    let p_mat = c.adjoint() * wp * inv;
    let d = 2 * n;
    let mut j = CMat::zeros(2 * d, 2 * d);
    j.view_mut((0, 0), (d, d)).copy_from(&i_mat);
    j.view_mut((0, d), (d, d)).copy_from(&p_mat);
    j.view_mut((d, 0), (d, d)).copy_from(&p_mat.map(|z| z.conj()));
    j.view_mut((d, d), (d, d)).copy_from(&i_mat.map(|z| z.conj()));
    Ok(j)
}

/// Lower bound on `E |xi_hat - xi|^2`: the trace of the upper-left `2N x 2N`
/// block of the pseudo-inverse of the Fisher information (eigenvalues below
/// `1e-10` of the largest are discarded, which removes the global-phase
/// direction).
pub fn crlb_mse(x: &BivariateSignal, scheme: &MeasurementScheme, sigma2: f64) -> Result<f64> {
    let j = fisher_information(x, scheme, sigma2)?;
    let d = 2 * x.len();
    let eig = HermEig::new(&j);
    let lmax = eig.values.first().copied().unwrap_or(0.0);
    let mut total = 0.0;
    for (k, &l) in eig.values.iter().enumerate() {
        if l <= 1e-10 * lmax || l <= 0.0 {
            continue;
        }
        let w: f64 = (0..d).map(|i| eig.vectors[(i, k)].norm_sqr()).sum();
        total += w / l;
    }
    Ok(total)
}
