use serde::{Deserialize, Serialize};

use super::pairing::pair_roots;
use super::DiagOptions;
use crate::extpoly::{gcd, ExtPoly, Root, RootMultiset, RootOptions};
use crate::linalg::dot_h;
use crate::sigmodel::{BivariateSignal, GammaPolynomial};
use crate::{Error, Result, C64};

/// How the constants `lambda_1, lambda_2` of an enumerated solution are fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EnumerationMode {
    /// Closed form from the extreme-lag correlations; requires every boundary
    /// sample of both components to be nonzero.
    ClosedForm,
    /// Least-squares fit of the constants to the correlation polynomials; used
    /// when boundary samples vanish (zeros at 0 or infinity).
    Restricted,
}

/// `H = gcd(gcd(Gamma_11, Gamma_12), gcd(Gamma_21, Gamma_22))`, which equals
/// `Q Q~` up to a constant for `Q = gcd(X_1, X_2)`.
pub fn autocorrelation_gcd(g: &GammaPolynomial, rank_tol: f64) -> Result<ExtPoly> {
    let a = gcd(g.entry(0, 0), g.entry(0, 1), rank_tol)?;
    let b = gcd(g.entry(1, 0), g.entry(1, 1), rank_tol)?;
    gcd(&a, &b, rank_tol)
}

struct Factors {
    pairing: super::RootPairing,
    alpha1: Vec<Root>,
    alpha2: Vec<Root>,
    common_degree: usize,
}

fn factor(g: &GammaPolynomial, opts: &DiagOptions) -> Result<Factors> {
    let n = g.n();
    let scale = (0..2)
        .flat_map(|i| (0..2).map(move |j| (i, j)))
        .map(|(i, j)| g.entry(i, j).max_abs())
        .fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(Error::NoFactorization);
    }
    for i in 0..2 {
        if g.entry(i, i).max_abs() <= 1e-12 * scale {
            return Err(Error::InvalidInput(format!(
                "component {} is identically zero; enumeration needs both components",
                i + 1
            )));
        }
    }
    let h = autocorrelation_gcd(g, opts.rank_tol)?;
    if h.degree() % 2 != 0 || h.degree() / 2 > n - 1 {
        return Err(Error::InconsistentPairing(format!(
            "common factor has odd or excessive degree {}",
            h.degree()
        )));
    }
    let d = h.degree() / 2;
    let pairing = if d == 0 {
        super::RootPairing { pairs: vec![], unimodular: vec![], leading: h.coeff(0) }
    } else {
        pair_roots(&h, opts.pair_tol)?
    };
    let ropts = RootOptions::default();
    let mut alphas = Vec::with_capacity(2);
    for j in 0..2 {
        let a = g.entry(j, 0).divide(&h)?.0;
        let b = g.entry(j, 1).divide(&h)?.0;
        let r = gcd(&a, &b, opts.rank_tol)?;
        if r.degree() != n - 1 - d {
            return Err(Error::InconsistentPairing(format!(
                "cofactor {} has degree {} but {} was expected",
                j + 1,
                r.degree(),
                n - 1 - d
            )));
        }
        alphas.push(if r.degree() == 0 { vec![] } else { r.roots(&ropts)?.expanded() });
    }
    let alpha2 = alphas.pop().expect("two cofactors");
    let alpha1 = alphas.pop().expect("two cofactors");
    Ok(Factors { pairing, alpha1, alpha2, common_degree: d })
}

/// Every choice of one root from each conjugate-inverse pair (with
/// multiplicity), plus half of each unimodular root.
fn selections(p: &super::RootPairing) -> Vec<Vec<Root>> {
    let mut out = vec![Vec::new()];
    for pair in &p.pairs {
        let mut next = Vec::with_capacity(out.len() * (pair.multiplicity + 1));
        for base in &out {
            for k in 0..=pair.multiplicity {
                let mut s: Vec<Root> = base.clone();
                s.extend(std::iter::repeat_n(pair.root, k));
                s.extend(std::iter::repeat_n(pair.partner, pair.multiplicity - k));
                next.push(s);
            }
        }
        out = next;
    }
    let uni: Vec<Root> = p
        .unimodular
        .iter()
        .flat_map(|&(z, m)| std::iter::repeat_n(Root::Finite(z), m / 2))
        .collect();
    for s in &mut out {
        s.extend_from_slice(&uni);
    }
    out
}

fn monic(roots: &[Root]) -> ExtPoly {
    let rm = RootMultiset {
        roots: roots.iter().map(|&r| (r, 1)).collect(),
        leading: C64::new(1.0, 0.0),
    };
    ExtPoly::from_roots(&rm, roots.len()).expect("multiplicities match by construction")
}

fn all_finite_nonzero(roots: &[Root]) -> bool {
    roots.iter().all(|r| matches!(r, Root::Finite(z) if z.norm() > 0.0))
}

/// All signals (canonical global phase) whose correlation polynomial is `g`.
pub fn enumerate_solutions(
    g: &GammaPolynomial,
    opts: &DiagOptions,
) -> Result<(Vec<BivariateSignal>, EnumerationMode)> {
    let n = g.n();
    let f = factor(g, opts)?;
    let sels = selections(&f.pairing);
    debug_assert!(sels.iter().all(|s| s.len() == f.common_degree));

    let scale = g.entry(0, 0).max_abs().max(g.entry(1, 1).max_abs());
    let top = 2 * n - 2;
    let g11 = g.entry(0, 0).coeff(top);
    let g22 = g.entry(1, 1).coeff(top);
    let g12 = g.entry(0, 1).coeff(top);
    let boundary_ok = g11.norm() > 1e-10 * scale && g22.norm() > 1e-10 * scale;
    let closed = boundary_ok
        && all_finite_nonzero(&f.alpha1)
        && all_finite_nonzero(&f.alpha2)
        && sels.iter().all(|s| all_finite_nonzero(s));
    let mode = if closed { EnumerationMode::ClosedForm } else { EnumerationMode::Restricted };

    let mut out = Vec::with_capacity(sels.len());
    for beta in &sels {
        let r1: Vec<Root> = beta.iter().chain(&f.alpha1).copied().collect();
        let r2: Vec<Root> = beta.iter().chain(&f.alpha2).copied().collect();
        let p1 = monic(&r1);
        let p2 = monic(&r2);
        let (l1, l2) = match mode {
            EnumerationMode::ClosedForm => closed_form_constants(n, beta, &f, g11, g22, g12),
            EnumerationMode::Restricted => fitted_constants(g, &p1, &p2),
        };
        let x = BivariateSignal::new(
            p1.scale(l1).into_coeffs(),
            p2.scale(l2).into_coeffs(),
        )?;
        out.push(x.canonical_phase());
    }
    Ok((out, mode))
}

/// `|lambda_i|^2 = |gamma_ii[N-1]| / (prod |beta| prod |alpha_i|)` and
/// `arg(lambda_1 conj(lambda_2)) = pi (N-1) + arg gamma_12[N-1] + sum arg beta
/// + sum arg alpha_2`, with `lambda_1` taken real.
fn closed_form_constants(
    n: usize,
    beta: &[Root],
    f: &Factors,
    g11: C64,
    g22: C64,
    g12: C64,
) -> (C64, C64) {
    let fin = |r: &Root| r.finite().expect("closed form needs finite roots");
    let prod_abs = |rs: &[Root]| rs.iter().map(|r| fin(r).norm()).product::<f64>();
    let sum_arg = |rs: &[Root]| rs.iter().map(|r| fin(r).arg()).sum::<f64>();
    let pb = prod_abs(beta);
    let l1 = (g11.norm() / (pb * prod_abs(&f.alpha1))).sqrt();
    let l2 = (g22.norm() / (pb * prod_abs(&f.alpha2))).sqrt();
    let delta = std::f64::consts::PI * (n as f64 - 1.0) + g12.arg() + sum_arg(beta) + sum_arg(&f.alpha2);
    (C64::new(l1, 0.0), C64::from_polar(l2, -delta))
}

/// Least-squares constants: `Gamma_ii ~ |lambda_i|^2 P_i P~_i` and
/// `Gamma_12 ~ lambda_1 conj(lambda_2) P_1 P~_2`.
fn fitted_constants(g: &GammaPolynomial, p1: &ExtPoly, p2: &ExtPoly) -> (C64, C64) {
    let fit = |model: &ExtPoly, target: &ExtPoly| {
        let den = model.norm().powi(2);
        if den == 0.0 {
            C64::new(0.0, 0.0)
        } else {
            dot_h(model.coeffs(), target.coeffs()) / den
        }
    };
    let a11 = fit(&p1.multiply(&p1.conj_reflect()), g.entry(0, 0)).re.max(0.0);
    let a22 = fit(&p2.multiply(&p2.conj_reflect()), g.entry(1, 1)).re.max(0.0);
    let a12 = fit(&p1.multiply(&p2.conj_reflect()), g.entry(0, 1));
    (C64::new(a11.sqrt(), 0.0), C64::from_polar(a22.sqrt(), -a12.arg()))
}
