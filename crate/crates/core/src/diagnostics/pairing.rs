use serde::{Deserialize, Serialize};

use super::DiagOptions;
use crate::extpoly::{gcd, ExtPoly, Root, RootOptions};
use crate::sigmodel::BivariateSignal;
use crate::{Error, Result, C64};

/// Roots `root` (inside the unit disk, possibly 0) and `partner = 1/conj(root)`
/// (outside, possibly infinity), each of multiplicity `multiplicity`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootPair {
    pub root: Root,
    pub partner: Root,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootPairing {
    pub pairs: Vec<RootPair>,
    /// Roots on the unit circle with their (even) multiplicity in `H`.
    pub unimodular: Vec<(C64, usize)>,
    pub leading: C64,
}

impl RootPairing {
    /// `prod (mu_i + 1)` over the conjugate-inverse pairs.
    pub fn solution_count(&self) -> usize {
        self.pairs.iter().map(|p| p.multiplicity + 1).product()
    }
}

/// Split the roots of a self-reciprocal polynomial `H = Q Q~` into
/// conjugate-inverse pairs and unimodular roots.
pub fn pair_roots(h: &ExtPoly, tol: f64) -> Result<RootPairing> {
    let opts = RootOptions { cluster_tol: tol, ..Default::default() };
    let rm = h.roots(&opts)?;
    let mut inner: Vec<(Root, usize)> = Vec::new();
    let mut outer: Vec<(Root, usize)> = Vec::new();
    let mut unimodular = Vec::new();
    for &(r, m) in &rm.roots {
        match r {
            Root::Infinity => outer.push((r, m)),
            Root::Finite(z) if (z.norm() - 1.0).abs() < tol => unimodular.push((z, m)),
            Root::Finite(z) if z.norm() < 1.0 => inner.push((r, m)),
            Root::Finite(_) => outer.push((r, m)),
        }
    }
    for &(z, m) in &unimodular {
        if m % 2 != 0 {
            return Err(Error::InconsistentPairing(format!(
                "unimodular root {z} has odd multiplicity {m}"
            )));
        }
    }
    let mut used = vec![false; outer.len()];
    let mut pairs = Vec::with_capacity(inner.len());
    for &(a, mu) in &inner {
        let az = a.finite().expect("inner roots are finite");
        let candidate = outer
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .filter_map(|(i, &(b, _))| pairing_distance(az, b, tol).map(|d| (i, d)))
            .min_by(|x, y| x.1.total_cmp(&y.1));
        let Some((i, _)) = candidate else {
            return Err(Error::InconsistentPairing(format!("root {az} has no conjugate-inverse partner")));
        };
        if outer[i].1 != mu {
            return Err(Error::InconsistentPairing(format!(
                "root {az} has multiplicity {mu} but its partner has {}",
                outer[i].1
            )));
        }
        used[i] = true;
        pairs.push(RootPair { root: a, partner: outer[i].0, multiplicity: mu });
    }
    if let Some(i) = used.iter().position(|u| !u) {
        return Err(Error::InconsistentPairing(format!(
            "root {:?} has no conjugate-inverse partner",
            outer[i].0
        )));
    }
    Ok(RootPairing { pairs, unimodular, leading: rm.leading })
}

/// Distance from `b` to `1/conj(a)` if within tolerance
/// `tol * max(1, 1/|a|)`; 0 and infinity pair with each other.
fn pairing_distance(a: C64, b: Root, tol: f64) -> Option<f64> {
    let na = a.norm();
    match b {
        Root::Infinity => (na < tol).then_some(na),
        Root::Finite(bz) => {
            if na == 0.0 {
                return (bz.norm() > 1.0 / tol).then_some(1.0 / bz.norm());
            }
            let target = C64::new(1.0, 0.0) / a.conj();
            let d = (bz - target).norm();
            (d < tol * 1.0f64.max(1.0 / na)).then_some(d / 1.0f64.max(1.0 / na))
        }
    }
}

fn common_factor_pairing(x: &BivariateSignal, opts: &DiagOptions) -> Result<Option<RootPairing>> {
    let q = gcd(&x.poly(0), &x.poly(1), opts.rank_tol)?;
    if q.degree() == 0 {
        return Ok(None);
    }
    let h = q.multiply(&q.conj_reflect());
    pair_roots(&h, opts.pair_tol).map(Some)
}

/// Number of signals (up to a global phase) sharing the autocorrelation
/// polynomial of `x`.
pub fn count_solutions(x: &BivariateSignal, opts: &DiagOptions) -> Result<usize> {
    Ok(common_factor_pairing(x, opts)?.map_or(1, |p| p.solution_count()))
}

/// True when every common root of the components is unimodular.
pub fn uniqueness_check(x: &BivariateSignal, opts: &DiagOptions) -> Result<bool> {
    Ok(count_solutions(x, opts)? == 1)
}
