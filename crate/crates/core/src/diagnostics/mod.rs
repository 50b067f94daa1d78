//! Ambiguity analysis and performance bounds: conjugate-inverse root pairing,
//! counting and enumerating all signals sharing an autocorrelation polynomial,
//! rank-deficiency studies under perturbation, and the Cramer-Rao bound.

mod crlb;
mod enumerate;
mod pairing;
mod perturb;

pub use crlb::{crlb_mse, fisher_information};
pub use enumerate::{autocorrelation_gcd, enumerate_solutions, EnumerationMode};
pub use pairing::{count_solutions, pair_roots, uniqueness_check, RootPair, RootPairing};
pub use perturb::{perturb_at, perturb_full, perturb_single, rank_deficiency_metric, root_separation};

use crate::extpoly::DEFAULT_RANK_TOL;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagOptions {
    /// Relative singular-value threshold for GCD degree decisions.
    pub rank_tol: f64,
    /// Tolerance for unimodularity, conjugate-inverse pairing and root merging.
    pub pair_tol: f64,
}

impl Default for DiagOptions {
    fn default() -> Self {
        DiagOptions { rank_tol: DEFAULT_RANK_TOL, pair_tol: 1e-6 }
    }
}
