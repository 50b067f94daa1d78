//! Polynomials over the extended complex plane.
//!
//! An [`ExtPoly`] carries an explicit ambient degree `D` (one less than the
//! number of stored coefficients). Vanishing leading coefficients are roots at
//! infinity, so every nonzero polynomial of ambient degree `D` factors as
//! `lambda * prod (z - alpha_k)` with exactly `D` roots counted with
//! multiplicity, where `(z - inf)` is the constant polynomial `1` viewed in
//! `C_{<=1}`.

mod roots;
mod sylvester;

pub use roots::{Root, RootMultiset, RootOptions};
pub use sylvester::{
    gcd, gcd_degree, multiplication_matrix, sylvester, sylvester_pair, DEFAULT_RANK_TOL,
};

use serde::{Deserialize, Serialize};

use crate::linalg::{lstsq, CVec};
use crate::{Error, Result, C64};

/// Polynomial `sum_k coeffs[k] z^k` of ambient degree `coeffs.len() - 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtPoly {
    coeffs: Vec<C64>,
}

impl ExtPoly {
    /// Panics on an empty coefficient vector; use `zero(0)` for the zero constant.
    pub fn new(coeffs: Vec<C64>) -> Self {
        assert!(!coeffs.is_empty(), "an ExtPoly needs at least one coefficient");
        ExtPoly { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect())
    }

    pub fn zero(degree: usize) -> Self {
        Self::new(vec![C64::new(0.0, 0.0); degree + 1])
    }

    pub fn constant(c: C64) -> Self {
        Self::new(vec![c])
    }

    /// `z - alpha` for finite roots, `[1, 0]` for the root at infinity.
    pub fn linear_factor(root: Root) -> Self {
        match root {
            Root::Finite(a) => Self::new(vec![-a, C64::new(1.0, 0.0)]),
            Root::Infinity => Self::new(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]),
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C64> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> C64 {
        self.coeffs[k]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == C64::new(0.0, 0.0))
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn norm(&self) -> f64 {
        crate::linalg::norm2(&self.coeffs)
    }

    pub fn evaluate(&self, z: C64) -> C64 {
        self.coeffs
            .iter()
            .rev()
            .fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Product; ambient degrees add.
    pub fn multiply(&self, other: &ExtPoly) -> ExtPoly {
        let mut out = vec![C64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == C64::new(0.0, 0.0) {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ExtPoly::new(out)
    }

    /// `a~[n] = conj(a[D - n])`.
    pub fn conj_reflect(&self) -> ExtPoly {
        ExtPoly::new(self.coeffs.iter().rev().map(|c| c.conj()).collect())
    }

    pub fn scale(&self, s: C64) -> ExtPoly {
        ExtPoly::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn sub(&self, other: &ExtPoly) -> Result<ExtPoly> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch(format!(
                "{} vs {}",
                self.degree(),
                other.degree()
            )));
        }
        Ok(ExtPoly::new(
            self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        ))
    }

    /// Roots with multiplicities and the leading coefficient.
    pub fn roots(&self, opts: &RootOptions) -> Result<RootMultiset> {
        roots::roots(self, opts)
    }

    /// Rebuild `lambda * prod (z - alpha)^mu` in `C_{<= degree}`.
    pub fn from_roots(rm: &RootMultiset, degree: usize) -> Result<ExtPoly> {
        let total = rm.total_multiplicity();
        if total != degree {
            return Err(Error::MultiplicityMismatch { expected: degree, got: total });
        }
        let mut p = ExtPoly::constant(rm.leading);
        for &(root, mult) in &rm.roots {
            let f = ExtPoly::linear_factor(root);
            for _ in 0..mult {
                p = p.multiply(&f);
            }
        }
        Ok(p)
    }

    /// Least-squares quotient `q` of ambient degree `self.degree() - a.degree()`
    /// minimising `|a q - self|`, and the relative residual.
    pub fn divide(&self, a: &ExtPoly) -> Result<(ExtPoly, f64)> {
        if a.degree() > self.degree() {
            return Err(Error::DegreeMismatch(format!(
                "divisor degree {} exceeds dividend degree {}",
                a.degree(),
                self.degree()
            )));
        }
        if a.is_zero() {
            return Err(Error::NoFactorization);
        }
        let l = self.degree() - a.degree();
        let m = multiplication_matrix(a, l);
        let c = CVec::from_column_slice(&self.coeffs);
        let q = lstsq(&m, &c);
        let resid = (&m * &q - &c).norm();
        let scale = c.norm();
        let rel = if scale > 0.0 { resid / scale } else { resid };
        Ok((ExtPoly::new(q.iter().copied().collect()), rel))
    }

    /// Divisibility in the extended sense: `self = a * b` for some `b` of
    /// ambient degree `self.degree() - a.degree()`.
    pub fn divisible_by(&self, a: &ExtPoly, tol: f64) -> bool {
        if self.is_zero() {
            return true;
        }
        if a.degree() > self.degree() || a.is_zero() {
            return false;
        }
        match self.divide(a) {
            Ok((_, rel)) => rel <= tol,
            Err(_) => false,
        }
    }
}

/// `a | c` in the extended sense, with relative residual tolerance `1e-9`.
pub fn divides(a: &ExtPoly, c: &ExtPoly) -> bool {
    c.divisible_by(a, 1e-9)
}
