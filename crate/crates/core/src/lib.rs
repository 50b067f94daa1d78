//! Reconstruction of bivariate (polarized) signals from the squared magnitudes
//! of their polarimetric Fourier measurements.
//!
//! The crate is organised bottom-up:
//!
//! * [`extpoly`] - polynomials over the extended complex plane (roots at
//!   infinity, conjugate reflection, Sylvester matrices and GCDs);
//! * [`sigmodel`] - signals, measurement schemes, Stokes algebra, spectral
//!   matrices and autocorrelation polynomials;
//! * [`algsolve`] - the two closed-form kernel reconstructions;
//! * [`itersolve`] - the lifted semidefinite program and accelerated
//!   Wirtinger flow;
//! * [`diagnostics`] - solution counting and enumeration, perturbation
//!   studies and the Cramer-Rao bound.
//!
//! Monte-Carlo style fan-outs go through [`exec::Exec`], which runs on rayon
//! when the `parallel` feature is enabled and sequentially otherwise.

pub mod algsolve;
pub mod diagnostics;
pub mod error;
pub mod exec;
pub mod extpoly;
pub mod itersolve;
pub mod linalg;
pub mod sigmodel;

pub use error::{Error, Result};

/// Complex double used throughout.
pub type C64 = num_complex::Complex64;
