//! Iterative reconstruction in the lifted model `y_r = |c_r^H xi|^2`:
//! a trace-regularised semidefinite program solved with FISTA, and
//! accelerated Wirtinger flow with an exact line search.

mod cubic;
mod init;
mod lifted;
mod sdp;
mod wf;

pub use cubic::real_cubic_roots;
pub use init::{init_random_phase, init_spectral, init_sylvester, SpectralScaling, WfInit};
pub use lifted::LiftedProblem;
pub use sdp::{sdp_solve, sdp_solve_observed, SdpOptions, SdpResult};
pub use wf::{wf_optimal_step, wf_solve, WfOptions, WfResult};

use serde::{Deserialize, Serialize};

/// One row of a convergence trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub k: usize,
    pub cost: f64,
    pub residual: f64,
    pub seconds: f64,
}
