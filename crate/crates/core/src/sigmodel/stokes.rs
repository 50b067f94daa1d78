use nalgebra::{DMatrix, Matrix2};
use serde::{Deserialize, Serialize};

use super::MeasurementScheme;
use crate::linalg::rank_of_values;
use crate::{Error, Result, C64};

/// `(S0, S1, S2, S3)` with `M = 1/2 [[S0 + S1, S2 + j S3], [S2 - j S3, S0 - S1]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StokesVector(pub [f64; 4]);

/// Stokes parameters of a Hermitian 2x2 matrix.
pub fn stokes_map(m: &Matrix2<C64>) -> Result<StokesVector> {
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let defect = (m[(0, 1)] - m[(1, 0)].conj())
        .norm()
        .max(m[(0, 0)].im.abs())
        .max(m[(1, 1)].im.abs());
    if defect > 1e-10 * scale {
        return Err(Error::NotHermitian(defect));
    }
    let (a, d) = (m[(0, 0)].re, m[(1, 1)].re);
    let b = (m[(0, 1)] + m[(1, 0)].conj()) * 0.5;
    Ok(StokesVector([a + d, a - d, 2.0 * b.re, 2.0 * b.im]))
}

pub fn stokes_inverse(s: &StokesVector) -> Matrix2<C64> {
    let [s0, s1, s2, s3] = s.0;
    Matrix2::new(
        C64::new(0.5 * (s0 + s1), 0.0),
        C64::new(0.5 * s2, 0.5 * s3),
        C64::new(0.5 * s2, -0.5 * s3),
        C64::new(0.5 * (s0 - s1), 0.0),
    )
}

/// `P x 4` matrix `D` with `y[m, :] = D S(F[m])`.
///
/// Row `p` is `S(conj(b_p) b_p^T) / 2`: for Hermitian `A, B`,
/// `tr(A B) = S(A) . S(B) / 2`.
pub fn stokes_matrix(scheme: &MeasurementScheme) -> DMatrix<f64> {
    let mut d = DMatrix::zeros(scheme.p(), 4);
    for (p, b) in scheme.projections().iter().enumerate() {
        let outer = Matrix2::new(
            b[0].conj() * b[0],
            b[0].conj() * b[1],
            b[1].conj() * b[0],
            b[1].conj() * b[1],
        );
        let s = stokes_map(&outer).expect("outer product is Hermitian");
        for k in 0..4 {
            d[(p, k)] = 0.5 * s.0[k];
        }
    }
    d
}

/// True when `D` has full column rank 4, so spectral matrices are identifiable.
pub fn generating_family(scheme: &MeasurementScheme) -> bool {
    let d = stokes_matrix(scheme);
    let s: Vec<f64> = d.singular_values().iter().copied().collect();
    rank_of_values(&s, 1e-10) == 4
}
