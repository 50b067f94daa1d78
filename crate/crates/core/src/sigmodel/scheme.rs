use serde::Deserialize;

use super::MeasurementScheme;
use crate::{Result, C64};

/// Linear horizontal, linear vertical, linear diagonal and circular analysers.
pub fn simple_scheme(m: usize) -> Result<MeasurementScheme> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    MeasurementScheme::new(
        m,
        vec![
            [one, zero],
            [zero, one],
            [C64::new(h, 0.0), C64::new(h, 0.0)],
            [C64::new(h, 0.0), C64::new(0.0, h)],
        ],
    )
}

/// Unit vector in C^2 associated with a point `s` on the unit sphere.
pub fn sphere_projection(s: [f64; 3]) -> [C64; 2] {
    let [sx, sy, sz] = s;
    if (1.0 + sz).abs() < 1e-12 {
        return [C64::new(0.0, 1.0), C64::new(0.0, 0.0)];
    }
    let k = 1.0 / (2.0f64.sqrt() * (1.0 + sz).sqrt());
    [C64::new(0.0, k * sx), C64::new(k * sy, k * (1.0 + sz))]
}

/// Projections built from sphere points (default: the 12 HEALPix level-0 centres).
pub fn sphere_scheme(m: usize, points: Option<&[[f64; 3]]>) -> Result<MeasurementScheme> {
    let default;
    let pts = match points {
        Some(p) => p,
        None => {
            default = healpix_level0_centers();
            &default
        }
    };
    MeasurementScheme::new(m, pts.iter().map(|&s| sphere_projection(s)).collect())
}

#[derive(Deserialize)]
struct CenterFile {
    centers: Vec<[f64; 3]>,
}

/// The 12 pixel centres of the coarsest HEALPix grid.
pub fn healpix_level0_centers() -> Vec<[f64; 3]> {
    let f: CenterFile = serde_json::from_str(include_str!("../../data/healpix_nside1.json"))
        .expect("bundled HEALPix table parses");
    f.centers
}
