//! Test signals.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;

use super::BivariateSignal;
use crate::C64;

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn unit(x: BivariateSignal) -> BivariateSignal {
    let n = x.norm();
    x.scale(C64::new(1.0 / n, 0.0))
}

/// Jones vector for orientation `theta` and ellipticity angle `chi`.
pub fn jones(theta: f64, chi: f64) -> [C64; 2] {
    [
        C64::new(theta.cos() * chi.cos(), -theta.sin() * chi.sin()),
        C64::new(theta.sin() * chi.cos(), theta.cos() * chi.sin()),
    ]
}

/// Unit-energy Gaussian-windowed linear chirp whose polarization ellipse
/// rotates and changes ellipticity along the pulse.
pub fn chirped_pulse(n: usize) -> BivariateSignal {
    let len = (n.max(2) - 1) as f64;
    let mut x1 = Vec::with_capacity(n);
    let mut x2 = Vec::with_capacity(n);
    for k in 0..n {
        let t = k as f64 / len - 0.5;
        let env = (-(t / 0.35).powi(2)).exp();
        let phase = 2.0 * PI * (0.05 * k as f64 + 0.075 * (k * k) as f64 / len);
        let theta = PI / 8.0 + 0.8 * PI * (t + 0.5);
        let chi = 0.35 * (PI * t).sin();
        let [a, b] = jones(theta, chi);
        let c = C64::from_polar(env, phase);
        x1.push(a * c);
        x2.push(b * c);
    }
    unit(BivariateSignal::new(x1, x2).expect("equal lengths"))
}

/// Unit-energy signal with i.i.d. circular Gaussian samples.
pub fn random_signal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> BivariateSignal {
    let x1 = (0..n).map(|_| complex_normal(rng)).collect();
    let x2 = (0..n).map(|_| complex_normal(rng)).collect();
    unit(BivariateSignal::new(x1, x2).expect("equal lengths"))
}

/// Unit-energy signal `x[n] = s[n] (a, b)` with a fixed random polarization,
/// so `x2 = c x1` and every root is common.
pub fn constant_polarization<R: Rng + ?Sized>(n: usize, rng: &mut R) -> BivariateSignal {
    let a = complex_normal(rng);
    let b = complex_normal(rng);
    let s: Vec<C64> = (0..n).map(|_| complex_normal(rng)).collect();
    unit(
        BivariateSignal::new(s.iter().map(|v| v * a).collect(), s.iter().map(|v| v * b).collect())
            .expect("equal lengths"),
    )
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    complex_normal(rng)
}
