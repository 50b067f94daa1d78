/// Real roots of `a3 t^3 + a2 t^2 + a1 t + a0`, each refined by Newton steps.
///
/// Degenerates gracefully to the quadratic and linear cases.
pub fn real_cubic_roots(a3: f64, a2: f64, a1: f64, a0: f64) -> Vec<f64> {
    let scale = a3.abs().max(a2.abs()).max(a1.abs()).max(a0.abs());
    if scale == 0.0 {
        return vec![];
    }
    let raw = if a3.abs() <= 1e-14 * scale {
        quadratic(a2, a1, a0)
    } else {
        depressed(a2 / a3, a1 / a3, a0 / a3)
    };
    let f = |t: f64| ((a3 * t + a2) * t + a1) * t + a0;
    let df = |t: f64| (3.0 * a3 * t + 2.0 * a2) * t + a1;
    raw.into_iter()
        .filter(|t| t.is_finite())
        .map(|mut t| {
            for _ in 0..4 {
                let d = df(t);
                if d == 0.0 {
                    break;
                }
                let cand = t - f(t) / d;
                if cand.is_finite() && f(cand).abs() < f(t).abs() {
                    t = cand;
                } else {
                    break;
                }
            }
            t
        })
        .collect()
}

fn quadratic(a: f64, b: f64, c: f64) -> Vec<f64> {
    if a == 0.0 {
        return if b == 0.0 { vec![] } else { vec![-c / b] };
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return vec![];
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    if q == 0.0 {
        return vec![0.0];
    }
    vec![q / a, c / q]
}

/// Roots of the monic cubic `t^3 + p2 t^2 + p1 t + p0`.
fn depressed(p2: f64, p1: f64, p0: f64) -> Vec<f64> {
    let shift = p2 / 3.0;
    let p = p1 - p2 * p2 / 3.0;
    let q = 2.0 * p2 * p2 * p2 / 27.0 - p2 * p1 / 3.0 + p0;
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);
    if disc > 0.0 {
        let a = -q.signum() * (q.abs() / 2.0 + disc.sqrt()).cbrt();
        let b = if a != 0.0 { -p / (3.0 * a) } else { 0.0 };
        vec![a + b - shift]
    } else if p == 0.0 {
        vec![-shift]
    } else {
        let r = 2.0 * (-p / 3.0).sqrt();
        let arg = ((3.0 * q) / (2.0 * p) * (-3.0 / p).sqrt()).clamp(-1.0, 1.0);
        let phi = arg.acos() / 3.0;
        (0..3)
            .map(|k| r * (phi - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos() - shift)
            .collect()
    }
}
