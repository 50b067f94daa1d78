use crate::linalg::{CMat, CVec};
use crate::sigmodel::{MeasurementScheme, MeasurementSet};
use crate::{Error, Result, C64};

/// Measurement operator `C` (rows `c_{m,p}^H`, ordered `r = m P + p`) and data.
///
/// `c_{m,p} = conj(b_p) (x) a_m`, so the row entry at `i N + n` is
/// `b_p[i] exp(-2 pi j m n / M)` and `c_{m,p}^H xi` is the projected DFT.
#[derive(Debug, Clone)]
pub struct LiftedProblem {
    c: CMat,
    y: Vec<f64>,
    n: usize,
    m: usize,
    p: usize,
    fourier: Option<Fourier>,
}

/// Structure of a Fourier-type operator: `c_r^H Xi c_r` depends on `Xi` only
/// through the lag sums of its four `N x N` blocks.
#[derive(Debug, Clone)]
struct Fourier {
    projections: Vec<[C64; 2]>,
    tw: Vec<C64>,
}

impl LiftedProblem {
    pub fn new(y: &MeasurementSet, scheme: &MeasurementScheme, n: usize) -> Result<Self> {
        if y.m() != scheme.m() || y.p() != scheme.p() {
            return Err(Error::InvalidInput(format!(
                "measurements are {}x{} but the scheme is {}x{}",
                y.m(),
                y.p(),
                scheme.m(),
                scheme.p()
            )));
        }
        if n == 0 {
            return Err(Error::InvalidInput("signal length must be positive".into()));
        }
        let (m, p) = (scheme.m(), scheme.p());
        let tw = crate::sigmodel::twiddles(m);
        let mut c = CMat::zeros(m * p, 2 * n);
        for mi in 0..m {
            for (pi, b) in scheme.projections().iter().enumerate() {
                let r = mi * p + pi;
                for k in 0..n {
                    let w = tw[(mi * k) % m];
                    c[(r, k)] = b[0] * w;
                    c[(r, n + k)] = b[1] * w;
                }
            }
        }
        let fourier = Some(Fourier { projections: scheme.projections().to_vec(), tw });
        Ok(LiftedProblem { c, y: y.values().to_vec(), n, m, p, fourier })
    }

    /// Generic operator with explicit rows `c_r^H` (`r` rows, `2N` columns).
    pub fn from_matrix(c: CMat, y: Vec<f64>) -> Result<Self> {
        if c.ncols() == 0 || !c.ncols().is_multiple_of(2) || c.nrows() != y.len() {
            return Err(Error::InvalidInput(format!(
                "operator is {}x{} with {} measurements",
                c.nrows(),
                c.ncols(),
                y.len()
            )));
        }
        let (n, rows) = (c.ncols() / 2, c.nrows());
        Ok(LiftedProblem { c, y, n, m: rows, p: 1, fourier: None })
    }

    /// Same operator, different data.
    pub fn with_data(&self, y: &MeasurementSet) -> Result<Self> {
        if y.values().len() != self.y.len() {
            return Err(Error::InvalidInput("measurement count mismatch".into()));
        }
        Ok(LiftedProblem { y: y.values().to_vec(), ..self.clone() })
    }

    pub fn c(&self) -> &CMat {
        &self.c
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn apply(&self, xi: &CVec) -> CVec {
        &self.c * xi
    }

    /// `F(xi) = 1/2 |y - |C xi|^2|^2`.
    pub fn objective(&self, xi: &CVec) -> f64 {
        self.objective_from(&self.apply(xi))
    }

    pub(crate) fn objective_from(&self, u: &CVec) -> f64 {
        0.5 * u
            .iter()
            .zip(&self.y)
            .map(|(z, y)| (z.norm_sqr() - y).powi(2))
            .sum::<f64>()
    }

    /// Wirtinger gradient `dF/d conj(xi) = C^H ((|C xi|^2 - y) . C xi)`.
    ///
    /// The gradient with respect to `(Re xi, Im xi)` is twice this.
    pub fn gradient(&self, xi: &CVec) -> CVec {
        self.gradient_from(&self.apply(xi))
    }

    pub(crate) fn gradient_from(&self, u: &CVec) -> CVec {
        let w = CVec::from_iterator(
            u.len(),
            u.iter().zip(&self.y).map(|(z, y)| z * (z.norm_sqr() - y)),
        );
        self.c.adjoint() * w
    }

    /// `A(Xi)_r = c_r^H Xi c_r`.
    pub fn lift_apply(&self, xi: &CMat) -> Vec<f64> {
        match &self.fourier {
            Some(f) => self.lift_apply_fourier(f, xi),
            None => self.lift_apply_dense(xi),
        }
    }

    /// `A^*(d) = sum_r d_r c_r c_r^H = C^H diag(d) C`.
    pub fn lift_adjoint(&self, d: &[f64]) -> CMat {
        match &self.fourier {
            Some(f) => self.lift_adjoint_fourier(f, d),
            None => self.lift_adjoint_dense(d),
        }
    }

    /// Lag sums `T_ij[l] = sum_{n - n' = l} Xi[(i, n), (j, n')]`, index `l + N - 1`.
    fn lag_sums(&self, xi: &CMat) -> [[Vec<C64>; 2]; 2] {
        let n = self.n;
        let mut t: [[Vec<C64>; 2]; 2] = Default::default();
        for i in 0..2 {
            for j in 0..2 {
                let mut v = vec![C64::new(0.0, 0.0); 2 * n - 1];
                for a in 0..n {
                    for b in 0..n {
                        v[a + n - 1 - b] += xi[(i * n + a, j * n + b)];
                    }
                }
                t[i][j] = v;
            }
        }
        t
    }

    fn lift_apply_fourier(&self, f: &Fourier, xi: &CMat) -> Vec<f64> {
        let (n, m) = (self.n, self.m);
        let t = self.lag_sums(xi);
        let mut out = Vec::with_capacity(m * self.p);
        for mi in 0..m {
            let mut s = [[C64::new(0.0, 0.0); 2]; 2];
            for (k, _) in t[0][0].iter().enumerate() {
                let lag = (k as i64 - (n as i64 - 1)).rem_euclid(m as i64) as usize;
                let w = f.tw[(mi * lag) % m];
                for i in 0..2 {
                    for j in 0..2 {
                        s[i][j] += t[i][j][k] * w;
                    }
                }
            }
            for b in &f.projections {
                let mut v = C64::new(0.0, 0.0);
                for i in 0..2 {
                    for j in 0..2 {
                        v += b[i] * b[j].conj() * s[i][j];
                    }
                }
                out.push(v.re);
            }
        }
        out
    }

    #[allow(clippy::needless_range_loop)]
    fn lift_adjoint_fourier(&self, f: &Fourier, d: &[f64]) -> CMat {
        let (n, m, p) = (self.n, self.m, self.p);
        let mut t = [[vec![C64::new(0.0, 0.0); 2 * n - 1], vec![C64::new(0.0, 0.0); 2 * n - 1]],
            [vec![C64::new(0.0, 0.0); 2 * n - 1], vec![C64::new(0.0, 0.0); 2 * n - 1]]];
        for mi in 0..m {
            let mut w = [[C64::new(0.0, 0.0); 2]; 2];
            for (pi, b) in f.projections.iter().enumerate() {
                let dv = d[mi * p + pi];
                for i in 0..2 {
                    for j in 0..2 {
                        w[i][j] += b[i].conj() * b[j] * dv;
                    }
                }
            }
            for k in 0..(2 * n - 1) {
                let lag = (k as i64 - (n as i64 - 1)).rem_euclid(m as i64) as usize;
                let e = f.tw[(mi * lag) % m].conj();
                for i in 0..2 {
                    for j in 0..2 {
                        t[i][j][k] += w[i][j] * e;
                    }
                }
            }
        }
        CMat::from_fn(2 * n, 2 * n, |r, c| {
            let (i, a) = (r / n, r % n);
            let (j, b) = (c / n, c % n);
            t[i][j][a + n - 1 - b]
        })
    }

    /// Dense evaluation of [`LiftedProblem::lift_apply`] through the explicit rows.
    pub fn lift_apply_dense(&self, xi: &CMat) -> Vec<f64> {
        let w = &self.c * xi;
        (0..self.c.nrows())
            .map(|r| {
                (0..self.c.ncols())
                    .map(|k| (w[(r, k)] * self.c[(r, k)].conj()).re)
                    .sum()
            })
            .collect()
    }

    /// Dense evaluation of [`LiftedProblem::lift_adjoint`].
    pub fn lift_adjoint_dense(&self, d: &[f64]) -> CMat {
        let mut dc = self.c.clone();
        for (r, &dr) in d.iter().enumerate() {
            dc.row_mut(r).scale_mut(dr);
        }
        self.c.adjoint() * dc
    }
}
