//! Thin wrappers over nalgebra's dense decompositions with the conventions
//! used in the rest of the crate (sorted spectra, explicit singular vectors).

use nalgebra::{DMatrix, DVector};

use crate::C64;

pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

/// Full singular value decomposition `A = U diag(s) V^H` with `s` descending.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: CMat,
    pub s: Vec<f64>,
    /// `V^H`, one right singular vector (conjugated) per row.
    pub v_t: CMat,
}

impl Svd {
    pub fn new(a: &CMat) -> Self {
        let svd = nalgebra::SVD::new(a.clone(), true, true);
        let u = svd.u.expect("U requested");
        let v_t = svd.v_t.expect("V^H requested");
        let s: Vec<f64> = svd.singular_values.iter().copied().collect();
        let mut order: Vec<usize> = (0..s.len()).collect();
        order.sort_by(|&i, &j| s[j].total_cmp(&s[i]));
        if order.iter().enumerate().all(|(k, &i)| k == i) {
            return Svd { u, s, v_t };
        }
        let u = CMat::from_fn(u.nrows(), order.len(), |r, c| u[(r, order[c])]);
        let v_t = CMat::from_fn(order.len(), v_t.ncols(), |r, c| v_t[(order[r], c)]);
        let s = order.iter().map(|&i| s[i]).collect();
        Svd { u, s, v_t }
    }

    /// k-th right singular vector, i.e. column k of V.
    pub fn right_vector(&self, k: usize) -> CVec {
        CVec::from_iterator(self.v_t.ncols(), self.v_t.row(k).iter().map(|z| z.conj()))
    }

    /// k-th left singular vector, i.e. column k of U.
    pub fn left_vector(&self, k: usize) -> CVec {
        self.u.column(k).into_owned()
    }

    pub fn rank(&self, rel_tol: f64) -> usize {
        rank_of_values(&self.s, rel_tol)
    }
}

/// Number of singular values above `rel_tol * s_max`.
pub fn rank_of_values(s: &[f64], rel_tol: f64) -> usize {
    let smax = s.iter().copied().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x > rel_tol * smax).count()
}

pub fn numerical_rank(a: &CMat, rel_tol: f64) -> usize {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0;
    }
    let s = a.clone().singular_values();
    rank_of_values(s.as_slice(), rel_tol)
}

/// Singular values only, descending.
pub fn singular_values(a: &CMat) -> Vec<f64> {
    let mut s: Vec<f64> = a.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Moore-Penrose pseudo-inverse, singular values below `rel_tol * s_max` dropped.
pub fn pinv(a: &CMat, rel_tol: f64) -> CMat {
    let svd = Svd::new(a);
    let smax = svd.s.first().copied().unwrap_or(0.0);
    let mut out = CMat::zeros(a.ncols(), a.nrows());
    for (k, &sk) in svd.s.iter().enumerate() {
        if sk <= rel_tol * smax || sk == 0.0 {
            continue;
        }
        let v = svd.right_vector(k);
        let u = svd.left_vector(k);
        out += (v * u.adjoint()) * C64::new(1.0 / sk, 0.0);
    }
    out
}

/// Least-squares solution of `a x = b` (minimum norm when rank deficient).
pub fn lstsq(a: &CMat, b: &CVec) -> CVec {
    let svd = nalgebra::SVD::new(a.clone(), true, true);
    let smax = svd.singular_values.max();
    let eps = (smax * 1e-14).max(f64::MIN_POSITIVE);
    svd.solve(b, eps).expect("U and V were computed")
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues descending.
#[derive(Debug, Clone)]
pub struct HermEig {
    pub values: Vec<f64>,
    /// Eigenvectors as columns, in the order of `values`.
    pub vectors: CMat,
}

impl HermEig {
    pub fn new(a: &CMat) -> Self {
        let n = a.nrows();
        let herm = (a + a.adjoint()) * C64::new(0.5, 0.0);
        let eig = herm.symmetric_eigen();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = CMat::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
        HermEig { values, vectors }
    }

    pub fn vector(&self, k: usize) -> CVec {
        self.vectors.column(k).into_owned()
    }

    /// Rebuild `sum_k f(lambda_k) u_k u_k^H`.
    pub fn rebuild(&self, f: impl Fn(f64) -> f64) -> CMat {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for (k, &lam) in self.values.iter().enumerate() {
            let w = f(lam);
            for r in 0..n {
                scaled[(r, k)] *= w;
            }
        }
        scaled * self.vectors.adjoint()
    }
}

/// Largest absolute deviation from Hermitian symmetry.
pub fn hermitian_defect(a: &CMat) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn frob(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn norm2(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `sum conj(a_i) b_i`.
pub fn dot_h(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Largest singular value squared of `a`, by power iteration on `a^H a`.
pub fn spectral_norm_sq(a: &CMat, iters: usize) -> f64 {
    let n = a.ncols();
    if n == 0 || a.nrows() == 0 {
        return 0.0;
    }
    let mut v = CVec::from_fn(n, |i, _| C64::new(1.0 + (i as f64 * 0.37).sin(), 0.1 * i as f64));
    let mut lam = 0.0;
    for _ in 0..iters {
        let nv = v.norm();
        if nv == 0.0 {
            return 0.0;
        }
        v /= C64::new(nv, 0.0);
        let w = a.adjoint() * (a * &v);
        lam = w.norm();
        v = w;
    }
    lam
}
