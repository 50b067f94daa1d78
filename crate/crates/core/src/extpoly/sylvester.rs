use super::ExtPoly;
use crate::linalg::{lstsq, numerical_rank, CMat, CVec, Svd};
use crate::{Error, Result, C64};

/// Relative singular-value threshold for numerical rank decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Matrix of `b -> a * b` for `b` in `C_{<= l}`; shape `(D + l + 1) x (l + 1)`.
pub fn multiplication_matrix(a: &ExtPoly, l: usize) -> CMat {
    let d = a.degree();
    let mut m = CMat::zeros(d + l + 1, l + 1);
    for j in 0..=l {
        for (i, &c) in a.coeffs().iter().enumerate() {
            m[(i + j, j)] = c;
        }
    }
    m
}

/// `Syl_d(A, B) = [M_{L-d}(a) | M_{L-d}(b)]` for `A, B` of the same ambient
/// degree `L`; shape `(2L - d + 1) x 2(L - d + 1)`.
pub fn sylvester(a: &ExtPoly, b: &ExtPoly, d: usize) -> Result<CMat> {
    if a.degree() != b.degree() {
        return Err(Error::DegreeMismatch(format!(
            "Sylvester operands have degrees {} and {}",
            a.degree(),
            b.degree()
        )));
    }
    sylvester_pair(a, b, d)
}

/// Sylvester matrix for operands of possibly different ambient degrees:
/// `[M_{Lb-d}(a) | M_{La-d}(b)]`, the matrix of `(u, v) -> a u + b v`.
pub fn sylvester_pair(a: &ExtPoly, b: &ExtPoly, d: usize) -> Result<CMat> {
    let (la, lb) = (a.degree(), b.degree());
    if d > la.min(lb) {
        return Err(Error::DegreeMismatch(format!(
            "Sylvester order {d} exceeds operand degree {}",
            la.min(lb)
        )));
    }
    let ma = multiplication_matrix(a, lb - d);
    let mb = multiplication_matrix(b, la - d);
    let rows = la + lb - d + 1;
    let mut s = CMat::zeros(rows, ma.ncols() + mb.ncols());
    s.view_mut((0, 0), (rows, ma.ncols())).copy_from(&ma);
    s.view_mut((0, ma.ncols()), (rows, mb.ncols())).copy_from(&mb);
    Ok(s)
}

/// Degree of the extended GCD, `La + Lb - rank Syl_1(A, B)`.
pub fn gcd_degree(a: &ExtPoly, b: &ExtPoly, rank_tol: f64) -> Result<usize> {
    match (a.is_zero(), b.is_zero()) {
        (true, true) => return Err(Error::NoFactorization),
        (true, false) => return Ok(b.degree()),
        (false, true) => return Ok(a.degree()),
        _ => {}
    }
    let (la, lb) = (a.degree(), b.degree());
    if la == 0 || lb == 0 {
        return Ok(0);
    }
    let s = sylvester_pair(a, b, 1)?;
    Ok(la + lb - numerical_rank(&s, rank_tol))
}

/// Extended GCD, determined up to a constant factor.
///
/// The right kernel of `Syl_K(A, B)` is spanned by `(-c B/H, c A/H)`; the
/// cofactors are then divided out of `A` and `B` jointly in least squares.
pub fn gcd(a: &ExtPoly, b: &ExtPoly, rank_tol: f64) -> Result<ExtPoly> {
    let k = gcd_degree(a, b, rank_tol)?;
    if a.is_zero() {
        return Ok(b.clone());
    }
    if b.is_zero() {
        return Ok(a.clone());
    }
    if k == 0 {
        return Ok(ExtPoly::constant(C64::new(1.0, 0.0)));
    }
    let (la, lb) = (a.degree(), b.degree());
    let s = sylvester_pair(a, b, k)?;
    let svd = Svd::new(&s);
    let v = svd.right_vector(s.ncols() - 1);
    let nu = lb - k + 1;
    let g = ExtPoly::new(v.iter().take(nu).map(|z| -z).collect());
    let f = ExtPoly::new(v.iter().skip(nu).copied().collect());
    debug_assert_eq!(f.degree(), la - k);

    let mf = super::multiplication_matrix(&f, k);
    let mg = super::multiplication_matrix(&g, k);
    let mut stacked = CMat::zeros(mf.nrows() + mg.nrows(), k + 1);
    stacked.view_mut((0, 0), (mf.nrows(), k + 1)).copy_from(&mf);
    stacked.view_mut((mf.nrows(), 0), (mg.nrows(), k + 1)).copy_from(&mg);
    let mut rhs = CVec::zeros(mf.nrows() + mg.nrows());
    for (i, &c) in a.coeffs().iter().enumerate() {
        rhs[i] = c;
    }
    for (i, &c) in b.coeffs().iter().enumerate() {
        rhs[mf.nrows() + i] = c;
    }
    let h = lstsq(&stacked, &rhs);
    Ok(ExtPoly::new(h.iter().copied().collect()))
}
