use nalgebra::{DMatrix, Schur};
use serde::{Deserialize, Serialize};

use super::ExtPoly;
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Root {
    Finite(C64),
    Infinity,
}

impl Root {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Root::Infinity)
    }

    pub fn finite(&self) -> Option<C64> {
        match self {
            Root::Finite(z) => Some(*z),
            Root::Infinity => None,
        }
    }

    /// `1 / conj(alpha)`, exchanging 0 and infinity.
    pub fn conj_inv(&self) -> Root {
        match self {
            Root::Infinity => Root::Finite(C64::new(0.0, 0.0)),
            Root::Finite(z) if z.norm() == 0.0 => Root::Infinity,
            Root::Finite(z) => Root::Finite(C64::new(1.0, 0.0) / z.conj()),
        }
    }

    pub fn modulus(&self) -> f64 {
        match self {
            Root::Finite(z) => z.norm(),
            Root::Infinity => f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootOptions {
    /// Coefficients below `zero_tol * max|coeff|` count as exact zeros when
    /// detecting roots at 0 and infinity.
    pub zero_tol: f64,
    /// Computed roots closer than `cluster_tol * max(1, |a|, |b|)` are merged.
    pub cluster_tol: f64,
    /// Newton steps applied to each root of the stripped polynomial.
    pub polish_steps: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions { zero_tol: 1e-12, cluster_tol: 1e-7, polish_steps: 3 }
    }
}

/// `A = leading * prod (z - root)^mult`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootMultiset {
    pub roots: Vec<(Root, usize)>,
    pub leading: C64,
}

impl RootMultiset {
    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.1).sum()
    }

    pub fn infinity_multiplicity(&self) -> usize {
        self.roots.iter().filter(|r| r.0.is_infinite()).map(|r| r.1).sum()
    }

    /// Flat list with each root repeated by its multiplicity.
    pub fn expanded(&self) -> Vec<Root> {
        self.roots
            .iter()
            .flat_map(|&(r, m)| std::iter::repeat_n(r, m))
            .collect()
    }

    /// Multiplicity of the (merged) root closest to `z` within `tol`.
    pub fn multiplicity_of(&self, z: Root, tol: f64) -> usize {
        self.roots
            .iter()
            .filter(|(r, _)| match (r, z) {
                (Root::Infinity, Root::Infinity) => true,
                (Root::Finite(a), Root::Finite(b)) => (a - b).norm() <= tol * (1.0f64).max(b.norm()),
                _ => false,
            })
            .map(|r| r.1)
            .sum()
    }
}

pub(super) fn roots(p: &ExtPoly, opts: &RootOptions) -> Result<RootMultiset> {
    let c = p.coeffs();
    let maxc = p.max_abs();
    if maxc == 0.0 || !maxc.is_finite() {
        return Err(Error::NoFactorization);
    }
    let thr = opts.zero_tol * maxc;
    let top = (0..c.len()).rev().find(|&k| c[k].norm() > thr).unwrap();
    let bottom = (0..c.len()).find(|&k| c[k].norm() > thr).unwrap();
    let n_inf = p.degree() - top;
    let n_zero = bottom;
    let stripped = &c[bottom..=top];
    let leading = c[top];

    let mut finite: Vec<(C64, bool)> = vec![(C64::new(0.0, 0.0), true); n_zero];
    for z in stripped_roots(stripped, opts.polish_steps) {
        finite.push((z, false));
    }

    let mut out: Vec<(Root, usize)> = cluster(&finite, opts.cluster_tol)
        .into_iter()
        .map(|(z, m)| (Root::Finite(z), m))
        .collect();
    if n_inf > 0 {
        out.push((Root::Infinity, n_inf));
    }
    Ok(RootMultiset { roots: out, leading })
}

/// Roots of a polynomial with nonzero constant and leading coefficients.
fn stripped_roots(c: &[C64], polish: usize) -> Vec<C64> {
    let d = c.len() - 1;
    match d {
        0 => return vec![],
        1 => return vec![-c[0] / c[1]],
        _ => {}
    }
    let lead = c[d];
    let mut comp = DMatrix::<C64>::zeros(d, d);
    for i in 1..d {
        comp[(i, i - 1)] = C64::new(1.0, 0.0);
    }
    for i in 0..d {
        comp[(i, d - 1)] = -c[i] / lead;
    }
    balance(&mut comp);
    let eig = Schur::new(comp)
        .eigenvalues()
        .expect("complex Schur form is triangular");
    let poly = ExtPoly::new(c.to_vec());
    let deriv: Vec<C64> = (1..=d).map(|k| c[k] * k as f64).collect();
    let deriv = ExtPoly::new(deriv);
    eig.iter()
        .map(|&z0| {
            let mut z = z0;
            let mut fz = poly.evaluate(z).norm();
            for _ in 0..polish {
                let dp = deriv.evaluate(z);
                if dp.norm() == 0.0 {
                    break;
                }
                let cand = z - poly.evaluate(z) / dp;
                let fc = poly.evaluate(cand).norm();
                if fc.partial_cmp(&fz) != Some(std::cmp::Ordering::Less) {
                    break;
                }
                z = cand;
                fz = fc;
            }
            z
        })
        .collect()
}

/// Diagonal similarity balancing by powers of two.
fn balance(a: &mut DMatrix<C64>) {
    let n = a.nrows();
    let radix = 2.0f64;
    let mut converged = false;
    let mut sweeps = 0;
    while !converged && sweeps < 100 {
        converged = true;
        sweeps += 1;
        for i in 0..n {
            let mut col = 0.0;
            let mut row = 0.0;
            for j in 0..n {
                if j != i {
                    col += a[(j, i)].l1_norm();
                    row += a[(i, j)].l1_norm();
                }
            }
            if col == 0.0 || row == 0.0 {
                continue;
            }
            let total = col + row;
            let mut f = 1.0;
            let mut g = row / radix;
            while col < g {
                f *= radix;
                col *= radix * radix;
            }
            g = row * radix;
            while col > g {
                f /= radix;
                col /= radix * radix;
            }
            if (col + row / f) / f < 0.95 * total / f && f != 1.0 {
                converged = false;
                for j in 0..n {
                    a[(i, j)] /= f;
                    a[(j, i)] *= f;
                }
            }
        }
    }
}

fn cluster(points: &[(C64, bool)], tol: f64) -> Vec<(C64, usize)> {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let (a, b) = (points[i].0, points[j].0);
            let scale = 1.0f64.max(a.norm()).max(b.norm());
            if (a - b).norm() <= tol * scale {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[rj] = ri;
                }
            }
        }
    }
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|g| g.0 == r) {
            Some(g) => g.1.push(i),
            None => groups.push((r, vec![i])),
        }
    }
    groups
        .into_iter()
        .map(|(_, idx)| {
            let exact_zero = idx.iter().any(|&i| points[i].1);
            let rep = if exact_zero {
                C64::new(0.0, 0.0)
            } else {
                idx.iter().map(|&i| points[i].0).sum::<C64>() / idx.len() as f64
            };
            (rep, idx.len())
        })
        .collect()
}
