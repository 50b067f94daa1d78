mod common;

use common::{c, poly_rel_diff, random_poly, rng};
use nalgebra::DMatrix;
use ppr_core::extpoly::*;
use ppr_core::linalg::numerical_rank;
use ppr_core::C64;
use proptest::prelude::*;
use rand::Rng;

fn example() -> ExtPoly {
    ExtPoly::from_real(&[0.0, -1.0, 0.5, 0.5, 0.0, 0.0])
}

fn near(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() <= tol
}

#[test]
fn multiply_infinity_by_zero_root() {
    let p = ExtPoly::linear_factor(Root::Infinity).multiply(&ExtPoly::linear_factor(Root::Finite(c(0.0, 0.0))));
    assert_eq!(p, ExtPoly::from_real(&[0.0, 1.0, 0.0]));
}

#[test]
fn multiply_by_constant() {
    let p = example().multiply(&ExtPoly::constant(c(2.0, 0.0)));
    assert_eq!(p, ExtPoly::from_real(&[0.0, -2.0, 1.0, 1.0, 0.0, 0.0]));
}

#[test]
fn multiply_matches_pointwise_evaluation() {
    let mut r = rng(11);
    let a = random_poly(3, &mut r);
    let b = random_poly(4, &mut r);
    let p = a.multiply(&b);
    assert_eq!(p.degree(), 7);
    for _ in 0..10 {
        let z = c(r.random_range(-2.0..2.0), r.random_range(-2.0..2.0));
        let want = a.evaluate(z) * b.evaluate(z);
        assert!((p.evaluate(z) - want).norm() <= 1e-12 * want.norm().max(1.0));
    }
}

#[test]
fn multiplication_matrix_examples() {
    let m = multiplication_matrix(&ExtPoly::from_real(&[1.0, 1.0]), 1);
    let want = DMatrix::from_row_slice(3, 2, &[c(1., 0.), c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.), c(1., 0.)]);
    assert_eq!(m, want);
    let m = multiplication_matrix(&ExtPoly::constant(c(0.5, -2.0)), 2);
    assert_eq!(m, DMatrix::from_diagonal_element(3, 3, c(0.5, -2.0)));
}

#[test]
fn multiplication_matrix_agrees_with_multiply() {
    let mut r = rng(12);
    let a = random_poly(4, &mut r);
    let b = random_poly(3, &mut r);
    let v = multiplication_matrix(&a, 3) * nalgebra::DVector::from_column_slice(b.coeffs());
    let p = a.multiply(&b);
    for (x, y) in v.iter().zip(p.coeffs()) {
        assert!((x - y).norm() < 1e-13);
    }
}

#[test]
fn conj_reflect_example() {
    assert_eq!(example().conj_reflect(), ExtPoly::from_real(&[0.0, 0.0, 0.5, 0.5, -1.0, 0.0]));
}

#[test]
fn conj_reflect_maps_roots_to_conjugate_inverses() {
    let mut r = rng(13);
    let a = random_poly(6, &mut r);
    let opts = RootOptions::default();
    let ra = a.roots(&opts).unwrap().expanded();
    let rb = a.conj_reflect().roots(&opts).unwrap().expanded();
    assert_eq!(ra.len(), rb.len());
    for root in ra {
        let want = root.conj_inv().finite().unwrap();
        let best = rb.iter().map(|b| (b.finite().unwrap() - want).norm()).fold(f64::INFINITY, f64::min);
        assert!(best < 1e-9 * want.norm().max(1.0), "{root:?}");
    }
}

#[test]
fn roots_of_example() {
    let rm = example().roots(&RootOptions::default()).unwrap();
    assert_eq!(rm.total_multiplicity(), 5);
    assert_eq!(rm.infinity_multiplicity(), 2);
    assert!(near(rm.leading, c(0.5, 0.0), 1e-15));
    for (z, mult) in [(0.0, 1), (1.0, 1), (-2.0, 1)] {
        assert_eq!(rm.multiplicity_of(Root::Finite(c(z, 0.0)), 1e-9), mult, "root {z}");
    }
}

#[test]
fn roots_of_constant_and_zero() {
    let rm = ExtPoly::constant(c(1.0, 0.0)).roots(&RootOptions::default()).unwrap();
    assert!(rm.roots.is_empty());
    assert_eq!(rm.leading, c(1.0, 0.0));
    assert!(matches!(ExtPoly::zero(3).roots(&RootOptions::default()), Err(ppr_core::Error::NoFactorization)));
}

#[test]
fn roots_cluster_multiple_roots() {
    let p = ExtPoly::from_real(&[-1.0, 3.0, -3.0, 1.0]); // (z - 1)^3
    let rm = p.roots(&RootOptions { cluster_tol: 1e-4, ..Default::default() }).unwrap();
    assert_eq!(rm.roots.len(), 1);
    assert_eq!(rm.roots[0].1, 3);
}

#[test]
fn from_roots_examples() {
    let rm = RootMultiset {
        roots: vec![(Root::Infinity, 2), (Root::Finite(c(-2.0, 0.0)), 1), (Root::Finite(c(1.0, 0.0)), 1), (Root::Finite(c(0.0, 0.0)), 1)],
        leading: c(0.5, 0.0),
    };
    assert_eq!(ExtPoly::from_roots(&rm, 5).unwrap(), example());
    let inf = RootMultiset { roots: vec![(Root::Infinity, 1)], leading: c(1.0, 0.0) };
    assert_eq!(ExtPoly::from_roots(&inf, 1).unwrap(), ExtPoly::from_real(&[1.0, 0.0]));
    let zero3 = RootMultiset { roots: vec![(Root::Finite(c(0.0, 0.0)), 3)], leading: c(2.0, 0.0) };
    assert_eq!(ExtPoly::from_roots(&zero3, 3).unwrap(), ExtPoly::from_real(&[0.0, 0.0, 0.0, 2.0]));
    assert!(matches!(
        ExtPoly::from_roots(&zero3, 4),
        Err(ppr_core::Error::MultiplicityMismatch { expected: 4, got: 3 })
    ));
}

#[test]
fn roots_round_trip_random() {
    let mut r = rng(14);
    for d in 1..=16 {
        let a = random_poly(d, &mut r);
        let back = ExtPoly::from_roots(&a.roots(&RootOptions::default()).unwrap(), d).unwrap();
        assert!(poly_rel_diff(&back, &a) < 1e-10, "degree {d}: {}", poly_rel_diff(&back, &a));
    }
}

#[test]
fn divides_examples() {
    let a = example();
    assert!(divides(&ExtPoly::from_real(&[2.0, 1.0, 0.0, 0.0]), &a));
    assert!(!divides(&ExtPoly::from_real(&[2.0, 1.0, 0.0, 0.0, 0.0]), &a));
    assert!(divides(&a, &a));
}

#[test]
fn sylvester_shapes() {
    let mut r = rng(15);
    let a = random_poly(5, &mut r);
    let b = random_poly(5, &mut r);
    assert_eq!(sylvester(&a, &b, 1).unwrap().shape(), (10, 10));
    assert_eq!(sylvester(&a, &b, 5).unwrap().shape(), (6, 2));
    assert!(matches!(sylvester(&a, &random_poly(4, &mut r), 1), Err(ppr_core::Error::DegreeMismatch(_))));
}

#[test]
fn sylvester_full_rank_for_coprime_pair() {
    let mut r = rng(16);
    let a = random_poly(4, &mut r);
    let b = random_poly(4, &mut r);
    assert_eq!(numerical_rank(&sylvester(&a, &b, 1).unwrap(), DEFAULT_RANK_TOL), 8);
    assert_eq!(gcd_degree(&a, &b, DEFAULT_RANK_TOL).unwrap(), 0);
}

#[test]
fn gcd_degree_planted() {
    let mut r = rng(17);
    let q = random_poly(2, &mut r);
    let a = q.multiply(&random_poly(4, &mut r));
    let b = q.multiply(&random_poly(4, &mut r));
    assert_eq!(gcd_degree(&a, &b, DEFAULT_RANK_TOL).unwrap(), 2);
    assert_eq!(gcd_degree(&a, &a, DEFAULT_RANK_TOL).unwrap(), 6);
    assert!(gcd_degree(&ExtPoly::zero(3), &ExtPoly::zero(3), DEFAULT_RANK_TOL).is_err());
}

#[test]
fn gcd_recovers_planted_factor() {
    let mut r = rng(18);
    let q = random_poly(3, &mut r);
    let a = q.multiply(&random_poly(3, &mut r));
    let b = q.multiply(&random_poly(3, &mut r));
    let g = gcd(&a, &b, DEFAULT_RANK_TOL).unwrap();
    assert_eq!(g.degree(), 3);
    // equal up to a constant: g / q is constant
    let k = g.coeff(3) / q.coeff(3);
    assert!(poly_rel_diff(&q.scale(k), &g) < 1e-9);
}

#[test]
fn gcd_keeps_roots_at_infinity() {
    let mut r = rng(19);
    let q = example();
    let a = q.multiply(&random_poly(2, &mut r));
    let b = q.multiply(&random_poly(2, &mut r));
    let g = gcd(&a, &b, DEFAULT_RANK_TOL).unwrap();
    assert_eq!(g.degree(), 5);
    assert_eq!(g.roots(&RootOptions::default()).unwrap().infinity_multiplicity(), 2);
}

#[test]
fn unimodular_root_multiplicity_doubles() {
    let mut r = rng(20);
    for mu in 1..=2 {
        let alpha = C64::from_polar(1.0, 0.7);
        let mut a = random_poly(2, &mut r);
        for _ in 0..mu {
            a = a.multiply(&ExtPoly::linear_factor(Root::Finite(alpha)));
        }
        let h = a.multiply(&a.conj_reflect());
        // a root of multiplicity k spreads by about eps^(1/k)
        let opts = RootOptions { cluster_tol: 1e-3, ..Default::default() };
        assert_eq!(a.roots(&opts).unwrap().multiplicity_of(Root::Finite(alpha), 1e-3), mu);
        assert_eq!(h.roots(&opts).unwrap().multiplicity_of(Root::Finite(alpha), 1e-3), 2 * mu);
    }
}

fn arb_poly(max_degree: usize) -> impl Strategy<Value = ExtPoly> {
    (0..=max_degree).prop_flat_map(|d| {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), d + 1)
            .prop_map(|v| ExtPoly::new(v.into_iter().map(|(a, b)| c(a, b)).collect()))
    })
}

proptest! {
    #[test]
    fn prop_convolution_identity(a in arb_poly(8), b in arb_poly(8), zr in -1.5f64..1.5, zi in -1.5f64..1.5) {
        let z = c(zr, zi);
        let lhs = a.multiply(&b).evaluate(z);
        let rhs = a.evaluate(z) * b.evaluate(z);
        let scale = a.norm() * b.norm() * (1.0 + z.norm()).powi(16);
        prop_assert!((lhs - rhs).norm() <= 1e-12 * scale.max(1.0));
    }

    #[test]
    fn prop_reflection_product_rule(a in arb_poly(6), b in arb_poly(6)) {
        let lhs = a.multiply(&b).conj_reflect();
        let rhs = a.conj_reflect().multiply(&b.conj_reflect());
        for (x, y) in lhs.coeffs().iter().zip(rhs.coeffs()) {
            prop_assert!((x - y).norm() < 1e-14);
        }
    }

    #[test]
    fn prop_reflection_involution(a in arb_poly(8)) {
        prop_assert_eq!(a.conj_reflect().conj_reflect(), a);
    }

    #[test]
    fn prop_gcd_degree_adds_planted_factor(seed in 0u64..10_000, da in 1usize..=3, dq in 1usize..=3) {
        let mut r = rng(seed);
        let a = random_poly(da, &mut r);
        let b = random_poly(da, &mut r);
        let q = random_poly(dq, &mut r);
        let base = gcd_degree(&a, &b, DEFAULT_RANK_TOL).unwrap();
        let planted = gcd_degree(&a.multiply(&q), &b.multiply(&q), DEFAULT_RANK_TOL).unwrap();
        prop_assert_eq!(planted, base + dq);
    }

    #[test]
    fn prop_from_roots_inverts_roots(seed in 0u64..10_000, d in 1usize..=10) {
        let mut r = rng(seed);
        // roots with separation at least 1e-3 on a jittered grid
        let roots: Vec<Root> = (0..d)
            .map(|k| Root::Finite(C64::from_polar(0.5 + 0.1 * k as f64, r.random_range(0.0..std::f64::consts::TAU))))
            .collect();
        let rm = RootMultiset { roots: roots.iter().map(|&z| (z, 1)).collect(), leading: c(1.3, -0.4) };
        let p = ExtPoly::from_roots(&rm, d).unwrap();
        let back = ExtPoly::from_roots(&p.roots(&RootOptions::default()).unwrap(), d).unwrap();
        prop_assert!(poly_rel_diff(&back, &p) < 1e-8);
    }
}
