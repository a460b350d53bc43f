use std::f64::consts::PI;

use masm_core::discretization::{build_quadrature, QuadratureKind};

fn cases() -> Vec<(QuadratureKind, usize, usize)> {
    vec![
        (QuadratureKind::LevelSymmetric, 2, 8),
        (QuadratureKind::LevelSymmetric, 4, 24),
        (QuadratureKind::LevelSymmetric, 6, 48),
        (QuadratureKind::LevelSymmetric, 8, 80),
        (QuadratureKind::GaussChebyshev, 8, 8),
        (QuadratureKind::GaussChebyshev, 16, 16),
        (QuadratureKind::GaussChebyshev, 32, 32),
    ]
}

#[test]
fn weights_sum_to_four_pi() {
    for (kind, order, _) in cases() {
        let q = build_quadrature(kind, order).unwrap();
        let s: f64 = q.weights.iter().sum();
        assert!((s - 4.0 * PI).abs() <= 1e-12, "{kind} {order}: {s}");
        assert!(q.weights.iter().all(|w| *w > 0.0));
    }
}

#[test]
fn directions_are_unit_vectors() {
    for (kind, order, _) in cases() {
        for d in build_quadrature(kind, order).unwrap().directions {
            let n = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
            assert!((n - 1.0).abs() <= 1e-14, "{kind} {order}: {n}");
        }
    }
}

#[test]
fn first_moment_vanishes() {
    for (kind, order, _) in cases() {
        let m = build_quadrature(kind, order).unwrap().first_moment();
        assert!(m.iter().all(|c| c.abs() <= 1e-12), "{kind} {order}: {m:?}");
    }
}

#[test]
fn direction_counts() {
    for (kind, order, count) in cases() {
        assert_eq!(build_quadrature(kind, order).unwrap().len(), count);
    }
}
