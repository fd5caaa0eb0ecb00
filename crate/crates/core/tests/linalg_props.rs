use proptest::prelude::*;
use zeno_core::linalg::{
    eigen, inverse, mat_exp, mat_exp_eigen, mat_exp_series, mat_mul, mat_power, mat_power_scaled, solve_linear,
    vector_norm, ComplexMatrix, C64,
};

fn entry() -> impl Strategy<Value = C64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| C64::new(re, im))
}

fn matrix(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec(entry(), dim * dim).prop_map(move |v| ComplexMatrix::from_fn(dim, |i, j| v[i * dim + j]))
}

fn any_matrix() -> impl Strategy<Value = ComplexMatrix> {
    (2usize..=4).prop_flat_map(matrix)
}

/// Random 2x2 with determinant exactly rescaled to one.
fn unimodular() -> impl Strategy<Value = ComplexMatrix> {
    matrix(2).prop_filter_map("near-singular", |m| {
        let d = m.det();
        if d.norm() < 0.05 {
            return None;
        }
        let s = d.sqrt().inv();
        Some(m * s)
    })
}

proptest! {
    #[test]
    fn exp_det_is_exp_trace(a in any_matrix(), s in -1.5f64..1.5) {
        let scale = C64::new(0.0, s);
        let e = mat_exp(&a, scale);
        let expected = (a.trace() * scale).exp();
        prop_assert!((e.det() - expected).norm() < 1e-9 * (1.0 + expected.norm()));
    }

    #[test]
    fn exp_inverse_pair(a in any_matrix(), s in -1.5f64..1.5) {
        let scale = C64::new(s, 0.3);
        let prod = mat_exp(&a, scale) * mat_exp(&a, -scale);
        prop_assert!(prod.distance(&ComplexMatrix::identity(a.dim())) < 1e-9);
    }

    #[test]
    fn exp_routes_agree(a in any_matrix(), s in -2.0f64..2.0) {
        let scale = C64::new(0.0, s);
        if let Some(e) = mat_exp_eigen(&a, scale) {
            let t = mat_exp_series(&a, scale);
            prop_assert!(e.distance(&t) < 1e-9 * (1.0 + t.frobenius_norm()));
        }
    }

    #[test]
    fn power_composes(a in any_matrix(), m in 0u64..12, n in 0u64..12) {
        let lhs = mat_power(&a, m + n);
        let rhs = mat_mul(&mat_power(&a, m), &mat_power(&a, n)).unwrap();
        prop_assert!(lhs.distance(&rhs) < 1e-9 * (1.0 + lhs.frobenius_norm()));
    }

    #[test]
    fn scaled_power_matches_direct(a in any_matrix(), n in 0u64..40) {
        let direct = mat_power(&a, n);
        let (m, log) = mat_power_scaled(&a, n);
        let back = m * C64::new(log.exp(), 0.0);
        prop_assert!(back.distance(&direct) < 1e-10 * (1.0 + direct.frobenius_norm()));
    }

    #[test]
    fn eigen_reconstructs(a in any_matrix()) {
        let e = eigen(&a);
        if !e.defective {
            let v = e.vectors;
            let back = v * ComplexMatrix::diag(&e.values) * inverse(&v).unwrap();
            prop_assert!(back.distance(&a) < 1e-8 * (1.0 + a.frobenius_norm()));
            prop_assert!(e.residual(&a) < 1e-10);
        }
        let tr: C64 = e.values.iter().sum();
        prop_assert!((tr - a.trace()).norm() < 1e-6);
    }

    #[test]
    fn solve_has_small_residual(a in any_matrix(), seed in prop::collection::vec(entry(), 4)) {
        let b: Vec<C64> = seed[..a.dim()].to_vec();
        if let Ok(x) = solve_linear(&a, &b) {
            let r: Vec<C64> = a.apply(&x).iter().zip(&b).map(|(p, q)| p - q).collect();
            prop_assert!(vector_norm(&r) < 1e-9 * (1.0 + a.frobenius_norm() * vector_norm(&x)));
        }
    }

    #[test]
    fn chebyshev_identity(w in unimodular(), n in 1u64..=50) {
        // W^N = [N]W − [N−1] for det W = 1, with [N] = U_{N−1}(tr W / 2)
        let h = w.trace() / 2.0;
        let (mut u_prev, mut u) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0));
        for _ in 1..n {
            let next = h * u * 2.0 - u_prev;
            u_prev = u;
            u = next;
        }
        let direct = mat_power(&w, n);
        let bracket = w * u - ComplexMatrix::identity(2) * u_prev;
        prop_assert!(direct.distance(&bracket) < 1e-9 * (1.0 + direct.frobenius_norm()));
    }
}

#[test]
fn singular_matrix_is_rejected() {
    let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]).unwrap();
    assert!(inverse(&a).is_err());
    assert!(solve_linear(&a, &[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]).is_err());
}

#[test]
fn scaled_power_survives_overflow() {
    let a = ComplexMatrix::diag(&[C64::new(1e3, 0.0), C64::new(0.5, 0.0)]);
    assert!(!mat_power(&a, 200).max_abs().is_finite());
    let (m, log) = mat_power_scaled(&a, 200);
    assert!((log - 200.0 * 1e3f64.ln()).abs() < 1e-9);
    assert!((m[(0, 0)] - C64::new(1.0, 0.0)).norm() < 1e-12);
    assert_eq!(m[(1, 1)], C64::new(0.0, 0.0));
}

#[test]
fn mismatched_product_is_rejected() {
    let a = ComplexMatrix::identity(2);
    let b = ComplexMatrix::identity(3);
    assert!(mat_mul(&a, &b).is_err());
}
