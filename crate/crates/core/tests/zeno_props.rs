use proptest::prelude::*;
use zeno_core::correspondence::{
    generator_reproduces_transfer, hadamard_residual, modulus_identity_residual, phase_factors,
};
use zeno_core::scattering::ScatterParams;
use zeno_core::sweep::{Axis, Exec};
use zeno_core::zeno_scattering::{
    insensitive_chain, regime_classify, sensitive_chain, sensitive_limit, sensitive_limit_transfer, sigma3,
    spectral_regime, transmission_surface, ChainRegime, ZETA_C,
};

proptest! {
    #[test]
    fn sensitive_limit_is_pseudo_unitary(kd in 0.0f64..30.0, zeta in 0.0f64..2.0) {
        let w = sensitive_limit_transfer(kd, zeta);
        let s = sigma3();
        let lhs = w.adjoint() * s * w;
        prop_assert!(lhs.distance(&s) < 1e-9 * (1.0 + w.frobenius_norm().powi(2)));
    }

    #[test]
    fn sensitive_limit_conserves_flux(kd in 0.0f64..30.0, zeta in 0.0f64..2.0) {
        let r = sensitive_limit(kd, zeta).unwrap();
        prop_assert!((r.survival - 1.0).abs() < 1e-8, "survival {}", r.survival);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&r.transmission()));
    }

    #[test]
    fn insensitive_limit_transmits_fully(ka in 0.01f64..1.0, zeta in 0.0f64..3.0, n in 1u64..100) {
        let p = ScatterParams::dimensionless(ka, 0.0, zeta, n);
        prop_assume!(p.is_ok());
        let r = insensitive_chain(&p.unwrap(), ChainRegime::ContinuousLimit).unwrap();
        prop_assert!((r.transmission() - 1.0).abs() < 1e-14);
        prop_assert!(r.amplitudes.r_up.norm() < 1e-14);
    }

    #[test]
    fn regimes_agree_off_critical(zeta in 0.0f64..3.0) {
        prop_assume!((zeta - ZETA_C).abs() > 1e-3);
        prop_assert_eq!(Some(regime_classify(zeta).unwrap()), spectral_regime(zeta));
    }

    #[test]
    fn generator_reproduces_cells(ka in 0.01f64..3.0, zeta in 0.0f64..1.2) {
        prop_assume!((zeta - 0.5).abs() > 1e-3);
        let p = ScatterParams::dimensionless(ka, 0.0, zeta, 1).unwrap();
        prop_assert!(generator_reproduces_transfer(&p).unwrap() < 1e-11);
    }

    #[test]
    fn single_slab_identities(ka in 0.01f64..3.0, zeta in 0.0f64..0.49) {
        let p = ScatterParams::dimensionless(ka, 0.0, zeta, 1).unwrap();
        let ph = phase_factors(&p).unwrap();
        prop_assert!(ph.polar_residual() < 1e-10);
        prop_assert!(ph.modulus_residual() < 1e-10);
        prop_assert!(hadamard_residual(&p).unwrap() < 1e-10);
        prop_assert!(modulus_identity_residual(&p).unwrap() < 1e-10);
    }
}

#[test]
fn finite_sensitive_chain_approaches_limit() {
    let (kd, zeta) = (4.0, 0.3);
    let limit = sensitive_limit(kd, zeta).unwrap().amplitudes;
    let errs: Vec<f64> = [50u64, 200, 800]
        .iter()
        .map(|&n| {
            let ka = kd / n as f64;
            let p = ScatterParams::dimensionless(ka, 0.0, zeta, n).unwrap();
            sensitive_chain(&p, ChainRegime::FiniteN)
                .unwrap()
                .amplitudes
                .max_deviation(&limit)
        })
        .collect();
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
    assert!(errs[2] < 1e-2, "{errs:?}");
}

#[test]
fn parallel_surface_matches_sequential() {
    let kd = Axis::linear(0.0, 30.0, 37).unwrap();
    let zeta = Axis::linear(0.0, 1.2, 23).unwrap();
    let seq = transmission_surface(Exec::Sequential, &kd, &zeta).unwrap();
    let par = transmission_surface(Exec::Parallel, &kd, &zeta).unwrap();
    assert_eq!(seq, par);
    assert_eq!(seq.len(), 37 * 23);
    assert!(seq.iter().all(|row| (0.0..=1.0 + 1e-12).contains(&row[2])));
}
