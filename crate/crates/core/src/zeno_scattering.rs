//! Scattering chains with a projective spin measurement in every gap.
//!
//! Two schemes are modelled. The direction-insensitive one removes every
//! spin-down amplitude and reduces the cell to a 2×2 matrix `M₁`. The
//! direction-sensitive one only removes right-moving spin-down amplitudes,
//! leaving a 3×3 matrix `M₂` on `(R↑, L↑, L↓)` with flux metric
//! `Σ₃ = diag(1, −1, −1)`.
//!
//! Chains are solved through the first column of the inverse lattice matrix,
//! `u = W⁻¹e₀`, so that `t↑ = e^{−ikD}/u₀` and `r = u₁/u₀, u₂/u₀`. This never
//! subtracts large numbers even when the lattice matrix grows exponentially.

use crate::error::{Result, ZenoError};
use crate::linalg::{inverse, mat_exp, mat_power_scaled, ComplexMatrix, C64, I, ONE, ZERO};
use crate::scattering::{gap_phase, solve_no_measurement, transfer_matrix, ScatterAmplitudes, ScatterParams};
use crate::sweep::{try_grid_map, Axis, Exec};

/// `ζ_c = 4√3/9`, where `Z₂` turns defective.
pub const ZETA_C: f64 = 0.769_800_358_919_500_9;

/// `|M̄₂₂|` at or below which the insensitive elimination is refused.
pub const DEGENERATE_CELL_TOL: f64 = 1e-12;

/// Width of the band around `ζ_c` reported as critical.
pub const CRITICAL_BAND: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Insensitive,
    Sensitive,
}

/// How the chain was evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    FiniteN(u64),
    ContinuousLimit,
}

/// Requested evaluation for a chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainRegime {
    /// `N` cells of the given parameters.
    FiniteN,
    /// `a → 0`, `Nb → 0` at fixed `D = N·a`, from the closed-form limit.
    ContinuousLimit,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasuredChainResult {
    /// Channels the scheme does not define are exactly zero.
    pub amplitudes: ScatterAmplitudes,
    /// `|t↑|²` (insensitive) or `|t↑|² + |r↑|² + |r↓|²` (sensitive).
    pub survival: f64,
    pub scheme: Scheme,
    pub regime: Regime,
}

impl MeasuredChainResult {
    pub fn transmission(&self) -> f64 {
        self.amplitudes.t_up.norm_sqr()
    }
}

/// The limit generator `Z₂(ζ)` of the direction-sensitive chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZTwoMatrix {
    pub zeta: f64,
}

impl ZTwoMatrix {
    pub fn new(zeta: f64) -> Self {
        Self { zeta }
    }

    pub fn matrix(&self) -> ComplexMatrix {
        let z = self.zeta;
        ComplexMatrix::from_real_rows(&[&[4.0 / 3.0, 0.0, -z], &[0.0, -2.0 / 3.0, z], &[z, z, -2.0 / 3.0]])
            .expect("3x3")
    }

    /// `G = Z₂ − 2/3`.
    pub fn shifted(&self) -> ComplexMatrix {
        self.matrix() - ComplexMatrix::identity(3) * (2.0 / 3.0)
    }
}

pub fn sigma3() -> ComplexMatrix {
    ComplexMatrix::diag(&[ONE, -ONE, -ONE])
}

/// `e^{ikbΣ₃}`.
pub fn sigma3_phase(kb: f64) -> ComplexMatrix {
    let (p, m) = (C64::from_polar(1.0, kb), C64::from_polar(1.0, -kb));
    ComplexMatrix::diag(&[p, m, m])
}

/// `(M̄, ΔM) = ((M₊ + M₋)/2, (M₊ − M₋)/2)`.
pub fn mean_and_delta(p: &ScatterParams) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let (mp, mm) = transfer_matrix(p)?;
    Ok(((mp + mm) * 0.5, (mp - mm) * 0.5))
}

/// `(M₁)ᵢⱼ = M̄ᵢⱼ − ΔMᵢ₂ΔM₂ⱼ/M̄₂₂`.
pub fn insensitive_cell_matrix(p: &ScatterParams) -> Result<ComplexMatrix> {
    let (mean, delta) = mean_and_delta(p)?;
    let m22 = mean[(1, 1)];
    if m22.norm() <= DEGENERATE_CELL_TOL {
        return Err(ZenoError::DegenerateCell { value: m22.norm() });
    }
    Ok(ComplexMatrix::from_fn(2, |i, j| {
        mean[(i, j)] - delta[(i, 1)] * delta[(1, j)] / m22
    }))
}

/// `M₂` on `(R↑, L↑, L↓)`.
pub fn sensitive_cell_matrix(p: &ScatterParams) -> Result<ComplexMatrix> {
    let (mb, dm) = mean_and_delta(p)?;
    ComplexMatrix::from_rows(&[
        &[mb[(0, 0)], mb[(0, 1)], dm[(0, 1)]],
        &[mb[(1, 0)], mb[(1, 1)], dm[(1, 1)]],
        &[dm[(1, 0)], dm[(1, 1)], mb[(1, 1)]],
    ])
}

/// First column of `W⁻¹` for `W = (phase·cell)^N`, as `(u, L)` with the
/// true column `e^L·u`.
fn inverse_lattice_column(cell: &ComplexMatrix, phase: &ComplexMatrix, n: u64) -> Result<(Vec<C64>, f64)> {
    let step = inverse(cell)? * inverse(phase)?;
    let (power, log_scale) = mat_power_scaled(&step, n);
    Ok((power.column(0), log_scale))
}

/// `e^{−ikD}/u₀` for the column `e^L·u`.
fn transmitted(kd: f64, u0: C64, log_scale: f64) -> C64 {
    C64::from_polar((-log_scale).exp(), -kd) / u0
}

fn check_column(u: &[C64]) -> Result<()> {
    if u[0].norm() == 0.0 || !u.iter().all(|z| z.is_finite()) {
        return Err(ZenoError::SingularMatrix {
            det: u[0].norm(),
            threshold: 0.0,
        });
    }
    Ok(())
}

/// Direction-insensitive chain.
pub fn insensitive_chain(p: &ScatterParams, regime: ChainRegime) -> Result<MeasuredChainResult> {
    let kd = p.kd();
    let ((u, log_scale), reg) = match regime {
        ChainRegime::FiniteN => {
            let cell = insensitive_cell_matrix(p)?;
            (
                inverse_lattice_column(&cell, &gap_phase(p.kb()), p.n)?,
                Regime::FiniteN(p.n),
            )
        }
        // the lattice tends to e^{ikDτ3}
        ChainRegime::ContinuousLimit => ((vec![C64::from_polar(1.0, -kd), ZERO], 0.0), Regime::ContinuousLimit),
    };
    check_column(&u)?;
    let t_up = transmitted(kd, u[0], log_scale);
    let amplitudes = ScatterAmplitudes {
        t_up,
        t_down: ZERO,
        r_up: u[1] / u[0],
        r_down: ZERO,
    };
    Ok(MeasuredChainResult {
        amplitudes,
        survival: t_up.norm_sqr(),
        scheme: Scheme::Insensitive,
        regime: reg,
    })
}

/// `W⁻¹ = e^{ikD/3}·e^{−ikD·Z₂}`, the inverse of the continuous-limit lattice.
pub fn sensitive_limit_inverse(kd: f64, zeta: f64) -> ComplexMatrix {
    mat_exp(&ZTwoMatrix::new(zeta).matrix(), C64::new(0.0, -kd)) * C64::from_polar(1.0, kd / 3.0)
}

/// `e^{−ikD/3}·e^{ikD·Z₂}`, the continuous-limit lattice itself.
pub fn sensitive_limit_transfer(kd: f64, zeta: f64) -> ComplexMatrix {
    mat_exp(&ZTwoMatrix::new(zeta).matrix(), C64::new(0.0, kd)) * C64::from_polar(1.0, -kd / 3.0)
}

fn sensitive_result(u: Vec<C64>, log_scale: f64, kd: f64, regime: Regime) -> Result<MeasuredChainResult> {
    check_column(&u)?;
    let amplitudes = ScatterAmplitudes {
        t_up: transmitted(kd, u[0], log_scale),
        t_down: ZERO,
        r_up: u[1] / u[0],
        r_down: u[2] / u[0],
    };
    let survival = amplitudes.t_up.norm_sqr() + amplitudes.r_up.norm_sqr() + amplitudes.r_down.norm_sqr();
    Ok(MeasuredChainResult {
        amplitudes,
        survival,
        scheme: Scheme::Sensitive,
        regime,
    })
}

/// Continuous-limit sensitive chain from `(kD, ζ)` alone.
pub fn sensitive_limit(kd: f64, zeta: f64) -> Result<MeasuredChainResult> {
    if !(kd.is_finite() && kd >= 0.0 && zeta.is_finite() && zeta >= 0.0) {
        return Err(ZenoError::InvalidParameter(format!(
            "need kD >= 0 and zeta >= 0, got kD = {kd}, zeta = {zeta}"
        )));
    }
    sensitive_result(
        sensitive_limit_inverse(kd, zeta).column(0),
        0.0,
        kd,
        Regime::ContinuousLimit,
    )
}

/// Direction-sensitive chain.
pub fn sensitive_chain(p: &ScatterParams, regime: ChainRegime) -> Result<MeasuredChainResult> {
    match regime {
        ChainRegime::FiniteN => {
            let cell = sensitive_cell_matrix(p)?;
            let (u, log_scale) = inverse_lattice_column(&cell, &sigma3_phase(p.kb()), p.n)?;
            sensitive_result(u, log_scale, p.kd(), Regime::FiniteN(p.n))
        }
        ChainRegime::ContinuousLimit => sensitive_limit(p.kd(), p.zeta()),
    }
}

/// `|t↑|²` of the continuous sensitive limit.
pub fn sensitive_transmission(kd: f64, zeta: f64) -> Result<f64> {
    Ok(sensitive_limit(kd, zeta)?.transmission())
}

/// `e^{−ikDG}` at `ζ = ζ_c` from `G²(G + 2) = 0`.
pub fn critical_exponential_closed_form(kd: f64) -> ComplexMatrix {
    let g = ZTwoMatrix::new(ZETA_C).shifted();
    let id = ComplexMatrix::identity(3);
    let ikd = I * kd;
    let quad = ((2.0 * ikd).exp() - ONE - 2.0 * ikd) / 4.0;
    id - g * ikd + g * g * quad
}

/// Qualitative kD-dependence of the sensitive-limit transmission.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecayRegime {
    Oscillatory,
    CriticalDecay,
    ExponentialDecay,
}

pub fn regime_classify(zeta: f64) -> Result<DecayRegime> {
    if !(zeta >= 0.0 && zeta.is_finite()) {
        return Err(ZenoError::InvalidParameter(format!("zeta must be >= 0, got {zeta}")));
    }
    Ok(if (zeta - ZETA_C).abs() < CRITICAL_BAND {
        DecayRegime::CriticalDecay
    } else if zeta < ZETA_C {
        DecayRegime::Oscillatory
    } else {
        DecayRegime::ExponentialDecay
    })
}

/// Regime read off the computed spectrum of `Z₂`: three real eigenvalues
/// oscillate, a complex pair decays. `None` when the spectrum is too close
/// to the defective point to decide.
pub fn spectral_regime(zeta: f64) -> Option<DecayRegime> {
    let e = crate::linalg::eigen(&ZTwoMatrix::new(zeta).matrix());
    let max_im = e.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
    if e.defective {
        return None;
    }
    Some(if max_im < 1e-9 {
        DecayRegime::Oscillatory
    } else {
        DecayRegime::ExponentialDecay
    })
}

/// One row of the measured-versus-unmeasured comparison at total
/// transmission.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fig6Row {
    pub n_minus: u32,
    pub n_plus: u32,
    pub zeta: f64,
    pub kd: f64,
    /// `|t↓|²` without measurements.
    pub t_down_no_measurement: f64,
    /// `|t↑|²` in the insensitive continuous limit.
    pub t_up_insensitive: f64,
    /// `|t↑|²` in the sensitive continuous limit.
    pub t_up_sensitive: f64,
}

/// Row for `(n₋, n₊)` with `m = 1`, `D = 1`.
pub fn fig6_row(n_minus: u32, n_plus: u32) -> Result<Fig6Row> {
    let p = ScatterParams::total_transmission(n_minus, n_plus, 1.0, 1.0)?;
    Ok(Fig6Row {
        n_minus,
        n_plus,
        zeta: p.zeta(),
        kd: p.kd(),
        t_down_no_measurement: solve_no_measurement(&p)?.t_down.norm_sqr(),
        t_up_insensitive: insensitive_chain(&p, ChainRegime::ContinuousLimit)?.transmission(),
        t_up_sensitive: sensitive_chain(&p, ChainRegime::ContinuousLimit)?.transmission(),
    })
}

/// Rows for `n₋ = n`, `n₊ = n + offset` over `ns` (offset must be odd).
pub fn zeno_vs_no_measurement_report(exec: Exec, ns: &[u32], offset: u32) -> Result<Vec<Fig6Row>> {
    crate::sweep::map_indexed(exec, ns, |_, &n| fig6_row(n, n + offset))
        .into_iter()
        .collect()
}

/// `(kD, ζ, T↑)` over the grid, `kD` outermost.
pub fn transmission_surface(exec: Exec, kd: &Axis, zeta: &Axis) -> Result<Vec<[f64; 3]>> {
    try_grid_map(exec, kd, zeta, |x, z| Ok([x, z, sensitive_transmission(x, z)?]))
}

/// `(B₁, kD, T↑)` with `B₁ = √(mμB)·D`, so `ζ = (B₁/kD)²`; `B₁` outermost.
pub fn transmission_surface_b1(exec: Exec, b1: &Axis, kd: &Axis) -> Result<Vec<[f64; 3]>> {
    if kd.min <= 0.0 {
        return Err(ZenoError::InvalidParameter("kD axis must start above 0".into()));
    }
    try_grid_map(exec, b1, kd, |b, x| {
        let zeta = (b / x).powi(2);
        Ok([b, x, sensitive_transmission(x, zeta)?])
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(ka: f64, kb: f64, zeta: f64, n: u64) -> ScatterParams {
        ScatterParams::dimensionless(ka, kb, zeta, n).unwrap()
    }

    #[test]
    fn zeta_c_value() {
        assert!((ZETA_C - 4.0 * 3f64.sqrt() / 9.0).abs() < 1e-16);
    }

    #[test]
    fn ztwo_structure() {
        let z = ZTwoMatrix::new(0.37).matrix();
        let s = sigma3();
        assert_eq!(s * z * s, z.transpose());
        assert!(z.trace().norm() < 1e-15);
    }

    #[test]
    fn no_field_insensitive_cell_is_free() {
        let p = params(0.8, 0.3, 0.0, 4);
        let m1 = insensitive_cell_matrix(&p).unwrap();
        assert!(m1.distance(&gap_phase(0.8)) < 1e-15);
        let r = insensitive_chain(&p, ChainRegime::FiniteN).unwrap();
        assert!((r.survival - 1.0).abs() < 1e-14);
    }

    #[test]
    fn no_field_sensitive_cell_is_block_diagonal() {
        let p = params(0.8, 0.3, 0.0, 1);
        let m2 = sensitive_cell_matrix(&p).unwrap();
        let e = C64::from_polar(1.0, 0.8);
        let expected = ComplexMatrix::diag(&[e, e.conj(), e.conj()]);
        assert!(m2.distance(&expected) < 1e-15);
    }

    #[test]
    fn small_a_expansions() {
        let zeta = 0.3;
        let ka = 1e-4;
        let p = params(ka, 0.0, zeta, 1);
        let (mean, delta) = mean_and_delta(&p).unwrap();
        let [_, t2, t3] = crate::linalg::pauli();
        let mean_lin = ComplexMatrix::identity(2) + t3 * (I * ka);
        let delta_lin = (t2 - t3 * I) * (zeta * ka);
        assert!(mean.distance(&mean_lin) < 10.0 * ka * ka);
        assert!(delta.distance(&delta_lin) < 10.0 * ka * ka);

        let m2 = sensitive_cell_matrix(&p).unwrap();
        let lin = ComplexMatrix::identity(3) * (ONE - I * ka / 3.0) + ZTwoMatrix::new(zeta).matrix() * (I * ka);
        assert!(m2.distance(&lin) < 10.0 * ka * ka);
    }

    #[test]
    fn insensitive_limit_survives() {
        for &(kd, zeta) in &[(3.0, 0.3), (17.0, 2.0), (0.5, 0.9)] {
            let p = params(kd / 10.0, 0.0, zeta, 10);
            let r = insensitive_chain(&p, ChainRegime::ContinuousLimit).unwrap();
            assert!((r.survival - 1.0).abs() < 1e-14);
            assert_eq!(r.amplitudes.t_down, ZERO);
            assert_eq!(r.amplitudes.r_down, ZERO);
        }
    }

    #[test]
    fn sensitive_limit_free_at_zero_zeta() {
        let r = sensitive_limit(7.3, 0.0).unwrap();
        assert!((r.amplitudes.t_up - ONE).norm() < 1e-13);
        assert!(r.amplitudes.r_up.norm() + r.amplitudes.r_down.norm() < 1e-13);
    }

    #[test]
    fn sensitive_limit_conserves() {
        for &(kd, zeta) in &[(1.0, 0.3), (12.0, 0.7), (25.0, ZETA_C), (8.0, 1.1)] {
            let r = sensitive_limit(kd, zeta).unwrap();
            assert!((r.survival - 1.0).abs() < 1e-9, "kD {kd} zeta {zeta}: {}", r.survival);
        }
    }

    #[test]
    fn limit_inverse_is_inverse() {
        let w = sensitive_limit_transfer(4.0, 0.5);
        let winv = sensitive_limit_inverse(4.0, 0.5);
        assert!((w * winv).distance(&ComplexMatrix::identity(3)) < 1e-12);
        let s = sigma3();
        assert!((w.adjoint() * s * w).distance(&s) < 1e-12);
    }

    #[test]
    fn finite_sensitive_approaches_limit() {
        let (kd, zeta) = (5.0, 0.3);
        let limit = sensitive_limit(kd, zeta).unwrap().transmission();
        let err = |n: u64| {
            let p = params(kd / n as f64, 0.0, zeta, n);
            (sensitive_chain(&p, ChainRegime::FiniteN).unwrap().transmission() - limit).abs()
        };
        let (e1, e2) = (err(200), err(2000));
        assert!(e2 < e1 && e2 < 1e-2, "{e1} {e2}");
    }

    #[test]
    fn closed_form_at_critical_point() {
        let g = ZTwoMatrix::new(ZETA_C).shifted();
        assert!((g * g * (g + ComplexMatrix::identity(3) * 2.0)).max_abs() < 1e-12);
        for kd in [1.0, 5.0] {
            let robust = mat_exp(&g, C64::new(0.0, -kd));
            assert!(robust.distance(&critical_exponential_closed_form(kd)) < 1e-8);
        }
    }

    #[test]
    fn regimes() {
        assert_eq!(regime_classify(0.3).unwrap(), DecayRegime::Oscillatory);
        assert_eq!(regime_classify(ZETA_C).unwrap(), DecayRegime::CriticalDecay);
        assert_eq!(regime_classify(1.0).unwrap(), DecayRegime::ExponentialDecay);
        assert!(regime_classify(-0.1).is_err());
        assert_eq!(spectral_regime(0.3), Some(DecayRegime::Oscillatory));
        assert_eq!(spectral_regime(1.0), Some(DecayRegime::ExponentialDecay));
    }

    #[test]
    fn fig6_first_row() {
        let row = fig6_row(1, 10).unwrap();
        assert!((row.t_down_no_measurement - 1.0).abs() < 1e-9);
        assert!((row.t_up_insensitive - 1.0).abs() < 1e-12);
        assert!(row.t_up_sensitive < 1.0);
    }

    #[test]
    fn surfaces_have_grid_shape() {
        let kd = Axis::linear(0.0, 10.0, 5).unwrap();
        let z = Axis::linear(0.0, 1.2, 4).unwrap();
        let s = transmission_surface(Exec::Sequential, &kd, &z).unwrap();
        assert_eq!(s.len(), 20);
        assert_eq!(s[1][0], 0.0);
        assert!(s.iter().all(|r| (0.0..=1.0 + 1e-12).contains(&r[2])));
        assert!(transmission_surface_b1(Exec::Sequential, &z, &kd).is_err());
    }

    #[test]
    fn deep_gap_chains_underflow_instead_of_failing() {
        let p = ScatterParams::dimensionless(0.5, 0.5, 2.0, 1000).unwrap();
        let ins = insensitive_chain(&p, ChainRegime::FiniteN).unwrap();
        assert!(ins.transmission() < 1e-300);
        assert!(ins.amplitudes.r_up.norm() <= 1.0 + 1e-9);
        let sen = sensitive_chain(&p, ChainRegime::FiniteN).unwrap();
        assert!(sen.transmission().is_finite() && sen.survival <= 1.0 + 1e-9);
    }
}
