//! Bare spin-1/2 in a transverse field, with and without repeated
//! spin-up projections.
//!
//! The field couples as `H = (ω/2)·σ1`; the spin basis is `{|↑⟩, |↓⟩}`.

use crate::error::{Result, ZenoError};
use crate::linalg::{mat_exp, pauli, ComplexMatrix, C64, I, ONE, ZERO};

const DENSITY_TOL: f64 = 1e-12;

/// 2x2 spin density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinDensity(ComplexMatrix);

impl SpinDensity {
    /// Validates Hermiticity, unit trace and positivity to `1e-12`.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if m.dim() != 2 {
            return Err(ZenoError::InvalidParameter(format!(
                "spin density must be 2x2, got {}x{}",
                m.dim(),
                m.dim()
            )));
        }
        if m.distance(&m.adjoint()) > DENSITY_TOL {
            return Err(ZenoError::InvalidParameter("density matrix is not Hermitian".into()));
        }
        if (m.trace() - ONE).norm() > DENSITY_TOL {
            return Err(ZenoError::InvalidParameter(format!(
                "density matrix trace is {}, expected 1",
                m.trace()
            )));
        }
        // 2x2 Hermitian: eigenvalues are tr/2 ± sqrt((a-d)²/4 + |b|²)
        let half_gap = (((m[(0, 0)] - m[(1, 1)]).re / 2.0).powi(2) + m[(0, 1)].norm_sqr()).sqrt();
        if 0.5 - half_gap < -DENSITY_TOL {
            return Err(ZenoError::InvalidParameter(
                "density matrix has a negative eigenvalue".into(),
            ));
        }
        Ok(Self(m))
    }

    /// `|↑⟩⟨↑|`
    pub fn up() -> Self {
        Self(ComplexMatrix::diag(&[ONE, ZERO]))
    }

    /// `|↓⟩⟨↓|`
    pub fn down() -> Self {
        Self(ComplexMatrix::diag(&[ZERO, ONE]))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn prob_up(&self) -> f64 {
        self.0[(0, 0)].re
    }

    pub fn prob_down(&self) -> f64 {
        self.0[(1, 1)].re
    }
}

/// Precession frequency, total time and number of measurements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdealParams {
    pub omega: f64,
    pub t: f64,
    pub n: u64,
}

impl IdealParams {
    pub fn new(omega: f64, t: f64, n: u64) -> Result<Self> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(ZenoError::InvalidParameter(format!("omega must be > 0, got {omega}")));
        }
        if !(t > 0.0 && t.is_finite()) {
            return Err(ZenoError::InvalidParameter(format!("T must be > 0, got {t}")));
        }
        if n == 0 {
            return Err(ZenoError::InvalidParameter("N must be >= 1".into()));
        }
        Ok(Self { omega, t, n })
    }

    /// Parameters meeting the flip condition `ωT = (2m+1)π` with `T = 1`.
    pub fn matching(m: u32, n: u64) -> Result<Self> {
        Self::new((2 * m + 1) as f64 * std::f64::consts::PI, 1.0, n)
    }

    pub fn omega_t(&self) -> f64 {
        self.omega * self.t
    }
}

/// `exp(-iHt)` for `H = (ω/2)σ1`.
pub fn free_propagator(omega: f64, t: f64) -> ComplexMatrix {
    let [s1, _, _] = pauli();
    mat_exp(&s1, -I * (omega * t / 2.0))
}

/// Free precession `ρ(T) = e^{-iHT} ρ0 e^{iHT}` over the whole time `T`.
pub fn evolve_free(rho0: &SpinDensity, p: &IdealParams) -> SpinDensity {
    let u = free_propagator(p.omega, p.t);
    let rho = u * rho0.0 * u.adjoint();
    // restore exact Hermiticity lost to rounding
    SpinDensity((rho + rho.adjoint()).scale(C64::new(0.5, 0.0)))
}

/// `cos(πx)` with exact zeros at half-integer `x`.
fn cos_pi(x: f64) -> f64 {
    let r = x.rem_euclid(2.0);
    if r == 0.5 || r == 1.5 {
        0.0
    } else {
        (std::f64::consts::PI * r).cos()
    }
}

/// `(cos² θ)^N` evaluated through `ln(1 - sin² θ)` to keep large-`N` tails accurate.
fn pow_cos_sq(cos: f64, n: u64) -> f64 {
    if cos == 0.0 {
        return 0.0;
    }
    let sin_sq = 1.0 - cos * cos;
    (n as f64 * (-sin_sq).ln_1p()).exp()
}

/// Survival probability `(cos²(ωT/2N))^N` after `N` up-projections.
pub fn survival_after_n(p: &IdealParams) -> f64 {
    let phase = p.omega_t() / (2.0 * p.n as f64);
    pow_cos_sq(cos_pi(phase / std::f64::consts::PI), p.n)
}

/// Survival `(cos²(π/2N))^N` under the matching condition `ωT = π`.
pub fn survival_matching(n: u64) -> f64 {
    assert!(n >= 1, "N must be >= 1");
    pow_cos_sq(cos_pi(0.5 / n as f64), n)
}

/// `ρ^(N)(T) = V_N ρ0 V_N†` with `V_N = (E U(T/N) E)^N`, `E = |↑⟩⟨↑|`, left
/// unnormalised so its trace is the survival probability.
pub fn measured_density(rho0: &SpinDensity, p: &IdealParams) -> ComplexMatrix {
    let e = SpinDensity::up().0;
    let step = e * free_propagator(p.omega, p.t / p.n as f64) * e;
    let v = crate::linalg::mat_power(&step, p.n);
    v * rho0.0 * v.adjoint()
}
