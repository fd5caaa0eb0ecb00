//! Cross-checks between the stationary slab problem and the four-state
//! dynamical model: phase-factor identities, small-width amplitude matching
//! and the generator whose exponential is the slab transfer matrix.

use crate::abstract_model::{amplitudes_from_propagator, AbstractAmplitudes, AbstractParams};
use crate::error::{Result, ZenoError};
use crate::linalg::{mat_exp, pauli, ComplexMatrix, C64, I, ONE};
use crate::scattering::{transfer_matrix, Channel, ScatterParams};

/// The four unimodular ratios built from a single slab, with their phases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseData {
    /// `(1 + (M₊)₂₁)/(M₊)₂₂`
    pub m_plus_plus: C64,
    /// `(1 − (M₊)₂₁)/(M₊)₂₂`
    pub m_minus_plus: C64,
    /// `(1 + (M₋)₂₁)/(M₋)₂₂`
    pub m_plus_minus: C64,
    /// `(1 − (M₋)₂₁)/(M₋)₂₂`
    pub m_minus_minus: C64,
    pub xi_plus: f64,
    pub xi_minus: f64,
    pub phi_plus: f64,
    pub phi_minus: f64,
}

impl PhaseData {
    /// Largest `|ℳ − e^{i(±ξ+φ)}|` over the four ratios.
    pub fn polar_residual(&self) -> f64 {
        let e = |x: f64| C64::from_polar(1.0, x);
        [
            (self.m_plus_plus - e(self.xi_plus + self.phi_plus)).norm(),
            (self.m_minus_plus - e(-self.xi_plus + self.phi_plus)).norm(),
            (self.m_plus_minus - e(self.xi_minus + self.phi_minus)).norm(),
            (self.m_minus_minus - e(-self.xi_minus + self.phi_minus)).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// Largest `| |ℳ| − 1 |`.
    pub fn modulus_residual(&self) -> f64 {
        [
            self.m_plus_plus,
            self.m_minus_plus,
            self.m_plus_minus,
            self.m_minus_minus,
        ]
        .iter()
        .map(|z| (z.norm() - 1.0).abs())
        .fold(0.0, f64::max)
    }
}

fn require_single_propagating(p: &ScatterParams) -> Result<()> {
    if p.n != 1 {
        return Err(ZenoError::InvalidParameter(format!(
            "single-slab operation needs N = 1, got {}",
            p.n
        )));
    }
    if p.zeta() >= 0.5 {
        return Err(ZenoError::InvalidParameter(format!(
            "phase factors need zeta < 1/2, got {}",
            p.zeta()
        )));
    }
    Ok(())
}

/// `ℳ` ratios and the angles `ξ± = atan(sinh η± sin k±a)`,
/// `φ± = arg(cos k±a + i cosh η± sin k±a)`.
///
/// `φ±` uses the two-argument arctangent so it lands in the quadrant of
/// `1/(M±)₂₂` when `cos k±a < 0`.
pub fn phase_factors(p: &ScatterParams) -> Result<PhaseData> {
    require_single_propagating(p)?;
    let (mp, mm) = transfer_matrix(p)?;
    let ratio = |m: &ComplexMatrix, s: f64| (ONE + m[(1, 0)] * s) / m[(1, 1)];
    let angles = |ch: Channel| {
        let r = p.ratio(ch).re;
        let (cosh, sinh) = ((r + 1.0 / r) / 2.0, (r - 1.0 / r) / 2.0);
        let ka = p.channel_wavenumber(ch).re * p.a;
        ((sinh * ka.sin()).atan(), (cosh * ka.sin()).atan2(ka.cos()))
    };
    let (xi_plus, phi_plus) = angles(Channel::Plus);
    let (xi_minus, phi_minus) = angles(Channel::Minus);
    Ok(PhaseData {
        m_plus_plus: ratio(&mp, 1.0),
        m_minus_plus: ratio(&mp, -1.0),
        m_plus_minus: ratio(&mm, 1.0),
        m_minus_minus: ratio(&mm, -1.0),
        xi_plus,
        xi_minus,
        phi_plus,
        phi_minus,
    })
}

/// Slab outputs `(R′₁↑, R′₁↓, L₀↑, L₀↓)` for unit incidence.
pub fn slab_outputs(p: &ScatterParams) -> Result<[C64; 4]> {
    let (mp, mm) = transfer_matrix(p)?;
    let (ip, im) = (mp[(1, 1)].inv(), mm[(1, 1)].inv());
    let (lp, lm) = (mp[(1, 0)] * ip, mm[(1, 0)] * im);
    Ok([(ip + im) / 2.0, (ip - im) / 2.0, -(lp + lm) / 2.0, -(lp - lm) / 2.0])
}

/// Largest entry of `H₄·(R′₁↑, R′₁↓, L₀↑, L₀↓) − (ℳ₋₊, ℳ₋₋, ℳ₊₊, ℳ₊₋)` with
/// `H₄` the ±1 Hadamard pattern.
pub fn hadamard_residual(p: &ScatterParams) -> Result<f64> {
    let ph = phase_factors(p)?;
    let x = slab_outputs(p)?;
    let h = hadamard4();
    let lhs = h.apply(&x);
    let rhs = [ph.m_minus_plus, ph.m_minus_minus, ph.m_plus_plus, ph.m_plus_minus];
    Ok(lhs.iter().zip(rhs).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
}

/// Largest mismatch among `|1 ± (M±)₂₁|²`, `|(M±)₂₂|²` and
/// `1 + sinh²η± sin²k±a`.
pub fn modulus_identity_residual(p: &ScatterParams) -> Result<f64> {
    require_single_propagating(p)?;
    let (mp, mm) = transfer_matrix(p)?;
    let mut worst: f64 = 0.0;
    for (ch, m, s) in [(Channel::Plus, mp, 1.0), (Channel::Minus, mm, -1.0)] {
        let r = p.ratio(ch).re;
        let sinh = (r - 1.0 / r) / 2.0;
        let ka = p.channel_wavenumber(ch).re * p.a;
        let closed = 1.0 + (sinh * ka.sin()).powi(2);
        worst = worst
            .max(((ONE + m[(1, 0)] * s).norm_sqr() - closed).abs())
            .max((m[(1, 1)].norm_sqr() - closed).abs());
    }
    Ok(worst)
}

fn hadamard4() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[
        &[1.0, 1.0, 1.0, 1.0],
        &[1.0, -1.0, 1.0, -1.0],
        &[1.0, 1.0, -1.0, -1.0],
        &[1.0, -1.0, -1.0, 1.0],
    ])
    .expect("4x4")
}

/// Stationary single-slab amplitudes `(e^{−ika}R′₁↑, e^{−ika}R′₁↓, L₀↑, L₀↓)`.
pub fn small_a_amplitudes(p: &ScatterParams) -> Result<AbstractAmplitudes> {
    if p.n != 1 {
        return Err(ZenoError::InvalidParameter(format!(
            "single-slab operation needs N = 1, got {}",
            p.n
        )));
    }
    let [r_up, r_down, l_up, l_down] = slab_outputs(p)?;
    let back = C64::from_polar(1.0, -p.ka());
    Ok(AbstractAmplitudes {
        t_up: back * r_up,
        t_down: back * r_down,
        r_up: l_up,
        r_down: l_down,
    })
}

/// Leading-order prediction `(1, −iζka, 0, −iζka)`.
pub fn small_a_prediction(zeta: f64, ka: f64) -> AbstractAmplitudes {
    let flip = C64::new(0.0, -zeta * ka);
    AbstractAmplitudes {
        t_up: ONE,
        t_down: flip,
        r_up: C64::new(0.0, 0.0),
        r_down: flip,
    }
}

/// Four-state parameters reproducing the slab at small width:
/// `g = μB`, `α = 0`, `β = γ = 1`, `T = ma/k`.
///
/// The four-state Hamiltonian carries an extra `g·1` term, so its amplitudes
/// differ from `μB(1 + τ1)σ1` by the global phase `e^{−iζka}`; see
/// [`matched_dynamical_amplitudes`].
pub fn matched_dynamical_hamiltonian(p: &ScatterParams) -> Result<AbstractParams> {
    if p.zeta() >= 0.5 {
        return Err(ZenoError::InvalidParameter(format!(
            "matching needs zeta < 1/2, got {}",
            p.zeta()
        )));
    }
    Ok(AbstractParams::new(p.mu_b, 0.0, 1.0, p.m * p.a / p.k).with_gamma(1.0))
}

/// Propagator amplitudes of the matched model with the `e^{−igT}` phase of
/// the identity term removed, i.e. those of `μB(1 + τ1)σ1`.
pub fn matched_dynamical_amplitudes(p: &ScatterParams) -> Result<AbstractAmplitudes> {
    let h = matched_dynamical_hamiltonian(p)?;
    let raw = amplitudes_from_propagator(&h);
    let undo = C64::from_polar(1.0, h.g * h.t);
    Ok(AbstractAmplitudes {
        t_up: raw.t_up * undo,
        t_down: raw.t_down * undo,
        r_up: raw.r_up * undo,
        r_down: raw.r_down * undo,
    })
}

/// `G_d = μB(iτ2 + τ3)σ1 − 2Eτ3` on the direction⊗spin space.
pub fn generator(p: &ScatterParams) -> ComplexMatrix {
    let [s1, s2, s3] = pauli();
    let id = ComplexMatrix::identity(2);
    let kick = (s2 * I + s3).kron(&s1) * p.mu_b;
    kick - s3.kron(&id) * (2.0 * p.energy())
}

/// `max |M± − ⟨±|e^{−iG_d T}|±⟩|` with `T = ma/k`, over both channels.
pub fn generator_reproduces_transfer(p: &ScatterParams) -> Result<f64> {
    let (mp, mm) = transfer_matrix(p)?;
    let t = p.m * p.a / p.k;
    let evolved = mat_exp(&generator(p), C64::new(0.0, -t));
    // |±⟩ = (|↑⟩ ± |↓⟩)/√2 in the spin factor
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let had = ComplexMatrix::from_real_rows(&[&[h, h], &[h, -h]]).expect("2x2");
    let u = ComplexMatrix::identity(2).kron(&had);
    let rotated = u.adjoint() * evolved * u;
    let mut worst: f64 = 0.0;
    for (spin, m) in [(0usize, mp), (1usize, mm)] {
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((rotated[(2 * i + spin, 2 * j + spin)] - m[(i, j)]).norm());
            }
        }
    }
    Ok(worst)
}
