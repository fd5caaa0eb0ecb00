//! Four-state model on direction ⊗ spin.
//!
//! Basis order is `(|R↑⟩, |R↓⟩, |L↑⟩, |L↓⟩)`, i.e. index `2·direction + spin`
//! with `R = 0`, `L = 1`, `↑ = 0`, `↓ = 1`. `τ` matrices act on direction,
//! `σ` matrices on spin. The Hamiltonian is
//! `H = g(1 + α τ1 + β σ1 + γ τ1σ1)`, which factorises as
//! `g(1 + ατ1)(1 + βσ1)` when `γ = αβ`.

use std::ops::Index;

use crate::error::{Result, ZenoError};
use crate::linalg::{mat_exp, mat_power, pauli, ComplexMatrix, C64, I, ONE, ZERO};

pub const R_UP: usize = 0;
pub const R_DOWN: usize = 1;
pub const L_UP: usize = 2;
pub const L_DOWN: usize = 3;

/// Basis indices of the subspace kept by `E2`.
pub const SURVIVED_E2: [usize; 3] = [R_UP, L_UP, L_DOWN];

const FACTORISED_TOL: f64 = 1e-12;
const CASE_TOL: f64 = 1e-10;

/// Amplitudes on `(|R↑⟩, |R↓⟩, |L↑⟩, |L↓⟩)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourState(pub [C64; 4]);

impl FourState {
    pub fn basis(index: usize) -> Self {
        let mut a = [ZERO; 4];
        a[index] = ONE;
        Self(a)
    }

    pub fn r_up() -> Self {
        Self::basis(R_UP)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> [f64; 4] {
        self.0.map(|z| z.norm_sqr())
    }

    pub fn evolve(&self, op: &ComplexMatrix) -> Self {
        let v = op.apply(&self.0);
        Self([v[0], v[1], v[2], v[3]])
    }

    /// `‖self − other‖`.
    pub fn distance(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Distance after removing the best global phase, `min_φ ‖self − e^{iφ}other‖`.
    pub fn distance_up_to_phase(&self, other: &Self) -> f64 {
        let overlap: C64 = other.0.iter().zip(&self.0).map(|(o, s)| o.conj() * s).sum();
        let phase = if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            ONE
        };
        let rotated = Self(other.0.map(|z| z * phase));
        self.distance(&rotated)
    }
}

impl Index<usize> for FourState {
    type Output = C64;

    fn index(&self, i: usize) -> &C64 {
        &self.0[i]
    }
}

/// Coupling strength, direction/spin mixing and total time (`ħ = 1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbstractParams {
    pub g: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub t: f64,
}

impl AbstractParams {
    /// Factorised Hamiltonian, `γ = αβ`.
    pub fn new(g: f64, alpha: f64, beta: f64, t: f64) -> Self {
        Self {
            g,
            alpha,
            beta,
            gamma: alpha * beta,
            t,
        }
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn is_factorised(&self) -> bool {
        (self.gamma - self.alpha * self.beta).abs() <= FACTORISED_TOL * (1.0 + self.gamma.abs())
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.g, self.alpha, self.beta, self.gamma, self.t];
        if all.iter().all(|x| x.is_finite()) && (self.g * self.t).is_finite() {
            Ok(())
        } else {
            Err(ZenoError::InvalidParameter(format!(
                "non-finite model parameters {self:?}"
            )))
        }
    }

    fn require_factorised(&self) -> Result<()> {
        if self.is_factorised() {
            Ok(())
        } else {
            Err(ZenoError::InvalidParameter(format!(
                "operation requires gamma = alpha*beta (gamma = {}, alpha*beta = {})",
                self.gamma,
                self.alpha * self.beta
            )))
        }
    }

    fn gt(&self) -> f64 {
        self.g * self.t
    }
}

/// Transmission/reflection amplitudes of an initially right-moving spin-up state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbstractAmplitudes {
    pub t_up: C64,
    pub t_down: C64,
    pub r_up: C64,
    pub r_down: C64,
}

impl AbstractAmplitudes {
    pub fn total_probability(&self) -> f64 {
        self.t_up.norm_sqr() + self.t_down.norm_sqr() + self.r_up.norm_sqr() + self.r_down.norm_sqr()
    }

    pub fn max_deviation(&self, other: &Self) -> f64 {
        [
            self.t_up - other.t_up,
            self.t_down - other.t_down,
            self.r_up - other.r_up,
            self.r_down - other.r_down,
        ]
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
    }

    fn from_state(s: &FourState) -> Self {
        Self {
            t_up: s[R_UP],
            t_down: s[R_DOWN],
            r_up: s[L_UP],
            r_down: s[L_DOWN],
        }
    }
}

/// Measurement applied between propagation steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProjectorKind {
    /// No measurement.
    FullIdentity,
    /// Removes spin-down amplitude in both directions: `(1 + σ3)/2`.
    E1,
    /// Removes only the transmitted spin-down amplitude: `1 − |R↓⟩⟨R↓|`.
    E2,
}

impl ProjectorKind {
    pub fn matrix(self) -> ComplexMatrix {
        let keep = |down_r: bool, down_l: bool| {
            ComplexMatrix::diag(&[
                ONE,
                if down_r { ONE } else { ZERO },
                ONE,
                if down_l { ONE } else { ZERO },
            ])
        };
        match self {
            ProjectorKind::FullIdentity => ComplexMatrix::identity(4),
            ProjectorKind::E1 => keep(false, false),
            ProjectorKind::E2 => keep(false, true),
        }
    }
}

/// Which no-measurement total-transmission-with-flip condition holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransmissionCase {
    /// `cos αgT = sin βgT = cos γgT = 0`
    DirectionMediated,
    /// `sin αgT = cos βgT = sin γgT = 0`
    SpinMediated,
    Neither,
}

/// `(τ1 ⊗ 1, 1 ⊗ σ1, τ1 ⊗ σ1)` on the four-state space.
pub fn couplings() -> [ComplexMatrix; 3] {
    let [s1, _, _] = pauli();
    let id = ComplexMatrix::identity(2);
    [s1.kron(&id), id.kron(&s1), s1.kron(&s1)]
}

pub fn hamiltonian(p: &AbstractParams) -> ComplexMatrix {
    let [tau1, sigma1, tau_sigma] = couplings();
    (ComplexMatrix::identity(4) + tau1 * p.alpha + sigma1 * p.beta + tau_sigma * p.gamma) * p.g
}

/// Levels `E_{τσ} = g(1 + τα)(1 + σβ)` ordered `(++, +−, −+, −−)`.
pub fn energy_levels(p: &AbstractParams) -> Result<[f64; 4]> {
    p.require_factorised()?;
    let level = |tau: f64, sigma: f64| p.g * (1.0 + tau * p.alpha) * (1.0 + sigma * p.beta);
    Ok([level(1.0, 1.0), level(1.0, -1.0), level(-1.0, 1.0), level(-1.0, -1.0)])
}

/// `e^{-iHT}` by matrix exponentiation of the 4x4 Hamiltonian.
pub fn propagator(p: &AbstractParams) -> ComplexMatrix {
    mat_exp(&hamiltonian(p), -I * p.t)
}

/// `e^{-igT} e^{-iαgTτ1} e^{-iβgTσ1} e^{-iγgTτ1σ1}` from the commuting
/// involutions, each factor `cos θ − i sin θ X`.
pub fn factorised_propagator(p: &AbstractParams) -> ComplexMatrix {
    let id = ComplexMatrix::identity(4);
    let rotation = |x: &ComplexMatrix, theta: f64| id * theta.cos() + *x * (-I * theta.sin());
    let [tau1, sigma1, tau_sigma] = couplings();
    let gt = p.gt();
    rotation(&tau1, p.alpha * gt)
        * rotation(&sigma1, p.beta * gt)
        * rotation(&tau_sigma, p.gamma * gt)
        * C64::from_polar(1.0, -gt)
}

/// `(t↑, t↓, r↑, r↓)` read off the `|R↑⟩` column of the propagator.
pub fn amplitudes_from_propagator(p: &AbstractParams) -> AbstractAmplitudes {
    AbstractAmplitudes::from_state(&FourState::r_up().evolve(&propagator(p)))
}

/// `(t↑ t↓; r↑ r↓) = ¼·H₂·diag-phases·H₂` with `H₂ = [[1, 1], [1, −1]]` and the
/// phase matrix `e^{-iE_{τσ}T}` laid out with rows `τ` and columns `σ`.
pub fn amplitudes_from_levels(p: &AbstractParams) -> Result<AbstractAmplitudes> {
    let [epp, epm, emp, emm] = energy_levels(p)?;
    let phase = |e: f64| C64::from_polar(1.0, -e * p.t);
    let (a, b, c, d) = (phase(epp), phase(epm), phase(emp), phase(emm));
    Ok(AbstractAmplitudes {
        t_up: (a + b + c + d) / 4.0,
        t_down: (a - b + c - d) / 4.0,
        r_up: (a + b - c - d) / 4.0,
        r_down: (a - b - c + d) / 4.0,
    })
}

pub fn check_total_transmission_case(p: &AbstractParams) -> TransmissionCase {
    let gt = p.gt();
    let zero = |x: f64| x.abs() <= CASE_TOL;
    let (a, b, c) = (p.alpha * gt, p.beta * gt, p.gamma * gt);
    if zero(a.cos()) && zero(b.sin()) && zero(c.cos()) {
        TransmissionCase::DirectionMediated
    } else if zero(a.sin()) && zero(b.cos()) && zero(c.sin()) {
        TransmissionCase::SpinMediated
    } else {
        TransmissionCase::Neither
    }
}

/// `V_N(T) = (E·e^{-iHT/N}·E)^N`.
pub fn zeno_chain_finite(p: &AbstractParams, proj: ProjectorKind, n: u64) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(ZenoError::InvalidParameter("N must be >= 1".into()));
    }
    p.validate()?;
    let e = proj.matrix();
    let step = AbstractParams {
        t: p.t / n as f64,
        ..*p
    };
    Ok(mat_power(&(e * propagator(&step) * e), n))
}

/// Continuous-measurement limit for `E1`: `e^{-igT} E1 e^{-iαgTτ1}`.
pub fn zeno_limit_e1(p: &AbstractParams) -> Result<ComplexMatrix> {
    p.require_factorised()?;
    let [tau1, _, _] = couplings();
    let gt = p.gt();
    let rot = ComplexMatrix::identity(4) * (p.alpha * gt).cos() + tau1 * (-I * (p.alpha * gt).sin());
    Ok(ProjectorKind::E1.matrix() * rot * C64::from_polar(1.0, -gt))
}

/// `Z = E2 (H/g − 1) E2`.
pub fn z_operator(p: &AbstractParams) -> ComplexMatrix {
    let [tau1, sigma1, tau_sigma] = couplings();
    let e2 = ProjectorKind::E2.matrix();
    e2 * (tau1 * p.alpha + sigma1 * p.beta + tau_sigma * p.gamma) * e2
}

/// Continuous-measurement limit for `E2`: `e^{-igT} e^{-igTZ} E2`.
pub fn zeno_limit_e2(p: &AbstractParams) -> Result<ComplexMatrix> {
    p.validate()?;
    let gt = p.gt();
    Ok(mat_exp(&z_operator(p), -I * gt) * ProjectorKind::E2.matrix() * C64::from_polar(1.0, -gt))
}

/// Closed form of `𝒱2(T)|R↑⟩` for `β = −1`, `γ = αβ`, with `θ = √(8α²+1)/2`:
/// `e^{-3igT/2}[(cos gTθ + i sin(gTθ)/(2θ))|R↑⟩ + (iα/θ) sin(gTθ)(|L↓⟩ − |L↑⟩)]`.
pub fn e2_limit_state_closed_form(alpha: f64, gt: f64) -> FourState {
    let theta = (8.0 * alpha * alpha + 1.0).sqrt() / 2.0;
    let (c, s) = ((gt * theta).cos(), (gt * theta).sin());
    let phase = C64::from_polar(1.0, -1.5 * gt);
    let side = I * (alpha / theta * s);
    FourState([
        phase * C64::new(c, s / (2.0 * theta)),
        ZERO,
        -phase * side,
        phase * side,
    ])
}

/// Generic Zeno limit for a projector kind; `FullIdentity` is the bare propagator.
pub fn zeno_limit(p: &AbstractParams, proj: ProjectorKind) -> Result<ComplexMatrix> {
    match proj {
        ProjectorKind::FullIdentity => Ok(propagator(p)),
        ProjectorKind::E1 => zeno_limit_e1(p),
        ProjectorKind::E2 => zeno_limit_e2(p),
    }
}
