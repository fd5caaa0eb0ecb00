//! Stationary scattering of a spin-up neutron through `N` magnetic slabs of
//! width `a` separated by field-free gaps of width `b`.
//!
//! The field points along `x`, so the problem splits into the two `σ1`
//! eigen-channels `|±⟩ = (|↑⟩ ± |↓⟩)/√2` with internal wavenumbers
//! `k± = √(k² ∓ 2mμB)`. Amplitude pairs are `(right-moving, left-moving)`.
//! Units have `ħ = 1`.

use crate::error::{Result, ZenoError};
use crate::linalg::{mat_power, mat_power_scaled, ComplexMatrix, C64, I, ONE};

/// `|ζ − 1/2|` below which the spin-plus channel is treated as degenerate.
pub const DEGENERATE_ZETA_TOL: f64 = 1e-14;

/// `σ1` eigen-channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Channel {
    Plus,
    Minus,
}

impl Channel {
    pub const BOTH: [Channel; 2] = [Channel::Plus, Channel::Minus];

    /// `+1` for `|+⟩`, `−1` for `|−⟩`.
    pub fn sign(self) -> f64 {
        match self {
            Channel::Plus => 1.0,
            Channel::Minus => -1.0,
        }
    }
}

/// Physical inputs with the derived wave quantities cached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterParams {
    pub k: f64,
    pub m: f64,
    pub mu_b: f64,
    pub a: f64,
    pub b: f64,
    pub n: u64,
    zeta: f64,
    k_plus: C64,
    k_minus: C64,
}

impl ScatterParams {
    pub fn new(k: f64, m: f64, mu_b: f64, a: f64, b: f64, n: u64) -> Result<Self> {
        let bad = |what: &str| Err(ZenoError::InvalidParameter(what.to_string()));
        if !(k > 0.0 && k.is_finite()) {
            return bad(&format!("k must be > 0, got {k}"));
        }
        if !(m > 0.0 && m.is_finite()) {
            return bad(&format!("m must be > 0, got {m}"));
        }
        if !(mu_b >= 0.0 && mu_b.is_finite()) {
            return bad(&format!("muB must be >= 0, got {mu_b}"));
        }
        if !(a > 0.0 && a.is_finite()) {
            return bad(&format!("a must be > 0, got {a}"));
        }
        if !(b >= 0.0 && b.is_finite()) {
            return bad(&format!("b must be >= 0, got {b}"));
        }
        if n == 0 {
            return bad("N must be >= 1");
        }
        let zeta = m * mu_b / (k * k);
        let k_c = C64::new(k, 0.0);
        let k_plus = k_c * C64::new(1.0 - 2.0 * zeta, 0.0).sqrt();
        let k_minus = k_c * C64::new(1.0 + 2.0 * zeta, 0.0).sqrt();
        Ok(Self {
            k,
            m,
            mu_b,
            a,
            b,
            n,
            zeta,
            k_plus,
            k_minus,
        })
    }

    /// Dimensionless inputs `(ka, kb, ζ)` realised with `k = m = 1`.
    pub fn dimensionless(ka: f64, kb: f64, zeta: f64, n: u64) -> Result<Self> {
        Self::new(1.0, 1.0, zeta, ka, kb, n)
    }

    /// Single slab of width `D` at the energy and field that make the
    /// unmeasured flip total, for integers `n₊ > n₋ ≥ 1` with `n₊ − n₋` odd.
    pub fn total_transmission(n_minus: u32, n_plus: u32, m: f64, d: f64) -> Result<Self> {
        let (e, mu_b) = total_transmission_params(n_minus, n_plus, m, d)?;
        Self::new((2.0 * m * e).sqrt(), m, mu_b, d, 0.0, 1)
    }

    pub fn with_cells(&self, n: u64) -> Result<Self> {
        Self::new(self.k, self.m, self.mu_b, self.a, self.b, n)
    }

    pub fn energy(&self) -> f64 {
        self.k * self.k / (2.0 * self.m)
    }

    /// `ζ = μB/2E = mμB/k²`.
    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    pub fn ka(&self) -> f64 {
        self.k * self.a
    }

    pub fn kb(&self) -> f64 {
        self.k * self.b
    }

    /// Total field length `D = N·a`.
    pub fn total_field_length(&self) -> f64 {
        self.n as f64 * self.a
    }

    pub fn kd(&self) -> f64 {
        self.k * self.total_field_length()
    }

    /// End of the lattice, `y_N = N(a + b)`.
    pub fn y_end(&self) -> f64 {
        self.n as f64 * (self.a + self.b)
    }

    /// Internal wavenumber `k±` (principal square root).
    pub fn channel_wavenumber(&self, ch: Channel) -> C64 {
        match ch {
            Channel::Plus => self.k_plus,
            Channel::Minus => self.k_minus,
        }
    }

    /// `e^{η±} = k/k±`.
    pub fn ratio(&self, ch: Channel) -> C64 {
        C64::new(self.k, 0.0) / self.channel_wavenumber(ch)
    }

    /// `η± = Log(k/k±)` (principal logarithm); infinite at `ζ = 1/2` for `+`.
    pub fn eta(&self, ch: Channel) -> C64 {
        self.ratio(ch).ln()
    }

    pub fn is_degenerate(&self) -> bool {
        (self.zeta - 0.5).abs() <= DEGENERATE_ZETA_TOL
    }

    fn check_channels(&self) -> Result<()> {
        if self.is_degenerate() {
            Err(ZenoError::DegenerateChannel { zeta: self.zeta })
        } else {
            Ok(())
        }
    }

    /// `(cosh η±, sinh η±)` from `k/k±` directly.
    fn hyperbolic(&self, ch: Channel) -> (C64, C64) {
        let r = self.ratio(ch);
        ((r + r.inv()) / 2.0, (r - r.inv()) / 2.0)
    }
}

/// Outgoing amplitudes for incidence `e^{iky}|↑⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterAmplitudes {
    pub t_up: C64,
    pub t_down: C64,
    pub r_up: C64,
    pub r_down: C64,
}

impl ScatterAmplitudes {
    pub fn from_channels(t_plus: C64, t_minus: C64, r_plus: C64, r_minus: C64) -> Self {
        Self {
            t_up: (t_plus + t_minus) / 2.0,
            t_down: (t_plus - t_minus) / 2.0,
            r_up: (r_plus + r_minus) / 2.0,
            r_down: (r_plus - r_minus) / 2.0,
        }
    }

    pub fn t_plus(&self) -> C64 {
        self.t_up + self.t_down
    }

    pub fn t_minus(&self) -> C64 {
        self.t_up - self.t_down
    }

    pub fn r_plus(&self) -> C64 {
        self.r_up + self.r_down
    }

    pub fn r_minus(&self) -> C64 {
        self.r_up - self.r_down
    }

    /// `|t↑|² + |t↓|² + |r↑|² + |r↓|²`.
    pub fn flux(&self) -> f64 {
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
}

/// Per-channel band classification of the periodic cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Band {
    Allowed,
    Forbidden,
}

/// Slab transfer matrix `M±` relating `(R_n, L_n)` to `(R'_{n+1}, L'_{n+1})`.
pub fn channel_transfer(p: &ScatterParams, ch: Channel) -> Result<ComplexMatrix> {
    p.check_channels()?;
    let (cosh, sinh) = p.hyperbolic(ch);
    let phase = p.channel_wavenumber(ch) * p.a;
    let (c, s) = (phase.cos(), phase.sin());
    ComplexMatrix::from_rows(&[&[c + I * cosh * s, -I * sinh * s], &[I * sinh * s, c - I * cosh * s]])
}

/// `(M₊, M₋)`.
pub fn transfer_matrix(p: &ScatterParams) -> Result<(ComplexMatrix, ComplexMatrix)> {
    Ok((
        channel_transfer(p, Channel::Plus)?,
        channel_transfer(p, Channel::Minus)?,
    ))
}

/// The same matrix as the similarity product
/// `e^{η(1+τ1)/2} e^{ik±aτ3} e^{−η(1+τ1)/2}`.
pub fn channel_transfer_factored(p: &ScatterParams, ch: Channel) -> Result<ComplexMatrix> {
    p.check_channels()?;
    // (1+τ1)/2 is a projector P, so e^{xP} = 1 + (e^x − 1)P
    let proj = ComplexMatrix::from_rows(&[&[ONE, ONE], &[ONE, ONE]])? * 0.5;
    let id = ComplexMatrix::identity(2);
    let r = p.ratio(ch);
    let kick_in = id + proj * (r - ONE);
    let kick_out = id + proj * (r.inv() - ONE);
    let phase = p.channel_wavenumber(ch) * p.a;
    let free = ComplexMatrix::diag(&[(I * phase).exp(), (-I * phase).exp()]);
    Ok(kick_in * free * kick_out)
}

/// Field-free propagation over `kb`: `e^{ikbτ3}`.
pub fn gap_phase(kb: f64) -> ComplexMatrix {
    ComplexMatrix::diag(&[C64::from_polar(1.0, kb), C64::from_polar(1.0, -kb)])
}

/// One lattice cell `e^{ikbτ3}·M±`.
pub fn cell_matrix(p: &ScatterParams, ch: Channel) -> Result<ComplexMatrix> {
    Ok(gap_phase(p.kb()) * channel_transfer(p, ch)?)
}

/// `(e^{ikbτ3}M±)^N` for both channels, by repeated squaring.
pub fn lattice_transfer(p: &ScatterParams) -> Result<(ComplexMatrix, ComplexMatrix)> {
    Ok((
        mat_power(&cell_matrix(p, Channel::Plus)?, p.n),
        mat_power(&cell_matrix(p, Channel::Minus)?, p.n),
    ))
}

/// Half trace of the cell, `cos kb cos k±a − cosh η± sin kb sin k±a`.
///
/// Real for every `ζ ≠ 1/2`; the imaginary part is rounding noise.
pub fn half_trace(p: &ScatterParams, ch: Channel) -> Result<f64> {
    p.check_channels()?;
    let (cosh, _) = p.hyperbolic(ch);
    let phase = p.channel_wavenumber(ch) * p.a;
    let kb = p.kb();
    Ok((kb.cos() * phase.cos() - cosh * kb.sin() * phase.sin()).re)
}

/// Cell eigenvalue `q` with `|q| ≥ 1` from `(q + q⁻¹)/2 = h`.
pub fn bloch_factor(h: f64) -> C64 {
    let h = C64::new(h, 0.0);
    let root = (h * h - ONE).sqrt();
    let (q1, q2) = (h + root, h - root);
    if q1.norm() >= q2.norm() {
        q1
    } else {
        q2
    }
}

/// `([N], [N−1])` for a unimodular cell with half trace `h`, where
/// `[N] = (q^N − q^{−N})/(q − q^{−1})`.
///
/// Evaluated as Chebyshev polynomials `U_{N−1}(h)`, `U_{N−2}(h)` through the
/// companion recursion, which stays accurate at the band edges `q = ±1`.
pub fn chebyshev_coefficients(h: f64, n: u64) -> (C64, C64) {
    assert!(n >= 1, "N must be >= 1");
    let companion = ComplexMatrix::from_real_rows(&[&[2.0 * h, -1.0], &[1.0, 0.0]]).expect("2x2 companion");
    let c = mat_power(&companion, n - 1);
    (c[(0, 0)], c[(1, 0)])
}

/// `([N], [N−1], L)` with the true coefficients equal to `e^L` times the
/// returned pair, renormalised at every squaring so deep forbidden bands
/// never overflow.
pub fn chebyshev_coefficients_scaled(h: f64, n: u64) -> (C64, C64, f64) {
    assert!(n >= 1, "N must be >= 1");
    let companion = ComplexMatrix::from_real_rows(&[&[2.0 * h, -1.0], &[1.0, 0.0]]).expect("2x2 companion");
    let (c, log_scale) = mat_power_scaled(&companion, n - 1);
    (c[(0, 0)], c[(1, 0)], log_scale)
}

/// `[N]` from the cell eigenvalue, with the degenerate limit `N·q^{N−1}`
/// when `|q − q⁻¹| < 1e-8`.
pub fn bracket_from_q(q: C64, n: u64) -> C64 {
    let gap = q - q.inv();
    if gap.norm() < 1e-8 {
        return q.powu(n as u32 - 1) * n as f64;
    }
    (q.powu(n as u32) - q.inv().powu(n as u32)) / gap
}

/// `[N]±·e^{ikbτ3}M± − [N−1]±` (equal to the `N`-th power of the cell).
pub fn lattice_bracket(p: &ScatterParams, ch: Channel) -> Result<ComplexMatrix> {
    let cell = cell_matrix(p, ch)?;
    let (big_n, big_n1) = chebyshev_coefficients(half_trace(p, ch)?, p.n);
    Ok(cell * big_n - ComplexMatrix::identity(2) * big_n1)
}

/// `(t±, r±)` from `e^{iky_N}(t±, 0)ᵀ = W±(1, r±)ᵀ`, using `det W± = 1`.
///
/// The bracket is carried as `e^L` times a normalised matrix, so `t` decays
/// to zero rather than overflowing when the lattice is deep in a gap.
pub fn solve_channel(p: &ScatterParams, ch: Channel) -> Result<(C64, C64)> {
    let cell = cell_matrix(p, ch)?;
    let (big_n, big_n1, log_scale) = chebyshev_coefficients_scaled(half_trace(p, ch)?, p.n);
    let w = cell * big_n - ComplexMatrix::identity(2) * big_n1;
    let w22 = w[(1, 1)];
    let w22_log = w22.norm().ln() + log_scale;
    if w22_log < (1e-12f64).ln() || !w22.norm().is_normal() {
        return Err(ZenoError::SingularMatrix {
            det: w22_log.exp(),
            threshold: 1e-12,
        });
    }
    let t = C64::from_polar((-log_scale).exp(), -p.k * p.y_end()) / w22;
    let r = -w[(1, 0)] / w22;
    Ok((t, r))
}

/// Amplitudes without any measurement.
pub fn solve_no_measurement(p: &ScatterParams) -> Result<ScatterAmplitudes> {
    let (tp, rp) = solve_channel(p, Channel::Plus)?;
    let (tm, rm) = solve_channel(p, Channel::Minus)?;
    Ok(ScatterAmplitudes::from_channels(tp, tm, rp, rm))
}

/// Closed-form single-slab transmission `e^{-ika}/(cos k±a − i cosh η± sin k±a)`.
pub fn single_slab_transmission(p: &ScatterParams, ch: Channel) -> Result<C64> {
    p.check_channels()?;
    let (cosh, _) = p.hyperbolic(ch);
    let phase = p.channel_wavenumber(ch) * p.a;
    Ok(C64::from_polar(1.0, -p.ka()) / (phase.cos() - I * cosh * phase.sin()))
}

/// Allowed iff `|half trace| ≤ 1`, per channel `(+, −)`. `N` is irrelevant.
pub fn band_classify(p: &ScatterParams) -> Result<(Band, Band)> {
    let classify = |h: f64| if h.abs() <= 1.0 { Band::Allowed } else { Band::Forbidden };
    Ok((
        classify(half_trace(p, Channel::Plus)?),
        classify(half_trace(p, Channel::Minus)?),
    ))
}

/// `(E, μB) = (π²(n₊² + n₋²), π²(n₊² − n₋²)) / 4mD²`.
pub fn total_transmission_params(n_minus: u32, n_plus: u32, m: f64, d: f64) -> Result<(f64, f64)> {
    if n_minus < 1 || n_plus <= n_minus {
        return Err(ZenoError::InvalidParameter(format!(
            "need n_plus > n_minus >= 1, got n_minus = {n_minus}, n_plus = {n_plus}"
        )));
    }
    if (n_plus - n_minus).is_multiple_of(2) {
        return Err(ZenoError::InvalidParameter(format!(
            "n_plus - n_minus must be odd, got {}",
            n_plus - n_minus
        )));
    }
    if !(m > 0.0 && d > 0.0) {
        return Err(ZenoError::InvalidParameter("m and D must be > 0".into()));
    }
    let scale = std::f64::consts::PI.powi(2) / (4.0 * m * d * d);
    let (np, nm) = (n_plus as f64, n_minus as f64);
    Ok((scale * (np * np + nm * nm), scale * (np * np - nm * nm)))
}

/// Per-channel transmission probability `|t±|²`.
pub fn channel_transmission(p: &ScatterParams, ch: Channel) -> Result<f64> {
    Ok(solve_channel(p, ch)?.0.norm_sqr())
}
