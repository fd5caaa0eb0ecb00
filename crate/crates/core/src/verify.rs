//! Runtime invariant suites behind the `verify-appendix` and `verify-all`
//! commands. Every check reduces to "measured error ≤ bound".

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::abstract_model::{self, AbstractParams, FourState, ProjectorKind};
use crate::correspondence as corr;
use crate::error::Result;
use crate::ideal_spin;
use crate::linalg::{ComplexMatrix, I, ONE, ZERO};
use crate::scattering::{self as sc, ScatterParams};
use crate::sweep::{map_indexed, Axis, Exec};
use crate::zeno_scattering as zs;

/// One named check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: f64,
}

impl Check {
    pub fn new(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            value,
            bound,
        }
    }

    /// NaN never passes.
    pub fn passed(&self) -> bool {
        self.value <= self.bound
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.passed()).count()
    }

    pub fn failed(&self) -> usize {
        self.checks.len() - self.passed()
    }

    pub fn all_passed(&self) -> bool {
        self.failed() == 0
    }
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    // NaN-propagating maximum so a broken sample fails the check
    values
        .into_iter()
        .fold(0.0, |m, v| if v.is_nan() || m.is_nan() { f64::NAN } else { m.max(v) })
}

/// `(ka, ζ)` grid over `(0, π] × [0, ζ_max]`, skipping `ζ = 1/2`.
fn slab_grid(steps: usize, zeta_max: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(steps * steps);
    for i in 1..=steps {
        let ka = std::f64::consts::PI * i as f64 / steps as f64;
        for j in 0..steps {
            let zeta = zeta_max * j as f64 / (steps - 1) as f64;
            if (zeta - 0.5).abs() > 1e-9 {
                out.push((ka, zeta));
            }
        }
    }
    out
}

fn slab(ka: f64, zeta: f64) -> Result<ScatterParams> {
    ScatterParams::dimensionless(ka, 0.0, zeta, 1)
}

/// Stationary versus dynamical description of a single slab.
pub fn verify_appendix(exec: Exec) -> Result<Report> {
    let mut r = Report::default();

    let grid = slab_grid(10, 0.45);
    let dev: Vec<Result<f64>> = map_indexed(exec, &grid, |_, &(ka, z)| {
        corr::generator_reproduces_transfer(&slab(ka, z)?)
    });
    r.push(Check::new(
        "generator exponential reproduces slab transfer matrix (10x10 grid)",
        max_of(dev.into_iter().collect::<Result<Vec<_>>>()?),
        1e-10,
    ));

    let propagating: Vec<(f64, f64)> = slab_grid(10, 0.45);
    let mut had = Vec::new();
    let mut modulus = Vec::new();
    let mut polar = Vec::new();
    for &(ka, z) in &propagating {
        let p = slab(ka, z)?;
        had.push(corr::hadamard_residual(&p)?);
        modulus.push(corr::modulus_identity_residual(&p)?);
        let ph = corr::phase_factors(&p)?;
        polar.push(ph.polar_residual().max(ph.modulus_residual()));
    }
    r.push(Check::new("Hadamard four-amplitude relation", max_of(had), 1e-10));
    r.push(Check::new(
        "|1 ± M21|² = |M22|² = 1 + sinh²η sin²k±a",
        max_of(modulus),
        1e-10,
    ));
    r.push(Check::new(
        "unimodular phase factors in polar form",
        max_of(polar),
        1e-10,
    ));

    let (zeta, ka) = (0.3, 1e-4);
    let dev_at = |ka: f64| -> Result<f64> {
        Ok(corr::small_a_amplitudes(&slab(ka, zeta)?)?.max_deviation(&corr::small_a_prediction(zeta, ka)))
    };
    let (d1, d2) = (dev_at(ka)?, dev_at(ka / 2.0)?);
    r.push(Check::new("small-width amplitudes at ka = 1e-4", d1, 1e-7));
    r.push(Check::new(
        "small-width residual ratio under halving, |ratio - 4|",
        (d1 / d2 - 4.0).abs(),
        0.2,
    ));

    let p = slab(ka, zeta)?;
    let dyn_amp = corr::matched_dynamical_amplitudes(&p)?;
    let stat = corr::small_a_amplitudes(&p)?;
    r.push(Check::new(
        "matched four-state amplitudes vs stationary",
        dyn_amp.max_deviation(&stat),
        1e-7,
    ));
    Ok(r)
}

fn verify_ideal() -> Report {
    let mut r = Report::default();
    r.push(Check::new("P(1) = 0", ideal_spin::survival_matching(1), 0.0));
    r.push(Check::new(
        "P(2) = 1/4",
        (ideal_spin::survival_matching(2) - 0.25).abs(),
        1e-12,
    ));
    let drops = (2..10_000u64)
        .filter(|&n| ideal_spin::survival_matching(n + 1) <= ideal_spin::survival_matching(n))
        .count();
    r.push(Check::new(
        "survival strictly increasing for N = 2..1e4 (violations)",
        drops as f64,
        0.0,
    ));
    r.push(Check::new(
        "1 - P(1e6)",
        1.0 - ideal_spin::survival_matching(1_000_000),
        3e-6,
    ));
    r
}

fn verify_abstract(rng: &mut ChaCha8Rng) -> Result<Report> {
    let mut r = Report::default();
    let mut unitarity = Vec::new();
    let mut level_route = Vec::new();
    for _ in 0..50 {
        let p = AbstractParams::new(
            rng.gen_range(0.1..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(0.0..3.0),
        );
        let u = abstract_model::propagator(&p);
        unitarity.push((u.adjoint() * u).distance(&ComplexMatrix::identity(4)));
        let a = abstract_model::amplitudes_from_levels(&p)?;
        level_route.push(a.max_deviation(&abstract_model::amplitudes_from_propagator(&p)));
    }
    r.push(Check::new(
        "four-state propagator is unitary (random)",
        max_of(unitarity),
        1e-12,
    ));
    r.push(Check::new(
        "level phases reproduce propagator column (random)",
        max_of(level_route),
        1e-12,
    ));

    let p = AbstractParams::new(1.0, -0.5, -1.0, std::f64::consts::PI);
    let out = FourState::r_up().evolve(&abstract_model::zeno_limit_e1(&p)?);
    let reversed = FourState([ZERO, ZERO, -I, ZERO]);
    r.push(Check::new(
        "E1 limit sends R-up to -i L-up",
        out.distance(&reversed),
        1e-10,
    ));

    let mut e2 = Vec::new();
    for alpha in [0.0, 1.0, 2.0] {
        let q = AbstractParams::new(1.0, alpha, -1.0, 1.3);
        let out = FourState::r_up().evolve(&abstract_model::zeno_limit_e2(&q)?);
        e2.push(out.distance(&abstract_model::e2_limit_state_closed_form(alpha, 1.3)));
        e2.push((out.norm_sqr() - 1.0).abs());
    }
    r.push(Check::new(
        "E2 limit matches closed form and keeps norm",
        max_of(e2),
        1e-10,
    ));

    let chain = abstract_model::zeno_chain_finite(&p, ProjectorKind::E1, 10_000)?;
    let limit = abstract_model::zeno_limit_e1(&p)?;
    r.push(Check::new(
        "E1 chain at N = 1e4 near limit",
        (chain - limit).max_abs(),
        1e-2,
    ));
    Ok(r)
}

fn verify_scattering(rng: &mut ChaCha8Rng) -> Result<Report> {
    let mut r = Report::default();
    let mut det = Vec::new();
    let mut flux = Vec::new();
    let mut power = Vec::new();
    for _ in 0..200 {
        let mut zeta: f64 = rng.gen_range(0.0..1.2);
        if (zeta - 0.5).abs() < 1e-6 {
            zeta = 0.3;
        }
        let n = rng.gen_range(1..=40u64);
        let p = ScatterParams::dimensionless(rng.gen_range(0.01..3.2), rng.gen_range(0.0..3.2), zeta, n)?;
        let (mp, mm) = sc::transfer_matrix(&p)?;
        det.push((mp.det() - ONE).norm().max((mm.det() - ONE).norm()));
        flux.push((sc::solve_no_measurement(&p)?.flux() - 1.0).abs());
        let (wp, _) = sc::lattice_transfer(&p)?;
        let bracket = sc::lattice_bracket(&p, sc::Channel::Plus)?;
        power.push(wp.distance(&bracket) / (1.0 + wp.frobenius_norm()));
    }
    r.push(Check::new("det M± = 1 (random)", max_of(det), 1e-10));
    r.push(Check::new(
        "flux conservation without measurement (random)",
        max_of(flux),
        1e-9,
    ));
    r.push(Check::new(
        "lattice power equals Chebyshev bracket (random, relative)",
        max_of(power),
        1e-9,
    ));

    let mut resonance = Vec::new();
    for (nm, np) in [(1, 2), (1, 10), (2, 5)] {
        let p = ScatterParams::total_transmission(nm, np, 1.0, 1.0)?;
        let a = sc::solve_no_measurement(&p)?;
        resonance.push((a.t_down.norm_sqr() - 1.0).abs());
    }
    r.push(Check::new(
        "total spin-flip transmission at resonance",
        max_of(resonance),
        1e-9,
    ));
    Ok(r)
}

fn verify_measured(exec: Exec) -> Result<Report> {
    let mut r = Report::default();
    let kd = Axis::linear(0.0, 30.0, 60)?;
    let zeta = Axis::linear(0.0, 1.2, 60)?;
    let worst: Vec<Result<f64>> = map_indexed(exec, &kd.values(), |_, &x| {
        let mut w: f64 = 0.0;
        for z in zeta.values() {
            w = w.max((zs::sensitive_limit(x, z)?.survival - 1.0).abs());
        }
        Ok(w)
    });
    r.push(Check::new(
        "sensitive-limit conservation on a 60x60 (kD, zeta) grid",
        max_of(worst.into_iter().collect::<Result<Vec<_>>>()?),
        1e-9,
    ));

    let mut ins = Vec::new();
    for (x, z) in [(3.0, 0.3), (12.0, 2.0), (25.0, 0.9)] {
        let p = ScatterParams::dimensionless(x / 10.0, 0.0, z, 10)?;
        ins.push((zs::insensitive_chain(&p, zs::ChainRegime::ContinuousLimit)?.survival - 1.0).abs());
    }
    r.push(Check::new("insensitive-limit survival = 1", max_of(ins), 1e-9));

    let mut crit = Vec::new();
    for x in [1.0, 5.0, 10.0] {
        let g = zs::ZTwoMatrix::new(zs::ZETA_C).shifted();
        let robust = crate::linalg::mat_exp(&g, crate::linalg::C64::new(0.0, -x));
        crit.push(robust.distance(&zs::critical_exponential_closed_form(x)));
    }
    r.push(Check::new(
        "defective exponential at zeta_c vs closed form",
        max_of(crit),
        1e-8,
    ));

    let rows = zs::zeno_vs_no_measurement_report(exec, &(1..=20).collect::<Vec<_>>(), 9)?;
    r.push(Check::new(
        "fig6 no-measurement column = 1",
        max_of(rows.iter().map(|row| (row.t_down_no_measurement - 1.0).abs())),
        1e-9,
    ));
    r.push(Check::new(
        "fig6 sensitive column strictly below 1 (max)",
        max_of(rows.iter().map(|row| row.t_up_sensitive)),
        1.0 - 1e-12,
    ));
    Ok(r)
}

/// Every suite; random samples come from a ChaCha stream seeded with `seed`.
pub fn verify_all(exec: Exec, seed: u64) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut r = verify_ideal();
    r.extend(verify_abstract(&mut rng)?);
    r.extend(verify_scattering(&mut rng)?);
    r.extend(verify_measured(exec)?);
    r.extend(verify_appendix(exec)?);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nan_fails() {
        assert!(!Check::new("x", f64::NAN, 1.0).passed());
        assert!(max_of([1.0, f64::NAN, 0.5]).is_nan());
    }

    #[test]
    fn appendix_suite_passes() {
        let r = verify_appendix(Exec::Sequential).unwrap();
        for c in &r.checks {
            assert!(c.passed(), "{} = {:e} > {:e}", c.name, c.value, c.bound);
        }
    }

    #[test]
    fn full_suite_passes() {
        let r = verify_all(Exec::Parallel, 7).unwrap();
        for c in &r.checks {
            assert!(c.passed(), "{} = {:e} > {:e}", c.name, c.value, c.bound);
        }
        assert_eq!(r.failed(), 0);
    }
}
