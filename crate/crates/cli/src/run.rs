use zeno_core::abstract_model::{zeno_chain_finite, AbstractParams, FourState, ProjectorKind};
use zeno_core::ideal_spin::{survival_after_n, IdealParams};
use zeno_core::scattering::{solve_no_measurement, ScatterParams};
use zeno_core::sweep::map_indexed;
use zeno_core::verify::{verify_all, verify_appendix, Report};
use zeno_core::zeno_scattering::{
    insensitive_chain, sensitive_chain, transmission_surface, transmission_surface_b1, zeno_vs_no_measurement_report,
    ChainRegime,
};

use crate::config::{Command, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::{Cell, SweepResult};

/// Result table plus, for verify commands, the `(passed, failed)` counts.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub result: SweepResult,
    pub verdict: Option<(usize, usize)>,
}

/// Check every parameter against the model preconditions without running
/// the sweep.
pub fn validate(cfg: &RunConfig) -> CliResult<()> {
    cfg.exec()?;
    match cfg.command {
        Command::Ideal => {
            let ns = counts(cfg)?;
            IdealParams::new(cfg.real("omega_t")?, 1.0, ns[0])?;
        }
        Command::Abstract => {
            counts(cfg)?;
            abstract_params(cfg)?.validate()?;
        }
        Command::Scatter | Command::ZenoScatter => {
            for n in counts(cfg)? {
                let p = scatter_params(cfg, n)?;
                if p.is_degenerate() {
                    return Err(CliError::Validation(format!(
                        "zeta = {} is the degenerate point 1/2",
                        p.zeta()
                    )));
                }
            }
        }
        Command::Fig5a => {
            cfg.axis("kd")?;
            let zeta = cfg.axis("zeta")?;
            if zeta.min < 0.0 {
                return Err(CliError::Validation("zeta.min must be >= 0".into()));
            }
        }
        Command::Fig5b => {
            cfg.axis("b1")?;
            if cfg.axis("kd")?.min <= 0.0 {
                return Err(CliError::Validation("kd.min must be > 0 (zeta = (B1/kD)^2)".into()));
            }
        }
        Command::Fig6 => {
            fig6_ns(cfg)?;
        }
        Command::VerifyAppendix => {}
        Command::VerifyAll => {
            cfg.count("seed")?;
        }
    }
    Ok(())
}

/// Validate, then evaluate the configured command.
pub fn run(cfg: &RunConfig) -> CliResult<RunOutput> {
    validate(cfg)?;
    let exec = cfg.exec()?;
    let mut verdict = None;
    let result = match cfg.command {
        Command::Ideal => {
            let omega_t = cfg.real("omega_t")?;
            let ns = counts(cfg)?;
            let rows = map_indexed(exec, &ns, |_, &n| -> CliResult<Vec<Cell>> {
                let p = IdealParams::new(omega_t, 1.0, n)?;
                Ok(vec![Cell::Int(n), Cell::Real(survival_after_n(&p))])
            });
            table(&["N", "P_up"], rows)?
        }
        Command::Abstract => {
            let p = abstract_params(cfg)?;
            let kind = match cfg.word("projector")? {
                "none" => ProjectorKind::FullIdentity,
                "e1" => ProjectorKind::E1,
                _ => ProjectorKind::E2,
            };
            let ns = counts(cfg)?;
            let rows = map_indexed(exec, &ns, |_, &n| -> CliResult<Vec<Cell>> {
                let state = FourState::r_up().evolve(&zeno_chain_finite(&p, kind, n)?);
                let mut row = vec![Cell::Int(n)];
                row.extend(state.probabilities().map(Cell::Real));
                Ok(row)
            });
            table(&["N", "P_R_up", "P_R_down", "P_L_up", "P_L_down"], rows)?
        }
        Command::Scatter => {
            let ns = counts(cfg)?;
            let rows = map_indexed(exec, &ns, |_, &n| -> CliResult<Vec<Cell>> {
                let p = scatter_params(cfg, n)?;
                let a = solve_no_measurement(&p)?;
                Ok(vec![
                    Cell::Int(n),
                    Cell::Real(p.kd()),
                    Cell::Real(a.t_up.norm_sqr()),
                    Cell::Real(a.t_down.norm_sqr()),
                    Cell::Real(a.r_up.norm_sqr()),
                    Cell::Real(a.r_down.norm_sqr()),
                    Cell::Real(a.flux()),
                ])
            });
            table(&["N", "kD", "T_up", "T_down", "R_up", "R_down", "flux"], rows)?
        }
        Command::ZenoScatter => {
            let regime = match cfg.word("regime")? {
                "limit" => ChainRegime::ContinuousLimit,
                _ => ChainRegime::FiniteN,
            };
            let sensitive = cfg.word("scheme")? == "sensitive";
            let ns = counts(cfg)?;
            let rows = map_indexed(exec, &ns, |_, &n| -> CliResult<Vec<Cell>> {
                let p = scatter_params(cfg, n)?;
                let r = if sensitive {
                    sensitive_chain(&p, regime)?
                } else {
                    insensitive_chain(&p, regime)?
                };
                Ok(vec![
                    Cell::Int(n),
                    Cell::Real(p.kd()),
                    Cell::Real(r.transmission()),
                    Cell::Real(r.amplitudes.r_up.norm_sqr()),
                    Cell::Real(r.amplitudes.r_down.norm_sqr()),
                    Cell::Real(r.survival),
                ])
            });
            table(&["N", "kD", "T_up", "R_up", "R_down", "survival"], rows)?
        }
        Command::Fig5a => surface(
            &["kD", "zeta", "T_up"],
            transmission_surface(exec, &cfg.axis("kd")?, &cfg.axis("zeta")?)?,
        ),
        Command::Fig5b => surface(
            &["B1", "kD", "T_up"],
            transmission_surface_b1(exec, &cfg.axis("b1")?, &cfg.axis("kd")?)?,
        ),
        Command::Fig6 => {
            let (ns, offset) = fig6_ns(cfg)?;
            let mut r = SweepResult::new(&["n", "T_down_no_measurement", "T_up_insensitive", "T_up_sensitive"]);
            for row in zeno_vs_no_measurement_report(exec, &ns, offset)? {
                r.rows.push(vec![
                    Cell::Int(row.n_minus as u64),
                    Cell::Real(row.t_down_no_measurement),
                    Cell::Real(row.t_up_insensitive),
                    Cell::Real(row.t_up_sensitive),
                ]);
            }
            r
        }
        Command::VerifyAppendix | Command::VerifyAll => {
            let report = if cfg.command == Command::VerifyAll {
                verify_all(exec, cfg.count("seed")?)?
            } else {
                verify_appendix(exec)?
            };
            verdict = Some((report.passed(), report.failed()));
            report_table(&report)
        }
    };
    if let Some((row, column)) = result.first_non_finite() {
        return Err(CliError::Numerical(format!("non-finite {column} in row {}", row + 1)));
    }
    Ok(RunOutput { result, verdict })
}

fn table(header: &[&str], rows: Vec<CliResult<Vec<Cell>>>) -> CliResult<SweepResult> {
    let mut r = SweepResult::new(header);
    r.rows = rows.into_iter().collect::<CliResult<_>>()?;
    Ok(r)
}

fn surface(header: &[&str], points: Vec<[f64; 3]>) -> SweepResult {
    let mut r = SweepResult::new(header);
    r.rows = points.into_iter().map(|p| p.map(Cell::Real).to_vec()).collect();
    r
}

fn report_table(report: &Report) -> SweepResult {
    let mut r = SweepResult::new(&["check", "value", "bound", "status"]);
    r.rows = report
        .checks
        .iter()
        .map(|c| {
            vec![
                Cell::Text(c.name.clone()),
                Cell::Real(c.value),
                Cell::Real(c.bound),
                Cell::Text(if c.passed() { "pass" } else { "FAIL" }.into()),
            ]
        })
        .collect();
    r
}

/// Integer sample points of the `n` axis, each at least one.
fn counts(cfg: &RunConfig) -> CliResult<Vec<u64>> {
    let axis = cfg.axis("n")?;
    if axis.min < 1.0 {
        return Err(CliError::Validation(format!("n.min must be >= 1, got {}", axis.min)));
    }
    Ok(axis.values().into_iter().map(|x| x.round() as u64).collect())
}

fn fig6_ns(cfg: &RunConfig) -> CliResult<(Vec<u32>, u32)> {
    let (lo, hi) = (cfg.count("n.min")?, cfg.count("n.max")?);
    let offset = cfg.count("offset")?;
    if lo < 1 || hi < lo {
        return Err(CliError::Validation(format!(
            "need 1 <= n.min <= n.max, got {lo}..{hi}"
        )));
    }
    if offset.is_multiple_of(2) {
        return Err(CliError::Validation(format!("offset must be odd, got {offset}")));
    }
    let to_u32 = |x: u64| u32::try_from(x).map_err(|_| CliError::Validation(format!("{x} is too large")));
    to_u32(hi + offset)?;
    let ns = (lo..=hi).map(to_u32).collect::<CliResult<_>>()?;
    Ok((ns, to_u32(offset)?))
}

fn abstract_params(cfg: &RunConfig) -> CliResult<AbstractParams> {
    let p = AbstractParams::new(cfg.real("g")?, cfg.real("alpha")?, cfg.real("beta")?, cfg.real("t")?);
    Ok(match cfg.real_or_auto("gamma")? {
        Some(gamma) => p.with_gamma(gamma),
        None => p,
    })
}

fn scatter_params(cfg: &RunConfig, n: u64) -> CliResult<ScatterParams> {
    let p = if cfg.word("units")? == "physical" {
        ScatterParams::new(
            cfg.real("k")?,
            cfg.real("m")?,
            cfg.real("mu_b")?,
            cfg.real("a")?,
            cfg.real("b")?,
            n,
        )?
    } else {
        let zeta = cfg.real("zeta")?;
        if zeta < 0.0 {
            return Err(CliError::Validation(format!("zeta must be >= 0, got {zeta}")));
        }
        ScatterParams::dimensionless(cfg.real("ka")?, cfg.real("kb")?, zeta, n)?
    };
    Ok(p)
}
