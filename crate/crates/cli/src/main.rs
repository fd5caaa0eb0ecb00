use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use zeno_cli::{execute, read_config, write_output, CliError, CliResult, Command, Format, RunConfig};

/// Quantum Zeno simulations: measured spins, four-state chains and
/// magnetic-slab scattering.
#[derive(Parser)]
#[command(name = "zeno", version)]
struct Cli {
    #[command(subcommand)]
    command: CommandArg,
}

#[derive(Subcommand)]
enum CommandArg {
    /// Survival of a precessing spin under N projective measurements.
    Ideal(Common),
    /// Four-state model propagated through N projected steps.
    Abstract(Common),
    /// Unmeasured transmission through N magnetic slabs.
    Scatter(Common),
    /// Transmission with direction-insensitive or direction-sensitive measurement.
    ZenoScatter(Common),
    /// Sensitive-limit transmission over (kD, zeta).
    Fig5a(Common),
    /// Sensitive-limit transmission over (B1, kD).
    Fig5b(Common),
    /// Measured against unmeasured transmission at the total-flip resonances.
    Fig6(Common),
    /// Closed-form single-slab identities and their residuals.
    VerifyAppendix(Common),
    /// Every invariant suite, with pass/fail counts.
    VerifyAll(Common),
}

#[derive(Args)]
struct Common {
    /// key=value configuration file; `#` starts a comment.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Override one key after the config file is applied.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Write the table here instead of standard output.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

impl CommandArg {
    fn split(self) -> (Command, Common) {
        match self {
            CommandArg::Ideal(c) => (Command::Ideal, c),
            CommandArg::Abstract(c) => (Command::Abstract, c),
            CommandArg::Scatter(c) => (Command::Scatter, c),
            CommandArg::ZenoScatter(c) => (Command::ZenoScatter, c),
            CommandArg::Fig5a(c) => (Command::Fig5a, c),
            CommandArg::Fig5b(c) => (Command::Fig5b, c),
            CommandArg::Fig6(c) => (Command::Fig6, c),
            CommandArg::VerifyAppendix(c) => (Command::VerifyAppendix, c),
            CommandArg::VerifyAll(c) => (Command::VerifyAll, c),
        }
    }
}

fn resolve(command: Command, args: Common) -> CliResult<RunConfig> {
    let mut cfg = RunConfig::defaults(command);
    if let Some(path) = &args.config {
        cfg.apply_file(&read_config(path)?, &path.display().to_string())?;
    }
    for (i, pair) in args.set.iter().enumerate() {
        cfg.apply_set(pair, i + 1)?;
    }
    if args.out.is_some() {
        cfg.output_path = args.out;
    }
    if let Some(f) = args.format {
        cfg.format = f;
    }
    Ok(cfg)
}

fn main_inner(cli: Cli) -> CliResult<()> {
    let (command, args) = cli.command.split();
    let cfg = resolve(command, args)?;
    let (out, text) = execute(&cfg)?;
    let summary = out
        .verdict
        .map(|(passed, failed)| format!("{command}: {passed} passed, {failed} failed"));
    match &cfg.output_path {
        Some(path) => {
            write_output(path, &text)?;
            if let Some(s) = &summary {
                println!("{s}");
            }
        }
        None => {
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| CliError::io("<stdout>", e))?;
            if let Some(s) = &summary {
                eprintln!("{s}");
            }
        }
    }
    match out.verdict {
        Some((_, failed)) if failed > 0 => Err(CliError::Numerical(format!("{failed} checks failed"))),
        _ => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match main_inner(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
