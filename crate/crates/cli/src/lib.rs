//! Library side of the `zeno` binary: configuration, dispatch and output.

pub mod config;
pub mod error;
pub mod output;
pub mod run;

use std::path::Path;

pub use config::{Command, Format, RunConfig};
pub use error::{CliError, CliResult};
pub use output::{render, Cell, SweepResult};
pub use run::{run, validate, RunOutput};

/// Run `cfg` and return the rendered table alongside the raw output.
pub fn execute(cfg: &RunConfig) -> CliResult<(RunOutput, String)> {
    let out = run(cfg)?;
    let text = render(cfg, &out.result);
    Ok((out, text))
}

/// Read a config file, mapping failures to IO errors.
pub fn read_config(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// Write the rendered table in one call.
pub fn write_output(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}
