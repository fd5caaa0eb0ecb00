//! Run configuration as flat `key=value` text.
//!
//! Every command has a fixed key schema with defaults; files and `--set`
//! overrides may only touch keys in that schema. Swept axes are spelled
//! `<axis>.min`, `<axis>.max`, `<axis>.steps` and `<axis>.spacing`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use zeno_core::sweep::{Axis, Exec, Spacing};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Command {
    Ideal,
    Abstract,
    Scatter,
    ZenoScatter,
    Fig5a,
    Fig5b,
    Fig6,
    VerifyAppendix,
    VerifyAll,
}

impl Command {
    pub const ALL: [Command; 9] = [
        Command::Ideal,
        Command::Abstract,
        Command::Scatter,
        Command::ZenoScatter,
        Command::Fig5a,
        Command::Fig5b,
        Command::Fig6,
        Command::VerifyAppendix,
        Command::VerifyAll,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Ideal => "ideal",
            Command::Abstract => "abstract",
            Command::Scatter => "scatter",
            Command::ZenoScatter => "zeno-scatter",
            Command::Fig5a => "fig5a",
            Command::Fig5b => "fig5b",
            Command::Fig6 => "fig6",
            Command::VerifyAppendix => "verify-appendix",
            Command::VerifyAll => "verify-all",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown command '{s}'"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Tsv,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Tsv => "tsv",
        }
    }

    pub fn delimiter(self) -> char {
        match self {
            Format::Csv => ',',
            Format::Tsv => '\t',
        }
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "tsv" => Ok(Format::Tsv),
            _ => Err(format!("format must be csv or tsv, got '{s}'")),
        }
    }
}

/// A parsed parameter value.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Real(f64),
    Count(u64),
    Word(String),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            // Display for f64 is the shortest string that parses back exactly
            Value::Real(x) => write!(f, "{x}"),
            Value::Count(n) => write!(f, "{n}"),
            Value::Word(w) => f.write_str(w),
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Kind {
    Real,
    Count,
    /// A real number or the word `auto`.
    RealOrAuto,
    Choice(&'static [&'static str]),
}

impl Kind {
    fn parse(self, raw: &str) -> Result<Value, String> {
        match self {
            Kind::Real => parse_real(raw),
            Kind::Count => raw
                .parse::<u64>()
                .map(Value::Count)
                .map_err(|_| format!("expected a non-negative integer, got '{raw}'")),
            Kind::RealOrAuto if raw == "auto" => Ok(Value::Word("auto".into())),
            Kind::RealOrAuto => parse_real(raw),
            Kind::Choice(options) if options.contains(&raw) => Ok(Value::Word(raw.into())),
            Kind::Choice(options) => Err(format!("expected one of {}, got '{raw}'", options.join("|"))),
        }
    }
}

fn parse_real(raw: &str) -> Result<Value, String> {
    match raw.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(Value::Real(x)),
        _ => Err(format!("expected a finite number, got '{raw}'")),
    }
}

const SPACING: &[&str] = &["linear", "log"];
const EXEC: &[&str] = &["parallel", "sequential"];

struct KeyDef {
    name: &'static str,
    kind: Kind,
    default: &'static str,
}

const fn key(name: &'static str, kind: Kind, default: &'static str) -> KeyDef {
    KeyDef { name, kind, default }
}

const PI: &str = "3.141592653589793";
const HALF_PI: &str = "1.5707963267948966";

fn schema(command: Command) -> Vec<KeyDef> {
    let mut keys = vec![key("exec", Kind::Choice(EXEC), "parallel")];
    let axis = |keys: &mut Vec<KeyDef>, names: [&'static str; 4], d: [&'static str; 4]| {
        keys.push(key(names[0], Kind::Real, d[0]));
        keys.push(key(names[1], Kind::Real, d[1]));
        keys.push(key(names[2], Kind::Count, d[2]));
        keys.push(key(names[3], Kind::Choice(SPACING), d[3]));
    };
    let n_axis = ["n.min", "n.max", "n.steps", "n.spacing"];
    let scattering = |keys: &mut Vec<KeyDef>| {
        keys.extend([
            key("units", Kind::Choice(&["dimensionless", "physical"]), "dimensionless"),
            key("ka", Kind::Real, "0.5"),
            key("kb", Kind::Real, "0.5"),
            key("zeta", Kind::Real, "0.3"),
            key("k", Kind::Real, "1"),
            key("m", Kind::Real, "1"),
            key("mu_b", Kind::Real, "0.3"),
            key("a", Kind::Real, "0.5"),
            key("b", Kind::Real, "0.5"),
        ]);
    };
    match command {
        Command::Ideal => {
            keys.push(key("omega_t", Kind::Real, PI));
            axis(&mut keys, n_axis, ["1", "1024", "11", "log"]);
        }
        Command::Abstract => {
            keys.extend([
                key("g", Kind::Real, "1"),
                key("alpha", Kind::Real, "0"),
                key("beta", Kind::Real, "-1"),
                key("gamma", Kind::RealOrAuto, "auto"),
                key("t", Kind::Real, HALF_PI),
                key("projector", Kind::Choice(&["none", "e1", "e2"]), "e2"),
            ]);
            axis(&mut keys, n_axis, ["1", "1024", "11", "log"]);
        }
        Command::Scatter => {
            scattering(&mut keys);
            axis(&mut keys, n_axis, ["1", "64", "7", "log"]);
        }
        Command::ZenoScatter => {
            scattering(&mut keys);
            keys.extend([
                key("scheme", Kind::Choice(&["insensitive", "sensitive"]), "sensitive"),
                key("regime", Kind::Choice(&["finite", "limit"]), "finite"),
            ]);
            axis(&mut keys, n_axis, ["1", "64", "7", "log"]);
        }
        Command::Fig5a => {
            axis(
                &mut keys,
                ["kd.min", "kd.max", "kd.steps", "kd.spacing"],
                ["0", "30", "200", "linear"],
            );
            axis(
                &mut keys,
                ["zeta.min", "zeta.max", "zeta.steps", "zeta.spacing"],
                ["0", "1.2", "200", "linear"],
            );
        }
        Command::Fig5b => {
            axis(
                &mut keys,
                ["b1.min", "b1.max", "b1.steps", "b1.spacing"],
                ["0", "6", "200", "linear"],
            );
            axis(
                &mut keys,
                ["kd.min", "kd.max", "kd.steps", "kd.spacing"],
                ["0.15", "30", "200", "linear"],
            );
        }
        Command::Fig6 => {
            keys.extend([
                key("n.min", Kind::Count, "1"),
                key("n.max", Kind::Count, "20"),
                key("offset", Kind::Count, "9"),
            ]);
        }
        Command::VerifyAppendix => {}
        Command::VerifyAll => keys.push(key("seed", Kind::Count, "2024")),
    }
    keys
}

/// Fully resolved configuration of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub format: Format,
    pub output_path: Option<PathBuf>,
    pub params: BTreeMap<String, Value>,
}

impl RunConfig {
    pub fn defaults(command: Command) -> Self {
        let params = schema(command)
            .into_iter()
            .map(|k| {
                let v = k.kind.parse(k.default).expect("schema defaults parse");
                (k.name.to_string(), v)
            })
            .collect();
        Self {
            command,
            format: Format::default(),
            output_path: None,
            params,
        }
    }

    /// Parse a standalone config whose text names the command.
    pub fn parse(text: &str, origin: &str) -> CliResult<Self> {
        let entries = split_lines(text, origin)?;
        let command = entries
            .iter()
            .find(|e| e.key == "command")
            .ok_or_else(|| CliError::Validation(format!("{origin}: missing 'command' key")))?;
        let command = command
            .value
            .parse::<Command>()
            .map_err(|e| CliError::Validation(format!("{}: {e}", command.location)))?;
        let mut cfg = Self::defaults(command);
        for e in &entries {
            cfg.apply_entry(e)?;
        }
        Ok(cfg)
    }

    /// Layer a config file over the current values.
    pub fn apply_file(&mut self, text: &str, origin: &str) -> CliResult<()> {
        for e in split_lines(text, origin)? {
            self.apply_entry(&e)?;
        }
        Ok(())
    }

    /// Apply one `--set key=value`; `index` is its 1-based position.
    pub fn apply_set(&mut self, pair: &str, index: usize) -> CliResult<()> {
        let location = format!("--set #{index}");
        let entry = split_pair(pair, location)?;
        self.apply_entry(&entry)
    }

    pub fn set(&mut self, key: &str, value: &str) -> CliResult<()> {
        self.apply_entry(&Entry {
            key: key.to_string(),
            value: value.to_string(),
            location: "override".into(),
        })
    }

    fn apply_entry(&mut self, e: &Entry) -> CliResult<()> {
        let fail = |msg: String| CliError::Validation(format!("{}: {msg}", e.location));
        match e.key.as_str() {
            "command" => {
                let c = e.value.parse::<Command>().map_err(fail)?;
                if c != self.command {
                    return Err(fail(format!(
                        "config is for '{c}' but the command is '{}'",
                        self.command
                    )));
                }
            }
            "format" => self.format = e.value.parse().map_err(fail)?,
            "out" => {
                self.output_path = if e.value.is_empty() {
                    None
                } else {
                    Some(PathBuf::from(&e.value))
                }
            }
            name => {
                let def = schema(self.command)
                    .into_iter()
                    .find(|k| k.name == name)
                    .ok_or_else(|| fail(format!("unknown key '{name}' for command '{}'", self.command)))?;
                let v = def.kind.parse(&e.value).map_err(|m| fail(format!("{name}: {m}")))?;
                self.params.insert(name.to_string(), v);
            }
        }
        Ok(())
    }

    /// `key=value` lines that [`RunConfig::parse`] reads back to an equal value.
    pub fn serialize(&self) -> String {
        let mut out = format!("command={}\nformat={}\n", self.command, self.format.name());
        if let Some(p) = &self.output_path {
            out.push_str(&format!("out={}\n", p.display()));
        }
        for (k, v) in &self.params {
            out.push_str(&format!("{k}={v}\n"));
        }
        out
    }

    /// `# command=… format=… key=value …`; the output path is omitted so the
    /// same run writes the same bytes wherever it lands.
    pub fn header_line(&self) -> String {
        let mut out = format!("# command={} format={}", self.command, self.format.name());
        for (k, v) in &self.params {
            out.push_str(&format!(" {k}={v}"));
        }
        out
    }

    fn get(&self, key: &str) -> CliResult<&Value> {
        self.params
            .get(key)
            .ok_or_else(|| CliError::Validation(format!("key '{key}' does not apply to '{}'", self.command)))
    }

    pub fn real(&self, key: &str) -> CliResult<f64> {
        match self.get(key)? {
            Value::Real(x) => Ok(*x),
            other => Err(CliError::Validation(format!("{key} is not a number: {other}"))),
        }
    }

    /// `None` for `auto`.
    pub fn real_or_auto(&self, key: &str) -> CliResult<Option<f64>> {
        match self.get(key)? {
            Value::Real(x) => Ok(Some(*x)),
            Value::Word(w) if w == "auto" => Ok(None),
            other => Err(CliError::Validation(format!("{key} is not a number: {other}"))),
        }
    }

    pub fn count(&self, key: &str) -> CliResult<u64> {
        match self.get(key)? {
            Value::Count(n) => Ok(*n),
            other => Err(CliError::Validation(format!("{key} is not an integer: {other}"))),
        }
    }

    pub fn word(&self, key: &str) -> CliResult<&str> {
        match self.get(key)? {
            Value::Word(w) => Ok(w),
            other => Err(CliError::Validation(format!("{key} is not a word: {other}"))),
        }
    }

    pub fn exec(&self) -> CliResult<Exec> {
        Ok(match self.word("exec")? {
            "sequential" => Exec::Sequential,
            _ => Exec::Parallel,
        })
    }

    /// The axis stored under `<name>.min/.max/.steps/.spacing`, validated.
    pub fn axis(&self, name: &str) -> CliResult<Axis> {
        let spacing = match self.word(&format!("{name}.spacing"))? {
            "log" => Spacing::Log,
            _ => Spacing::Linear,
        };
        let steps = usize::try_from(self.count(&format!("{name}.steps"))?)
            .map_err(|_| CliError::Validation(format!("{name}.steps is too large")))?;
        Axis::new(
            self.real(&format!("{name}.min"))?,
            self.real(&format!("{name}.max"))?,
            steps,
            spacing,
        )
        .map_err(|e| CliError::Validation(format!("axis '{name}': {e}")))
    }
}

struct Entry {
    key: String,
    value: String,
    location: String,
}

fn split_pair(pair: &str, location: String) -> CliResult<Entry> {
    let (k, v) = pair
        .split_once('=')
        .ok_or_else(|| CliError::Validation(format!("{location}: expected key=value, got '{pair}'")))?;
    let key = k.trim();
    if key.is_empty() {
        return Err(CliError::Validation(format!("{location}: empty key")));
    }
    Ok(Entry {
        key: key.to_string(),
        value: v.trim().to_string(),
        location,
    })
}

/// Non-blank, non-comment lines with `origin:line` locations; a key given
/// twice in one file is an error.
fn split_lines(text: &str, origin: &str) -> CliResult<Vec<Entry>> {
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split_once('#').map_or(raw, |(body, _)| body).trim();
        if line.is_empty() {
            continue;
        }
        let entry = split_pair(line, format!("{origin}:{}", i + 1))?;
        if let Some(first) = seen.insert(entry.key.clone(), i + 1) {
            return Err(CliError::Validation(format!(
                "{}: duplicate key '{}' (first on line {first})",
                entry.location, entry.key
            )));
        }
        out.push(entry);
    }
    Ok(out)
}
