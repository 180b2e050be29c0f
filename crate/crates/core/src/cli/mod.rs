//! Command-line front end.
//!
//! A run is described by a [`RunConfig`]: the experiment, its parameters and
//! the output options. Configs come from flags, from a JSON file passed with
//! `--config`, or both, with flags taking precedence. Every config is
//! validated against its experiment before anything is computed.
//!
//! Exit codes: 0 on success, 2 for usage and validation errors, 1 when a
//! computation or file write fails.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::C64;

mod format;
mod run;
mod svg;

pub use format::{format_sig, render_output};
pub use run::{run, Output, Table1Report};
pub use svg::render_plot;

/// Significant digits used for every number in CSV and table output.
pub const SIG_DIGITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Table1,
    Rotate,
    RotateSweep,
    CollectiveCheck,
    FermionSweep,
    Bell,
    Absorption,
    CoherentRotation,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Self::Table1 => "table1",
            Self::Rotate => "rotate",
            Self::RotateSweep => "rotate-sweep",
            Self::CollectiveCheck => "collective-check",
            Self::FermionSweep => "fermion-sweep",
            Self::Bell => "bell",
            Self::Absorption => "absorption",
            Self::CoherentRotation => "coherent-rotation",
        }
    }

    /// Parameters the experiment accepts, required ones first.
    fn parameter_keys(self) -> (&'static [&'static str], &'static [&'static str]) {
        match self {
            Self::Table1 => (&["n"], &[]),
            Self::Rotate => (&["n"], &["alpha", "beta", "total_time"]),
            Self::RotateSweep => (&["n_list"], &["alpha", "beta", "total_time"]),
            Self::CollectiveCheck => (&["n"], &["alpha", "beta"]),
            Self::FermionSweep => (&["pairs"], &["grid", "refine"]),
            Self::Bell => (&["gamma"], &[]),
            Self::Absorption => (&[], &[]),
            Self::CoherentRotation => (&["eta"], &["alpha", "beta", "cutoff"]),
        }
    }

    /// Whether the experiment produces a series that `--plot` can draw.
    pub fn plottable(self) -> bool {
        matches!(self, Self::RotateSweep | Self::FermionSweep)
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Table,
    Csv,
    Json,
}

impl OutputFormat {
    fn name(self) -> &'static str {
        match self {
            Self::Table => "table",
            Self::Csv => "csv",
            Self::Json => "json",
        }
    }
}

/// A complex number given as `0.6`, `0.8i` or `0.6+0.8i`. In JSON it is a
/// plain number when real and such a string otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexValue(pub C64);

impl FromStr for ComplexValue {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let z = match t.strip_suffix('i') {
            Some(im) if im.is_empty() || im == "+" || im == "-" => C64::from_str(&format!("{im}1i")),
            _ => C64::from_str(t),
        };
        z.map(ComplexValue).map_err(|_| format!("`{s}` is not a number (expected forms: 0.6, 0.8i, 0.6+0.8i)"))
    }
}

impl fmt::Display for ComplexValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let C64 { re, im } = self.0;
        if im == 0.0 {
            write!(f, "{re}")
        } else if im.is_sign_negative() {
            write!(f, "{re}-{}i", -im)
        } else {
            write!(f, "{re}+{im}i")
        }
    }
}

impl Serialize for ComplexValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.im == 0.0 {
            s.serialize_f64(self.0.re)
        } else {
            s.collect_str(self)
        }
    }
}

impl<'de> Deserialize<'de> for ComplexValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(ComplexValue(C64::new(x, 0.0))),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Experiment parameters. Unset values take the experiment's default.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Parameters {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_list: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<ComplexValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<ComplexValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refine: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<ComplexValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub total_time: Option<f64>,
}

impl Parameters {
    fn is_set(&self, key: &str) -> bool {
        match key {
            "n" => self.n.is_some(),
            "n_list" => self.n_list.is_some(),
            "alpha" => self.alpha.is_some(),
            "beta" => self.beta.is_some(),
            "gamma" => self.gamma.is_some(),
            "pairs" => self.pairs.is_some(),
            "grid" => self.grid.is_some(),
            "refine" => self.refine.is_some(),
            "eta" => self.eta.is_some(),
            "cutoff" => self.cutoff.is_some(),
            "total_time" => self.total_time.is_some(),
            _ => false,
        }
    }

    const KEYS: [&'static str; 11] =
        ["n", "n_list", "alpha", "beta", "gamma", "pairs", "grid", "refine", "eta", "cutoff", "total_time"];

    /// Values set in `over` replace those in `self`.
    fn merged(self, over: Parameters) -> Parameters {
        Parameters {
            n: over.n.or(self.n),
            n_list: over.n_list.or(self.n_list),
            alpha: over.alpha.or(self.alpha),
            beta: over.beta.or(self.beta),
            gamma: over.gamma.or(self.gamma),
            pairs: over.pairs.or(self.pairs),
            grid: over.grid.or(self.grid),
            refine: over.refine.or(self.refine),
            eta: over.eta.or(self.eta),
            cutoff: over.cutoff.or(self.cutoff),
            total_time: over.total_time.or(self.total_time),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub format: OutputFormat,
    /// Destination file; standard output when unset.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    /// SVG chart destination.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plot: Option<PathBuf>,
}

/// A fully specified run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: Experiment,
    #[serde(default)]
    pub parameters: Parameters,
    #[serde(default)]
    pub output: OutputSpec,
}

/// Shape of a `--config` document: a [`RunConfig`] in which every field is
/// optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    experiment: Option<Experiment>,
    #[serde(default)]
    parameters: Parameters,
    #[serde(default)]
    output: PartialOutput,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct PartialOutput {
    format: Option<OutputFormat>,
    path: Option<PathBuf>,
    plot: Option<PathBuf>,
}

#[derive(Debug, Parser)]
#[command(name = "modent", version, about = "Mode-entanglement detection experiments")]
struct Args {
    /// Experiment to run.
    #[arg(value_enum)]
    experiment: Option<Experiment>,
    /// Number of ancillas (table1, rotate) or simultaneously coupled modes (collective-check).
    #[arg(long)]
    n: Option<usize>,
    /// Comma-separated ancilla counts for rotate-sweep.
    #[arg(long, value_delimiter = ',')]
    n_list: Option<Vec<usize>>,
    /// Amplitude of |g⟩ in the target's initial state.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<ComplexValue>,
    /// Amplitude of |e⟩ in the target's initial state.
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<ComplexValue>,
    /// Coherence of the target-pair state, in [0, 1].
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<f64>,
    /// Number of ancilla pairs for fermion-sweep.
    #[arg(long)]
    pairs: Option<usize>,
    /// Grid points per angle for fermion-sweep (default 64).
    #[arg(long)]
    grid: Option<usize>,
    /// Refinement rounds for fermion-sweep (default 3).
    #[arg(long)]
    refine: Option<usize>,
    /// Coherent-field amplitude for coherent-rotation.
    #[arg(long, allow_hyphen_values = true)]
    eta: Option<ComplexValue>,
    /// Fock-space cutoff for coherent-rotation (default from |eta|).
    #[arg(long)]
    cutoff: Option<usize>,
    /// Total interaction time over all ancillas, in units of 1/J (default π/4).
    #[arg(long, allow_hyphen_values = true)]
    total_time: Option<f64>,
    /// Output format.
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Write output to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also draw the result series as an SVG chart.
    #[arg(long)]
    plot: Option<PathBuf>,
    /// JSON config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Why a run stopped. [`CliError::exit_code`] maps it to the process status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Help or version output requested; not an error.
    #[error("{0}")]
    Info(String),
    #[error("{0}")]
    Usage(String),
    #[error("computation failed: {0}")]
    Compute(#[from] crate::Error),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Info(_) => 0,
            Self::Usage(_) => 2,
            Self::Compute(_) | Self::Io { .. } => 1,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Builds a validated config from command-line arguments (without the
/// program name) and the text of an optional config document.
pub fn parse_config<S: AsRef<str>>(argv: &[S], config_text: Option<&str>) -> Result<RunConfig, CliError> {
    let args = parse_args(argv)?;
    merge(args, config_text)
}

fn parse_args<S: AsRef<str>>(argv: &[S]) -> Result<Args, CliError> {
    let full = std::iter::once("modent").chain(argv.iter().map(AsRef::as_ref));
    Args::try_parse_from(full).map_err(|e| {
        let text = e.render().to_string();
        if e.exit_code() == 0 {
            CliError::Info(text)
        } else {
            CliError::Usage(text.trim_end().to_owned())
        }
    })
}

fn merge(args: Args, config_text: Option<&str>) -> Result<RunConfig, CliError> {
    let file: ConfigFile = match config_text {
        Some(text) => serde_json::from_str(text).map_err(|e| usage(format!("invalid config: {e}")))?,
        None => ConfigFile::default(),
    };
    let experiment = args
        .experiment
        .or(file.experiment)
        .ok_or_else(|| usage("no experiment given (expected one of table1, rotate, rotate-sweep, collective-check, fermion-sweep, bell, absorption, coherent-rotation)"))?;
    let flags = Parameters {
        n: args.n,
        n_list: args.n_list,
        alpha: args.alpha,
        beta: args.beta,
        gamma: args.gamma,
        pairs: args.pairs,
        grid: args.grid,
        refine: args.refine,
        eta: args.eta,
        cutoff: args.cutoff,
        total_time: args.total_time,
    };
    let config = RunConfig {
        experiment,
        parameters: file.parameters.merged(flags),
        output: OutputSpec {
            format: args.format.or(file.output.format).unwrap_or_default(),
            path: args.out.or(file.output.path),
            plot: args.plot.or(file.output.plot),
        },
    };
    validate(&config)?;
    Ok(config)
}

/// Reads `--config` (if present) and builds the validated config.
pub fn parse_command_line<S: AsRef<str>>(argv: &[S]) -> Result<RunConfig, CliError> {
    let args = parse_args(argv)?;
    let text = match &args.config {
        Some(path) => Some(
            std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?,
        ),
        None => None,
    };
    merge(args, text.as_deref())
}

/// Largest ancilla count accepted by the rotation experiments.
pub const MAX_ANCILLAS: usize = 10_000_000;
/// Largest number of entries in `n_list`.
pub const MAX_SWEEP_POINTS: usize = 1000;

fn out_of_range(key: &str, value: impl fmt::Display, range: &str) -> CliError {
    usage(format!("{key} out of range {range}, got {value}"))
}

fn check_count(key: &str, v: usize, lo: usize, hi: usize) -> Result<(), CliError> {
    if v < lo || v > hi {
        return Err(out_of_range(key, v, &format!("[{lo},{hi}]")));
    }
    Ok(())
}

/// Checks that the parameters fit the experiment: required ones present,
/// inapplicable ones absent and every value in range.
pub fn validate(config: &RunConfig) -> Result<(), CliError> {
    let exp = config.experiment;
    let p = &config.parameters;
    let (required, optional) = exp.parameter_keys();
    for key in required {
        if !p.is_set(key) {
            return Err(usage(format!("missing required parameter `{key}` for experiment `{exp}`")));
        }
    }
    for key in Parameters::KEYS {
        if p.is_set(key) && !required.contains(&key) && !optional.contains(&key) {
            return Err(usage(format!("parameter `{key}` does not apply to experiment `{exp}`")));
        }
    }
    if config.output.plot.is_some() && !exp.plottable() {
        return Err(usage(format!("--plot needs an experiment with a series (rotate-sweep, fermion-sweep), got `{exp}`")));
    }

    if let Some(n) = p.n {
        let hi = if exp == Experiment::CollectiveCheck { crate::protocols::MAX_SIMULTANEOUS_MODES } else { MAX_ANCILLAS };
        check_count("n", n, 1, hi)?;
    }
    if let Some(list) = &p.n_list {
        if list.is_empty() || list.len() > MAX_SWEEP_POINTS {
            return Err(out_of_range("n_list length", list.len(), &format!("[1,{MAX_SWEEP_POINTS}]")));
        }
        for &n in list {
            check_count("n_list entry", n, 1, MAX_ANCILLAS)?;
        }
    }
    if p.alpha.is_some() || p.beta.is_some() {
        let (a, b) = amplitudes(p);
        let norm2 = a.norm_sqr() + b.norm_sqr();
        if !norm2.is_finite() || (norm2 - 1.0).abs() > 1e-12 {
            return Err(usage(format!("alpha and beta must satisfy |alpha|^2 + |beta|^2 = 1 within 1e-12, got {norm2}")));
        }
    }
    if let Some(g) = p.gamma {
        if !(0.0..=1.0).contains(&g) {
            return Err(out_of_range("gamma", g, "[0,1]"));
        }
    }
    if let Some(pairs) = p.pairs {
        check_count("pairs", pairs, 1, crate::protocols::MAX_PAIRS)?;
        if config.output.plot.is_some() && pairs > 2 {
            return Err(usage("--plot draws one or two angles; use pairs 1 or 2"));
        }
    }
    if let Some(grid) = p.grid {
        check_count("grid", grid, 8, 4096)?;
    }
    if let Some(refine) = p.refine {
        check_count("refine", refine, 0, 60)?;
    }
    let pairs = p.pairs.unwrap_or(1);
    let grid = p.grid.unwrap_or(DEFAULT_GRID);
    if exp == Experiment::FermionSweep {
        let cells = (grid as f64).powi(pairs as i32);
        if cells > crate::protocols::MAX_GRID_CELLS as f64 {
            return Err(usage(format!(
                "grid^pairs = {grid}^{pairs} exceeds {} cells",
                crate::protocols::MAX_GRID_CELLS
            )));
        }
    }
    if let Some(eta) = p.eta {
        if !(eta.0.re.is_finite() && eta.0.im.is_finite()) || eta.0.norm() > 100.0 {
            return Err(out_of_range("|eta|", eta.0.norm(), "[0,100]"));
        }
    }
    if let Some(c) = p.cutoff {
        check_count("cutoff", c, 1, 20_000)?;
    }
    if let Some(t) = p.total_time {
        if !(t.is_finite() && t >= 0.0) {
            return Err(out_of_range("total_time", t, "[0,inf)"));
        }
    }
    Ok(())
}

pub(crate) const DEFAULT_GRID: usize = 64;
pub(crate) const DEFAULT_REFINE: usize = 3;

pub(crate) fn amplitudes(p: &Parameters) -> (C64, C64) {
    (
        p.alpha.map_or(C64::new(1.0, 0.0), |z| z.0),
        p.beta.map_or(C64::new(0.0, 0.0), |z| z.0),
    )
}

/// Command-line arguments (without program name) that reproduce `config`.
pub fn render(config: &RunConfig) -> Vec<String> {
    let mut argv = vec![config.experiment.name().to_owned()];
    let mut push = |flag: &str, value: String| {
        argv.push(format!("--{flag}"));
        argv.push(value);
    };
    let p = &config.parameters;
    if let Some(v) = p.n {
        push("n", v.to_string());
    }
    if let Some(v) = &p.n_list {
        push("n-list", v.iter().map(ToString::to_string).collect::<Vec<_>>().join(","));
    }
    if let Some(v) = p.alpha {
        push("alpha", v.to_string());
    }
    if let Some(v) = p.beta {
        push("beta", v.to_string());
    }
    if let Some(v) = p.gamma {
        push("gamma", v.to_string());
    }
    if let Some(v) = p.pairs {
        push("pairs", v.to_string());
    }
    if let Some(v) = p.grid {
        push("grid", v.to_string());
    }
    if let Some(v) = p.refine {
        push("refine", v.to_string());
    }
    if let Some(v) = p.eta {
        push("eta", v.to_string());
    }
    if let Some(v) = p.cutoff {
        push("cutoff", v.to_string());
    }
    if let Some(v) = p.total_time {
        push("total-time", v.to_string());
    }
    push("format", config.output.format.name().to_owned());
    if let Some(v) = &config.output.path {
        push("out", v.display().to_string());
    }
    if let Some(v) = &config.output.plot {
        push("plot", v.display().to_string());
    }
    argv
}

/// Writes `contents` next to `path` under a `.partial` name, then renames it
/// into place. The partial file is removed if anything fails.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let mut partial = path.as_os_str().to_owned();
    partial.push(".partial");
    let partial = PathBuf::from(partial);
    let io_err = |source| CliError::Io { path: path.to_owned(), source };
    let result = std::fs::write(&partial, contents).and_then(|()| std::fs::rename(&partial, path));
    if let Err(e) = result {
        let _ = std::fs::remove_file(&partial);
        return Err(io_err(e));
    }
    Ok(())
}

/// Runs a config and writes its output and optional plot.
pub fn execute(config: &RunConfig) -> Result<(), CliError> {
    let output = run(config)?;
    let text = render_output(&output, config.output.format);
    let plot = match &config.output.plot {
        Some(_) => Some(render_plot(&output).ok_or_else(|| usage("this result has no plottable series"))?),
        None => None,
    };
    match &config.output.path {
        Some(path) => write_atomic(path, text.as_bytes())?,
        None => print!("{text}"),
    }
    if let (Some(path), Some(svg)) = (&config.output.plot, plot) {
        write_atomic(path, svg.as_bytes())?;
    }
    Ok(())
}

/// Entry point used by the binary. Returns the process exit code.
pub fn main_with_args<S: AsRef<str>>(argv: &[S]) -> i32 {
    match parse_command_line(argv).and_then(|c| execute(&c)) {
        Ok(()) => 0,
        Err(CliError::Info(text)) => {
            print!("{text}");
            0
        }
        Err(e) => {
            eprintln!("modent: {e}");
            e.exit_code()
        }
    }
}
