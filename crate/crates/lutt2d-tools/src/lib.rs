//! Command-line driver for `lutt2d-core`: reads a flat key-value config,
//! runs one command and writes plot-ready CSV or JSON.
//!
//! Exit codes: 0 on success, 1 when a verification suite fails, 2 on an
//! invalid config, bad usage or an operation outside its domain.

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use commands::{Output, Suite};
use config::{ConfigError, RawConfig, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    #[value(name = "appendixA")]
    AppendixA,
    Bosonization,
    Pauli,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RealspaceMode {
    /// `f_γ(φ, x)` on a log grid in x.
    F,
    /// `v_eff(τ, x)` on a square grid in diagonal coordinates.
    Veff,
}

#[derive(Debug, Parser)]
#[command(name = "lutt2d", version, about = "2D Luttinger model from the t-t'-V lattice model")]
struct Cli {
    /// Config file with key=value lines.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Override one config key; repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Write to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Output format; tables default to csv, reports to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Derived couplings, chemical potentials and the validity check.
    Params,
    /// Fermi contour at the configured mu.
    FermiSurface,
    /// Region label of every Brillouin-zone grid point.
    Partition,
    /// Classified interaction vertices.
    Vertices {
        /// Run the classification at Q = pi/2 as well.
        #[arg(long)]
        allow_half_pi: bool,
    },
    /// Nodal boson dispersion.
    Dispersion,
    /// Nodal free energy and ground-state energy.
    FreeEnergy,
    /// Induced antinodal potential in momentum space.
    Veff,
    /// Real-space form of the induced potential.
    Realspace {
        #[arg(long, value_enum, default_value = "f")]
        mode: RealspaceMode,
    },
    /// Operator-identity suites on finite Fock spaces.
    Verify {
        #[arg(long, value_enum)]
        suite: SuiteArg,
    },
    /// List config keys with defaults.
    Keys,
}

/// Rayon pool sized by `LUTT2D_THREADS` when set.
pub fn thread_pool() -> Result<rayon::ThreadPool, ConfigError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(s) = std::env::var("LUTT2D_THREADS") {
        match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => b = b.num_threads(n),
            _ => return Err(ConfigError(format!("LUTT2D_THREADS must be a positive integer (got '{s}')"))),
        }
    }
    b.build().map_err(|e| ConfigError(format!("cannot start worker threads: {e}")))
}

fn load(cli: &Cli) -> Result<RunConfig, ConfigError> {
    let mut raw = RawConfig::defaults();
    if let Some(path) = &cli.config {
        raw.apply_file(path)?;
    }
    for kv in &cli.set {
        raw.apply_override(kv)?;
    }
    RunConfig::from_raw(&raw)
}

fn keys_table() -> output::Table {
    let mut t = output::Table::new(vec!["key", "default", "description"]);
    for (k, v, d) in config::KEYS {
        t.push(vec![(*k).into(), (*v).into(), (*d).into()]);
    }
    t
}

fn execute(cli: &Cli) -> Result<Output, ConfigError> {
    if let Command::Keys = cli.command {
        return Ok(Output::Table(keys_table()));
    }
    let c = load(cli)?;
    let pool = thread_pool()?;
    match &cli.command {
        Command::Params => commands::params(&c),
        Command::FermiSurface => commands::fermi_surface(&c),
        Command::Partition => commands::partition(&c),
        Command::Vertices { allow_half_pi } => commands::vertices(&c, *allow_half_pi),
        Command::Dispersion => commands::dispersion(&c, &pool),
        Command::FreeEnergy => commands::free_energy_cmd(&c),
        Command::Veff => commands::veff(&c, &pool),
        Command::Realspace { mode: RealspaceMode::F } => commands::realspace_f(&c, &pool),
        Command::Realspace { mode: RealspaceMode::Veff } => commands::realspace_veff(&c, &pool),
        Command::Verify { suite } => {
            let s = match suite {
                SuiteArg::AppendixA => Suite::AppendixA,
                SuiteArg::Bosonization => Suite::Bosonization,
                SuiteArg::Pauli => Suite::Pauli,
            };
            pool.install(|| commands::verify(s, &c))
        }
        Command::Keys => unreachable!(),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Params => "params",
        Command::FermiSurface => "fermi-surface",
        Command::Partition => "partition",
        Command::Vertices { .. } => "vertices",
        Command::Dispersion => "dispersion",
        Command::FreeEnergy => "free-energy",
        Command::Veff => "veff",
        Command::Realspace { .. } => "realspace",
        Command::Verify { .. } => "verify",
        Command::Keys => "keys",
    }
}

fn emit(out: &Output, cli: &Cli, w: &mut dyn Write) -> Result<(), ConfigError> {
    let io = |e: std::io::Error| ConfigError(format!("write failed: {e}"));
    match (out, cli.format) {
        (Output::Table(t), None | Some(Format::Csv)) => t.write_csv(w).map_err(io),
        (Output::Table(t), Some(Format::Json)) => output::write_json(&t.to_json(command_name(&cli.command)), w).map_err(io),
        (Output::Json { doc, .. }, None | Some(Format::Json)) => output::write_json(doc, w).map_err(io),
        (Output::Json { .. }, Some(Format::Csv)) => {
            Err(ConfigError(format!("'{}' writes a JSON report; csv is not available", command_name(&cli.command))))
        }
    }
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = execute(&cli).and_then(|out| {
        match &cli.out {
            Some(path) => {
                let mut buf = Vec::new();
                emit(&out, &cli, &mut buf)?;
                std::fs::write(path, buf).map_err(|e| ConfigError(format!("cannot write {}: {e}", path.display())))?;
            }
            None => emit(&out, &cli, stdout)?,
        }
        Ok(out)
    });
    match result {
        Ok(Output::Json { verified: Some(false), .. }) => {
            let _ = writeln!(stderr, "lutt2d: verification failed");
            EXIT_VERIFY_FAILED
        }
        Ok(_) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "lutt2d: {e}");
            EXIT_INVALID
        }
    }
}
