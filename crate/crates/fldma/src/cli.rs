use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::commands;
use crate::config::Config;
use crate::error::Result;
use crate::output::Format;
use crate::runner::{RayonRunner, WORKERS_ENV};

/// Frequency-offset multi-user downlink simulator.
#[derive(Debug, Parser)]
#[command(name = "fldma", version, about)]
pub struct Cli {
    /// TOML configuration file (defaults are used for missing keys).
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Override a configuration key, e.g. `--set scenario.snr_db=20`.
    #[arg(long = "set", short = 's', global = true, value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    /// Write results here instead of stdout.
    #[arg(long, short = 'o', global = true, value_name = "FILE")]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv", global = true)]
    pub format: Format,
    /// Worker threads for Monte-Carlo trials (0 = one per core).
    #[arg(long, env = WORKERS_ENV, global = true, default_value_t = 0)]
    pub workers: usize,
    /// Shorthand for `--set run.trials=N`.
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// |correlation| between the focus and a distance × angle grid.
    Beampattern,
    /// Ensemble mean/variance of the beam correlation vs closed forms.
    CorrelationStats,
    /// Inter-carrier interference diagnostics per maximum offset ratio.
    IciCheck,
    /// Monte-Carlo spectral efficiency at the configured scenario.
    Simulate,
    /// Monte-Carlo sweep over `[sweep]`.
    Sweep,
    /// Closed-form rate bounds over `[sweep]`.
    Bounds,
    /// Figure preset (fig6a, fig6b, fig7, ..., fig12).
    Preset { name: String },
}

impl Cli {
    pub fn resolve_config(&self) -> Result<Config> {
        let mut overrides = self.overrides.clone();
        if let Some(t) = self.trials {
            overrides.push(format!("run.trials={t}"));
        }
        Config::resolve(self.config.as_deref(), &overrides)
    }
}

pub fn execute(cli: &Cli) -> Result<()> {
    let cfg = cli.resolve_config()?;
    let table = match &cli.command {
        Command::Beampattern => commands::beampattern_cmd(&cfg)?,
        Command::CorrelationStats => commands::correlation_stats_cmd(&cfg)?,
        Command::IciCheck => commands::ici_check_cmd(&cfg)?,
        Command::Bounds => commands::bounds_cmd(&cfg)?,
        Command::Simulate => commands::simulate_cmd(&cfg, &RayonRunner::new(cli.workers)?)?,
        Command::Sweep => commands::sweep_cmd(&cfg, &RayonRunner::new(cli.workers)?)?,
        Command::Preset { name } => commands::preset_cmd(&cfg, name, &RayonRunner::new(cli.workers)?)?,
    };
    let echo = cfg.echo();
    match &cli.output {
        Some(path) => {
            let mut out = BufWriter::new(File::create(path)?);
            table.write(&mut out, cli.format, &echo)?;
            out.flush()?;
        }
        None => table.write(io::stdout().lock(), cli.format, &echo)?,
    }
    Ok(())
}

/// Parses `args` and runs; returns the process exit code. Usage errors map
/// to the configuration code (1).
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("fldma: {e}");
            e.exit_code()
        }
    }
}
