use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nmtc::commands::{cmd_compare, cmd_estimate, cmd_optimize, cmd_simulate, cmd_tables, CommandReport, DiffStatus};
use nmtc::config::{Format, Overrides};
use nmtc::RunConfig;

#[derive(Parser)]
#[command(name = "nmtc", version, about = "Narrowband machine-type random access: analysis and simulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// TOML run configuration; defaults apply to anything it omits.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Monte Carlo trials per point.
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Channel classes to evaluate, e.g. `1,4`.
    #[arg(long, global = true, value_delimiter = ',')]
    classes: Option<Vec<u8>>,
    /// System bandwidth W in Hz for the optimizer.
    #[arg(long, global = true)]
    bandwidth: Option<f64>,
    /// Excess-time threshold for the effective bandwidth and penalty.
    #[arg(long, global = true)]
    threshold: Option<f64>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Exit with status 2 when a computed value misses its published one.
    #[arg(long, global = true)]
    strict: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Effective bandwidths, RACH configurations and operating SNRs.
    Tables,
    /// Penalty sweeps behind the optimal channel bandwidth.
    Optimize,
    /// Link-level PER, timing error, access campaigns and battery cost.
    Simulate {
        /// Also search for the shortest TTI meeting the target PER.
        #[arg(long)]
        calibrate: bool,
    },
    /// Frequency and timing estimator error versus SNR and hop separation.
    Estimate,
    /// nMTC versus eMTC access cost and cell capacity.
    Compare,
}

fn run(cli: &Cli) -> nmtc::Result<CommandReport> {
    let c = &cli.common;
    let mut cfg = match &c.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    cfg.apply(&Overrides {
        seed: c.seed,
        trials: c.trials,
        classes: c.classes.clone(),
        bandwidth_hz: c.bandwidth,
        threshold: c.threshold,
        out: c.out.clone(),
        format: c.format,
    })?;
    std::fs::create_dir_all(&cfg.output.out)?;
    match cli.command {
        Command::Tables => cmd_tables(&cfg),
        Command::Optimize => cmd_optimize(&cfg),
        Command::Simulate { calibrate } => {
            cfg.sim.calibrate |= calibrate;
            cmd_simulate(&cfg)
        }
        Command::Estimate => cmd_estimate(&cfg),
        Command::Compare => cmd_compare(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    for f in &report.files {
        println!("wrote {}", f.display());
    }
    for d in report.diffs.iter().filter(|d| d.status == DiffStatus::Mismatch) {
        eprintln!(
            "mismatch: {} computed {} published {}",
            d.item,
            d.computed,
            d.published.unwrap_or(f64::NAN)
        );
    }
    if cli.common.strict && report.mismatches() > 0 {
        return ExitCode::from(2);
    }
    ExitCode::SUCCESS
}
