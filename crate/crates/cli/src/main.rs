use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use ouselect::risklab::SigmaChoice;
use ouselect_cli::{run, Command, ExperimentConfig, FamilyKind, Overrides, Rho};

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum SigmaFlag {
    Known,
    Estimated,
}

/// Simulate, estimate and audit the adaptive Pinsker-weight selector.
#[derive(Debug, Parser)]
#[command(name = "ouselect", version)]
struct Args {
    /// Subcommand; may instead be set by `command` in the config file.
    #[arg(value_enum)]
    command: Option<Command>,
    /// TOML config, or a manifest.json from an earlier run.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    replicates: Option<usize>,
    /// Comma-separated horizons.
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    /// Penalty value or `auto` for the schedule.
    #[arg(long)]
    rho: Option<Rho>,
    #[arg(long, value_enum)]
    sigma: Option<SigmaFlag>,
    #[arg(long, value_enum)]
    family: Option<FamilyKind>,
    /// Catalogue signal name.
    #[arg(long)]
    signal: Option<String>,
    /// Simulation grid step, 1/m.
    #[arg(long)]
    dt: Option<f64>,
    /// Observation CSV for `estimate`.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Run replicate loops on one thread.
    #[arg(long)]
    sequential: bool,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse();
    let mut config = match &args.config {
        Some(path) => match ExperimentConfig::load(path) {
            Ok(c) => c,
            Err(e) => return fail(&e),
        },
        None => ExperimentConfig::default(),
    };
    config.apply(Overrides {
        command: args.command,
        seed: args.seed,
        out: args.out,
        replicates: args.replicates,
        n: args.n,
        rho: args.rho,
        sigma: args.sigma.map(|s| match s {
            SigmaFlag::Known => SigmaChoice::Known,
            SigmaFlag::Estimated => SigmaChoice::Estimated,
        }),
        family: args.family,
        signal: args.signal,
        dt: args.dt,
        input: args.input,
        sequential: args.sequential,
    });
    match run(&config) {
        Ok(report) => {
            print!("{}", report.summary);
            println!("\nartifacts written to {}", report.out.display());
            if !report.passed() {
                eprintln!("audit failed");
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => fail(&e),
    }
}

fn fail(e: &ouselect_cli::CliError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}
