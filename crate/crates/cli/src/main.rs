use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use secjam::battery::geo_geo1_steady_state;
use secjam_cli::sweep::emit;
use secjam_cli::{run_sweep, run_validate, CliError, ExperimentConfig};

#[derive(Parser)]
#[command(name = "secjam", version, about = "Secrecy-rate simulator for an energy-harvesting source with a cooperative jammer")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate the average secrecy rate over a parameter sweep and write CSV.
    Sweep(SweepArgs),
    /// Run the self-check suites; exits nonzero if any fails.
    Validate {
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Print the stationary battery-level distribution as CSV.
    SteadyState {
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        mu: f64,
        #[arg(long)]
        cap: u32,
    },
}

#[derive(Args)]
struct SweepArgs {
    /// Flat key = value config file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    slots: Option<String>,
    #[arg(long)]
    k: Option<String>,
    #[arg(long = "lambda-a")]
    lambda_a: Option<String>,
    #[arg(long = "lambda-j")]
    lambda_j: Option<String>,
    #[arg(long = "snr-db")]
    snr_db: Option<String>,
    #[arg(long = "cap-a")]
    cap_a: Option<String>,
    #[arg(long = "cap-j")]
    cap_j: Option<String>,
    /// optimized_alpha or fixed_alpha_1
    #[arg(long)]
    mode: Option<String>,
    /// Output CSV path (stdout if omitted).
    #[arg(long)]
    out: Option<String>,
    /// lambda_j, lambda_a or k_active
    #[arg(long)]
    sweep: Option<String>,
    /// Comma list `a,b,c` or inclusive range `start:stop:step`.
    #[arg(long)]
    values: Option<String>,
}

impl SweepArgs {
    fn overrides(&self) -> Vec<(&'static str, &String)> {
        [
            ("seed", &self.seed),
            ("slots", &self.slots),
            ("k", &self.k),
            ("lambda_a", &self.lambda_a),
            ("lambda_j", &self.lambda_j),
            ("snr_db", &self.snr_db),
            ("cap_a", &self.cap_a),
            ("cap_j", &self.cap_j),
            ("mode", &self.mode),
            ("out", &self.out),
            ("sweep", &self.sweep),
            ("values", &self.values),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.as_ref().map(|v| (k, v)))
        .collect()
    }

    fn into_config(self) -> Result<ExperimentConfig, CliError> {
        let mut cfg = ExperimentConfig::default();
        if let Some(path) = &self.config {
            cfg.merge_file(path)?;
        }
        for (key, value) in self.overrides() {
            cfg.set(key, value)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn steady_state(lambda: f64, mu: f64, cap: u32) -> Result<(), CliError> {
    let chain = geo_geo1_steady_state(lambda, mu, cap)?;
    let mut out = std::io::stdout().lock();
    let io_err = |source| CliError::Io {
        path: "<stdout>".into(),
        source,
    };
    writeln!(out, "level,probability").map_err(io_err)?;
    for (level, p) in chain.steady.iter().enumerate() {
        writeln!(out, "{level},{p:.16e}").map_err(io_err)?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Sweep(args) => {
            let cfg = args.into_config()?;
            let rows = run_sweep(&cfg)?;
            emit(&cfg, &rows)?;
            Ok(true)
        }
        Command::Validate { seed } => {
            let report = run_validate(seed);
            println!("{report}");
            Ok(report.all_passed())
        }
        Command::SteadyState { lambda, mu, cap } => {
            steady_state(lambda, mu, cap)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
