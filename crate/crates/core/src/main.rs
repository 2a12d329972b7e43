//! Command-line driver.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rmhd::cli::{self, RunConfig, EXIT_CONFIG_ERROR};
use rmhd::error::Error;

#[derive(Parser)]
#[command(name = "rmhd", about = "Radial compressible MHD solver with breakdown diagnostics")]
struct Args {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Integrate a scenario and emit the diagnostics CSV.
    Run {
        /// Config file (sectioned key = value text).
        config: PathBuf,
        /// CSV output path; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Override the monitoring exponent alpha in (1, 2).
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Print the breakdown-bound table (alpha, K, divu_lower, T_max).
    Bound {
        config: PathBuf,
        /// Extra alpha row to include.
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Run the linearized successive-approximation chain.
    Picard {
        config: PathBuf,
        /// Density regularization added to rho0.
        #[arg(long, default_value_t = 1e-3)]
        delta: f64,
        /// Maximum number of iterates.
        #[arg(long, default_value_t = 20)]
        iters: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Manufactured-solution convergence study.
    Verify {
        config: PathBuf,
        /// Number of grid levels (doubling from the config's n).
        #[arg(long, default_value_t = 3)]
        levels: usize,
    },
    /// Print the balance-compatible initial velocity profile.
    U0 {
        config: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn load_config(path: &PathBuf) -> Result<RunConfig, Error> {
    let text = std::fs::read_to_string(path)?;
    cli::parse_config(&text)
}

fn with_output(
    output: Option<&PathBuf>,
    f: impl FnOnce(&mut dyn std::io::Write) -> Result<(), Error>,
) -> Result<(), Error> {
    match output {
        Some(path) => {
            let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
            f(&mut file)
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            f(&mut lock)
        }
    }
}

fn dispatch(args: Args) -> Result<i32, Error> {
    match args.cmd {
        Cmd::Run { config, output, alpha } => {
            let cfg = load_config(&config)?;
            let reason = cli::cmd_run(&cfg, alpha, output.as_deref())?;
            Ok(cli::exit_code(&reason))
        }
        Cmd::Bound { config, alpha } => {
            let cfg = load_config(&config)?;
            with_output(None, |out| cli::cmd_bound(&cfg, alpha, out))?;
            Ok(0)
        }
        Cmd::Picard { config, delta, iters, output } => {
            let cfg = load_config(&config)?;
            with_output(output.as_ref(), |out| cli::cmd_picard(&cfg, delta, iters, out))?;
            Ok(0)
        }
        Cmd::Verify { config, levels } => {
            let cfg = load_config(&config)?;
            with_output(None, |out| cli::cmd_verify(&cfg, levels, out))?;
            Ok(0)
        }
        Cmd::U0 { config, output } => {
            let cfg = load_config(&config)?;
            with_output(output.as_ref(), |out| cli::cmd_u0(&cfg, out))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match dispatch(args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err}");
            let code = match err {
                Error::Config { .. } | Error::InvalidParams(_) | Error::InvalidProfile(_)
                | Error::Io(_) => EXIT_CONFIG_ERROR,
                _ => 4,
            };
            ExitCode::from(code as u8)
        }
    }
}
