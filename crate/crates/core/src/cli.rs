//! Command-line front end.
//!
//! Exit codes: 0 success, 1 failed verification, 2 bad configuration or
//! arguments, 3 numerical failure.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::config::{Config, Spacing, SweepSpec, SweepVariable};
use crate::detection::DetectorContext;
use crate::error::CipcError;
use crate::figures::{render, Figure};
use crate::mc::McConfig;
use crate::sweep::{detection_rows, ect_rows, write_detection_csv, write_ect_csv};
use crate::verify::{self, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "cipc", version, about = "Covert throughput analytics for channel inversion power control")]
pub struct Cli {
    /// Worker threads (defaults to the number of CPUs). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// False alarm, miss detection and total error against the threshold.
    DetectionCurve {
        #[arg(long)]
        config: PathBuf,
        /// Willie's channel gain from Bob.
        #[arg(long, default_value_t = 1.0)]
        g_bw: f64,
        /// Threshold sweep, `tau:START:STOP:POINTS:SPACING`. Defaults to 201
        /// points from 0 to twice the optimal threshold.
        #[arg(long)]
        sweep: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Add Monte Carlo columns.
        #[arg(long)]
        mc: bool,
        #[arg(long, default_value_t = 100_000)]
        draws: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Optimized throughput over a sweep of one configuration value.
    EctSweep {
        #[arg(long)]
        config: PathBuf,
        /// `p_b_max_db|p_a_max_db|epsilon:START:STOP:POINTS:SPACING`.
        #[arg(long)]
        sweep: String,
        /// Also optimize the rate instead of using the configured one.
        #[arg(long)]
        optimize_rate: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare every closed form with the Monte Carlo oracle.
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        draws: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        g_bw: f64,
        /// Scale λ_bb on the analytic side by this factor.
        #[arg(long)]
        corrupt_lambda_bb: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Regenerate a reference figure dataset.
    Figure {
        /// fig3, fig4, fig5, fig6 or fig7.
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum Failure {
    Config(String),
    Numeric(CipcError),
    Verify,
}

impl From<CipcError> for Failure {
    fn from(e: CipcError) -> Self {
        if e.is_config_error() {
            Failure::Config(e.to_string())
        } else {
            Failure::Numeric(e)
        }
    }
}

/// Parses the arguments and runs the command. Returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match execute(cli) {
        Ok(()) => EXIT_OK,
        Err(Failure::Verify) => EXIT_VERIFY_FAILED,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            EXIT_CONFIG
        }
        Err(Failure::Numeric(e)) => {
            eprintln!("error: {e}");
            EXIT_NUMERIC
        }
    }
}

fn execute(cli: Cli) -> Result<(), Failure> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::Config("--threads must be at least 1".into()));
        }
        // Only the first pool request in a process takes effect; results are
        // independent of the thread count either way.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match cli.command {
        Command::DetectionCurve { config, g_bw, sweep, out, mc, draws, seed } => {
            let config = load_config(&config)?;
            let taus = match sweep {
                Some(s) => {
                    let spec: SweepSpec = s.parse()?;
                    if spec.variable != SweepVariable::Tau {
                        return Err(Failure::Config("detection-curve sweeps must range over tau".into()));
                    }
                    spec.values()
                }
                None => {
                    let nu = DetectorContext::new(g_bw, &config.scheme, &config.system)?.nu;
                    SweepSpec::new(SweepVariable::Tau, 0.0, 2.0 * nu, 201, Spacing::Linear)?.values()
                }
            };
            let mc = mc.then(|| McConfig::new(seed, draws));
            let rows = detection_rows(&config, g_bw, &taus, mc.as_ref())?;
            let mut buf = Vec::new();
            write_detection_csv(&mut buf, &rows).map_err(io_failure)?;
            emit(out.as_deref(), &buf)
        }
        Command::EctSweep { config, sweep, optimize_rate, out } => {
            let config = load_config(&config)?;
            let spec: SweepSpec = sweep.parse()?;
            let rows = ect_rows(&config, &spec, optimize_rate, None)?;
            let mut buf = Vec::new();
            write_ect_csv(&mut buf, &rows, false).map_err(io_failure)?;
            emit(out.as_deref(), &buf)
        }
        Command::Verify { config, draws, seed, g_bw, corrupt_lambda_bb, out } => {
            let config = load_config(&config)?;
            if draws == 0 {
                return Err(Failure::Config("--draws must be at least 1".into()));
            }
            let report = verify::run(&config, &VerifyOptions { draws, seed, g_bw, corrupt_lambda_bb })?;
            emit(out.as_deref(), report.to_string().as_bytes())?;
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Verify)
            }
        }
        Command::Figure { name, out } => {
            let figure: Figure = name.parse()?;
            emit(out.as_deref(), render(figure)?.as_bytes())
        }
    }
}

fn load_config(path: &Path) -> Result<Config, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))?;
    text.parse::<Config>().map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
}

fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|e| Failure::Config(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(bytes).and_then(|_| stdout.flush()).map_err(io_failure)
        }
    }
}

fn io_failure(e: io::Error) -> Failure {
    Failure::Config(format!("output error: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn argument_errors_are_config_errors() {
        assert_eq!(run(["cipc", "no-such-command"]), EXIT_CONFIG);
        assert_eq!(run(["cipc", "figure", "fig9"]), EXIT_CONFIG);
        assert_eq!(run(["cipc", "verify", "--config", "/nonexistent/cipc.conf"]), EXIT_CONFIG);
    }

    #[test]
    fn command_tree_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
