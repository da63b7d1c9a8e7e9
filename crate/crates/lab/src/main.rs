use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use ontic_core::checks::DEFAULT_MC_TOL;
use ontic_core::integrate::quadrature::{DEFAULT_N_AZIMUTH, DEFAULT_N_POLAR};
use ontic_core::integrate::DEFAULT_SAMPLES;
use ontic_lab::config::{ConfigError, DEFAULT_SEED};
use ontic_lab::{emit_report, run, OutputFormat, RunConfig};

/// Run verification checks on a qubit ontological model.
///
/// Exit status: 0 when every verdict matches the expected pattern for the
/// model, 1 when some verdict does not, 2 on configuration or file errors.
#[derive(Debug, Parser)]
#[command(name = "ontic-lab", version)]
struct Cli {
    /// ks, bell-mermin, constant-half or label-reading
    #[arg(long)]
    model: String,
    /// born, determinism, measurement-nc, max-epistemic, ontology, prep-nc,
    /// omega, nonlocality or audit; repeat for several (default: all)
    #[arg(long = "check")]
    checks: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Monte Carlo tolerance
    #[arg(long, default_value_t = DEFAULT_MC_TOL)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_N_POLAR)]
    quad_polar: usize,
    #[arg(long, default_value_t = DEFAULT_N_AZIMUTH)]
    quad_azimuth: usize,
    /// JSON state catalog (default: the six axis states)
    #[arg(long)]
    catalog: Option<PathBuf>,
    /// json, csv or text
    #[arg(long, default_value = "json")]
    format: String,
}

impl Cli {
    fn into_config(self) -> Result<RunConfig, ConfigError> {
        Ok(RunConfig {
            model_name: self.model,
            check_names: self.checks,
            samples: self.samples,
            seed: self.seed,
            tolerance: self.tol,
            quad_polar: self.quad_polar,
            quad_azimuth: self.quad_azimuth,
            catalog_path: self.catalog,
            output_format: OutputFormat::from_name(&self.format)?,
        })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match cli.into_config() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match run(&config) {
        Ok(outcome) => {
            print!("{}", emit_report(&outcome.reports, config.output_format));
            for m in &outcome.mismatches {
                eprintln!("unexpected verdict: {m}");
            }
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
