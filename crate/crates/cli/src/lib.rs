//! Command-line front end for the bi-photon holonomy library: parameter
//! sweeps with oracle check columns, chart-trajectory export, pump-spectrum
//! tables, and the self-check battery — all emitted as deterministic CSV
//! with a JSON metadata sidecar.
//!
//! Angles are radians everywhere; flags and spec fields with a `_deg`
//! suffix accept degrees and are converted on input. Exit codes: 0 on
//! success, 1 when `verify` finds a failing check, 2 on usage or
//! configuration errors.

pub mod dataset;
pub mod spec;

use clap::{Args, Parser, Subcommand};
use std::path::{Path, PathBuf};
use thiserror::Error;

use biphoton_core::biphoton::EntanglementParams;
use biphoton_core::circuit::{transit, Circuit, DEFAULT_LENS_SAMPLES, STANDARD_PRESET};
use biphoton_core::modes::SpherePoint;
use biphoton_core::pump::{DEFAULT_WINDOW, MAX_WINDOW};
use biphoton_core::verify::run_all;

use dataset::{spectrum_dataset, sweep_dataset, trajectory_dataset, Dataset, Sidecar};
use spec::{resolve, ConfigError, SweepSpec};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Circuit(#[from] biphoton_core::circuit::CircuitError),
    #[error(transparent)]
    Pump(#[from] biphoton_core::pump::PumpError),
    #[error("{0}")]
    Usage(String),
}

#[derive(Debug, Parser)]
#[command(
    name = "biphoton",
    version,
    about = "Geometric phases of entangled photon pairs in misoriented mode-converter circuits: \
             parameter sweeps, trajectory export, pump spectra, and self-checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a quantity over a parameter grid described by a JSON spec
    /// file; every row pairs the simulated value with its oracle.
    Sweep(SweepArgs),
    /// Export the chart trajectory and accumulated phases of one circuit
    /// transit, one row per path sample.
    Trajectory(TrajectoryArgs),
    /// Engineer the pump for a target entangled pair and print its
    /// two-photon orbital-angular-momentum spectrum.
    Spectrum(SpectrumArgs),
    /// Run the oracle/invariant self-check battery and print a pass/fail
    /// table; exits 0 only if every check passes.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Path to the sweep spec JSON file.
    spec: PathBuf,
    /// Maximum concurrent grid points (0 = one per core). Defaults to the
    /// BIPHOTON_JOBS environment variable when the flag is absent.
    #[arg(long)]
    jobs: Option<usize>,
    /// Write CSV here (plus a `<path>.meta.json` sidecar) instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct TrajectoryArgs {
    /// Circuit preset name (`two-pi-converters`).
    #[arg(long, conflicts_with = "circuit")]
    preset: Option<String>,
    /// Path to a circuit description JSON file (ordered element list).
    #[arg(long)]
    circuit: Option<PathBuf>,
    /// Preset misorientation η in radians.
    #[arg(long, conflicts_with = "eta_deg")]
    eta: Option<f64>,
    /// Preset misorientation η in degrees.
    #[arg(long)]
    eta_deg: Option<f64>,
    /// Initial polar angle θ_i in radians.
    #[arg(long, conflicts_with = "theta_i_deg")]
    theta_i: Option<f64>,
    /// Initial polar angle θ_i in degrees.
    #[arg(long)]
    theta_i_deg: Option<f64>,
    /// Path samples per lens (preset circuits; files set their own).
    #[arg(long, default_value_t = DEFAULT_LENS_SAMPLES)]
    samples: usize,
    /// Write CSV here (plus a `<path>.meta.json` sidecar) instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    /// Entanglement strength α in radians.
    #[arg(long, conflicts_with = "alpha_deg")]
    alpha: Option<f64>,
    /// Entanglement strength α in degrees.
    #[arg(long)]
    alpha_deg: Option<f64>,
    /// Schmidt phase β in radians.
    #[arg(long, conflicts_with = "beta_deg")]
    beta: Option<f64>,
    /// Schmidt phase β in degrees.
    #[arg(long)]
    beta_deg: Option<f64>,
    /// Initial polar angle θ_i in radians.
    #[arg(long, conflicts_with = "theta_i_deg")]
    theta_i: Option<f64>,
    /// Initial polar angle θ_i in degrees.
    #[arg(long)]
    theta_i_deg: Option<f64>,
    /// Largest |ℓ| retained per photon.
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    window: u32,
    /// Write CSV here (plus a `<path>.meta.json` sidecar) instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Relax every check's tolerance to at least this floor.
    #[arg(long)]
    tol: Option<f64>,
}

/// Parse arguments from the process environment and execute; returns the
/// process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            2
        }
    }
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Sweep(args) => run_sweep(args),
        Command::Trajectory(args) => run_trajectory(args),
        Command::Spectrum(args) => run_spectrum(args),
        Command::Verify(args) => Ok(run_verify(&args)),
    }
}

fn run_sweep(args: SweepArgs) -> Result<i32, CliError> {
    let text = read_file(&args.spec)?;
    let parsed: SweepSpec = serde_json::from_str(&text).map_err(ConfigError::from)?;
    let sweep = resolve(parsed)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(resolve_jobs(args.jobs)?)
        .build()
        .map_err(|e| CliError::Usage(format!("could not build worker pool: {e}")))?;
    let data = pool.install(|| sweep_dataset(&sweep))?;
    let echo = serde_json::to_value(&sweep.spec).expect("sweep spec re-serializes");
    emit(&data, args.out.as_deref(), sweep.spec.output.as_str(), echo)?;
    Ok(0)
}

fn run_trajectory(args: TrajectoryArgs) -> Result<i32, CliError> {
    let theta_i = angle_arg("theta-i", args.theta_i, args.theta_i_deg)?;
    let eta = optional_angle(args.eta, args.eta_deg);
    let circuit = match (&args.preset, &args.circuit) {
        (Some(name), None) => {
            if name != STANDARD_PRESET {
                return Err(CliError::Usage(format!(
                    "unknown preset '{name}' (expected '{STANDARD_PRESET}')"
                )));
            }
            let eta = eta.ok_or_else(|| {
                CliError::Usage("preset circuits need --eta (or --eta-deg)".to_string())
            })?;
            Circuit::standard(eta, args.samples)
        }
        (None, Some(path)) => {
            if eta.is_some() {
                return Err(CliError::Usage(
                    "--eta configures --preset; circuit files carry their own angles".to_string(),
                ));
            }
            Circuit::from_json(&read_file(path)?)?
        }
        (None, None) => {
            return Err(CliError::Usage("give either --preset or --circuit".to_string()))
        }
        (Some(_), Some(_)) => unreachable!("clap rejects --preset with --circuit"),
    };
    let record = transit(&circuit, &SpherePoint::new(theta_i, 0.0, 0.0))?;
    let data = trajectory_dataset(&record);
    let echo = serde_json::json!({
        "preset": args.preset,
        "circuit": args.circuit.as_ref().map(|p| p.display().to_string()),
        "eta": eta,
        "theta_i": theta_i,
        "samples": args.samples,
    });
    emit(&data, args.out.as_deref(), "trajectory", echo)?;
    Ok(0)
}

fn run_spectrum(args: SpectrumArgs) -> Result<i32, CliError> {
    let alpha = angle_arg("alpha", args.alpha, args.alpha_deg)?;
    let beta = angle_arg("beta", args.beta, args.beta_deg)?;
    let theta_i = angle_arg("theta-i", args.theta_i, args.theta_i_deg)?;
    if !(1..=MAX_WINDOW).contains(&args.window) {
        return Err(CliError::Usage(format!("--window must lie in 1..={MAX_WINDOW}")));
    }
    let params = EntanglementParams::new(alpha, beta);
    let data = spectrum_dataset(&params, theta_i, args.window)?;
    let echo = serde_json::json!({
        "alpha": alpha,
        "beta": beta,
        "theta_i": theta_i,
        "window": args.window,
    });
    emit(&data, args.out.as_deref(), "spectrum", echo)?;
    Ok(0)
}

fn run_verify(args: &VerifyArgs) -> i32 {
    let results = run_all(args.tol);
    let width = results.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let mut failures = 0usize;
    for r in &results {
        let status = if r.passed() { "pass" } else { "FAIL" };
        println!("{status}  {:<width$}  error {:>12.3e}  tol {:>9.1e}", r.name, r.error, r.tol);
        if !r.passed() {
            failures += 1;
        }
    }
    if failures == 0 {
        println!("all {} checks passed", results.len());
        0
    } else {
        println!("{failures} of {} checks FAILED", results.len());
        1
    }
}

/// A required angle given as exactly one of a radian or degree flag.
fn angle_arg(name: &str, radians: Option<f64>, degrees: Option<f64>) -> Result<f64, CliError> {
    optional_angle(radians, degrees)
        .ok_or_else(|| CliError::Usage(format!("missing --{name} (or --{name}-deg)")))
}

fn optional_angle(radians: Option<f64>, degrees: Option<f64>) -> Option<f64> {
    match (radians, degrees) {
        (Some(v), None) => Some(v),
        (None, Some(v)) => Some(v.to_radians()),
        (None, None) => None,
        (Some(_), Some(_)) => unreachable!("clap rejects giving both spellings"),
    }
}

/// `--jobs` with the BIPHOTON_JOBS environment variable as fallback;
/// 0 (or no setting) lets the worker pool size itself to the machine.
fn resolve_jobs(flag: Option<usize>) -> Result<usize, CliError> {
    if let Some(n) = flag {
        return Ok(n);
    }
    match std::env::var("BIPHOTON_JOBS") {
        Ok(text) => text.trim().parse().map_err(|_| {
            CliError::Usage(format!("BIPHOTON_JOBS must be a non-negative integer, got '{text}'"))
        }),
        Err(std::env::VarError::NotPresent) => Ok(0),
        Err(err) => Err(CliError::Usage(format!("BIPHOTON_JOBS: {err}"))),
    }
}

/// Print the CSV to stdout, or write it to `out` together with its
/// `<out>.meta.json` sidecar.
fn emit(
    data: &Dataset,
    out: Option<&Path>,
    command: &str,
    spec_echo: serde_json::Value,
) -> Result<(), CliError> {
    let csv = data.to_csv();
    match out {
        None => {
            print!("{csv}");
            Ok(())
        }
        Some(path) => {
            write_file(path, &csv)?;
            let sidecar = Sidecar::new(command, spec_echo, data);
            write_file(&sidecar_path(path), &sidecar.to_json())
        }
    }
}

fn sidecar_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".meta.json");
    path.with_file_name(name)
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn angles_accept_exactly_one_spelling() {
        assert_eq!(angle_arg("alpha", Some(1.5), None).unwrap(), 1.5);
        let deg = angle_arg("alpha", None, Some(90.0)).unwrap();
        assert!((deg - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        let err = angle_arg("theta-i", None, None).unwrap_err();
        assert!(err.to_string().contains("--theta-i"));
    }

    #[test]
    fn sidecar_lands_next_to_the_csv() {
        let path = Path::new("/tmp/run/g_proj.csv");
        assert_eq!(sidecar_path(path), Path::new("/tmp/run/g_proj.csv.meta.json"));
    }

    #[test]
    fn explicit_jobs_flag_wins() {
        assert_eq!(resolve_jobs(Some(3)).unwrap(), 3);
    }
}
