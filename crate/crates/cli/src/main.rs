//! Command-line front end: darkening-condition reports, calibration sweeps,
//! chain scaling studies and dressed-state searches, with machine-readable
//! output and deterministic seeding.

mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{ConfigError, RunConfig};
use seldark::anharmonic;
use seldark::chain::{self, ChainSpec};
use seldark::dressed;
use seldark::drive::{self, ConditionMode, DriveSpec};
use seldark::gate::{self, CorrectionMode};
use seldark::system::{self, MixingAngles};

const EXIT_CONFIG: u8 = 2;
const EXIT_COMPUTE: u8 = 3;

#[derive(Parser)]
#[command(name = "seldark", about = "Selective-darkening CNOT simulation and calibration")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration (schema "seldark/1").
    #[arg(long)]
    config: PathBuf,
    /// Output path; overrides the config's output_path. "-" or absent with
    /// no config path writes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker-pool size for sweep points; falls back to SELDARK_JOBS, then
    /// to the number of CPUs.
    #[arg(long)]
    jobs: Option<usize>,
    /// RNG seed; overrides the config's rng_seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Print darkening ratios, mixing angles and speed estimates as JSON.
    Conditions(Common),
    /// Calibrate gates across a drive-amplitude sweep; emit CSV.
    Sweep(Common),
    /// Spectator-spread scaling for qubit chains; emit CSV.
    Chain(Common),
    /// Dressed-state darkening search across a C₁ ray; emit JSON.
    Dressed(Common),
    /// Single-point gate calibration; emit JSON.
    Gate(Common),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, run): (&Common, fn(&RunConfig, &Common) -> Result<String, Failure>) =
        match &cli.command {
            Command::Conditions(c) => (c, cmd_conditions),
            Command::Sweep(c) => (c, cmd_sweep),
            Command::Chain(c) => (c, cmd_chain),
            Command::Dressed(c) => (c, cmd_dressed),
            Command::Gate(c) => (c, cmd_gate),
        };

    let text = match std::fs::read_to_string(&common.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read config {}: {e}", common.config.display());
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let config = match RunConfig::parse(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };

    match run(&config, common) {
        Ok(output) => {
            if let Err(e) = write_output(&config, common, &output) {
                eprintln!("cannot write output: {e}");
                return ExitCode::from(EXIT_COMPUTE);
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Config(e)) => {
            eprintln!("{e}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Compute { message, partial }) => {
            eprintln!("computation failed: {message}");
            if let Some(partial) = partial {
                let _ = write_output(&config, common, &partial);
            }
            ExitCode::from(EXIT_COMPUTE)
        }
    }
}

enum Failure {
    Config(ConfigError),
    Compute {
        message: String,
        /// Partial results to flush (sweep emits completed rows plus a
        /// failure marker).
        partial: Option<String>,
    },
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e)
    }
}

fn compute_err(e: impl std::fmt::Display) -> Failure {
    Failure::Compute {
        message: e.to_string(),
        partial: None,
    }
}

fn write_output(config: &RunConfig, common: &Common, output: &str) -> std::io::Result<()> {
    let path = common
        .out
        .clone()
        .or_else(|| config.output_path.as_ref().map(PathBuf::from));
    match path {
        Some(p) if p != PathBuf::from("-") => std::fs::write(p, output),
        _ => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(output.as_bytes())
        }
    }
}

/// 17-significant-digit numeric formatting for stable CSV output.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn jobs(common: &Common) -> usize {
    common
        .jobs
        .or_else(|| {
            std::env::var("SELDARK_JOBS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
        .max(1)
}

fn seed(config: &RunConfig, common: &Common) -> u64 {
    common.seed.unwrap_or_else(|| config.seed())
}

/// The fully resolved darkening drive for a given amplitude.
fn resolve_drive(config: &RunConfig, a1: f64) -> Result<DriveSpec, Failure> {
    let spec = config.system_spec()?;
    let mut drive = drive::darkening_drive(
        &spec,
        config.target_qubit()?,
        config.polarity()?,
        config.condition_mode()?,
        a1,
        config.envelope()?,
    )
    .map_err(compute_err)?;
    if let Some(omega) = config.drive.omega {
        drive.omega = omega;
    }
    if let Some(phi1) = config.drive.phi1 {
        let delta = drive.phi2 - drive.phi1;
        drive.phi1 = phi1;
        drive.phi2 = phi1 + delta;
    }
    Ok(drive)
}

fn cmd_conditions(config: &RunConfig, _common: &Common) -> Result<String, Failure> {
    let spec = config.system_spec()?;
    let target = config.target_qubit()?;
    let polarity = config.polarity()?;
    let weak = drive::darkening_condition(&spec, target, polarity, ConditionMode::Weak)
        .map_err(compute_err)?;
    let exact = drive::darkening_condition(&spec, target, polarity, ConditionMode::Exact)
        .map_err(compute_err)?;
    let eig = system::exact_eigensystem(&spec).map_err(compute_err)?;
    let angles = MixingAngles::from_spec(&spec);
    let resolved = resolve_drive(config, 1.0)?;
    let max_rabi = if spec.levels == 2 {
        serde_json::json!(drive::max_rabi_estimate(&spec).map_err(compute_err)?)
    } else {
        let report = anharmonic::perturbative_report(&spec, 1.0).map_err(compute_err)?;
        serde_json::json!(report.max_rabi)
    };

    let report = serde_json::json!({
        "amplitude_ratio_weak": weak.amplitude_ratio,
        "amplitude_ratio_exact": exact.amplitude_ratio,
        "phase_difference_rad": exact.phase_difference,
        "drive_frequency_ghz": resolved.omega,
        "transition_frequency_10_ghz": eig.gap(1, 0),
        "transition_frequency_32_ghz": eig.gap(3, 2),
        "theta1_rad": angles.theta1,
        "theta2_rad": angles.theta2,
        "theta_plus_rad": angles.theta_plus,
        "theta_minus_rad": angles.theta_minus,
        "theta1_over_pi": angles.theta1 / std::f64::consts::PI,
        "theta2_over_pi": angles.theta2 / std::f64::consts::PI,
        "max_rabi_estimate_ghz": max_rabi,
    });
    Ok(format!("{}\n", serde_json::to_string_pretty(&report).unwrap()))
}

const SWEEP_HEADER: &str =
    "a1_ghz,t_gate_ns,j_eff_ghz,j_eff_over_j,fidelity,error,correction_mode,seed\n";

fn cmd_sweep(config: &RunConfig, common: &Common) -> Result<String, Failure> {
    let sweep = config.sweep.as_ref().ok_or_else(|| ConfigError {
        field: "sweep".into(),
        message: "sweep section required for the sweep command".into(),
    })?;
    if sweep.parameter != "a1" {
        return Err(ConfigError {
            field: "sweep.parameter".into(),
            message: format!("only \"a1\" sweeps are supported, got \"{}\"", sweep.parameter),
        }
        .into());
    }
    for (k, &v) in sweep.values.iter().enumerate() {
        if !(v > 0.0) {
            return Err(ConfigError {
                field: format!("sweep.values[{k}]"),
                message: "drive amplitudes must be positive".into(),
            }
            .into());
        }
    }
    let spec = config.system_spec()?;
    let mode = config.correction_mode()?;
    let run_seed = seed(config, common);

    let drives: Vec<DriveSpec> = sweep
        .values
        .iter()
        .map(|&a1| resolve_drive(config, a1))
        .collect::<Result<_, _>>()?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs(common))
        .build()
        .map_err(compute_err)?;
    let results: Vec<Result<gate::GateResult, seldark::Error>> = pool.install(|| {
        use rayon::prelude::*;
        drives
            .par_iter()
            .map(|d| gate::calibrate_gate(&spec, d, mode, run_seed))
            .collect()
    });

    let mut out = String::from(SWEEP_HEADER);
    for (k, result) in results.iter().enumerate() {
        let a1 = sweep.values[k];
        match result {
            Ok(r) => {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    num(a1),
                    num(r.t_gate),
                    num(r.j_eff),
                    num(r.j_eff / spec.j),
                    num(r.fidelity),
                    num(1.0 - r.fidelity),
                    r.correction_mode.as_str(),
                    run_seed
                ));
            }
            Err(e) => {
                out.push_str(&format!("{},nan,nan,nan,nan,nan,failed,{run_seed}\n", num(a1)));
                return Err(Failure::Compute {
                    message: format!("calibration failed at a1 = {a1}: {e}"),
                    partial: Some(out),
                });
            }
        }
    }
    Ok(out)
}

fn cmd_chain(config: &RunConfig, _common: &Common) -> Result<String, Failure> {
    let chain_cfg = config.chain.as_ref().ok_or_else(|| ConfigError {
        field: "chain".into(),
        message: "chain section required for the chain command".into(),
    })?;
    let n = chain_cfg.deltas.len();
    let ddelta = {
        let template = ChainSpec {
            deltas: chain_cfg.deltas.clone(),
            js: vec![0.0; n.saturating_sub(1)],
            allow_degenerate: false,
        };
        template.validate().map_err(|e| ConfigError {
            field: "chain.deltas".into(),
            message: e.to_string(),
        })?;
        template.delta_delta()
    };

    let mut out = String::from("n,i,k,J_over_ddelta,spread\n");
    let mut logs: Vec<(f64, f64)> = Vec::new();
    for &ratio in &chain_cfg.j_over_ddelta {
        let spec = ChainSpec::uniform(chain_cfg.deltas.clone(), ratio * ddelta)
            .map_err(compute_err)?;
        let result =
            chain::conditional_rabi_elements(&spec, chain_cfg.drive_site, chain_cfg.flip_site)
                .map_err(|e| Failure::Compute {
                    message: e.to_string(),
                    partial: Some(out.clone()),
                })?;
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            n,
            chain_cfg.drive_site,
            chain_cfg.flip_site,
            num(ratio),
            num(result.spread)
        ));
        if result.spread > 0.0 {
            logs.push((ratio.ln(), result.spread.ln()));
        }
    }
    if logs.len() >= 2 {
        let m = logs.len() as f64;
        let sx: f64 = logs.iter().map(|(x, _)| x).sum();
        let sy: f64 = logs.iter().map(|(_, y)| y).sum();
        let sxx: f64 = logs.iter().map(|(x, _)| x * x).sum();
        let sxy: f64 = logs.iter().map(|(x, y)| x * y).sum();
        let slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        out.push_str(&format!("# fitted_exponent,{}\n", num(slope)));
    }
    Ok(out)
}

fn cmd_dressed(config: &RunConfig, _common: &Common) -> Result<String, Failure> {
    let dressed_cfg = config.dressed.as_ref().ok_or_else(|| ConfigError {
        field: "dressed".into(),
        message: "dressed section required for the dressed command".into(),
    })?;
    let spec = config.system_spec()?;
    if spec.levels != 2 {
        return Err(ConfigError {
            field: "system.levels".into(),
            message: "the dressed-state analysis needs levels = 2".into(),
        }
        .into());
    }

    let mut rows = Vec::new();
    for &c1 in &dressed_cfg.c1_values {
        let search = dressed::strong_drive_darkening_search(&spec, c1).map_err(compute_err)?;
        let row = if c1 > 0.0 {
            let decomposition =
                dressed::error_decomposition(&spec, c1, search.c2, search.omega)
                    .map_err(compute_err)?;
            serde_json::json!({
                "c1_ghz": c1,
                "c2_ghz": search.c2,
                "c2_over_c1": search.c2 / c1,
                "omega_ghz": search.omega,
                "residual_gap_ghz": search.residual_gap,
                "common_shift_ghz": decomposition.common_shift,
                "differential_shift_ghz": decomposition.differential_shift,
                "residual_brightness_ghz": decomposition.residual_brightness,
            })
        } else {
            serde_json::json!({
                "c1_ghz": c1,
                "c2_ghz": search.c2,
                "c2_over_c1": serde_json::Value::Null,
                "omega_ghz": search.omega,
                "residual_gap_ghz": search.residual_gap,
                "common_shift_ghz": 0.0,
                "differential_shift_ghz": 0.0,
                "residual_brightness_ghz": 0.0,
            })
        };
        rows.push(row);
    }
    let report = serde_json::json!({ "ray": rows });
    Ok(format!("{}\n", serde_json::to_string_pretty(&report).unwrap()))
}

fn cmd_gate(config: &RunConfig, common: &Common) -> Result<String, Failure> {
    let a1 = config.drive.a1.ok_or_else(|| ConfigError {
        field: "drive.a1".into(),
        message: "gate calibration needs a drive amplitude".into(),
    })?;
    let spec = config.system_spec()?;
    let drive = resolve_drive(config, a1)?;
    let mode = config.correction_mode()?;
    let run_seed = seed(config, common);
    let result = gate::calibrate_gate(&spec, &drive, mode, run_seed).map_err(compute_err)?;

    let report = serde_json::json!({
        "a1_ghz": a1,
        "a2_ghz": drive.a2,
        "drive_frequency_ghz": drive.omega,
        "t_gate_ns": result.t_gate,
        "j_eff_ghz": result.j_eff,
        "j_eff_over_j": result.j_eff / spec.j,
        "fidelity": result.fidelity,
        "error": 1.0 - result.fidelity,
        "correction_mode": result.correction_mode.as_str(),
        "correction_params": result.correction_params,
        "seed": run_seed,
    });
    Ok(format!("{}\n", serde_json::to_string_pretty(&report).unwrap()))
}
