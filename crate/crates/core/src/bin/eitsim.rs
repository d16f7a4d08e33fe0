//! Command-line front end: parameter files, frequency sweeps, model
//! comparison, and machine-readable output for plotting.
//!
//! Exit codes: 0 success, 2 configuration error, 3 solver failure,
//! 4 when `consistency` finds the configured model inconsistent.

use std::fs;
use std::io::BufWriter;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_complex::Complex64 as C64;

use eitsim::config::RunConfig;
use eitsim::entanglement_cv::{entanglement_delay_report, PhaseCompensation};
use eitsim::lambda_system::{
    steady_state, weak_probe_consistency, BlochState, ConsistencyVerdict, NoiseModel,
};
use eitsim::linear_response::{
    group_delay, propagation_exponent, propagation_exponent_for_model,
    propagation_exponent_linear_solve,
};
use eitsim::noise_spectra::{
    output_value, source_spectrum_at, squeezing_delay_report, SqueezingSource,
};
use eitsim::oracle_integrator::{
    integrate, lambda_from_susceptibility, slow_rate, step_response_susceptibility,
};
use eitsim::output::{fmt_float, write_table, OutputFormat};
use eitsim::presets::{preset, PRESET_NAMES};

const EXIT_CONFIG: u8 = 2;
const EXIT_SOLVER: u8 = 3;
const EXIT_INCONSISTENT: u8 = 4;

#[derive(Parser)]
#[command(name = "eitsim", version, about = "Quadrature noise through a three-level EIT medium")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Parameter file in flat key = value form.
    #[arg(long, global = true, conflicts_with = "preset")]
    config: Option<String>,

    /// Named built-in parameter set.
    #[arg(long, global = true)]
    preset: Option<String>,

    /// Output file path (overrides output_path from the config).
    #[arg(long, global = true)]
    output: Option<String>,

    /// Output format: csv or jsonl.
    #[arg(long, global = true)]
    format: Option<String>,

    /// Dephasing model: offdiag or popexch.
    #[arg(long, global = true)]
    model: Option<String>,

    /// Print the resolved configuration and exit.
    #[arg(long, global = true)]
    dump_config: bool,

    /// Add the vacuum transit time L/c to reported delays.
    #[arg(long, global = true)]
    include_vacuum_transit: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Propagation exponent Lambda(omega) and power transmission.
    Susceptibility,
    /// Input/output quadrature variance spectra for the chosen model.
    Spectrum,
    /// Squeezing transmission, delay, and preservation ratio.
    Squeezing,
    /// Duan and Reid criteria for an EPR pair with one delayed arm.
    Entanglement,
    /// Weak-probe consistency check of both dephasing models.
    Consistency,
    /// Cross-check the closed forms against the time-domain oracle.
    Verify,
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let mut config = match resolve_config(&cli) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    if let Err(msg) = apply_overrides(&cli, &mut config) {
        eprintln!("error: {msg}");
        return ExitCode::from(EXIT_CONFIG);
    }

    if cli.dump_config {
        print!("{}", config.dump());
        return ExitCode::SUCCESS;
    }

    let outcome = match cli.command {
        Command::Susceptibility => run_susceptibility(&config),
        Command::Spectrum => run_spectrum(&config),
        Command::Squeezing => run_squeezing(&config, cli.include_vacuum_transit),
        Command::Entanglement => run_entanglement(&config, cli.include_vacuum_transit),
        Command::Consistency => return run_consistency(&config),
        Command::Verify => run_verify(&config),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(RunError::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(RunError::Solver(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_SOLVER)
        }
    }
}

enum RunError {
    Config(String),
    Solver(String),
}

impl From<eitsim::EitError> for RunError {
    fn from(e: eitsim::EitError) -> Self {
        RunError::Solver(e.to_string())
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Config(format!("i/o error: {e}"))
    }
}

fn resolve_config(cli: &Cli) -> Result<RunConfig, String> {
    match (&cli.config, &cli.preset) {
        (Some(path), None) => {
            let text = fs::read_to_string(path)
                .map_err(|e| format!("cannot read config {path}: {e}"))?;
            RunConfig::parse(&text).map_err(|e| e.to_string())
        }
        (None, Some(name)) => preset(name).ok_or_else(|| {
            format!("unknown preset `{name}` (available: {})", PRESET_NAMES.join(", "))
        }),
        (None, None) => Err("either --config PATH or --preset NAME is required".into()),
        (Some(_), Some(_)) => unreachable!("clap enforces the conflict"),
    }
}

fn apply_overrides(cli: &Cli, config: &mut RunConfig) -> Result<(), String> {
    if let Some(m) = &cli.model {
        config.model = match m.as_str() {
            "offdiag" => NoiseModel::OffDiagonal,
            "popexch" => NoiseModel::PopulationExchange,
            other => return Err(format!("--model: expected offdiag or popexch, got {other}")),
        };
    }
    if let Some(f) = &cli.format {
        config.format =
            OutputFormat::parse(f).ok_or_else(|| format!("--format: expected csv or jsonl, got {f}"))?;
    }
    if let Some(o) = &cli.output {
        config.output_path = Some(o.clone());
    }
    config.validate().map_err(|e| e.to_string())
}

fn write_output(config: &RunConfig, columns: &[&str], rows: &[Vec<f64>]) -> Result<(), RunError> {
    let path = config
        .output_path
        .as_ref()
        .ok_or_else(|| RunError::Config("no output path: pass --output or set output_path".into()))?;
    let file = fs::File::create(path)?;
    write_table(BufWriter::new(file), config.format, columns, rows)?;
    Ok(())
}

fn model_tag(model: NoiseModel) -> &'static str {
    match model {
        NoiseModel::OffDiagonal => "offdiag",
        NoiseModel::PopulationExchange => "popexch",
    }
}

fn run_susceptibility(config: &RunConfig) -> Result<(), RunError> {
    let mut rows = Vec::new();
    for w in config.omega_grid() {
        let lambda = propagation_exponent_for_model(&config.params, w, config.model)?;
        let transmission = (-2.0 * lambda.re * config.params.length).exp();
        rows.push(vec![w, lambda.re, lambda.im, transmission]);
    }
    write_output(config, &["omega", "re_lambda", "im_lambda", "transmission"], &rows)
}

fn run_spectrum(config: &RunConfig) -> Result<(), RunError> {
    let r = config.squeezing_r;
    let length = config.params.length;
    let mut rows = Vec::new();
    for w in config.omega_grid() {
        let s_in_amp = source_spectrum_at(r, SqueezingSource::Flat, w, false);
        let s_in_phase = source_spectrum_at(r, SqueezingSource::Flat, w, true);
        let s_out_amp = output_value(config.model, s_in_amp, &config.params, w, length)?;
        let s_out_phase = output_value(config.model, s_in_phase, &config.params, w, length)?;
        rows.push(vec![w, s_in_amp, s_out_amp, s_in_phase, s_out_phase]);
    }
    let tag = model_tag(config.model);
    let out_amp = format!("s_out_amplitude_{tag}");
    let out_phase = format!("s_out_phase_{tag}");
    write_output(
        config,
        &["omega", "s_in_amplitude", &out_amp, "s_in_phase", &out_phase],
        &rows,
    )
}

fn reported_delay(config: &RunConfig, delay: f64, include_transit: bool) -> f64 {
    if include_transit {
        delay + config.params.length / config.params.c_light
    } else {
        delay
    }
}

fn run_squeezing(config: &RunConfig, include_transit: bool) -> Result<(), RunError> {
    let grid = config.omega_grid();
    let report = squeezing_delay_report(
        config.squeezing_r,
        &config.params,
        config.params.length,
        &grid,
        SqueezingSource::Flat,
    )?;
    let mut rows = Vec::new();
    for (i, &w) in grid.iter().enumerate() {
        rows.push(vec![
            w,
            source_spectrum_at(config.squeezing_r, SqueezingSource::Flat, w, false),
            report.s_out_squeezed.values[i],
            source_spectrum_at(config.squeezing_r, SqueezingSource::Flat, w, true),
            report.s_out_antisqueezed.values[i],
        ]);
    }
    write_output(
        config,
        &[
            "omega",
            "s_in_squeezed",
            "s_out_squeezed",
            "s_in_antisqueezed",
            "s_out_antisqueezed",
        ],
        &rows,
    )?;
    println!(
        "delay_s = {} preservation_ratio = {}",
        fmt_float(reported_delay(config, report.delay_s, include_transit)),
        fmt_float(report.preservation_ratio)
    );
    Ok(())
}

fn run_entanglement(config: &RunConfig, include_transit: bool) -> Result<(), RunError> {
    if config.squeezing_r <= 0.0 {
        return Err(RunError::Config(
            "entanglement requires squeezing_r > 0".into(),
        ));
    }
    let grid = config.omega_grid();
    let tau = group_delay(&config.params)?;
    let report = entanglement_delay_report(
        config.squeezing_r,
        &config.params,
        config.params.length,
        &grid,
        PhaseCompensation::Delay(tau),
    )?;
    let rows: Vec<Vec<f64>> = grid
        .iter()
        .zip(report.duan.iter().zip(&report.reid))
        .map(|(&w, (&d, &r))| vec![w, d, r])
        .collect();
    write_output(config, &["omega", "duan", "reid"], &rows)?;
    println!(
        "delay_s = {} entangled_bandwidth = {}",
        fmt_float(reported_delay(config, report.delay_s, include_transit)),
        fmt_float(report.entangled_bandwidth)
    );
    Ok(())
}

fn run_consistency(config: &RunConfig) -> ExitCode {
    let mut configured_verdict = None;
    for model in [NoiseModel::OffDiagonal, NoiseModel::PopulationExchange] {
        let report = match weak_probe_consistency(&config.params, config.probe, model) {
            Ok(r) => r,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_SOLVER);
            }
        };
        let verdict = match report.verdict {
            ConsistencyVerdict::ConsistentSecondOrder => "consistent-second-order",
            ConsistencyVerdict::Inconsistent => "inconsistent",
        };
        println!(
            "model {}: verdict {verdict}, epsilon {:.3e}, population deficit {:.6e}",
            model_tag(model),
            report.epsilon,
            report.population_deficit
        );
        println!(
            "{{\"model\":\"{}\",\"verdict\":\"{verdict}\",\"epsilon\":{},\"population_deficit\":{}}}",
            model_tag(model),
            fmt_float(report.epsilon),
            fmt_float(report.population_deficit)
        );
        if model == config.model {
            configured_verdict = Some(report.verdict);
        }
    }
    match configured_verdict {
        Some(ConsistencyVerdict::Inconsistent) => ExitCode::from(EXIT_INCONSISTENT),
        Some(ConsistencyVerdict::ConsistentSecondOrder) => ExitCode::SUCCESS,
        None => ExitCode::from(EXIT_SOLVER),
    }
}

fn run_verify(config: &RunConfig) -> Result<(), RunError> {
    let params = &config.params;
    let rel = |a: C64, b: C64| (a - b).norm() / b.norm().max(1e-300);

    // Route 1: closed form vs the 2x2 linear-system route, over the grid.
    let mut dev_linear: f64 = 0.0;
    for w in config.omega_grid() {
        let closed = propagation_exponent(params, w)?;
        let solved = propagation_exponent_linear_solve(params, w)?;
        if closed.norm() > 0.0 {
            dev_linear = dev_linear.max(rel(solved, closed));
        }
    }
    println!("lambda closed form vs linear solve: max relative deviation {:.3e}", dev_linear);

    // Route 2: closed form vs the time-domain sideband oracle.
    let amp = config.probe.norm().max(1e-4);
    let scale = params.gamma_ba.max(params.omega_c.norm());
    let mut dev_oracle: f64 = 0.0;
    for w in [0.0, 0.3 * scale, 0.9 * scale] {
        let chi = step_response_susceptibility(params, amp, w)?;
        let lambda = lambda_from_susceptibility(params, chi);
        let closed = propagation_exponent(params, w)?;
        if closed.norm() > 0.0 {
            dev_oracle = dev_oracle.max(rel(lambda, closed));
        }
    }
    println!("lambda closed form vs time-domain oracle: max relative deviation {:.3e}", dev_oracle);

    // Route 3: algebraic steady state vs long-time integration.
    let ss = steady_state(params, config.probe)?;
    let t_final = 60.0 / slow_rate(params);
    let tr = integrate(params, config.probe, &BlochState::dark(), t_final, 1e-12)?;
    let end = tr.final_state();
    let dev_ss = (ss.to_vector() - end.to_vector()).amax();
    println!("steady state vs time integration: max absolute deviation {:.3e}", dev_ss);

    Ok(())
}
