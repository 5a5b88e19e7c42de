//! `relosc` — action variable, frequency, and period of the relativistic
//! harmonic oscillator from the command line.
//!
//! Subcommands mirror the physical quantities: `coeffs` prints exact series
//! coefficients, `action`/`frequency`/`period` evaluate one state,
//! `compare` runs every registered method against each other, and `sweep`
//! scans an energy range. Output is CSV or JSON, built to be piped into
//! external plotters.
//!
//! Exit codes are a stable contract for scripting: 0 success, 2 argument
//! error, 3 numerical convergence or agreement failure.

mod render;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use relosc::action::DEFAULT_ORDER;
use relosc::fps::FormalSeries;
use relosc::frequency::SeriesForm;
use relosc::method::{in_agreement_gate, pairwise_differences, EvalContext, MethodRegistry};
use relosc::model::{EnergySpec, OscillatorParams};
use relosc::{BracketSeries, OutputRecord};

const EXIT_ARGUMENT: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "relosc",
    version,
    about = "Relativistic harmonic oscillator: action variables, frequency, period"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print exact series coefficients as p/q strings
    Coeffs(CoeffsArgs),
    /// Action variable J at one energy
    Action(PointArgs),
    /// Frequency, period, and relativistic factor at one energy
    Frequency(FrequencyArgs),
    /// Oscillation period at one energy
    Period(PointArgs),
    /// Run every method at one energy and check pairwise agreement
    Compare(CompareArgs),
    /// Evaluate one method over an energy grid
    Sweep(SweepArgs),
}

#[derive(Args, Clone, Copy)]
struct PhysicalArgs {
    /// Oscillator mass
    #[arg(long = "m", default_value_t = 1.0)]
    mass: f64,
    /// Spring constant
    #[arg(long = "k", default_value_t = 1.0)]
    spring_constant: f64,
    /// Speed of light
    #[arg(long = "c", default_value_t = 1.0)]
    light_speed: f64,
}

impl PhysicalArgs {
    fn params(&self) -> Result<OscillatorParams, CliError> {
        OscillatorParams::new(self.mass, self.spring_constant, self.light_speed)
            .map_err(|e| CliError::argument(e.to_string()))
    }
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_parser = ["csv", "json"], default_value = "json")]
    format: String,
    /// Write to a file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CoeffsArgs {
    /// Which series: the pdx bracket in r, the xdp bracket in eps, or eta
    #[arg(long, value_parser = ["pdx", "xdp", "eta"])]
    form: String,
    /// Truncation order (max 64)
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    order: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct PointArgs {
    /// Dimensionless energy (E - mc^2)/mc^2
    #[arg(long, allow_negative_numbers = true)]
    epsilon: f64,
    /// Evaluation method
    #[arg(long, default_value = "pdx-series")]
    method: String,
    /// Series truncation order (max 64)
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    order: usize,
    #[command(flatten)]
    physical: PhysicalArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct FrequencyArgs {
    /// Dimensionless energy (E - mc^2)/mc^2
    #[arg(long, allow_negative_numbers = true)]
    epsilon: f64,
    /// Bracket form behind the eta derivative
    #[arg(long, value_parser = ["pdx", "xdp"], default_value = "pdx")]
    form: String,
    /// Series truncation order (max 64)
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    order: usize,
    #[command(flatten)]
    physical: PhysicalArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct CompareArgs {
    /// Dimensionless energy (E - mc^2)/mc^2
    #[arg(long, allow_negative_numbers = true)]
    epsilon: f64,
    /// Series truncation order (max 64)
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    order: usize,
    /// Agreement tolerance for the pass/fail gate
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[command(flatten)]
    physical: PhysicalArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, allow_negative_numbers = true)]
    eps_min: f64,
    #[arg(long, allow_negative_numbers = true)]
    eps_max: f64,
    /// Number of grid points (>= 2), endpoints included
    #[arg(long)]
    steps: usize,
    /// Use a logarithmic grid
    #[arg(long)]
    log: bool,
    /// Evaluation method
    #[arg(long, default_value = "pdx-series")]
    method: String,
    /// Series truncation order (max 64)
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    order: usize,
    #[command(flatten)]
    physical: PhysicalArgs,
    #[command(flatten)]
    output: OutputArgs,
}

/// Errors mapped onto the exit-code contract.
#[derive(Debug)]
struct CliError {
    message: String,
    code: u8,
}

impl CliError {
    fn argument(message: impl Into<String>) -> Self {
        Self {
            message: message.into(),
            code: EXIT_ARGUMENT,
        }
    }

    fn numerical(message: impl Into<String>) -> Self {
        Self {
            message: message.into(),
            code: EXIT_NUMERICAL,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Coeffs(args) => cmd_coeffs(args),
        Command::Action(args) => cmd_point(args, Quantity::Action),
        Command::Period(args) => cmd_point(args, Quantity::Period),
        Command::Frequency(args) => cmd_frequency(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Sweep(args) => cmd_sweep(args),
    }
}

fn check_order(order: usize) -> Result<(), CliError> {
    if !(1..=64).contains(&order) {
        return Err(CliError::argument(format!(
            "order must be between 1 and 64, got {order}"
        )));
    }
    Ok(())
}

fn check_epsilon(epsilon: f64) -> Result<(), CliError> {
    if epsilon <= 0.0 || !epsilon.is_finite() {
        return Err(CliError::argument("epsilon must be positive"));
    }
    Ok(())
}

fn emit(output: &OutputArgs, body: String) -> Result<(), CliError> {
    match &output.output {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| CliError::argument(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .map_err(|e| CliError::numerical(format!("stdout: {e}")))
        }
    }
}

fn cmd_coeffs(args: CoeffsArgs) -> Result<(), CliError> {
    if args.order > 64 {
        return Err(CliError::argument(format!(
            "order must be <= 64, got {}",
            args.order
        )));
    }
    let series: FormalSeries = match args.form.as_str() {
        "pdx" => {
            if args.order <= DEFAULT_ORDER {
                BracketSeries::shared().pdx.truncated(args.order)
            } else {
                relosc::action::pdx_bracket_series(args.order)
            }
        }
        "xdp" => {
            if args.order <= DEFAULT_ORDER {
                BracketSeries::shared().xdp.truncated(args.order)
            } else {
                relosc::action::xdp_bracket_series(args.order)
            }
        }
        "eta" => {
            if args.order == 0 {
                return Err(CliError::argument("eta needs order >= 1"));
            }
            relosc::frequency::eta_series(args.order, SeriesForm::Pdx)
        }
        other => return Err(CliError::argument(format!("unknown form `{other}`"))),
    };
    let body = match args.output.format.as_str() {
        "json" => render::coeffs_json(&series),
        _ => render::coeffs_csv(&series),
    };
    emit(&args.output, body)
}

enum Quantity {
    Action,
    Period,
}

fn evaluate_named(
    registry: &MethodRegistry,
    method: &str,
    ctx: &EvalContext,
) -> Result<OutputRecord, CliError> {
    let strategy = registry.get(method).ok_or_else(|| {
        CliError::argument(format!(
            "unknown method `{method}` (available: {})",
            registry.names().join(", ")
        ))
    })?;
    let mut record = strategy.evaluate(ctx);
    if ctx.energy.epsilon() > relosc::UNVALIDATED_EPSILON {
        record.push_flag(relosc::ResultFlag::UnvalidatedRegime);
    }
    Ok(record)
}

fn cmd_point(args: PointArgs, quantity: Quantity) -> Result<(), CliError> {
    check_order(args.order)?;
    check_epsilon(args.epsilon)?;
    let params = args.physical.params()?;
    let energy = EnergySpec::from_epsilon(&params, args.epsilon)
        .map_err(|e| CliError::argument(e.to_string()))?;
    let registry = MethodRegistry::standard();
    let ctx = EvalContext::new(params, energy).with_order(args.order);
    let record = evaluate_named(&registry, &args.method, &ctx)?;
    let missing = match quantity {
        Quantity::Action => record.j.is_none(),
        Quantity::Period => record.tau.is_none(),
    };
    if missing {
        return Err(CliError::numerical(format!(
            "method `{}` produced no value for this quantity (flags: {})",
            args.method,
            render::flags_string(&record.flags)
        )));
    }
    let body = render::records(&args.output.format, &[record]);
    emit(&args.output, body)
}

fn cmd_frequency(args: FrequencyArgs) -> Result<(), CliError> {
    check_order(args.order)?;
    check_epsilon(args.epsilon)?;
    let params = args.physical.params()?;
    let energy = EnergySpec::from_epsilon(&params, args.epsilon)
        .map_err(|e| CliError::argument(e.to_string()))?;
    let method = match args.form.as_str() {
        "xdp" => "xdp-series",
        _ => "pdx-series",
    };
    let registry = MethodRegistry::standard();
    let ctx = EvalContext::new(params, energy).with_order(args.order);
    let record = evaluate_named(&registry, method, &ctx)?;
    let body = render::records(&args.output.format, &[record]);
    emit(&args.output, body)
}

fn cmd_compare(args: CompareArgs) -> Result<(), CliError> {
    check_order(args.order)?;
    check_epsilon(args.epsilon)?;
    if args.tol <= 0.0 || args.tol.is_nan() {
        return Err(CliError::argument("tol must be positive"));
    }
    let params = args.physical.params()?;
    let energy = EnergySpec::from_epsilon(&params, args.epsilon)
        .map_err(|e| CliError::argument(e.to_string()))?;
    let registry = MethodRegistry::standard();
    let ctx = EvalContext::new(params, energy).with_order(args.order);
    let records = registry.evaluate_all(&ctx);

    // the agreement gate covers pairs where both rows are unflagged
    let gated: Vec<OutputRecord> = records
        .iter()
        .filter(|r| in_agreement_gate(r))
        .cloned()
        .collect();
    let gated_diffs = pairwise_differences(&gated);
    let max_diff = gated_diffs
        .iter()
        .map(|d| d.relative_difference)
        .fold(0.0f64, f64::max);
    let any_failed = records.iter().any(|r| {
        r.flags.iter().any(|f| {
            matches!(
                f,
                relosc::ResultFlag::ConvergenceFailure | relosc::ResultFlag::EnergyDrift
            )
        })
    });
    let pass = !any_failed && max_diff <= args.tol;

    let all_diffs = pairwise_differences(&records);
    let body = render::compare(&args.output.format, &records, &all_diffs, max_diff, args.tol, pass);
    emit(&args.output, body)?;
    if pass {
        Ok(())
    } else {
        Err(CliError::numerical(format!(
            "methods disagree: max relative difference {max_diff:e} > tol {:e}",
            args.tol
        )))
    }
}

fn cmd_sweep(args: SweepArgs) -> Result<(), CliError> {
    check_order(args.order)?;
    if args.eps_min <= 0.0 || args.eps_max <= args.eps_min || args.eps_min.is_nan() || args.eps_max.is_nan() {
        return Err(CliError::argument(
            "need 0 < eps-min < eps-max for the sweep range",
        ));
    }
    if args.steps < 2 {
        return Err(CliError::argument("steps must be >= 2"));
    }
    let params = args.physical.params()?;
    let registry = MethodRegistry::standard();
    if registry.get(&args.method).is_none() {
        return Err(CliError::argument(format!(
            "unknown method `{}` (available: {})",
            args.method,
            registry.names().join(", ")
        )));
    }

    let grid: Vec<f64> = (0..args.steps)
        .map(|i| {
            let t = i as f64 / (args.steps - 1) as f64;
            if args.log {
                (args.eps_min.ln() + t * (args.eps_max.ln() - args.eps_min.ln())).exp()
            } else {
                args.eps_min + t * (args.eps_max - args.eps_min)
            }
        })
        .collect();

    // rows are independent; order is preserved by the indexed collect
    let records: Vec<OutputRecord> = grid
        .par_iter()
        .map(|&eps| {
            let energy = EnergySpec::from_epsilon(&params, eps).expect("grid eps is positive");
            let ctx = EvalContext::new(params, energy).with_order(args.order);
            evaluate_named(&registry, &args.method, &ctx).expect("method existence checked above")
        })
        .collect();

    let body = render::records(&args.output.format, &records);
    emit(&args.output, body)
}
