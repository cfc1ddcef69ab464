//! `qroots` command line: solve (full pipeline), marked-set (brute-force
//! oracle), estimate (resource formulas) and newton (classical baseline).
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 no solution in range,
//! 3 dense-simulation cap exceeded.

mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use output::*;
use qroots_core::amplify::{run_search, AmplifyError, AmplifyMode, AmplifySpec};
use qroots_core::baseline::{newton_solve, NewtonConfig, NewtonError};
use qroots_core::fixedpoint::{FixedFormat, ResultFormat};
use qroots_core::gradient::{refine, GradientConfig, GradientError, GradientSource};
use qroots_core::marking::{marked_set, MarkingError, MarkingSpec};
use qroots_core::polysys::{parse_system, Parsed, PolynomialSystem};
use qroots_core::rational::{parse_decimal, pow2};
use qroots_core::resources::{estimate_operations, ResourceParams};
use qroots_core::statesim::SimError;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "qroots",
    version,
    about = "Quantum-search simulator for square systems of polynomial equations",
    after_help = "Exit codes: 0 ok, 1 usage/parse error, 2 no solution in range, 3 simulation cap exceeded."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads for the parallel sweeps (default: all cores; results
    /// are identical for any value).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Decimal places used to render exact rationals in the output document.
    #[arg(long, global = true, default_value_t = 12)]
    precision: usize,
    /// Write the result document here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline: mark, amplify, sample, refine.
    Solve(SolveArgs),
    /// Enumerate every coarse-grid point passing all residual checks.
    MarkedSet(MarkedSetArgs),
    /// Operation and qubit counts from the closed-form cost model.
    Estimate(EstimateArgs),
    /// Classical damped-Newton baseline from a given start point.
    Newton(NewtonArgs),
}

#[derive(Args)]
struct RegisterArgs {
    /// System file (one equation per line, e.g. "x0^3 + 2*x1 = 35").
    system: PathBuf,
    /// Coarse register bits per variable (N).
    #[arg(long, default_value_t = 6)]
    bits: u32,
    /// Integer bits within the register (m); the search box is [0, 2^m)^n.
    #[arg(long, default_value_t = 3)]
    int_bits: u32,
}

#[derive(Args)]
struct ThresholdArgs {
    /// Residual threshold exponent rho: a point is marked when every
    /// |f_i| < 2^rho after encoding.
    #[arg(long, conflicts_with = "lambda", allow_hyphen_values = true)]
    threshold_log2: Option<i32>,
    /// Number of leading result-register integer bits required zero
    /// (equivalent to --threshold-log2 = result integer bits - lambda).
    #[arg(long)]
    lambda: Option<u32>,
}

#[derive(Clone, Copy, ValueEnum)]
enum AmplifyModeArg {
    /// Count M classically, run the optimal iteration count.
    Exact,
    /// Run round(sqrt(2^lambda)) iterations.
    SqrtLambda,
    /// Skip amplification; resample until a marked outcome.
    Repeat,
}

impl AmplifyModeArg {
    fn to_mode(self) -> AmplifyMode {
        match self {
            AmplifyModeArg::Exact => AmplifyMode::ExactCount,
            AmplifyModeArg::SqrtLambda => AmplifyMode::FixedSqrtLambda,
            AmplifyModeArg::Repeat => AmplifyMode::RepeatUntilSuccess,
        }
    }

    fn name(self) -> &'static str {
        match self {
            AmplifyModeArg::Exact => "exact",
            AmplifyModeArg::SqrtLambda => "sqrt-lambda",
            AmplifyModeArg::Repeat => "repeat",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GradientSourceArg {
    Analytic,
    Quantum,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    registers: RegisterArgs,
    #[command(flatten)]
    threshold: ThresholdArgs,
    #[arg(long, value_enum, default_value_t = AmplifyModeArg::Exact)]
    amplify: AmplifyModeArg,
    #[arg(long, default_value_t = 16)]
    shots: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Offset-grid bits per variable for the gradient estimator.
    #[arg(long, default_value_t = 6)]
    grid_bits: u32,
    /// Gradient window width (decimal); default is one coarse cell 2^-(N-m).
    #[arg(long)]
    window: Option<String>,
    /// Descent step size (decimal).
    #[arg(long, default_value = "0.0078125")]
    alpha: String,
    /// Refinement iteration cap c.
    #[arg(long, default_value_t = 32)]
    max_iters: u32,
    /// Fine-grid bits l: the solution is reported on spacing 2^-l.
    #[arg(long, default_value_t = 13)]
    accuracy_bits: u32,
    #[arg(long, value_enum, default_value_t = GradientSourceArg::Analytic)]
    gradient_source: GradientSourceArg,
    /// Per-shot cap on post-selection attempts.
    #[arg(long, default_value_t = 10_000)]
    max_attempts: u64,
}

#[derive(Args)]
struct MarkedSetArgs {
    #[command(flatten)]
    registers: RegisterArgs,
    #[command(flatten)]
    threshold: ThresholdArgs,
}

#[derive(Args)]
struct EstimateArgs {
    #[command(flatten)]
    registers: RegisterArgs,
    /// Check digits lambda; defaults to h*m.
    #[arg(long)]
    lambda: Option<u64>,
    /// Fine-grid bits l.
    #[arg(long, default_value_t = 13)]
    accuracy_bits: u32,
    /// Refinement iteration count c.
    #[arg(long, default_value_t = 32)]
    max_iters: u32,
}

#[derive(Args)]
struct NewtonArgs {
    /// System file.
    system: PathBuf,
    /// Start point, comma-separated decimals, e.g. "2.75,3.25,3.125".
    #[arg(long)]
    x0: String,
    /// Stop when max |f_i| drops below this.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 1.0)]
    damping: f64,
    #[arg(long, default_value_t = 50)]
    max_iters: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

enum CliError {
    Usage(String),
    NoSolution(String),
    CapExceeded(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::NoSolution(_) => 2,
            CliError::CapExceeded(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::NoSolution(m) | CliError::CapExceeded(m) => m,
        }
    }
}

fn sim_error(e: SimError) -> CliError {
    match e {
        SimError::CapExceeded { qubits, cap } => CliError::CapExceeded(format!(
            "{qubits} qubits exceed the dense-simulation cap of {cap}; lower --bits or the variable count"
        )),
        other => CliError::Usage(other.to_string()),
    }
}

fn marking_error(e: MarkingError) -> CliError {
    match e {
        MarkingError::EmptyMarkedSet => CliError::NoSolution(e.to_string()),
        MarkingError::Sim(s) => sim_error(s),
        other => CliError::Usage(other.to_string()),
    }
}

fn amplify_error(e: AmplifyError) -> CliError {
    match e {
        AmplifyError::Exhausted { .. } | AmplifyError::NoMarkedStates => {
            CliError::NoSolution(e.to_string())
        }
        AmplifyError::Marking(m) => marking_error(m),
        AmplifyError::Sim(s) => sim_error(s),
        AmplifyError::BadCounts { .. } => CliError::Usage(e.to_string()),
    }
}

fn gradient_error(e: GradientError) -> CliError {
    match e {
        GradientError::Sim(s) => sim_error(s),
        other => CliError::Usage(other.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // keep clap's rendered help/error text but force the documented
            // usage exit code
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(1),
            };
        }
    };
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("warning: could not configure thread pool: {e}");
        }
    }
    let precision = cli.precision;
    let out_path = cli.out.clone();
    let result = match &cli.command {
        Command::Solve(args) => cmd_solve(args, precision, cli.threads),
        Command::MarkedSet(args) => cmd_marked_set(args, precision, cli.threads),
        Command::Estimate(args) => cmd_estimate(args, precision, cli.threads),
        Command::Newton(args) => cmd_newton(args, precision, cli.threads),
    };
    match result {
        Ok(document) => {
            let rendered = serde_json::to_string_pretty(&document)
                .expect("document serializes");
            match out_path {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, rendered + "\n") {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(1);
                    }
                }
                None => println!("{rendered}"),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn load_system(path: &PathBuf) -> Result<(Parsed, String), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let parsed = parse_system(&text).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok((parsed, path.display().to_string()))
}

fn system_section(system: &PolynomialSystem, path: String) -> SystemSection {
    let (h, t) = system.degree_stats();
    let equations = system
        .print_canonical()
        .map(|s| s.lines().map(str::to_string).collect())
        .unwrap_or_default();
    SystemSection { path, n: system.n(), max_degree: h, max_terms: t, equations }
}

struct MarkSetup {
    spec: MarkingSpec,
    lambda: u32,
}

fn marking_setup(
    system: &PolynomialSystem,
    registers: &RegisterArgs,
    threshold: &ThresholdArgs,
) -> Result<MarkSetup, CliError> {
    let vf = FixedFormat::unsigned(registers.bits, registers.int_bits)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let rf = ResultFormat::for_system(system, vf, None)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let spec = match (threshold.threshold_log2, threshold.lambda) {
        (Some(rho), None) => MarkingSpec::from_threshold_log2(rho, vf, rf),
        (None, Some(lambda)) => MarkingSpec::from_lambda(lambda, vf, rf),
        // default: require the whole integer part to be zero (tau = 1)
        (None, None) => MarkingSpec::from_threshold_log2(0, vf, rf),
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    }
    .map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(MarkSetup { lambda: spec.lambda(), spec })
}

fn parse_rational_flag(text: &str, flag: &str) -> Result<BigRational, CliError> {
    parse_decimal(text)
        .ok_or_else(|| CliError::Usage(format!("--{flag} expects a decimal literal, got '{text}'")))
}

fn cmd_solve(args: &SolveArgs, precision: usize, threads: Option<usize>) -> Result<Document, CliError> {
    let started = Instant::now();
    let (parsed, path) = load_system(&args.registers.system)?;
    let system = parsed.system;
    let setup = marking_setup(&system, &args.registers, &args.threshold)?;

    let qubits = setup.spec.variable_format().width() * system.n() as u32;
    if qubits > qroots_core::statesim::DEFAULT_QUBIT_CAP {
        return Err(CliError::CapExceeded(format!(
            "{qubits} variable qubits exceed the dense-simulation cap of {}",
            qroots_core::statesim::DEFAULT_QUBIT_CAP
        )));
    }

    let amplify_spec = AmplifySpec {
        mode: args.amplify.to_mode(),
        lambda: setup.lambda,
        max_iterations: args.max_attempts,
        seed: args.seed,
    };
    let mark_started = Instant::now();
    let outcome =
        run_search(&system, &setup.spec, &amplify_spec, args.shots).map_err(amplify_error)?;
    let search_ms = mark_started.elapsed().as_millis();

    // deduplicate samples preserving first-seen order
    let mut counted: Vec<(Vec<BigRational>, Vec<String>, u64)> = Vec::new();
    for sample in &outcome.samples {
        let point: Vec<BigRational> = sample.iter().map(|w| w.decode()).collect();
        match counted.iter_mut().find(|(p, _, _)| *p == point) {
            Some((_, _, count)) => *count += 1,
            None => {
                let bits = sample.iter().map(|w| w.render_bits()).collect();
                counted.push((point, bits, 1));
            }
        }
    }

    let window = match &args.window {
        Some(text) => parse_rational_flag(text, "window")?,
        None => pow2(-(setup.spec.variable_format().fractional_bits() as i64)),
    };
    let alpha = parse_rational_flag(&args.alpha, "alpha")?;
    let source = match args.gradient_source {
        GradientSourceArg::Analytic => GradientSource::Analytic,
        GradientSourceArg::Quantum => GradientSource::QuantumSim,
    };

    let refine_started = Instant::now();
    let mut candidates = Vec::new();
    for (point, _, _) in &counted {
        let mut config = GradientConfig::auto(
            &system,
            point,
            setup.spec.variable_format().fractional_bits(),
        );
        config.grid_bits = args.grid_bits;
        config.phase_bits = args.grid_bits;
        config.window = window.clone();
        config.alpha = alpha.clone();
        config.max_iters = args.max_iters;
        config.accuracy_bits = args.accuracy_bits;
        config.tol_gradnorm = pow2(-(args.accuracy_bits as i64));
        config.derivative_bound =
            qroots_core::gradient::sound_scale(&system, point, &config.window);
        let (solution, trace) =
            refine(&system, point, &config, source).map_err(gradient_error)?;
        let residuals: Vec<BigRational> = (0..system.n())
            .map(|i| system.evaluate(i, &solution).expect("solution arity"))
            .collect();
        let f_value = system.sum_of_squares(&solution);
        candidates.push(CandidateSection {
            point: point.iter().map(|v| render_rational(v, precision)).collect(),
            refined: refined_section(&solution, &residuals, &f_value, &trace, precision),
        });
    }
    let refine_ms = refine_started.elapsed().as_millis();

    let params = ResourceParams::from_system(
        &system,
        args.registers.bits as u64,
        args.registers.int_bits as u64,
        args.accuracy_bits as u64,
        args.max_iters.max(1) as u64,
        Some(setup.lambda as u64),
    );
    let resources = estimate_operations(&params)
        .ok()
        .map(|est| ResourceSection::from_estimate(&est));

    let mut warnings = Vec::new();
    if parsed.variable_gap {
        warnings.push("some variable indices below the maximum never appear".to_string());
    }

    Ok(Document {
        schema_version: SCHEMA_VERSION,
        command: "solve",
        decimal_precision: precision,
        system: system_section(&system, path),
        params: ParamsSection {
            bits: Some(args.registers.bits),
            int_bits: Some(args.registers.int_bits),
            threshold_log2: Some(setup.spec.threshold_log2()),
            lambda: Some(setup.lambda),
            threshold: Some(render_rational(&setup.spec.threshold(), precision)),
            amplify_mode: Some(args.amplify.name().to_string()),
            shots: Some(args.shots),
            seed: args.seed,
            grid_bits: Some(args.grid_bits),
            window: Some(render_rational(&window, precision)),
            alpha: Some(render_rational(&alpha, precision)),
            max_iters: Some(args.max_iters),
            accuracy_bits: Some(args.accuracy_bits),
            gradient_source: Some(
                match args.gradient_source {
                    GradientSourceArg::Analytic => "analytic",
                    GradientSourceArg::Quantum => "quantum",
                }
                .to_string(),
            ),
            tol_residual: None,
            damping: None,
            x0: None,
            threads,
        },
        warnings: if warnings.is_empty() { None } else { Some(warnings) },
        marking: Some(MarkingSection::from_report(&outcome.report)),
        amplify: Some(amplify_section(&outcome, args.amplify.name())),
        samples: Some(
            counted
                .iter()
                .map(|(point, bits, count)| SampleSection {
                    point: point.iter().map(|v| render_rational(v, precision)).collect(),
                    bit_strings: bits.clone(),
                    count: *count,
                })
                .collect(),
        ),
        candidates: Some(candidates),
        marked_points: None,
        newton: None,
        resources,
        timing_ms: Some(TimingSection {
            total: started.elapsed().as_millis(),
            marking: Some(search_ms),
            amplify_and_sample: Some(search_ms),
            refine: Some(refine_ms),
        }),
    })
}

fn cmd_marked_set(
    args: &MarkedSetArgs,
    precision: usize,
    threads: Option<usize>,
) -> Result<Document, CliError> {
    let started = Instant::now();
    let (parsed, path) = load_system(&args.registers.system)?;
    let system = parsed.system;
    let setup = marking_setup(&system, &args.registers, &args.threshold)?;
    let points = marked_set(&system, &setup.spec).map_err(marking_error)?;
    if points.is_empty() {
        return Err(CliError::NoSolution(MarkingError::EmptyMarkedSet.to_string()));
    }
    let total = 1u64 << (setup.spec.variable_format().width() * system.n() as u32);
    let marked_count = points.len() as u64;
    Ok(Document {
        schema_version: SCHEMA_VERSION,
        command: "marked-set",
        decimal_precision: precision,
        system: system_section(&system, path),
        params: ParamsSection {
            bits: Some(args.registers.bits),
            int_bits: Some(args.registers.int_bits),
            threshold_log2: Some(setup.spec.threshold_log2()),
            lambda: Some(setup.lambda),
            threshold: Some(render_rational(&setup.spec.threshold(), precision)),
            threads,
            ..ParamsSection::empty(0)
        },
        warnings: None,
        marking: Some(MarkingSection {
            marked_count,
            total_states: total,
            success_probability: marked_count as f64 / total as f64,
        }),
        amplify: None,
        samples: None,
        candidates: None,
        marked_points: Some(
            points
                .iter()
                .map(|p| p.iter().map(|w| render_rational(&w.decode(), precision)).collect())
                .collect(),
        ),
        newton: None,
        resources: None,
        timing_ms: Some(TimingSection {
            total: started.elapsed().as_millis(),
            marking: None,
            amplify_and_sample: None,
            refine: None,
        }),
    })
}

fn cmd_estimate(
    args: &EstimateArgs,
    precision: usize,
    threads: Option<usize>,
) -> Result<Document, CliError> {
    let (parsed, path) = load_system(&args.registers.system)?;
    let system = parsed.system;
    let params = ResourceParams::from_system(
        &system,
        args.registers.bits as u64,
        args.registers.int_bits as u64,
        args.accuracy_bits as u64,
        args.max_iters.max(1) as u64,
        args.lambda,
    );
    let estimate = estimate_operations(&params).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(Document {
        schema_version: SCHEMA_VERSION,
        command: "estimate",
        decimal_precision: precision,
        system: system_section(&system, path),
        params: ParamsSection {
            bits: Some(args.registers.bits),
            int_bits: Some(args.registers.int_bits),
            lambda: Some(params.lambda as u32),
            accuracy_bits: Some(args.accuracy_bits),
            max_iters: Some(args.max_iters),
            threads,
            ..ParamsSection::empty(0)
        },
        warnings: None,
        marking: None,
        amplify: None,
        samples: None,
        candidates: None,
        marked_points: None,
        newton: None,
        resources: Some(ResourceSection::from_estimate(&estimate)),
        timing_ms: None,
    })
}

fn cmd_newton(args: &NewtonArgs, precision: usize, threads: Option<usize>) -> Result<Document, CliError> {
    let started = Instant::now();
    let (parsed, path) = load_system(&args.system)?;
    let system = parsed.system;
    let x0: Vec<BigRational> = args
        .x0
        .split(',')
        .map(|c| {
            parse_decimal(c).ok_or_else(|| {
                CliError::Usage(format!("--x0 component '{c}' is not a decimal literal"))
            })
        })
        .collect::<Result<_, _>>()?;
    let config = NewtonConfig {
        tol_residual: args.tol,
        max_iters: args.max_iters,
        damping: args.damping,
    };
    let result = newton_solve(&system, &x0, &config).map_err(|e| match e {
        NewtonError::NoConvergence { .. } | NewtonError::SingularJacobian { .. } => {
            CliError::NoSolution(e.to_string())
        }
        other => CliError::Usage(other.to_string()),
    })?;
    Ok(Document {
        schema_version: SCHEMA_VERSION,
        command: "newton",
        decimal_precision: precision,
        system: system_section(&system, path),
        params: ParamsSection {
            tol_residual: Some(args.tol),
            damping: Some(args.damping),
            max_iters: Some(args.max_iters),
            x0: Some(x0.iter().map(|v| render_rational(v, precision)).collect()),
            threads,
            ..ParamsSection::empty(args.seed)
        },
        warnings: None,
        marking: None,
        amplify: None,
        samples: None,
        candidates: None,
        marked_points: None,
        newton: Some(newton_section(&result, precision)),
        resources: None,
        timing_ms: Some(TimingSection {
            total: started.elapsed().as_millis(),
            marking: None,
            amplify_and_sample: None,
            refine: None,
        }),
    })
}
