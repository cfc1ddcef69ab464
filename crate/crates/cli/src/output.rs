//! Schema-versioned result documents. Exact rationals are rendered as
//! decimal strings under an explicit precision field so reruns are
//! byte-identical; wide integers are rendered as strings to stay safely
//! inside JSON number limits.

use num_rational::BigRational;
use qroots_core::amplify::SearchOutcome;
use qroots_core::baseline::{NewtonResult, NewtonStep};
use qroots_core::gradient::{RefineTrace, StopReason};
use qroots_core::marking::MarkReport;
use qroots_core::rational::{to_decimal_round, to_exact_decimal};
use qroots_core::resources::ResourceEstimate;
use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

/// Exact decimal when it fits the precision budget, else rounded to
/// `precision` places.
pub fn render_rational(r: &BigRational, precision: usize) -> String {
    if let Some(exact) = to_exact_decimal(r) {
        let frac_len = exact.split_once('.').map_or(0, |(_, f)| f.len());
        if frac_len <= precision {
            return exact;
        }
    }
    to_decimal_round(r, precision)
}

#[derive(Serialize)]
pub struct Document {
    pub schema_version: u32,
    pub command: &'static str,
    pub decimal_precision: usize,
    pub system: SystemSection,
    pub params: ParamsSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warnings: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub marking: Option<MarkingSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub amplify: Option<AmplifySection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<SampleSection>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub candidates: Option<Vec<CandidateSection>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub marked_points: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub newton: Option<NewtonSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resources: Option<ResourceSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<TimingSection>,
}

#[derive(Serialize)]
pub struct SystemSection {
    pub path: String,
    pub n: usize,
    pub max_degree: u32,
    pub max_terms: usize,
    pub equations: Vec<String>,
}

#[derive(Serialize)]
pub struct ParamsSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bits: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub int_bits: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold_log2: Option<i32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub amplify_mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shots: Option<u64>,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_bits: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iters: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub accuracy_bits: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gradient_source: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub damping: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x0: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

impl ParamsSection {
    pub fn empty(seed: u64) -> Self {
        Self {
            bits: None,
            int_bits: None,
            threshold_log2: None,
            lambda: None,
            threshold: None,
            amplify_mode: None,
            shots: None,
            seed,
            grid_bits: None,
            window: None,
            alpha: None,
            max_iters: None,
            accuracy_bits: None,
            gradient_source: None,
            tol_residual: None,
            damping: None,
            x0: None,
            threads: None,
        }
    }
}

#[derive(Serialize)]
pub struct MarkingSection {
    pub marked_count: u64,
    pub total_states: u64,
    pub success_probability: f64,
}

impl MarkingSection {
    pub fn from_report(report: &MarkReport) -> Self {
        Self {
            marked_count: report.marked_count,
            total_states: report.total_states,
            success_probability: report.success_probability,
        }
    }
}

#[derive(Serialize)]
pub struct AmplifySection {
    pub mode: String,
    pub iterations: u64,
    pub discards: u64,
    /// Marked-branch probability before amplification and after each step.
    pub probability_trace: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials_per_shot: Option<Vec<u64>>,
}

#[derive(Serialize)]
pub struct SampleSection {
    pub point: Vec<String>,
    pub bit_strings: Vec<String>,
    pub count: u64,
}

#[derive(Serialize)]
pub struct CandidateSection {
    pub point: Vec<String>,
    pub refined: RefinedSection,
}

#[derive(Serialize)]
pub struct RefinedSection {
    pub solution: Vec<String>,
    /// Exact residuals fᵢ at the refined solution.
    pub residuals: Vec<String>,
    pub f_value: String,
    pub converged: bool,
    pub iterations: u32,
    pub stop_reason: &'static str,
    pub alpha_halvings: u32,
    pub window_shrinks: u32,
    pub trace: Vec<RefineStepSection>,
}

#[derive(Serialize)]
pub struct RefineStepSection {
    pub point: Vec<String>,
    pub f_value: String,
    pub gradient_sup_norm: Option<String>,
}

pub fn stop_reason_str(reason: StopReason) -> &'static str {
    match reason {
        StopReason::GradientTolerance => "gradient-tolerance",
        StopReason::GridStall => "grid-stall",
        StopReason::MaxIters => "max-iters",
    }
}

pub fn refined_section(
    solution: &[BigRational],
    residuals: &[BigRational],
    f_value: &BigRational,
    trace: &RefineTrace,
    precision: usize,
) -> RefinedSection {
    RefinedSection {
        solution: solution.iter().map(|v| render_rational(v, precision)).collect(),
        residuals: residuals.iter().map(|v| render_rational(v, precision)).collect(),
        f_value: render_rational(f_value, precision),
        converged: trace.converged,
        iterations: trace.iterations_used,
        stop_reason: stop_reason_str(trace.stop_reason),
        alpha_halvings: trace.alpha_halvings,
        window_shrinks: trace.window_shrinks,
        trace: trace
            .steps
            .iter()
            .map(|s| RefineStepSection {
                point: s.point.iter().map(|v| render_rational(v, precision)).collect(),
                f_value: render_rational(&s.f_value, precision),
                gradient_sup_norm: if s.gradient.is_empty() {
                    None
                } else {
                    use num_traits::Signed;
                    let sup = s
                        .gradient
                        .iter()
                        .map(|g| g.abs())
                        .max()
                        .unwrap_or_else(|| BigRational::from_integer(0.into()));
                    Some(render_rational(&sup, precision))
                },
            })
            .collect(),
    }
}

pub fn amplify_section(outcome: &SearchOutcome, mode: &str) -> AmplifySection {
    AmplifySection {
        mode: mode.to_string(),
        iterations: outcome.iterations,
        discards: outcome.discards,
        probability_trace: outcome.probability_trace.clone(),
        trials_per_shot: if outcome.trials_per_shot.iter().any(|&t| t > 1) {
            Some(outcome.trials_per_shot.clone())
        } else {
            None
        },
    }
}

#[derive(Serialize)]
pub struct NewtonSection {
    pub solution: Vec<f64>,
    pub exact_residuals: Vec<String>,
    pub iterations: u32,
    pub trace: Vec<NewtonStepSection>,
}

#[derive(Serialize)]
pub struct NewtonStepSection {
    pub point: Vec<f64>,
    pub max_residual: f64,
}

pub fn newton_section(result: &NewtonResult, precision: usize) -> NewtonSection {
    NewtonSection {
        solution: result.solution.clone(),
        exact_residuals: result
            .exact_residuals
            .iter()
            .map(|r| render_rational(r, precision))
            .collect(),
        iterations: result.iterations,
        trace: result.trace.iter().map(newton_step).collect(),
    }
}

fn newton_step(step: &NewtonStep) -> NewtonStepSection {
    NewtonStepSection { point: step.point.clone(), max_residual: step.max_residual }
}

#[derive(Serialize)]
pub struct ResourceSection {
    pub search_ops: String,
    pub refine_ops: String,
    pub total_ops: String,
    pub total_qubits: String,
    pub newton_ops_per_iter: String,
}

impl ResourceSection {
    pub fn from_estimate(est: &ResourceEstimate) -> Self {
        Self {
            search_ops: est.search_ops.to_string(),
            refine_ops: est.refine_ops.to_string(),
            total_ops: est.total_ops.to_string(),
            total_qubits: est.total_qubits.to_string(),
            newton_ops_per_iter: est.newton_ops_per_iter.to_string(),
        }
    }
}

#[derive(Serialize)]
pub struct TimingSection {
    pub total: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub marking: Option<u128>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub amplify_and_sample: Option<u128>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refine: Option<u128>,
}
