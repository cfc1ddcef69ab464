//! Amplitude amplification of the marked branch: the reflection pair (flip
//! marked basis states, reflect about the search-start state), iteration
//! planning, and the sampling loop with ancilla post-selection. The
//! repeat-until-success alternative samples the unamplified state until a
//! marked outcome appears.
//!
//! Everything here operates in the collapsed picture over the variable
//! registers: a basis state is "good" exactly when it is marked, which is
//! equivalent to the control registers reading |0…0⟩ in the faithful circuit,
//! so discarding unmarked samples is the ancilla check.

use crate::fixedpoint::BitWord;
use crate::marking::{self, MarkReport, MarkingError, MarkingSpec};
use crate::polysys::PolynomialSystem;
use crate::statesim::{init_uniform, QuantumState, Sampler, SimError};
use num_complex::Complex64;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmplifyMode {
    /// Count M classically and run the optimal iteration count. Default.
    ExactCount,
    /// Run round(√(2^λ)) iterations regardless of M.
    FixedSqrtLambda,
    /// No amplification; measure and post-select until a marked outcome.
    RepeatUntilSuccess,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AmplifySpec {
    pub mode: AmplifyMode,
    /// Drives the fixed schedule round(√(2^λ)).
    pub lambda: u32,
    /// Per-shot cap on resampling attempts (and on repeat-until-success
    /// trials).
    pub max_iterations: u64,
    pub seed: u64,
}

impl Default for AmplifySpec {
    fn default() -> Self {
        Self { mode: AmplifyMode::ExactCount, lambda: 0, max_iterations: 10_000, seed: 0 }
    }
}

/// One Grover iteration: phase-flip the marked basis states, then reflect
/// about the reference state (2|ref⟩⟨ref| − I). The reference is the
/// search-start state — the variable-register shadow of the post-marking
/// reference in the faithful picture.
pub fn grover_step(state: &mut QuantumState, marked: &[bool], reference: &QuantumState) {
    debug_assert_eq!(state.amplitudes().len(), marked.len());
    for (a, &m) in state.amplitudes_mut().iter_mut().zip(marked) {
        if m {
            *a = -*a;
        }
    }
    let overlap: Complex64 = reference.inner(state);
    let two_overlap = overlap * 2.0;
    for (a, r) in state.amplitudes_mut().iter_mut().zip(reference.amplitudes()) {
        *a = two_overlap * r - *a;
    }
}

/// Closed-form two-dimensional Grover rotation in span{marked, unmarked}:
/// after k steps from the uniform state the marked mass is sin²((2k+1)θ)
/// with θ = asin(√(M/T)).
#[derive(Debug, Clone, Copy)]
pub struct GroverRotation {
    theta: f64,
    angle: f64,
}

impl GroverRotation {
    pub fn new(marked_count: u64, total_states: u64) -> Self {
        let theta = ((marked_count as f64 / total_states as f64).sqrt()).asin();
        Self { theta, angle: theta }
    }

    pub fn step(&mut self) {
        self.angle += 2.0 * self.theta;
    }

    pub fn marked_probability(&self) -> f64 {
        self.angle.sin().powi(2)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// Optimal iteration count k = ⌊π / (4·asin(√(M/T)))⌋.
pub fn optimal_iterations(marked_count: u64, total_states: u64) -> Result<u64, AmplifyError> {
    if marked_count == 0 {
        return Err(AmplifyError::NoMarkedStates);
    }
    if marked_count > total_states {
        return Err(AmplifyError::BadCounts { marked: marked_count, total: total_states });
    }
    let theta = ((marked_count as f64 / total_states as f64).sqrt()).asin();
    Ok((PI / (4.0 * theta)).floor().max(0.0) as u64)
}

/// The fixed λ schedule: round(√(2^λ)) iterations regardless of M.
pub fn sqrt_lambda_iterations(lambda: u32) -> u64 {
    f64::powi(2.0, lambda as i32).sqrt().round() as u64
}

/// Diagnostics and samples from a full search run.
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    /// Accepted (post-selected) samples, decoded per variable.
    pub samples: Vec<Vec<BitWord>>,
    /// Grover iterations applied.
    pub iterations: u64,
    /// Marked-branch probability before amplification and after each step
    /// (length iterations + 1), measured on the simulated vector.
    pub probability_trace: Vec<f64>,
    /// Samples rejected by the ancilla (control-register) check.
    pub discards: u64,
    /// Repeat-until-success mode: trials needed per accepted shot.
    pub trials_per_shot: Vec<u64>,
    pub report: MarkReport,
}

/// init → mark → amplify → sample, with the ancilla post-selection rule:
/// a sample failing the check is discarded and redrawn.
pub fn run_search(
    system: &PolynomialSystem,
    marking_spec: &MarkingSpec,
    amplify_spec: &AmplifySpec,
    shots: u64,
) -> Result<SearchOutcome, AmplifyError> {
    let vf = marking_spec.variable_format();
    let layout = marking::variable_layout(system, vf)?;
    let names: Vec<String> = layout.registers().map(|(n, _)| n.to_string()).collect();
    let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let reference = init_uniform(&layout, &name_refs)?;

    let mask = marking::marked_mask(system, marking_spec)?;
    let marked_count = mask.iter().filter(|&&m| m).count() as u64;
    let total_states = mask.len() as u64;
    if marked_count == 0 {
        return Err(AmplifyError::Marking(MarkingError::EmptyMarkedSet));
    }
    let report = MarkReport {
        marked_count,
        total_states,
        success_probability: marked_count as f64 / total_states as f64,
        captured_mass: marked_count as f64 / total_states as f64,
    };

    let iterations = match amplify_spec.mode {
        AmplifyMode::ExactCount => optimal_iterations(marked_count, total_states)?,
        AmplifyMode::FixedSqrtLambda => sqrt_lambda_iterations(amplify_spec.lambda),
        AmplifyMode::RepeatUntilSuccess => 0,
    };

    let marked_mass = |state: &QuantumState| -> f64 {
        state
            .amplitudes()
            .iter()
            .zip(&mask)
            .filter(|(_, &m)| m)
            .map(|(a, _)| a.norm_sqr())
            .sum()
    };

    let mut state = reference.clone();
    let mut probability_trace = Vec::with_capacity(iterations as usize + 1);
    probability_trace.push(marked_mass(&state));
    for _ in 0..iterations {
        grover_step(&mut state, &mask, &reference);
        probability_trace.push(marked_mass(&state));
    }

    let sampler = Sampler::new(&state);
    let mut rng = ChaCha8Rng::seed_from_u64(amplify_spec.seed);
    let mut samples = Vec::with_capacity(shots as usize);
    let mut discards = 0u64;
    let mut trials_per_shot = Vec::new();
    for shot in 0..shots {
        let mut trials = 0u64;
        loop {
            trials += 1;
            if trials > amplify_spec.max_iterations {
                return Err(AmplifyError::Exhausted {
                    shot,
                    attempts: amplify_spec.max_iterations,
                });
            }
            let idx = sampler.draw_index(&mut rng);
            if mask[idx] {
                let raws: Vec<u64> = name_refs
                    .iter()
                    .map(|n| state.layout().extract(idx, n))
                    .collect::<Result<_, _>>()?;
                samples.push(
                    raws.into_iter()
                        .map(|r| BitWord::from_raw(r, vf).expect("raw in range"))
                        .collect(),
                );
                break;
            }
            discards += 1;
        }
        trials_per_shot.push(trials);
    }

    Ok(SearchOutcome {
        samples,
        iterations,
        probability_trace,
        discards,
        trials_per_shot,
        report,
    })
}

#[derive(Debug, Error)]
pub enum AmplifyError {
    #[error("cannot amplify: no marked states")]
    NoMarkedStates,
    #[error("marked count {marked} exceeds total {total}")]
    BadCounts { marked: u64, total: u64 },
    #[error("shot {shot} found no marked outcome within {attempts} attempts")]
    Exhausted { shot: u64, attempts: u64 },
    #[error(transparent)]
    Marking(#[from] MarkingError),
    #[error(transparent)]
    Sim(#[from] SimError),
}
