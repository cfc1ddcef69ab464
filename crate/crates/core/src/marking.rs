//! The residual check oracle and the duality marking operator.
//!
//! A grid point is *marked* when every equation's residual register, after
//! the exact oracle evaluation, has magnitude below the threshold τ = 2^ρ —
//! the "leading λ integer bits are zero" test, read on the magnitude because
//! residuals are signed. Marking is implemented twice:
//!
//! - `mark_collapsed` multiplies each variable-basis amplitude by the 0/1
//!   check product and renormalizes. This is the production path; it scales
//!   to the full dense-simulation cap because it never materializes scratch
//!   registers.
//! - `mark_faithful` runs the ancilla/control circuit literally — oracle,
//!   check, controlled kickback into the ancilla, uncompute, Hadamards on the
//!   controls — exploiting that all oracles are classically controlled, so
//!   the scratch/ancilla/control factor evolves independently per variable
//!   basis state. `mark_faithful_circuit` is the same pipeline on one global
//!   state vector, for instances small enough to afford it.
//!
//! Both agree because the post-Hadamard control amplitude on |0…0⟩ is exactly
//! Πᵢ(1+e^{iπb̄ᵢ})/2 ∈ {0, 1}: the marking operator is an exact projector,
//! not an approximate one.

use crate::fixedpoint::{eval_oracle, BitWord, FixedFormat, OracleMode, ResultFormat};
use crate::polysys::PolynomialSystem;
use crate::rational::pow2;
use crate::statesim::{
    self, apply_hadamard_register, apply_xor_oracle, init_uniform, load_register,
    prepare_phase_register, project, split_factor, QuantumState, RegisterLayout, SimError,
};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use thiserror::Error;

const EQUIV_TOL: f64 = 1e-12;

/// Threshold specification for the check oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MarkingSpec {
    /// Number of leading integer(-magnitude) bits of the result register that
    /// must be zero.
    lambda: u32,
    /// τ = 2^threshold_log2; equals result integer bits − λ.
    threshold_log2: i32,
    variable_format: FixedFormat,
    result_format: FixedFormat,
}

impl MarkingSpec {
    /// Build from the digit count λ: τ = 2^(result integer bits − λ).
    pub fn from_lambda(
        lambda: u32,
        variable_format: FixedFormat,
        result_format: ResultFormat,
    ) -> Result<Self, MarkingError> {
        let rf = result_format.format();
        let rho = rf.integer_bits() as i32 - lambda as i32;
        Self::from_threshold_log2(rho, variable_format, result_format)
    }

    /// Build from ρ directly: τ = 2^ρ.
    pub fn from_threshold_log2(
        threshold_log2: i32,
        variable_format: FixedFormat,
        result_format: ResultFormat,
    ) -> Result<Self, MarkingError> {
        let rf = result_format.format();
        let rho = threshold_log2;
        if rho < -(rf.fractional_bits() as i32) || rho > rf.integer_bits() as i32 {
            return Err(MarkingError::ThresholdOutOfRange {
                rho,
                fractional_bits: rf.fractional_bits(),
                integer_bits: rf.integer_bits(),
            });
        }
        Ok(Self {
            lambda: (rf.integer_bits() as i32 - rho) as u32,
            threshold_log2: rho,
            variable_format,
            result_format: rf,
        })
    }

    pub fn lambda(&self) -> u32 {
        self.lambda
    }

    pub fn threshold_log2(&self) -> i32 {
        self.threshold_log2
    }

    /// τ as an exact rational.
    pub fn threshold(&self) -> BigRational {
        pow2(self.threshold_log2 as i64)
    }

    pub fn variable_format(&self) -> FixedFormat {
        self.variable_format
    }

    pub fn result_format(&self) -> FixedFormat {
        self.result_format
    }
}

/// The check oracle f̄: 0 when the residual register magnitude is below τ
/// (the point passes), 1 otherwise.
pub fn check_oracle(residual: BitWord, spec: &MarkingSpec) -> u8 {
    let rf = spec.result_format;
    debug_assert_eq!(residual.format(), rf);
    // |q|·2^{-frac} < 2^ρ  <=>  |q| < 2^{ρ+frac}; ρ ≥ −frac by construction
    let shift = spec.threshold_log2 + rf.fractional_bits() as i32;
    let bound = 1i128 << shift;
    if (residual.scaled_int() as i128).abs() < bound {
        0
    } else {
        1
    }
}

/// Outcome report of a marking pass.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkReport {
    /// Number of marked grid points M.
    pub marked_count: u64,
    /// Total grid size 2^{N·n}.
    pub total_states: u64,
    /// M / 2^{N·n}, computed exactly from the integer counts.
    pub success_probability: f64,
    /// Pre-normalization squared norm of the input on the marked set; equals
    /// `success_probability` (to float accuracy) when the input is uniform.
    pub captured_mass: f64,
}

/// Layout of n variable registers named x0..x{n-1}, each of the variable
/// format's width.
pub fn variable_layout(system: &PolynomialSystem, format: FixedFormat) -> Result<RegisterLayout, SimError> {
    variable_layout_with_cap(system, format, statesim::DEFAULT_QUBIT_CAP)
}

pub fn variable_layout_with_cap(
    system: &PolynomialSystem,
    format: FixedFormat,
    cap: u32,
) -> Result<RegisterLayout, SimError> {
    let names: Vec<String> = (0..system.n()).map(|j| format!("x{j}")).collect();
    let regs: Vec<(&str, u32)> = names.iter().map(|n| (n.as_str(), format.width())).collect();
    RegisterLayout::with_cap(&regs, cap)
}

// ---------------------------------------------------------------------------
// Point checking: compiled integer fast path with an exact fallback.
// ---------------------------------------------------------------------------

/// Decides whether a grid point (given by per-variable raw words) passes all
/// n checks. The compiled form evaluates each equation in scaled i128
/// integers, exactly equivalent to running the exact oracle and the check on
/// the encoded word; construction falls back to the definitional rational
/// path when the widths rule out i128.
pub struct PointChecker {
    system: PolynomialSystem,
    spec: MarkingSpec,
    compiled: Option<Vec<ScaledEquation>>,
}

struct ScaledEquation {
    /// (integer coefficient, exponents) pairs.
    terms: Vec<(i128, Vec<u32>)>,
    /// Pass iff pass_lo <= S << rf_shift < pass_hi, where S is the scaled
    /// integer value of the equation at the raw point.
    rf_shift: u32,
    pass_lo: i128,
    pass_hi: i128,
}

impl PointChecker {
    pub fn new(system: &PolynomialSystem, spec: &MarkingSpec) -> Self {
        let compiled = compile_scaled(system, spec);
        Self { system: system.clone(), spec: *spec, compiled }
    }

    pub fn spec(&self) -> &MarkingSpec {
        &self.spec
    }

    /// Fast path when compiled, exact rational path otherwise.
    pub fn passes_raw(&self, raws: &[u64]) -> bool {
        match &self.compiled {
            Some(eqs) => eqs.iter().all(|eq| {
                let mut s: i128 = 0;
                for (c, exps) in &eq.terms {
                    let mut v = *c;
                    for (&raw, &e) in raws.iter().zip(exps) {
                        for _ in 0..e {
                            v *= raw as i128;
                        }
                    }
                    s += v;
                }
                let scaled = s << eq.rf_shift;
                eq.pass_lo <= scaled && scaled < eq.pass_hi
            }),
            None => self.passes_raw_exact(raws),
        }
    }

    /// Definitional path: exact oracle into the result register, then the
    /// check oracle on the word.
    pub fn passes_raw_exact(&self, raws: &[u64]) -> bool {
        let vf = self.spec.variable_format;
        let point: Vec<BitWord> = raws
            .iter()
            .map(|&r| BitWord::from_raw(r, vf).expect("raw in range"))
            .collect();
        (0..self.system.n()).all(|i| {
            let word = eval_oracle(&self.system, i, &point, self.spec.result_format, OracleMode::Exact)
                .expect("result format sized for the search box");
            check_oracle(word, &self.spec) == 0
        })
    }

    pub fn is_compiled(&self) -> bool {
        self.compiled.is_some()
    }
}

fn compile_scaled(system: &PolynomialSystem, spec: &MarkingSpec) -> Option<Vec<ScaledEquation>> {
    let vf = spec.variable_format;
    let rf = spec.result_format;
    let frac = vf.fractional_bits();
    let rf_frac = rf.fractional_bits();
    let max_raw = BigInt::from((1u64 << vf.total_bits()) - 1);
    let mut out = Vec::with_capacity(system.n());
    for eq in system.equations() {
        let d_eq = eq.max_degree();
        // common denominator of the coefficients
        let mut lcm = BigInt::from(1);
        for t in eq.terms() {
            lcm = num_integer::lcm(lcm.clone(), t.coefficient.denom().clone());
        }
        // S = f * lcm * 2^{frac*d_eq}
        let mut terms = Vec::with_capacity(eq.term_count());
        let mut bound = BigInt::from(0);
        for t in eq.terms() {
            let deg: u32 = t.exponents.iter().sum();
            let scale = (&lcm / t.coefficient.denom()) * BigInt::from(2u32).pow(frac * (d_eq - deg));
            let c = t.coefficient.numer() * scale;
            bound += BigInt::from(c.magnitude().clone()) * max_raw.pow(deg);
            let ci = c.to_i128()?;
            terms.push((ci, t.exponents.clone()));
        }
        // pass  <=>  D - D*2^{ρ+rf_frac} <= S*2^{rf_frac} < D*2^{ρ+rf_frac},
        // D = lcm * 2^{frac*d_eq}
        let d = &lcm * BigInt::from(2u32).pow(frac * d_eq);
        let shift = spec.threshold_log2 + rf_frac as i32;
        debug_assert!(shift >= 0);
        let hi = &d * (BigInt::from(1) << shift as u32);
        let lo = &d - &hi;
        // everything must stay within i128 after the rf shift
        let limit = BigInt::from(i128::MAX >> (rf_frac + 1));
        if bound > limit || hi > limit || lo.magnitude() > limit.magnitude() {
            return None;
        }
        out.push(ScaledEquation {
            terms,
            rf_shift: rf_frac,
            pass_lo: lo.to_i128()?,
            pass_hi: hi.to_i128()?,
        });
    }
    Some(out)
}

// ---------------------------------------------------------------------------
// Brute-force oracle and collapsed marking.
// ---------------------------------------------------------------------------

fn raws_of_index(idx: usize, n: usize, width: u32) -> Vec<u64> {
    let mask = (1u64 << width) - 1;
    (0..n)
        .map(|j| ((idx as u64) >> (width * (n - 1 - j) as u32)) & mask)
        .collect()
}

/// Marked indicator over all 2^{N·n} grid indices, in variable-layout index
/// order. The chunked parallel evaluation is deterministic.
pub fn marked_mask(system: &PolynomialSystem, spec: &MarkingSpec) -> Result<Vec<bool>, MarkingError> {
    let n = system.n();
    let width = spec.variable_format().width();
    let qubits = width * n as u32;
    if qubits > statesim::DEFAULT_QUBIT_CAP {
        return Err(MarkingError::Sim(SimError::CapExceeded {
            qubits,
            cap: statesim::DEFAULT_QUBIT_CAP,
        }));
    }
    let checker = PointChecker::new(system, spec);
    let dim = 1usize << qubits;
    let mut mask = vec![false; dim];
    mask.par_chunks_mut(1 << 12)
        .enumerate()
        .for_each(|(chunk, slice)| {
            let base = chunk << 12;
            for (k, m) in slice.iter_mut().enumerate() {
                *m = checker.passes_raw(&raws_of_index(base + k, n, width));
            }
        });
    Ok(mask)
}

/// All grid points passing every check, as per-variable words, in ascending
/// index order.
pub fn marked_set(system: &PolynomialSystem, spec: &MarkingSpec) -> Result<Vec<Vec<BitWord>>, MarkingError> {
    let mask = marked_mask(system, spec)?;
    let n = system.n();
    let vf = spec.variable_format();
    Ok(mask
        .iter()
        .enumerate()
        .filter(|(_, &m)| m)
        .map(|(idx, _)| {
            raws_of_index(idx, n, vf.width())
                .into_iter()
                .map(|r| BitWord::from_raw(r, vf).expect("raw in range"))
                .collect()
        })
        .collect())
}

/// Apply the marking projector to a state over the variable registers:
/// amplitudes of unmarked basis states are removed and the rest renormalized.
pub fn mark_collapsed(
    state: &QuantumState,
    system: &PolynomialSystem,
    spec: &MarkingSpec,
) -> Result<(QuantumState, MarkReport), MarkingError> {
    check_variable_layout(state.layout(), system, spec)?;
    let mask = marked_mask(system, spec)?;
    apply_mask(state, &mask)
}

/// Shared projector application given a precomputed indicator.
pub fn apply_mask(state: &QuantumState, mask: &[bool]) -> Result<(QuantumState, MarkReport), MarkingError> {
    let marked_count = mask.iter().filter(|&&m| m).count() as u64;
    let total_states = mask.len() as u64;
    let mut captured = 0.0;
    for (a, &m) in state.amplitudes().iter().zip(mask) {
        if m {
            captured += a.norm_sqr();
        }
    }
    if captured < statesim::PROJECTION_FLOOR {
        return Err(MarkingError::EmptyMarkedSet);
    }
    let scale = 1.0 / captured.sqrt();
    let amps = state
        .amplitudes()
        .iter()
        .zip(mask)
        .map(|(a, &m)| if m { a * scale } else { Complex64::ZERO })
        .collect();
    let out = QuantumState::from_amplitudes(state.layout().clone(), amps)
        .map_err(MarkingError::Sim)?;
    Ok((
        out,
        MarkReport {
            marked_count,
            total_states,
            success_probability: marked_count as f64 / total_states as f64,
            captured_mass: captured,
        },
    ))
}

fn check_variable_layout(
    layout: &RegisterLayout,
    system: &PolynomialSystem,
    spec: &MarkingSpec,
) -> Result<(), MarkingError> {
    let n = system.n();
    let w = spec.variable_format().width();
    let ok = layout.register_count() == n && layout.registers().all(|(_, width)| width == w);
    if ok {
        Ok(())
    } else {
        Err(MarkingError::LayoutMismatch {
            expected: format!("{n} registers of width {w}"),
        })
    }
}

// ---------------------------------------------------------------------------
// Faithful marking.
// ---------------------------------------------------------------------------

/// Result of pushing a single variable basis state through the full ancilla/
/// control circuit.
#[derive(Debug, Clone)]
pub struct BasisMarkOutcome {
    /// Check bits b̄ᵢ per equation (0 = passed).
    pub check_bits: Vec<u8>,
    /// Post-Hadamard control-register amplitudes (2^n entries); an exact
    /// basis vector up to float noise.
    pub control_amps: Vec<Complex64>,
    /// Amplitude on the all-zero control value — the exact-projector entry.
    pub amp_on_zero: Complex64,
    /// Control basis value with the largest amplitude.
    pub control_basis: u64,
}

/// Run the marking circuit on one variable basis point (raw words per
/// variable). The scratch registers are computed and uncomputed classically
/// (they hold basis values throughout); the ancilla/control factor is
/// simulated as an actual state vector.
pub fn faithful_basis_outcome(
    system: &PolynomialSystem,
    spec: &MarkingSpec,
    raws: &[u64],
) -> Result<BasisMarkOutcome, MarkingError> {
    let n = system.n();
    let vf = spec.variable_format();
    let point: Vec<BitWord> = raws
        .iter()
        .map(|&r| BitWord::from_raw(r, vf).map_err(|e| MarkingError::FixedPoint(e.to_string())))
        .collect::<Result<_, _>>()?;

    // little factor: ancilla + n control qubits
    let names: Vec<String> = (0..n).map(|i| format!("c{i}")).collect();
    let mut regs: Vec<(&str, u32)> = vec![("a", 1)];
    regs.extend(names.iter().map(|s| (s.as_str(), 1)));
    let layout = RegisterLayout::with_cap(&regs, 32).map_err(MarkingError::Sim)?;
    let mut factor = init_uniform(&layout, &names.iter().map(|s| s.as_str()).collect::<Vec<_>>())
        .map_err(MarkingError::Sim)?;
    load_register(&mut factor, "a", &prepare_phase_register(1)).map_err(MarkingError::Sim)?;

    let mut check_bits = Vec::with_capacity(n);
    let mut scratch_result: u64 = 0;
    let mut scratch_check: u64 = 0;
    for i in 0..n {
        let word = eval_oracle(system, i, &point, spec.result_format(), OracleMode::Exact)
            .map_err(|e| MarkingError::FixedPoint(e.to_string()))?;
        // U_f: result := result XOR f(x)
        scratch_result ^= word.raw();
        // U_f̄: check := check XOR f̄(result)
        let b = check_oracle(
            BitWord::from_raw(scratch_result, spec.result_format())
                .map_err(|e| MarkingError::FixedPoint(e.to_string()))?,
            spec,
        );
        scratch_check ^= u64::from(b);
        check_bits.push(b);
        // M_j: flip the ancilla when control i is 1 and the check bit is 1
        let check_now = scratch_check;
        let ci = 1 + i; // register index of c{i} in the factor layout
        apply_xor_oracle(&mut factor, "a", |vals| vals[ci] & check_now)
            .map_err(MarkingError::Sim)?;
        // uncompute check and result
        scratch_check ^= u64::from(b);
        scratch_result ^= word.raw();
    }
    if scratch_result != 0 || scratch_check != 0 {
        return Err(MarkingError::ScratchContaminated);
    }

    for name in &names {
        apply_hadamard_register(&mut factor, name).map_err(MarkingError::Sim)?;
    }
    // the ancilla must still factor out as (|0>-|1>)/sqrt(2)
    let controls = split_factor(&factor, "a", &prepare_phase_register(1), EQUIV_TOL)
        .map_err(|_| MarkingError::ScratchContaminated)?;
    let control_amps = controls.amplitudes().to_vec();
    let amp_on_zero = control_amps[0];
    let control_basis = control_amps
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm_sqr().partial_cmp(&b.1.norm_sqr()).unwrap())
        .map(|(i, _)| i as u64)
        .unwrap_or(0);
    Ok(BasisMarkOutcome { check_bits, control_amps, amp_on_zero, control_basis })
}

/// Faithful marking of a whole state over the variable registers: every basis
/// state is pushed through the circuit, the controls are Hadamard-rotated and
/// projected onto |0…0⟩, and the surviving variable state is returned with
/// the per-basis projector amplitudes.
pub fn mark_faithful(
    state: &QuantumState,
    system: &PolynomialSystem,
    spec: &MarkingSpec,
) -> Result<(QuantumState, MarkReport, Vec<Complex64>), MarkingError> {
    check_variable_layout(state.layout(), system, spec)?;
    let n = system.n();
    let width = spec.variable_format().width();
    let dim = state.amplitudes().len();
    let mut projector_amps = Vec::with_capacity(dim);
    for idx in 0..dim {
        let outcome = faithful_basis_outcome(system, spec, &raws_of_index(idx, n, width))?;
        projector_amps.push(outcome.amp_on_zero);
    }
    let mut marked_count = 0u64;
    let mut captured = 0.0;
    let mut amps: Vec<Complex64> = Vec::with_capacity(dim);
    for (a, p) in state.amplitudes().iter().zip(&projector_amps) {
        let v = a * p;
        captured += v.norm_sqr();
        if p.norm_sqr() > 0.5 {
            marked_count += 1;
        }
        amps.push(v);
    }
    if captured < statesim::PROJECTION_FLOOR {
        return Err(MarkingError::EmptyMarkedSet);
    }
    let scale = 1.0 / captured.sqrt();
    amps.iter_mut().for_each(|a| *a *= scale);
    let out = QuantumState::from_amplitudes(state.layout().clone(), amps)
        .map_err(MarkingError::Sim)?;
    Ok((
        out,
        MarkReport {
            marked_count,
            total_states: dim as u64,
            success_probability: marked_count as f64 / dim as f64,
            captured_mass: captured,
        },
        projector_amps,
    ))
}

/// Literal single-state-vector marking pipeline, for instances whose full
/// register footprint fits the dense cap. Returns the post-projection state
/// on the variable registers and the joint control-projection probability.
pub fn mark_faithful_circuit(
    system: &PolynomialSystem,
    spec: &MarkingSpec,
    cap: u32,
) -> Result<(QuantumState, f64), MarkingError> {
    let n = system.n();
    let vw = spec.variable_format().width();
    let rw = spec.result_format().width();
    let var_names: Vec<String> = (0..n).map(|j| format!("x{j}")).collect();
    let ctl_names: Vec<String> = (0..n).map(|j| format!("c{j}")).collect();
    let mut regs: Vec<(&str, u32)> = var_names.iter().map(|s| (s.as_str(), vw)).collect();
    regs.push(("res", rw));
    regs.push(("chk", 1));
    regs.push(("a", 1));
    regs.extend(ctl_names.iter().map(|s| (s.as_str(), 1)));
    let layout = RegisterLayout::with_cap(&regs, cap).map_err(MarkingError::Sim)?;

    let uniform: Vec<&str> = var_names
        .iter()
        .map(|s| s.as_str())
        .chain(ctl_names.iter().map(|s| s.as_str()))
        .collect();
    let mut state = init_uniform(&layout, &uniform).map_err(MarkingError::Sim)?;
    load_register(&mut state, "a", &prepare_phase_register(1)).map_err(MarkingError::Sim)?;

    let vf = spec.variable_format();
    let result_format = spec.result_format();
    let res_idx = n; // layout order: vars, res, chk, a, controls
    let chk_idx = n + 1;
    for i in 0..n {
        let eval = |vals: &[u64]| -> u64 {
            let point: Vec<BitWord> = (0..n)
                .map(|j| BitWord::from_raw(vals[j], vf).expect("raw in range"))
                .collect();
            eval_oracle(system, i, &point, result_format, OracleMode::Exact)
                .expect("result format sized for the search box")
                .raw()
        };
        let check = |vals: &[u64]| -> u64 {
            let word = BitWord::from_raw(vals[res_idx], result_format).expect("raw in range");
            u64::from(check_oracle(word, spec))
        };
        let kick = |vals: &[u64]| -> u64 { vals[n + 3 + i] & vals[chk_idx] };
        apply_xor_oracle(&mut state, "res", eval).map_err(MarkingError::Sim)?;
        apply_xor_oracle(&mut state, "chk", check).map_err(MarkingError::Sim)?;
        apply_xor_oracle(&mut state, "a", kick).map_err(MarkingError::Sim)?;
        apply_xor_oracle(&mut state, "chk", check).map_err(MarkingError::Sim)?;
        apply_xor_oracle(&mut state, "res", eval).map_err(MarkingError::Sim)?;
    }

    // scratch registers must be exactly restored
    let mut contamination = 0.0;
    for (idx, a) in state.amplitudes().iter().enumerate() {
        let res = state.layout().extract(idx, "res").map_err(MarkingError::Sim)?;
        let chk = state.layout().extract(idx, "chk").map_err(MarkingError::Sim)?;
        if res != 0 || chk != 0 {
            contamination += a.norm_sqr();
        }
    }
    if contamination > EQUIV_TOL {
        return Err(MarkingError::ScratchContaminated);
    }

    for name in &ctl_names {
        apply_hadamard_register(&mut state, name).map_err(MarkingError::Sim)?;
    }
    let norm = state.norm_sq();
    if (norm - 1.0).abs() > EQUIV_TOL {
        return Err(MarkingError::Sim(SimError::NotNormalized { norm_sq: norm }));
    }

    let mut prob = 1.0;
    let mut current = state;
    for name in &ctl_names {
        let (next, p) = project(&current, name, 0).map_err(|e| match e {
            SimError::EmptyBranch { .. } => MarkingError::EmptyMarkedSet,
            other => MarkingError::Sim(other),
        })?;
        prob *= p;
        current = next;
    }
    // strip the deterministic scratch, ancilla and control factors
    for name in ctl_names.iter().rev() {
        current = split_factor(&current, name, &[Complex64::ONE, Complex64::ZERO], 1e-9)
            .map_err(MarkingError::Sim)?;
    }
    let current = split_factor(&current, "a", &prepare_phase_register(1), 1e-9)
        .map_err(MarkingError::Sim)?;
    let current = split_factor(&current, "chk", &[Complex64::ONE, Complex64::ZERO], 1e-9)
        .map_err(MarkingError::Sim)?;
    let current = split_factor(&current, "res", &one_hot(rw), 1e-9).map_err(MarkingError::Sim)?;
    Ok((current, prob))
}

fn one_hot(width: u32) -> Vec<Complex64> {
    let mut v = vec![Complex64::ZERO; 1usize << width];
    v[0] = Complex64::ONE;
    v
}

#[derive(Debug, Error)]
pub enum MarkingError {
    #[error(
        "no grid point passes all residual checks; change the search range \
         (for example --int-bits), add --bits, or loosen the threshold"
    )]
    EmptyMarkedSet,
    #[error("threshold exponent {rho} outside [-{fractional_bits}, {integer_bits}]")]
    ThresholdOutOfRange { rho: i32, fractional_bits: u32, integer_bits: u32 },
    #[error("state layout mismatch: expected {expected}")]
    LayoutMismatch { expected: String },
    #[error("scratch registers not restored to |0> by uncomputation")]
    ScratchContaminated,
    #[error("fixed-point failure: {0}")]
    FixedPoint(String),
    #[error(transparent)]
    Sim(#[from] SimError),
}
