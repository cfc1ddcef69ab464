//! Gradient estimation by phase kickback plus per-register inverse QFT, and
//! the descent loop that refines a coarse candidate onto the 2^{-l} fine
//! grid.
//!
//! The estimator superposes a g-bit offset grid per variable over a window of
//! width L around the expansion point, applies F as a phase with the scale
//! 2π/(s·δ) (δ = L/2^g the grid spacing, s the derivative bound), inverse-
//! Fourier-transforms each register and reads the modal outcome kⱼ, decoded
//! signed around 2^{g-1}. The estimate is kⱼ·s/2^g per unit of xⱼ, so s/2^g
//! is the resolution and |∂F/∂xⱼ| must stay below s/2 to avoid wraparound.
//!
//! Refinement keeps every iterate on the 2^{-l} grid, which also keeps the
//! exact rational arithmetic cheap: a step is accepted only if it strictly
//! decreases the exact F, the step size is capped by an interval bound on the
//! Hessian row sum, and in quantum mode both the window and s shrink as the
//! gradient signal shrinks, mirroring how the kickback scale is "suited with
//! accuracy".

use crate::interval::{centered_box_rational, grad_bound, hessian_rowsum_bound};
use crate::polysys::{PolynomialSystem, SystemError};
use crate::rational::{ceil_log2, pow2, snap_to_grid, to_f64};
use crate::statesim::{apply_qft, marginal, QuantumState, RegisterLayout, SimError};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use std::f64::consts::PI;
use thiserror::Error;

/// Dense simulation cap for the joint offset grid (g·n qubits).
pub const GRID_QUBIT_CAP: u32 = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct GradientConfig {
    /// Offset-grid bits per variable (g).
    pub grid_bits: u32,
    /// Window width L; the grid spans [−L/2, L/2) with spacing δ = L/2^g.
    pub window: BigRational,
    /// Derivative bound s: |∂F/∂xⱼ| over the window should stay below s/2.
    pub derivative_bound: BigRational,
    /// log₂ N′ of the kickback register; phases are applied exactly, so this
    /// only feeds the resource accounting.
    pub phase_bits: u32,
    /// Descent step size (stored positive, applied as x − α·∇F).
    pub alpha: BigRational,
    /// Iteration cap c.
    pub max_iters: u32,
    /// Convergence threshold on ‖∇F‖∞.
    pub tol_gradnorm: BigRational,
    /// Fine-grid bits l: iterates and the solution live on spacing 2^{-l}.
    pub accuracy_bits: u32,
}

impl GradientConfig {
    /// Defaults: g = 6, α = 2⁻⁷, c = 32, l = 13, tol = 2^{-l}, window one
    /// coarse-grid cell (2^{-coarse_frac}), s the smallest power of two at
    /// least twice the gradient interval bound over that window.
    pub fn auto(system: &PolynomialSystem, center: &[BigRational], coarse_frac_bits: u32) -> Self {
        let grid_bits = 6;
        let window = pow2(-(coarse_frac_bits as i64));
        let derivative_bound = sound_scale(system, center, &window);
        Self {
            grid_bits,
            window,
            derivative_bound,
            phase_bits: grid_bits,
            alpha: pow2(-7),
            max_iters: 32,
            tol_gradnorm: pow2(-13),
            accuracy_bits: 13,
        }
    }
}

/// Smallest power of two ≥ 2 × the gradient interval bound over the window
/// box; guarantees the whole slope range fits the signed decode band.
pub fn sound_scale(system: &PolynomialSystem, center: &[BigRational], window: &BigRational) -> BigRational {
    let bx = centered_box_rational(center, window);
    let bound = grad_bound(system, &bx);
    let target = (2.0 * bound).max(f64::MIN_POSITIVE);
    let r = BigRational::from_float(target).unwrap_or_else(BigRational::one);
    pow2(ceil_log2(&r))
}

#[derive(Debug, Clone)]
pub struct GradientEstimate {
    /// Estimated ∂F/∂xⱼ = kⱼ·s/2^g, exact rationals.
    pub components: Vec<BigRational>,
    /// Signed modal outcomes kⱼ.
    pub modal_outcomes: Vec<i64>,
    /// Born probability of each modal outcome.
    pub modal_probabilities: Vec<f64>,
    /// Set when a modal outcome sits against the ±2^{g-1} decode boundary.
    pub wraparound: bool,
    /// Set when s is below the gradient interval bound over the window (the
    /// slope range may alias).
    pub scale_warning: bool,
}

/// Gradient of F = Σᵢfᵢ² by the phase-kickback estimator.
pub fn jordan_gradient(
    system: &PolynomialSystem,
    x_star: &[BigRational],
    config: &GradientConfig,
) -> Result<GradientEstimate, GradientError> {
    if x_star.len() != system.n() {
        return Err(GradientError::System(SystemError::PointArity {
            expected: system.n(),
            found: x_star.len(),
        }));
    }
    let scale_warning = {
        let bx = centered_box_rational(x_star, &config.window);
        to_f64(&config.derivative_bound) < grad_bound(system, &bx)
    };
    let mut estimate = jordan_gradient_fn(
        |p| system.sum_of_squares_f64(p),
        system.n(),
        x_star,
        config,
    )?;
    estimate.scale_warning = scale_warning;
    Ok(estimate)
}

/// Phase-kickback gradient estimation of an arbitrary scalar field; used
/// directly by the affine exactness tests and by `jordan_gradient`.
pub fn jordan_gradient_fn(
    field: impl Fn(&[f64]) -> f64 + Sync,
    n: usize,
    x_star: &[BigRational],
    config: &GradientConfig,
) -> Result<GradientEstimate, GradientError> {
    let g = config.grid_bits;
    if g == 0 {
        return Err(GradientError::BadConfig { message: "grid_bits must be positive".into() });
    }
    let qubits = g * n as u32;
    if qubits > GRID_QUBIT_CAP {
        return Err(GradientError::Sim(SimError::CapExceeded { qubits, cap: GRID_QUBIT_CAP }));
    }
    if !config.window.is_positive() || !config.derivative_bound.is_positive() {
        return Err(GradientError::BadConfig {
            message: "window and derivative bound must be positive".into(),
        });
    }
    let names: Vec<String> = (0..n).map(|j| format!("y{j}")).collect();
    let regs: Vec<(&str, u32)> = names.iter().map(|s| (s.as_str(), g)).collect();
    let layout = RegisterLayout::with_cap(&regs, GRID_QUBIT_CAP)?;

    let grid = 1usize << g;
    let half = (grid / 2) as i64;
    let delta = to_f64(&config.window) / grid as f64;
    let scale = 2.0 * PI / (to_f64(&config.derivative_bound) * delta);
    let center: Vec<f64> = x_star.iter().map(to_f64).collect();
    let f_center = field(&center);
    let dim = layout.dimension();
    let norm = 1.0 / (dim as f64).sqrt();
    let g_mask = (grid - 1) as u64;

    let mut amplitudes = vec![Complex64::ZERO; dim];
    amplitudes
        .par_chunks_mut(1 << 10)
        .enumerate()
        .for_each(|(chunk, slice)| {
            let base = chunk << 10;
            let mut point = vec![0.0f64; n];
            for (k, amp) in slice.iter_mut().enumerate() {
                let idx = (base + k) as u64;
                for j in 0..n {
                    let y = (idx >> (g * (n - 1 - j) as u32)) & g_mask;
                    point[j] = center[j] + delta * (y as i64 - half) as f64;
                }
                let phase = scale * (field(&point) - f_center);
                *amp = Complex64::from_polar(norm, phase);
            }
        });
    let mut state = QuantumState::from_amplitudes(layout, amplitudes)?;
    for name in &names {
        apply_qft(&mut state, name, true)?;
    }

    let mut components = Vec::with_capacity(n);
    let mut modal_outcomes = Vec::with_capacity(n);
    let mut modal_probabilities = Vec::with_capacity(n);
    let mut wraparound = false;
    for name in &names {
        let dist = marginal(&state, name)?;
        let (k_mode, p_mode) = dist
            .iter()
            .enumerate()
            .fold((0usize, f64::NEG_INFINITY), |(bi, bp), (i, &p)| {
                if p > bp {
                    (i, p)
                } else {
                    (bi, bp)
                }
            });
        let signed = if (k_mode as i64) >= half { k_mode as i64 - grid as i64 } else { k_mode as i64 };
        if signed.abs() >= half - 1 {
            wraparound = true;
        }
        modal_outcomes.push(signed);
        modal_probabilities.push(p_mode);
        components.push(
            &config.derivative_bound * BigRational::new(BigInt::from(signed), BigInt::from(grid)),
        );
    }
    Ok(GradientEstimate {
        components,
        modal_outcomes,
        modal_probabilities,
        wraparound,
        scale_warning: false,
    })
}

/// The componentwise error bound the estimator is tested against:
/// resolution term s/2^{g-1} plus the curvature term C·L/2, with C the
/// Hessian row-sum interval bound over the window box (the slope of F can
/// drift by at most C·L/2 across the window).
pub fn gradient_error_bound(
    system: &PolynomialSystem,
    x_star: &[BigRational],
    config: &GradientConfig,
) -> f64 {
    let bx = centered_box_rational(x_star, &config.window);
    let c = hessian_rowsum_bound(system, &bx);
    let s = to_f64(&config.derivative_bound);
    let l = to_f64(&config.window);
    s / f64::powi(2.0, config.grid_bits as i32 - 1) + c * l / 2.0
}

/// One descent update x′ = x − α·∇F, exact.
pub fn descent_step(x: &[BigRational], gradient: &[BigRational], alpha: &BigRational) -> Vec<BigRational> {
    assert_eq!(x.len(), gradient.len(), "length mismatch");
    x.iter().zip(gradient).map(|(xi, gi)| xi - alpha * gi).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GradientSource {
    Analytic,
    QuantumSim,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// ‖∇F‖∞ fell below tol_gradnorm.
    GradientTolerance,
    /// No strictly-F-decreasing step exists at the grid/window resolution.
    GridStall,
    MaxIters,
}

#[derive(Debug, Clone)]
pub struct RefineStep {
    pub point: Vec<BigRational>,
    pub f_value: BigRational,
    pub gradient: Vec<BigRational>,
}

#[derive(Debug, Clone)]
pub struct RefineTrace {
    /// One entry per iterate including the start point; gradients are the
    /// estimates used to leave each point (empty on the final entry).
    pub steps: Vec<RefineStep>,
    pub converged: bool,
    pub iterations_used: u32,
    pub stop_reason: StopReason,
    /// Step-size halvings forced by the F-decrease guard.
    pub alpha_halvings: u32,
    /// Window shrinks performed by the quantum estimator.
    pub window_shrinks: u32,
    /// Any wraparound flag seen along the way.
    pub wraparound_seen: bool,
}

/// Refine a candidate on the 2^{-l} grid until the gradient estimate drops
/// below tolerance or the grid cannot be improved.
pub fn refine(
    system: &PolynomialSystem,
    x0: &[BigRational],
    config: &GradientConfig,
    source: GradientSource,
) -> Result<(Vec<BigRational>, RefineTrace), GradientError> {
    if x0.len() != system.n() {
        return Err(GradientError::System(SystemError::PointArity {
            expected: system.n(),
            found: x0.len(),
        }));
    }
    let l = config.accuracy_bits;
    let mut x: Vec<BigRational> = x0.iter().map(|v| snap_to_grid(v, l)).collect();
    let mut f_x = system.sum_of_squares(&x);
    let mut window = config.window.clone();
    // window floor: offset spacing no finer than an eighth of the output cell
    let window_floor = pow2(config.grid_bits as i64 - (l as i64 + 3));
    let mut trace = RefineTrace {
        steps: Vec::new(),
        converged: false,
        iterations_used: 0,
        stop_reason: StopReason::MaxIters,
        alpha_halvings: 0,
        window_shrinks: 0,
        wraparound_seen: false,
    };

    while trace.iterations_used < config.max_iters {
        let gradient = match source {
            GradientSource::Analytic => system.grad_sum_of_squares(&x).map_err(GradientError::System)?,
            GradientSource::QuantumSim => {
                let est = adaptive_quantum_estimate(system, &x, &mut window, config, &mut trace)?;
                est.components
            }
        };
        let sup = gradient.iter().map(|g| g.abs()).fold(BigRational::zero(), |m, v| m.max(v));
        if sup < config.tol_gradnorm {
            trace.steps.push(RefineStep { point: x.clone(), f_value: f_x.clone(), gradient });
            trace.converged = true;
            trace.stop_reason = StopReason::GradientTolerance;
            return Ok((x, trace));
        }

        // cap the step by the Hessian interval bound over the local box
        let bx = centered_box_rational(&x, &window);
        let hess = hessian_rowsum_bound(system, &bx);
        let mut alpha = config.alpha.clone();
        if hess > 0.0 {
            let cap_exp = -ceil_log2(
                &BigRational::from_float(2.0 * hess).unwrap_or_else(BigRational::one),
            );
            let cap = pow2(cap_exp);
            if cap < alpha {
                alpha = cap;
            }
        }

        let mut accepted: Option<(Vec<BigRational>, BigRational)> = None;
        for _ in 0..64 {
            let proposal: Vec<BigRational> = descent_step(&x, &gradient, &alpha)
                .iter()
                .map(|v| snap_to_grid(v, l))
                .collect();
            if proposal == x {
                break; // step rounds away entirely
            }
            let f_new = system.sum_of_squares(&proposal);
            if f_new < f_x {
                accepted = Some((proposal, f_new));
                break;
            }
            alpha /= BigRational::from_integer(BigInt::from(2));
            trace.alpha_halvings += 1;
        }

        match accepted {
            Some((next, f_next)) => {
                trace.steps.push(RefineStep {
                    point: x.clone(),
                    f_value: f_x.clone(),
                    gradient,
                });
                x = next;
                f_x = f_next;
                trace.iterations_used += 1;
            }
            None => {
                // no improving step at this resolution; in quantum mode try a
                // tighter window first
                if source == GradientSource::QuantumSim && window > window_floor {
                    window /= BigRational::from_integer(BigInt::from(2));
                    trace.window_shrinks += 1;
                    continue;
                }
                trace.steps.push(RefineStep {
                    point: x.clone(),
                    f_value: f_x.clone(),
                    gradient,
                });
                trace.converged = true;
                trace.stop_reason = StopReason::GridStall;
                return Ok((x, trace));
            }
        }
    }
    trace.steps.push(RefineStep {
        point: x.clone(),
        f_value: f_x.clone(),
        gradient: Vec::new(),
    });
    trace.stop_reason = StopReason::MaxIters;
    Ok((x, trace))
}

/// Quantum estimate with deterministic scale adaptation: start from the
/// sound interval-bound scale, re-aim s so the modal outcomes land around
/// 2^{g-2}, and back off on wraparound.
fn adaptive_quantum_estimate(
    system: &PolynomialSystem,
    x: &[BigRational],
    window: &mut BigRational,
    config: &GradientConfig,
    trace: &mut RefineTrace,
) -> Result<GradientEstimate, GradientError> {
    let g = config.grid_bits;
    let target = 1i64 << (g - 2);
    let two = BigRational::from_integer(BigInt::from(2));
    loop {
        let mut s = sound_scale(system, x, window);
        let s_max = &s * pow2(3);
        let mut local = GradientConfig {
            window: window.clone(),
            derivative_bound: s.clone(),
            ..config.clone()
        };
        let mut best = None;
        for _ in 0..24 {
            local.derivative_bound = s.clone();
            let est = jordan_gradient(system, x, &local)?;
            let kmax = est.modal_outcomes.iter().map(|k| k.abs()).max().unwrap_or(0);
            if est.wraparound && &s * &two <= s_max {
                trace.wraparound_seen = true;
                s *= &two;
                continue;
            }
            if kmax < target && s > pow2(-40) {
                // jump s toward the resolution where the mode reads ~2^{g-2}
                let shrink = if kmax == 0 {
                    pow2(3)
                } else {
                    let q = BigRational::new(BigInt::from(target), BigInt::from(kmax));
                    pow2(ceil_log2(&q).max(1))
                };
                best = Some(est);
                s /= shrink;
                continue;
            }
            best = Some(est);
            break;
        }
        let est = best.expect("at least one estimate");
        // a window where everything reads zero and cannot be resolved finer:
        // shrink the window and try again (the curvature noise dominates)
        let all_zero = est.modal_outcomes.iter().all(|&k| k == 0);
        let floor = pow2(g as i64 - (config.accuracy_bits as i64 + 3));
        if all_zero && *window > floor {
            *window /= &two;
            trace.window_shrinks += 1;
            continue;
        }
        return Ok(est);
    }
}

#[derive(Debug, Error)]
pub enum GradientError {
    #[error("invalid gradient configuration: {message}")]
    BadConfig { message: String },
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Sim(#[from] SimError),
}
