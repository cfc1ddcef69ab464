//! Damped Newton iteration on the same systems, as the classical comparator
//! and an independent root oracle for the test suite. Iterates in floating
//! point via a partial-pivot linear solve (never an explicit inverse), then
//! confirms the final residuals in exact rational arithmetic.

use crate::polysys::{PolynomialSystem, SystemError};
use crate::rational::from_f64_exact;
use num_rational::BigRational;
use num_traits::Signed;
use thiserror::Error;

const PIVOT_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct NewtonConfig {
    /// Stop when max |fᵢ(x)| falls below this.
    pub tol_residual: f64,
    pub max_iters: u32,
    /// Step multiplier in (0, 1].
    pub damping: f64,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        Self { tol_residual: 1e-10, max_iters: 50, damping: 1.0 }
    }
}

impl NewtonConfig {
    pub fn validate(&self) -> Result<(), NewtonError> {
        if self.tol_residual.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
            return Err(NewtonError::BadConfig { message: "tol_residual must be positive".into() });
        }
        if !(self.damping.is_finite() && self.damping > 0.0 && self.damping <= 1.0) {
            return Err(NewtonError::BadConfig { message: "damping must lie in (0, 1]".into() });
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct NewtonStep {
    pub point: Vec<f64>,
    pub max_residual: f64,
}

#[derive(Debug, Clone)]
pub struct NewtonResult {
    pub solution: Vec<f64>,
    /// Exact residuals fᵢ at the float solution (converted exactly).
    pub exact_residuals: Vec<BigRational>,
    /// One entry per iterate, including the start point.
    pub trace: Vec<NewtonStep>,
    pub iterations: u32,
}

/// Solve f(x) = 0 from `x0` by damped Newton steps x ← x − damping·J⁻¹f.
pub fn newton_solve(
    system: &PolynomialSystem,
    x0: &[BigRational],
    config: &NewtonConfig,
) -> Result<NewtonResult, NewtonError> {
    config.validate()?;
    let n = system.n();
    if x0.len() != n {
        return Err(NewtonError::System(SystemError::PointArity {
            expected: n,
            found: x0.len(),
        }));
    }
    let mut x: Vec<f64> = x0.iter().map(crate::rational::to_f64).collect();
    let mut trace = Vec::new();
    let mut iterations = 0;
    loop {
        let fx: Vec<f64> = (0..n).map(|i| system.equations()[i].eval_f64(&x)).collect();
        let max_residual = fx.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        trace.push(NewtonStep { point: x.clone(), max_residual });
        if max_residual < config.tol_residual {
            break;
        }
        if iterations >= config.max_iters {
            return Err(NewtonError::NoConvergence {
                iterations,
                last_residual: max_residual,
                trace,
            });
        }
        let jac = system.jacobian_f64(&x);
        let delta = solve_linear(jac, fx).map_err(|column| NewtonError::SingularJacobian {
            iteration: iterations,
            column,
        })?;
        for j in 0..n {
            x[j] -= config.damping * delta[j];
        }
        iterations += 1;
    }
    let exact_point: Vec<BigRational> = x.iter().map(|&v| from_f64_exact(v)).collect();
    let exact_residuals = (0..n)
        .map(|i| system.evaluate(i, &exact_point))
        .collect::<Result<Vec<_>, _>>()
        .map_err(NewtonError::System)?;
    Ok(NewtonResult { solution: x, exact_residuals, trace, iterations })
}

/// Gaussian elimination with partial pivoting; returns the column index of a
/// sub-floor pivot on failure.
fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>, usize> {
    let n = b.len();
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&r, &s| a[r][col].abs().partial_cmp(&a[s][col].abs()).unwrap())
            .unwrap();
        if a[pivot_row][col].abs() < PIVOT_FLOOR {
            return Err(col);
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            let (pivot_rows, tail) = a.split_at_mut(row);
            let pivot = &pivot_rows[col];
            for (k, entry) in tail[0].iter_mut().enumerate().skip(col) {
                *entry -= factor * pivot[k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Ok(x)
}

#[derive(Debug, Error)]
pub enum NewtonError {
    #[error("invalid Newton configuration: {message}")]
    BadConfig { message: String },
    #[error("Jacobian numerically singular at iteration {iteration} (column {column})")]
    SingularJacobian { iteration: u32, column: usize },
    #[error("no convergence after {iterations} iterations (last max residual {last_residual:.3e})")]
    NoConvergence { iterations: u32, last_residual: f64, trace: Vec<NewtonStep> },
    #[error(transparent)]
    System(#[from] SystemError),
}
