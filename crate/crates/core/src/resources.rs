//! Closed-form resource estimates for the search-plus-refinement pipeline,
//! with every big-O constant fixed to 1 as a reporting convention: the
//! estimator ranks configurations, it does not predict wall-clock time.
//!
//! Counts are exact integers; the only non-integer ingredient, ⌈2^{λ/2}⌉, is
//! computed by exact integer square root rather than floating point.

use crate::polysys::PolynomialSystem;
use thiserror::Error;

/// Symbol set of the cost model: n variables, t max terms, h max degree,
/// N coarse register bits, m integer bits, l fine-accuracy bits, λ check
/// digits, c refinement iterations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResourceParams {
    pub n: u64,
    pub t: u64,
    pub h: u64,
    pub bits: u64,
    pub int_bits: u64,
    pub accuracy_bits: u64,
    pub lambda: u64,
    pub iterations: u64,
}

impl ResourceParams {
    pub fn validate(&self) -> Result<(), ResourceError> {
        let fields = [
            ("n", self.n),
            ("t", self.t),
            ("h", self.h),
            ("N", self.bits),
            ("m", self.int_bits),
            ("c", self.iterations),
        ];
        for (name, v) in fields {
            if v == 0 {
                return Err(ResourceError::NonPositive { name });
            }
        }
        if self.lambda > 120 {
            return Err(ResourceError::LambdaTooLarge { lambda: self.lambda });
        }
        Ok(())
    }

    /// Fill t and h from a system; λ defaults to h·m, the regime where the
    /// check demands a full integer-part match.
    pub fn from_system(
        system: &PolynomialSystem,
        bits: u64,
        int_bits: u64,
        accuracy_bits: u64,
        iterations: u64,
        lambda: Option<u64>,
    ) -> Self {
        let (h, t) = system.degree_stats();
        let h = h.max(1) as u64;
        let t = t.max(1) as u64;
        Self {
            n: system.n() as u64,
            t,
            h,
            bits,
            int_bits,
            accuracy_bits,
            lambda: lambda.unwrap_or(h * int_bits),
            iterations,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResourceEstimate {
    /// ⌈2^{λ/2}⌉ · n·t·h·N²  — oracle+amplification operations.
    pub search_ops: u128,
    /// c · n·t·h·(l+m)²  — gradient-refinement operations.
    pub refine_ops: u128,
    pub total_ops: u128,
    /// 2n(l+m) + 4h(m+l) + hN + n + 1 storage qubits.
    pub total_qubits: u128,
    /// h·t·n³·(l+m)² classical Newton cost per iteration.
    pub newton_ops_per_iter: u128,
}

/// ⌈√(2^λ)⌉ exactly.
pub fn ceil_sqrt_pow2(lambda: u64) -> u128 {
    if lambda.is_multiple_of(2) {
        return 1u128 << (lambda / 2);
    }
    let x = 1u128 << lambda;
    let mut s = isqrt(x);
    if s * s < x {
        s += 1;
    }
    s
}

fn isqrt(x: u128) -> u128 {
    if x < 2 {
        return x;
    }
    let mut lo = 1u128 << (x.ilog2() / 2);
    let mut hi = lo << 1;
    while lo < hi {
        let mid = (lo + hi).div_ceil(2);
        if mid.checked_mul(mid).is_some_and(|sq| sq <= x) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

pub fn estimate_operations(params: &ResourceParams) -> Result<ResourceEstimate, ResourceError> {
    params.validate()?;
    let p = params;
    let mul = |acc: u128, v: u128| acc.checked_mul(v).ok_or(ResourceError::Overflow);
    let oracle = mul(p.n as u128, p.t as u128)
        .and_then(|a| mul(a, p.h as u128))
        .and_then(|a| mul(a, (p.bits * p.bits) as u128))?;
    let search_ops = mul(ceil_sqrt_pow2(p.lambda), oracle)?;
    let lm = (p.accuracy_bits + p.int_bits) as u128;
    let refine_ops = mul(p.iterations as u128, p.n as u128)
        .and_then(|a| mul(a, p.t as u128))
        .and_then(|a| mul(a, p.h as u128))
        .and_then(|a| mul(a, lm * lm))?;
    let total_ops = search_ops.checked_add(refine_ops).ok_or(ResourceError::Overflow)?;
    Ok(ResourceEstimate {
        search_ops,
        refine_ops,
        total_ops,
        total_qubits: estimate_qubits(params)?,
        newton_ops_per_iter: newton_cost(params)?,
    })
}

pub fn estimate_qubits(params: &ResourceParams) -> Result<u128, ResourceError> {
    params.validate()?;
    let p = params;
    let lm = (p.accuracy_bits + p.int_bits) as u128;
    Ok(2 * p.n as u128 * lm + 4 * p.h as u128 * lm + p.h as u128 * p.bits as u128
        + p.n as u128
        + 1)
}

pub fn newton_cost(params: &ResourceParams) -> Result<u128, ResourceError> {
    params.validate()?;
    let p = params;
    let lm = (p.accuracy_bits + p.int_bits) as u128;
    let n3 = (p.n as u128).checked_pow(3).ok_or(ResourceError::Overflow)?;
    (p.h as u128)
        .checked_mul(p.t as u128)
        .and_then(|a| a.checked_mul(n3))
        .and_then(|a| a.checked_mul(lm * lm))
        .ok_or(ResourceError::Overflow)
}

/// Smallest n at which the classical per-iteration Newton cost exceeds the
/// per-candidate quantum search cost, holding the other parameters fixed.
pub fn newton_crossover(params: &ResourceParams, max_n: u64) -> Result<Option<u64>, ResourceError> {
    for n in 1..=max_n {
        let p = ResourceParams { n, ..*params };
        let est = estimate_operations(&p)?;
        if est.newton_ops_per_iter > est.search_ops {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ResourceError {
    #[error("parameter {name} must be positive")]
    NonPositive { name: &'static str },
    #[error("lambda {lambda} too large for exact integer arithmetic")]
    LambdaTooLarge { lambda: u64 },
    #[error("estimate overflows 128-bit integers")]
    Overflow,
}
