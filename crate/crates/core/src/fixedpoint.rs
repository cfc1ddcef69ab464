//! N-bit fixed-point register semantics: m integer bits, N−m fractional bits,
//! truncating encode, and the oracle arithmetic that evaluates an equation
//! into a bounded-width result register.
//!
//! Variable registers are unsigned; result registers carry an extra sign bit
//! in two's complement because residuals are signed even when all inputs are
//! non-negative.

use crate::interval::{centered_box, residual_bound, Interval};
use crate::polysys::PolynomialSystem;
use crate::rational::pow2;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

/// Register value format: `total_bits` magnitude bits of which `integer_bits`
/// sit left of the binary point. Signed formats add one two's-complement sign
/// bit on top of `total_bits`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FixedFormat {
    total_bits: u32,
    integer_bits: u32,
    signed: bool,
}

impl FixedFormat {
    pub const MAX_TOTAL_BITS: u32 = 62;

    pub fn new(total_bits: u32, integer_bits: u32, signed: bool) -> Result<Self, FixedPointError> {
        if integer_bits == 0 || integer_bits > total_bits || total_bits > Self::MAX_TOTAL_BITS {
            return Err(FixedPointError::BadFormat { total_bits, integer_bits });
        }
        Ok(Self { total_bits, integer_bits, signed })
    }

    pub fn unsigned(total_bits: u32, integer_bits: u32) -> Result<Self, FixedPointError> {
        Self::new(total_bits, integer_bits, false)
    }

    pub fn total_bits(&self) -> u32 {
        self.total_bits
    }

    pub fn integer_bits(&self) -> u32 {
        self.integer_bits
    }

    pub fn fractional_bits(&self) -> u32 {
        self.total_bits - self.integer_bits
    }

    pub fn is_signed(&self) -> bool {
        self.signed
    }

    /// Raw storage width in bits (qubits), including the sign bit if any.
    pub fn width(&self) -> u32 {
        self.total_bits + u32::from(self.signed)
    }

    /// Grid spacing 2^{-fractional_bits}.
    pub fn resolution(&self) -> BigRational {
        pow2(-(self.fractional_bits() as i64))
    }

    /// Half-open representable range [lo, hi).
    pub fn range(&self) -> (BigRational, BigRational) {
        let hi = pow2(self.integer_bits as i64);
        let lo = if self.signed { -hi.clone() } else { BigRational::zero() };
        (lo, hi)
    }
}

/// A value held in a register: raw bits plus their format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BitWord {
    raw: u64,
    format: FixedFormat,
}

impl BitWord {
    pub fn from_raw(raw: u64, format: FixedFormat) -> Result<Self, FixedPointError> {
        if raw >= 1u64 << format.width() {
            return Err(FixedPointError::RawOutOfRange { raw, width: format.width() });
        }
        Ok(Self { raw, format })
    }

    pub fn raw(&self) -> u64 {
        self.raw
    }

    pub fn format(&self) -> FixedFormat {
        self.format
    }

    /// Signed integer view of the raw bits (two's complement for signed
    /// formats), i.e. the value in units of 2^{-fractional_bits}.
    pub fn scaled_int(&self) -> i64 {
        if self.format.signed && self.raw >= 1u64 << self.format.total_bits {
            (self.raw as i128 - (1i128 << (self.format.total_bits + 1))) as i64
        } else {
            self.raw as i64
        }
    }

    /// Exact rational value.
    pub fn decode(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(self.scaled_int())) * self.format.resolution()
    }

    /// Dotted bit string `iii.fff` as it appears in logs and fixtures;
    /// signed words include the sign bit as the leading digit of the
    /// integer field.
    pub fn render_bits(&self) -> String {
        let width = self.format.width();
        let frac = self.format.fractional_bits();
        let mut s = String::with_capacity(width as usize + 1);
        for bit in (0..width).rev() {
            s.push(if self.raw >> bit & 1 == 1 { '1' } else { '0' });
            if bit == frac && frac > 0 {
                s.push('.');
            }
        }
        s
    }
}

/// Truncate a rational onto the format grid (floor toward −∞) and store it.
pub fn encode(value: &BigRational, format: FixedFormat) -> Result<BitWord, FixedPointError> {
    let (lo, hi) = format.range();
    if *value < lo || *value >= hi {
        return Err(FixedPointError::Overflow {
            value: value.to_string(),
            lo: lo.to_string(),
            hi: hi.to_string(),
        });
    }
    let scaled = (value / format.resolution()).floor().to_integer();
    let q = scaled.to_i64().expect("range-checked value fits i64");
    let raw = if q < 0 {
        debug_assert!(format.signed);
        (q as i128 + (1i128 << (format.total_bits + 1))) as u64
    } else {
        q as u64
    };
    Ok(BitWord { raw, format })
}

/// Result-register format for a system over the unsigned variable box
/// [0, 2^m)ⁿ: signed, with integer width max(h·m + ⌈log₂ t⌉ + 1, what the
/// interval bound on maxᵢ|fᵢ| requires). Construction fails only when no
/// width ≤ 62 bits can hold the residuals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResultFormat {
    format: FixedFormat,
    /// True when the h·m + ⌈log₂ t⌉ + 1 width had to be enlarged to fit the
    /// interval bound (large coefficients).
    widened: bool,
}

impl ResultFormat {
    pub fn for_system(
        system: &PolynomialSystem,
        variable_format: FixedFormat,
        fractional_bits: Option<u32>,
    ) -> Result<Self, FixedPointError> {
        let (h, t) = system.degree_stats();
        let m = variable_format.integer_bits();
        let frac = fractional_bits.unwrap_or_else(|| variable_format.fractional_bits());
        let log2t = usize::BITS - (t.max(1) - 1).leading_zeros(); // ceil(log2 t), 0 for t<=1
        let nominal = h * m + log2t + 1;

        // interval bound over the whole search box
        let half = (1u64 << m) as f64 / 2.0;
        let bx = centered_box(&vec![half; system.n()], 2.0 * half);
        let bound = residual_bound(system, &bx);
        let mut needed = 1u32;
        while (1u64 << needed) as f64 <= bound {
            needed += 1;
            if needed + frac > FixedFormat::MAX_TOTAL_BITS {
                return Err(FixedPointError::ResultTooWide { needed: needed + frac });
            }
        }
        let int_bits = nominal.max(needed);
        if int_bits + frac > FixedFormat::MAX_TOTAL_BITS {
            return Err(FixedPointError::ResultTooWide { needed: int_bits + frac });
        }
        Ok(Self {
            format: FixedFormat::new(int_bits + frac, int_bits, true)?,
            widened: needed > nominal,
        })
    }

    pub fn format(&self) -> FixedFormat {
        self.format
    }

    pub fn was_widened(&self) -> bool {
        self.widened
    }
}

/// Oracle arithmetic mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMode {
    /// Evaluate in exact rationals, truncate once at the end. Default.
    Exact,
    /// Truncate every intermediate product onto the result grid, modelling
    /// bounded-width reversible arithmetic. Terms are processed in canonical
    /// order, factors in variable order, powers by repeated multiplication.
    Truncating,
}

/// U_f on basis states: evaluate equation `eq_index` at a fixed-point point
/// and store the residual in the result format.
pub fn eval_oracle(
    system: &PolynomialSystem,
    eq_index: usize,
    point: &[BitWord],
    result_format: FixedFormat,
    mode: OracleMode,
) -> Result<BitWord, FixedPointError> {
    if point.is_empty() {
        return Err(FixedPointError::EmptyPoint);
    }
    let var_format = point[0].format();
    if point.iter().any(|w| w.format() != var_format) {
        return Err(FixedPointError::MixedFormats);
    }
    let decoded: Vec<BigRational> = point.iter().map(BitWord::decode).collect();
    let value = match mode {
        OracleMode::Exact => system
            .evaluate(eq_index, &decoded)
            .map_err(|e| FixedPointError::System(e.to_string()))?,
        OracleMode::Truncating => {
            let eq = system
                .equation(eq_index)
                .map_err(|e| FixedPointError::System(e.to_string()))?;
            let grid = result_format.resolution();
            let trunc = |v: &BigRational| -> BigRational {
                BigRational::from_integer((v / &grid).floor().to_integer()) * &grid
            };
            let mut acc = BigRational::zero();
            for term in eq.terms() {
                let mut v = trunc(&term.coefficient);
                for (x, &e) in decoded.iter().zip(&term.exponents) {
                    for _ in 0..e {
                        v = trunc(&(&v * x));
                    }
                }
                acc += v; // on-grid addition is exact
            }
            acc
        }
    };
    encode(&value, result_format)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FixedPointError {
    #[error("invalid format: total_bits={total_bits}, integer_bits={integer_bits} (need 0 < m <= N <= 62)")]
    BadFormat { total_bits: u32, integer_bits: u32 },
    #[error("raw value {raw} does not fit in {width} bits")]
    RawOutOfRange { raw: u64, width: u32 },
    #[error("value {value} outside representable range [{lo}, {hi})")]
    Overflow { value: String, lo: String, hi: String },
    #[error("result register would need {needed} bits (max 62); shrink the search box or degree")]
    ResultTooWide { needed: u32 },
    #[error("point words use mixed formats")]
    MixedFormats,
    #[error("empty point")]
    EmptyPoint,
    #[error("{0}")]
    System(String),
}

/// Enclosure helper re-exported for width planning in callers.
pub fn variable_box(format: FixedFormat, n: usize) -> Vec<Interval> {
    let hi = (1u64 << format.integer_bits()) as f64;
    vec![Interval::new(0.0, hi); n]
}
