//! Exact-rational helpers shared across the crate: decimal literal parsing,
//! decimal rendering, dyadic grids and power-of-two utilities.
//!
//! Every user-facing number travels through this module so that `3.25` always
//! means 13/4 and never a binary float.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Parse a decimal literal (`-12`, `3.25`, `0.0625`) into an exact rational.
///
/// Returns `None` on malformed input; exponents and fraction bars are not part
/// of the accepted syntax.
pub fn parse_decimal(text: &str) -> Option<BigRational> {
    let text = text.trim();
    let (neg, rest) = match text.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    if rest.is_empty() {
        return None;
    }
    let (int_part, frac_part) = match rest.split_once('.') {
        Some((i, f)) => (i, f),
        None => (rest, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = digits.parse().ok()?;
    let denom = BigInt::from(10u32).pow(frac_part.len() as u32);
    let mut r = BigRational::new(numer, denom);
    if neg {
        r = -r;
    }
    Some(r)
}

/// Render a rational as an exact decimal string if its reduced denominator is
/// of the form 2^a·5^b, otherwise `None`.
pub fn to_exact_decimal(r: &BigRational) -> Option<String> {
    let mut denom = r.denom().clone();
    let mut twos = 0u32;
    let mut fives = 0u32;
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    while (&denom % &two).is_zero() {
        denom /= &two;
        twos += 1;
    }
    while (&denom % &five).is_zero() {
        denom /= &five;
        fives += 1;
    }
    if !denom.is_one() {
        return None;
    }
    // scale numerator so the denominator becomes 10^k
    let k = twos.max(fives);
    let scale = two.pow(k - twos) * five.pow(k - fives);
    let scaled = r.numer() * scale;
    Some(render_scaled(&scaled, k as usize))
}

/// Render a rational rounded to `digits` decimal places (round half away from
/// zero). Exact when the value is representable in that many places.
pub fn to_decimal_round(r: &BigRational, digits: usize) -> String {
    let pow10 = BigInt::from(10u32).pow(digits as u32);
    let scaled = r * BigRational::from_integer(pow10);
    let rounded = scaled.round().to_integer();
    render_scaled(&rounded, digits)
}

fn render_scaled(scaled: &BigInt, places: usize) -> String {
    let neg = scaled.sign() == Sign::Minus;
    let mag = scaled.magnitude().to_string();
    let mag = if mag.len() <= places {
        format!("{}{}", "0".repeat(places + 1 - mag.len()), mag)
    } else {
        mag
    };
    let split = mag.len() - places;
    let (int_part, frac_part) = mag.split_at(split);
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(int_part);
    if !frac_part.is_empty() {
        out.push('.');
        out.push_str(frac_part);
    }
    out
}

/// 2^k as a rational, for signed k.
pub fn pow2(k: i64) -> BigRational {
    let mag = BigInt::from(2u32).pow(k.unsigned_abs() as u32);
    if k >= 0 {
        BigRational::from_integer(mag)
    } else {
        BigRational::new(BigInt::one(), mag)
    }
}

/// Smallest power of two >= |r| as an exponent: minimal k with 2^k >= r.
/// Requires r > 0.
pub fn ceil_log2(r: &BigRational) -> i64 {
    assert!(r.is_positive(), "ceil_log2 needs a positive argument");
    let mut k: i64 = 0;
    let mut p = BigRational::one();
    if &p >= r {
        // shrink until 2^(k-1) < r
        while &p / BigRational::from_integer(BigInt::from(2)) >= *r {
            p /= BigRational::from_integer(BigInt::from(2));
            k -= 1;
        }
        k
    } else {
        while p < *r {
            p *= BigRational::from_integer(BigInt::from(2));
            k += 1;
        }
        k
    }
}

/// Round to the nearest multiple of 2^-l (ties away from zero).
pub fn snap_to_grid(r: &BigRational, l: u32) -> BigRational {
    let scale = pow2(l as i64);
    let scaled = r * &scale;
    BigRational::from_integer(scaled.round().to_integer()) / scale
}

/// Exact conversion from f64 (every finite f64 is a dyadic rational).
pub fn from_f64_exact(v: f64) -> BigRational {
    BigRational::from_float(v).expect("finite float")
}

/// Best-effort f64 view of a rational.
pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // fall back to a quotient of truncated parts for extreme magnitudes
        let n = r.numer().to_f64().unwrap_or(f64::MAX);
        let d = r.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse_decimal("3.25").unwrap(), rat(13, 4));
        assert_eq!(parse_decimal("-3.5").unwrap(), rat(-7, 2));
        assert_eq!(parse_decimal("35").unwrap(), rat(35, 1));
        assert_eq!(parse_decimal("0.0625").unwrap(), rat(1, 16));
        assert_eq!(parse_decimal("3.1370").unwrap(), rat(3137, 1000));
        assert!(parse_decimal("").is_none());
        assert!(parse_decimal("1.2.3").is_none());
        assert!(parse_decimal("x").is_none());
    }

    #[test]
    fn renders_exact_decimals() {
        assert_eq!(to_exact_decimal(&rat(13, 4)).unwrap(), "3.25");
        assert_eq!(to_exact_decimal(&rat(-41, 64)).unwrap(), "-0.640625");
        assert_eq!(to_exact_decimal(&rat(7, 1)).unwrap(), "7");
        assert_eq!(to_exact_decimal(&rat(1, 3)), None);
        assert_eq!(to_exact_decimal(&rat(1, 10)).unwrap(), "0.1");
    }

    #[test]
    fn rounds_to_places() {
        assert_eq!(to_decimal_round(&rat(1, 3), 4), "0.3333");
        assert_eq!(to_decimal_round(&rat(-2, 3), 3), "-0.667");
        assert_eq!(to_decimal_round(&rat(13, 4), 4), "3.2500");
    }

    #[test]
    fn pow2_and_log2() {
        assert_eq!(pow2(3), rat(8, 1));
        assert_eq!(pow2(-3), rat(1, 8));
        assert_eq!(ceil_log2(&rat(5, 1)), 3);
        assert_eq!(ceil_log2(&rat(8, 1)), 3);
        assert_eq!(ceil_log2(&rat(1, 5)), -2);
        assert_eq!(ceil_log2(&rat(1, 1)), 0);
    }

    #[test]
    fn snapping() {
        assert_eq!(snap_to_grid(&rat(10001, 10000), 13), rat(8193, 8192));
        assert_eq!(snap_to_grid(&rat(1, 3), 2), rat(1, 4));
    }
}
