//! Exact rational arithmetic helpers.
//!
//! The classifier and the bootstrap iterator work over arbitrary-precision
//! rationals so that threshold comparisons (σ vs. g_α(λ)) and exponent-ladder
//! steps are decided exactly, with no floating-point tolerance anywhere in the
//! logic. This module wraps [`num::BigRational`] with:
//!
//! * exact parsing of decimal strings (`"2.5"` → 5/2) and fraction strings
//!   (`"39/25"` → 39/25), so user input never takes a detour through `f64`;
//! * a canonical `"num/den"` display used in JSON traces (integers keep a
//!   denominator of 1: `"4/1"`), chosen because rationals with huge terms
//!   round-trip exactly as strings while they would silently lose precision
//!   as JSON numbers;
//! * small construction and conversion helpers.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number (arbitrary-precision numerator and denominator).
pub type Rat = BigRational;

/// Build a rational from two machine integers.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Build a rational from a machine integer.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parse a rational from text, exactly.
///
/// Accepts three forms: an integer (`"3"`, `"-2"`), a fraction (`"39/25"`),
/// or a finite decimal (`"2.5"`, `"-0.04"`). Scientific notation is not
/// accepted — every digit of the input must mean exactly what it says.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parameter("empty number".into()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| Error::Parameter(format!("bad numerator in `{s}`")))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| Error::Parameter(format!("bad denominator in `{s}`")))?;
        if d.is_zero() {
            return Err(Error::Parameter(format!("zero denominator in `{s}`")));
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        // A decimal d.f with k fractional digits is (d·10^k ± f)/10^k exactly.
        let negative = int_part.trim_start().starts_with('-');
        let i: BigInt = if int_part.is_empty() || int_part == "-" {
            BigInt::zero()
        } else {
            int_part
                .parse()
                .map_err(|_| Error::Parameter(format!("bad integer part in `{s}`")))?
        };
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parameter(format!("bad fractional part in `{s}`")));
        }
        let f: BigInt = frac_part
            .parse()
            .map_err(|_| Error::Parameter(format!("bad fractional part in `{s}`")))?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let magnitude = i.abs() * &scale + f;
        let signed = if negative { -magnitude } else { magnitude };
        return Ok(Rat::new(signed, scale));
    }
    let n: BigInt = s
        .parse()
        .map_err(|_| Error::Parameter(format!("`{s}` is not a number")))?;
    Ok(Rat::from_integer(n))
}

/// Canonical `"num/den"` form used in JSON traces (reduced, denominator ≥ 1).
pub fn format_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Nearest `f64` to an exact rational (for display and float-path handoff).
pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // BigRational::to_f64 only returns None on degenerate internals;
        // fall back through a slow string round-trip rather than panicking.
        format!("{}", r).parse().unwrap_or(f64::NAN)
    })
}

/// Exact minimum of a non-empty slice of rationals.
pub fn rat_min(values: &[Rat]) -> Rat {
    let mut best = values[0].clone();
    for v in &values[1..] {
        if *v < best {
            best = v.clone();
        }
    }
    best
}

/// Smallest integer k with k ≥ r (exact ceiling), as an i64.
pub fn rat_ceil_i64(r: &Rat) -> i64 {
    r.ceil().to_integer().to_i64().expect("ceiling fits in i64")
}

/// `true` iff the rational is exactly one.
pub fn is_one(r: &Rat) -> bool {
    *r == Rat::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_fractions_and_decimals_exactly() {
        assert_eq!(parse_rat("3").unwrap(), rat_int(3));
        assert_eq!(parse_rat("-2").unwrap(), rat_int(-2));
        assert_eq!(parse_rat("39/25").unwrap(), rat(39, 25));
        assert_eq!(parse_rat(" 21 / 10 ").unwrap(), rat(21, 10));
        assert_eq!(parse_rat("2.5").unwrap(), rat(5, 2));
        assert_eq!(parse_rat("-0.04").unwrap(), rat(-1, 25));
        assert_eq!(parse_rat("0.1").unwrap(), rat(1, 10));
        // 0.1 the decimal is NOT the double 0.1 — exactness is the point.
        assert_ne!(to_f64(&parse_rat("0.1").unwrap()), 0.1f64 + 1e-17);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse_rat("").is_err());
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("1e5").is_err());
        assert!(parse_rat("2.5.1").is_err());
        assert!(parse_rat("abc").is_err());
    }

    #[test]
    fn formats_reduced_num_den() {
        assert_eq!(format_rat(&rat(300, 119)), "300/119");
        assert_eq!(format_rat(&rat(6, 3)), "2/1");
        assert_eq!(format_rat(&rat(-1, 2)), "-1/2");
    }

    #[test]
    fn ceiling_and_min_helpers() {
        assert_eq!(rat_ceil_i64(&rat(5, 3)), 2);
        assert_eq!(rat_ceil_i64(&rat_int(2)), 2);
        let m = rat_min(&[rat(1, 2), rat(1, 3), rat(2, 3)]);
        assert_eq!(m, rat(1, 3));
    }
}
