//! Scalar abstraction shared by the exact and floating point code paths.
//!
//! Matrix algebra, Hessian evaluation and the reduction bookkeeping are
//! written once against [`Scalar`] and instantiated at `f64` (tensor
//! numerics) and [`Rat`] (lattice data).  Operations that need a
//! logarithm or an eigenvalue additionally require `num_traits::Float` and so
//! are only available for floating point scalars.

use num_bigint::BigInt;
use num_traits::{FromPrimitive, Num, NumAssign, Signed, ToPrimitive};
use std::fmt::{Debug, Display};

use crate::Rat;

/// Field-like scalar with enough structure for pivoted Gaussian elimination.
pub trait Scalar:
    Clone + PartialEq + PartialOrd + Debug + Display + Num + NumAssign + Signed + FromPrimitive
{
    /// Injects an exact rational constant.
    fn from_rat(r: &Rat) -> Self;

    /// Best-effort conversion to `f64`, used only for reporting.
    fn approx_f64(&self) -> f64;
}

impl Scalar for f64 {
    fn from_rat(r: &Rat) -> Self {
        rat_to_f64(r)
    }

    fn approx_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for f32 {
    fn from_rat(r: &Rat) -> Self {
        rat_to_f64(r) as f32
    }

    fn approx_f64(&self) -> f64 {
        f64::from(*self)
    }
}

impl Scalar for Rat {
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }

    fn approx_f64(&self) -> f64 {
        rat_to_f64(self)
    }
}

/// Converts a rational to the nearest `f64`.
pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Out-of-range numerator/denominator pairs; fall back to the ratio of
        // the parts, which keeps the sign and magnitude order.
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Converts a finite `f64` exactly into a rational (every finite double is
/// a dyadic rational).
pub fn f64_to_rat(x: f64) -> Rat {
    Rat::from_float(x).expect("finite float")
}

/// Builds a rational from an integer pair.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Integer as a rational.
pub fn rat_int(num: i64) -> Rat {
    Rat::from_integer(BigInt::from(num))
}

/// Parses `"p/q"`, `"p"` or a decimal like `"0.25"` into an exact rational.
pub fn parse_rat(s: &str) -> Result<Rat, RationalParseError> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| RationalParseError(s.to_string()))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| RationalParseError(s.to_string()))?;
        if d == BigInt::from(0) {
            return Err(RationalParseError(s.to_string()));
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(RationalParseError(s.to_string()));
        }
        let negative = int_part.trim_start().starts_with('-');
        let int_part = if int_part.is_empty() || int_part == "-" {
            "0".to_string()
        } else {
            int_part.trim_start_matches('-').to_string()
        };
        let i: BigInt = int_part
            .parse()
            .map_err(|_| RationalParseError(s.to_string()))?;
        let f: BigInt = frac_part
            .parse()
            .map_err(|_| RationalParseError(s.to_string()))?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let mag = Rat::from_integer(i) + Rat::new(f, scale);
        return Ok(if negative { -mag } else { mag });
    }
    let n: BigInt = s.parse().map_err(|_| RationalParseError(s.to_string()))?;
    Ok(Rat::from_integer(n))
}

/// Renders a rational as `"p/q"` or `"p"` when the denominator is one.
pub fn format_rat(r: &Rat) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Debug, thiserror::Error)]
#[error("not a rational number: {0:?}")]
pub struct RationalParseError(pub String);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_rational_forms() {
        assert_eq!(parse_rat("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rat("-1/2").unwrap(), rat(-1, 2));
        assert_eq!(parse_rat("7").unwrap(), rat_int(7));
        assert_eq!(parse_rat("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rat("-0.5").unwrap(), rat(-1, 2));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("abc").is_err());
    }

    #[test]
    fn format_round_trips() {
        for s in ["3/4", "-5/7", "12"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(format_rat(&r), s);
        }
    }

    #[test]
    fn float_rational_conversion_is_exact() {
        let x = 0.1f64;
        assert_eq!(rat_to_f64(&f64_to_rat(x)), x);
    }
}
