//! Parsing and formatting helpers for exact rationals in wire formats.
//!
//! Rationals travel as `"num/den"` strings (or a bare integer string) so no
//! floating-point ambiguity ever enters the data path.

use num::bigint::BigInt;
use num::{BigRational, One, Signed, Zero};

/// Parse `"3/4"`, `"-7/2"`, or `"5"` into an exact rational.
pub fn parse_ratio(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let num: BigInt = n.trim().parse().ok()?;
            let den: BigInt = d.trim().parse().ok()?;
            if den.is_zero() {
                return None;
            }
            Some(BigRational::new(num, den))
        }
        None => {
            let num: BigInt = s.parse().ok()?;
            Some(BigRational::from_integer(num))
        }
    }
}

/// Render a rational as `"num/den"`, or just `"num"` when integral.
pub fn format_ratio(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Absolute value helper used all over the estimate code.
pub fn rat_abs(q: &BigRational) -> BigRational {
    q.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        let q = parse_ratio("-6/4").unwrap();
        assert_eq!(format_ratio(&q), "-3/2");
        assert_eq!(format_ratio(&parse_ratio("5").unwrap()), "5");
        assert!(parse_ratio("1/0").is_none());
        assert!(parse_ratio("x").is_none());
    }
}
