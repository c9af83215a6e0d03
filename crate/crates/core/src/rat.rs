//! Exact rational scalars.
//!
//! All coordinates and function values in this crate are arbitrary-precision
//! rationals kept in lowest terms with a positive denominator, so coordinate
//! coincidences and norm comparisons are exact. The whole theory hinges on
//! exact `x`-equality and `y`-equality tests; floats never enter a decision.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

/// `n/d` as an exact rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

/// `2^exp`, for either sign of `exp`.
pub fn pow2(exp: i32) -> Rat {
    let mag = BigInt::one() << exp.unsigned_abs() as usize;
    if exp >= 0 {
        BigRational::from_integer(mag)
    } else {
        BigRational::new(BigInt::one(), mag)
    }
}

/// `4^exp`, for either sign of `exp`.
pub fn pow4(exp: i32) -> Rat {
    pow2(2 * exp)
}

pub fn abs(r: &Rat) -> Rat {
    if r.is_negative() {
        -r.clone()
    } else {
        r.clone()
    }
}

pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parses an exact rational literal.
///
/// Accepted forms: an integer (`-3`), a finite decimal (`2.5`, converted
/// exactly), or a fraction (`-7/4` with a positive denominator). Anything
/// else — empty input, scientific notation, hex, a zero denominator —
/// yields `None`.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, s.strip_prefix('+').unwrap_or(s)),
    };
    if body.is_empty() {
        return None;
    }
    let digits = |t: &str| -> Option<BigInt> {
        if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        t.parse::<BigInt>().ok()
    };
    let value = if let Some((num, den)) = body.split_once('/') {
        let num = digits(num)?;
        let den = digits(den)?;
        if den.is_zero() {
            return None;
        }
        BigRational::new(num, den)
    } else if let Some((int, frac)) = body.split_once('.') {
        let int = digits(int)?;
        let frac_digits = frac.len();
        let frac = digits(frac)?;
        let scale = BigInt::from(10u32).pow(frac_digits as u32);
        BigRational::new(int * &scale + frac, scale)
    } else {
        BigRational::from_integer(digits(body)?)
    };
    Some(if sign < 0 { -value } else { value })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literals_parse_exactly() {
        assert_eq!(parse_rat("3").unwrap(), rat_int(3));
        assert_eq!(parse_rat("-3").unwrap(), rat_int(-3));
        assert_eq!(parse_rat("2.5").unwrap(), rat(5, 2));
        assert_eq!(parse_rat("-0.125").unwrap(), rat(-1, 8));
        assert_eq!(parse_rat("7/4").unwrap(), rat(7, 4));
        assert_eq!(parse_rat("-7/4").unwrap(), rat(-7, 4));
        assert_eq!(parse_rat("+2/6").unwrap(), rat(1, 3));
    }

    #[test]
    fn bad_literals_rejected() {
        for bad in ["", "x", "1e5", "1/0", "1//2", "2.", ".5", "1.2.3", "--1", "1/-2"] {
            assert!(parse_rat(bad).is_none(), "accepted {bad:?}");
        }
    }

    #[test]
    fn dyadic_powers() {
        assert_eq!(pow2(0), rat_int(1));
        assert_eq!(pow2(3), rat_int(8));
        assert_eq!(pow2(-3), rat(1, 8));
        assert_eq!(pow4(-2), rat(1, 16));
    }

    #[test]
    fn display_is_p_over_q() {
        assert_eq!(rat(5, 1).to_string(), "5");
        assert_eq!(rat(5, 2).to_string(), "5/2");
        assert_eq!(rat(-5, 10).to_string(), "-1/2");
    }
}
