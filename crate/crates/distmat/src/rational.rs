//! Arbitrary-precision rational helpers shared across the crate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::{Error, Result};

/// The number type used on every solver path.
pub type Rat = BigRational;

/// Rational from an integer.
pub fn rat(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

/// Rational `p/q`; panics on `q == 0` (programmer error, not input).
pub fn ratio(p: i64, q: i64) -> Rat {
    assert!(q != 0, "zero denominator");
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Renders a rational exactly: `p` when integral, `p/q` otherwise.
pub fn fmt_rat(v: &Rat) -> String {
    if v.denom() == &BigInt::from(1) {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Decimal rendering used only as a report annotation, never in solver paths.
pub fn fmt_rat_decimal(v: &Rat) -> String {
    // 6 digits after the point, round toward zero; exact arithmetic until the
    // final string assembly.
    let scaled = v * Rat::from_integer(BigInt::from(1_000_000));
    let int = scaled.to_integer();
    let sign = if v.is_negative() { "-" } else { "" };
    let abs = int.abs();
    let whole = &abs / BigInt::from(1_000_000);
    let frac = &abs % BigInt::from(1_000_000);
    format!("{sign}{whole}.{frac:06}")
}

/// Parses `p` or `p/q` (optionally signed) into a rational.
pub fn parse_rat(text: &str) -> Result<Rat> {
    let bad = || Error::InvalidInput(format!("malformed rational `{text}`"));
    match text.split_once('/') {
        None => {
            let p: BigInt = text.parse().map_err(|_| bad())?;
            Ok(Rat::from_integer(p))
        }
        Some((p, q)) => {
            let p: BigInt = p.parse().map_err(|_| bad())?;
            let q: BigInt = q.parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::InvalidInput(format!("zero denominator in `{text}`")));
            }
            Ok(Rat::new(p, q))
        }
    }
}
