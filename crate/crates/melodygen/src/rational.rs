//! Exact rational arithmetic helpers.
//!
//! Note durations, meters and unit lengths are exact rationals throughout;
//! bar-boundary tests must never go through floating point.

use num_rational::Rational64;

pub type Rational = Rational64;

/// Shorthand constructor. Panics when `den == 0`.
pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(num, den)
}

/// Parses `"n"` or `"n/d"` into an exact rational. Returns `None` for empty
/// text, a zero denominator, or anything that is not a plain fraction.
pub fn parse_fraction(text: &str) -> Option<Rational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((num, den)) => {
            let num: i64 = num.trim().parse().ok()?;
            let den: i64 = den.trim().parse().ok()?;
            if den == 0 {
                return None;
            }
            Some(Rational::new(num, den))
        }
        None => {
            let num: i64 = text.parse().ok()?;
            Some(Rational::from_integer(num))
        }
    }
}

/// Formats a rational as `"n"` (integer) or `"n/d"` in lowest terms.
pub fn format_fraction(r: Rational) -> String {
    if *r.denom() == 1 {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Rational to `f64`, the one sanctioned crossing into floating point
/// (feature vectors and similarity scores).
pub fn to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}
