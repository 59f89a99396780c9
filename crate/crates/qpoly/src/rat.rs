//! Exact rational arithmetic helpers.
//!
//! All verdict-producing computations in this crate use `Rat`; floating
//! point appears only in the isoradial embedding and SVG output.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

pub type Rat = num_rational::BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parse "p/q" or "p" (exact, no floats).
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| format!("invalid rational numerator `{num}`"))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| format!("invalid rational denominator `{den}`"))?;
    if d.is_zero() {
        return Err(format!("zero denominator in `{s}`"));
    }
    Ok(Rat::new(n, d))
}

/// Canonical "p/q" form; integers render without the "/1".
pub fn format_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    let numer = r.numer();
    let denom = r.denom();
    // Good enough for display/geometry; our rationals stay tiny.
    let n = numer.to_string().parse::<f64>().unwrap_or(f64::NAN);
    let d = denom.to_string().parse::<f64>().unwrap_or(f64::NAN);
    n / d
}

pub fn is_positive(r: &Rat) -> bool {
    r.is_positive()
}
