//! The coefficient field: arbitrary precision rationals.
//!
//! `num_rational::BigRational` already keeps the canonical form we need
//! (positive denominator, reduced, zero as `0/1`), so this module only adds
//! parsing and the small combinatorial helpers used by the symbol calculus.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    assert!(den != 0, "zero denominator");
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p"`, `"-p"` or `"p/q"` with arbitrary-size integers.
/// A zero denominator is rejected. Non-reduced input is accepted and
/// canonicalized.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::BadRational(s.to_string());
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn render(r: &Rational) -> String {
    r.to_string()
}

pub fn factorial(k: u32) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Falling factorial `k (k-1) ... (k-j+1)`; zero when `j > k`.
pub fn falling(k: u32, j: u32) -> BigInt {
    if j > k {
        return BigInt::zero();
    }
    ((k - j + 1)..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn binomial(k: u32, j: u32) -> BigInt {
    if j > k {
        return BigInt::zero();
    }
    falling(k, j) / factorial(j)
}
