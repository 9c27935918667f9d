//! Arbitrary-precision rationals and p-adic valuations.
//!
//! `Rational` is a [`num_rational::BigRational`]: the denominator is always
//! positive and values are stored in lowest terms, so structural equality is
//! value equality. Valuations are computed by repeated exact division — only
//! one prime is ever queried at a time, so factoring would be wasted work.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::Add;
use thiserror::Error;

/// Exact rational number, always canonical (positive denominator, lowest terms).
pub type Rational = BigRational;

/// p-adic valuation of a rational: an integer, or `PlusInfinity` for zero.
///
/// `PlusInfinity` compares greater than every finite value, which makes the
/// ultrametric law `v_p(x+y) >= min(v_p(x), v_p(y))` total.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    PlusInfinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::PlusInfinity => None,
        }
    }

    pub fn is_negative(self) -> bool {
        matches!(self, Valuation::Finite(v) if v < 0)
    }
}

impl Add for Valuation {
    type Output = Valuation;

    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(x), Valuation::Finite(y)) => Valuation::Finite(x + y),
            _ => Valuation::PlusInfinity,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::PlusInfinity => write!(f, "+inf"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactNumError {
    #[error("valuation of zero is undefined here; use vp_rat for the +inf convention")]
    ZeroValuation,
}

/// Rational from machine-integer parts. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact sum in canonical form.
pub fn rat_add(x: &Rational, y: &Rational) -> Rational {
    x + y
}

/// Exact e-th power, `e >= 1`.
///
/// Numerator and denominator are powered separately: coprimality and the
/// denominator sign are preserved, so the result stays canonical.
pub fn rat_pow(x: &Rational, e: u32) -> Rational {
    assert!(e >= 1, "rat_pow requires e >= 1");
    Rational::new_raw(x.numer().pow(e), x.denom().pow(e))
}

/// Largest `r >= 0` with `p^r` dividing `m`, for nonzero `m`.
///
/// The sign of `m` is ignored. `p` must be at least 2 (callers pass primes).
pub fn vp_int(p: u64, m: &BigInt) -> Result<u64, ExactNumError> {
    debug_assert!(p >= 2, "modulus must be at least 2");
    if m.is_zero() {
        return Err(ExactNumError::ZeroValuation);
    }
    let p = BigUint::from(p);
    let mut m = m.magnitude().clone();
    let mut r = 0u64;
    loop {
        let (q, rem) = m.div_rem(&p);
        if rem.is_zero() {
            r += 1;
            m = q;
        } else {
            return Ok(r);
        }
    }
}

/// `vp_int` for machine integers.
pub fn vp_u64(p: u64, mut m: u64) -> Result<u64, ExactNumError> {
    debug_assert!(p >= 2, "modulus must be at least 2");
    if m == 0 {
        return Err(ExactNumError::ZeroValuation);
    }
    let mut r = 0u64;
    while m.is_multiple_of(p) {
        r += 1;
        m /= p;
    }
    Ok(r)
}

/// p-adic valuation of a rational: `v_p(num) - v_p(den)`, and `PlusInfinity`
/// for zero.
pub fn vp_rat(p: u64, x: &Rational) -> Valuation {
    if x.is_zero() {
        return Valuation::PlusInfinity;
    }
    let vn = vp_int(p, x.numer()).expect("nonzero numerator") as i64;
    let vd = vp_int(p, x.denom()).expect("nonzero denominator") as i64;
    Valuation::Finite(vn - vd)
}

/// Canonical-form audit: positive denominator and coprime parts.
pub fn is_canonical(x: &Rational) -> bool {
    x.denom().is_positive() && x.numer().gcd(x.denom()).is_one()
}

/// Serialize as `"num/den"` in decimal, always including the denominator.
pub fn format_ratio(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RatioParseError {
    #[error("expected \"num/den\", got {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

/// Parse `"num/den"` (or a bare integer) into a canonical rational.
pub fn parse_ratio(s: &str) -> Result<Rational, RatioParseError> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num
        .trim()
        .parse()
        .map_err(|_| RatioParseError::Malformed(s.to_owned()))?;
    let den: BigInt = den
        .trim()
        .parse()
        .map_err(|_| RatioParseError::Malformed(s.to_owned()))?;
    if den.is_zero() {
        return Err(RatioParseError::ZeroDenominator(s.to_owned()));
    }
    Ok(Rational::new(num, den))
}
