//! The progression `a, a+b, a+2b, ...` and exact reciprocal power sums.

use crate::exactnum::{vp_u64, Rational};
use crate::seeding::SplitMix64;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PowerSumError {
    #[error("progression requires a >= 1 and b >= 1, got a={a}, b={b}")]
    BadProgression { a: u64, b: u64 },
    #[error("exponent sequence must be nonempty")]
    EmptySequence,
    #[error("exponents must be >= 1")]
    ZeroExponent,
    #[error("cannot parse exponent sequence {0:?}")]
    BadSequenceText(String),
    #[error("random exponent bound must be >= 1")]
    ZeroExponentBound,
}

/// The arithmetic progression `a + (k-1) b` for `k = 1, 2, ...` with
/// `a, b >= 1`. The gcd `d = gcd(a, b)` is derived on demand and never
/// stored, so it cannot go stale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProgressionSpec {
    a: u64,
    b: u64,
}

impl ProgressionSpec {
    pub fn new(a: u64, b: u64) -> Result<Self, PowerSumError> {
        if a >= 1 && b >= 1 {
            Ok(ProgressionSpec { a, b })
        } else {
            Err(PowerSumError::BadProgression { a, b })
        }
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    /// `gcd(a, b)`.
    pub fn d(&self) -> u64 {
        self.a.gcd(&self.b)
    }

    /// The k-th term `a + (k-1) b`, `k >= 1`. Terms must fit in `u64`.
    pub fn term(&self, k: usize) -> u64 {
        assert!(k >= 1, "term index is 1-based");
        let t = self.a as u128 + (k as u128 - 1) * self.b as u128;
        u64::try_from(t).expect("term exceeds u64")
    }
}

impl fmt::Display for ProgressionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a={}, b={}", self.a, self.b)
    }
}

/// Finite sequence of positive integer exponents `s_1..s_n`.
///
/// Text forms: a comma list `"1,2,1,3"`, a constant `"const:c:n"`, or a
/// seeded sample `"random:seed:max:n"` — uniform in `[1, max]`, drawn from
/// the SplitMix64 generator documented in [`crate::seeding`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExponentSeq(Vec<u32>);

impl ExponentSeq {
    pub fn new(exponents: Vec<u32>) -> Result<Self, PowerSumError> {
        if exponents.is_empty() {
            return Err(PowerSumError::EmptySequence);
        }
        if exponents.contains(&0) {
            return Err(PowerSumError::ZeroExponent);
        }
        Ok(ExponentSeq(exponents))
    }

    /// All-ones sequence of length `n >= 1`.
    pub fn ones(n: usize) -> Self {
        assert!(n >= 1);
        ExponentSeq(vec![1; n])
    }

    pub fn constant(c: u32, n: usize) -> Result<Self, PowerSumError> {
        if n == 0 {
            return Err(PowerSumError::EmptySequence);
        }
        Self::new(vec![c; n])
    }

    /// Seeded uniform sample in `[1, max]`.
    pub fn random(seed: u64, max: u32, n: usize) -> Result<Self, PowerSumError> {
        Self::random_range(seed, 1, max, n)
    }

    /// Seeded uniform sample in `[lo, hi]` (generator draws in `[1, hi-lo+1]`
    /// and shifts, so `random_range(seed, 1, max, n) == random(seed, max, n)`).
    pub fn random_range(seed: u64, lo: u32, hi: u32, n: usize) -> Result<Self, PowerSumError> {
        if n == 0 {
            return Err(PowerSumError::EmptySequence);
        }
        if lo == 0 || hi < lo {
            return Err(PowerSumError::ZeroExponentBound);
        }
        let mut gen = SplitMix64::new(seed);
        let span = (hi - lo + 1) as u64;
        let exps = (0..n).map(|_| lo - 1 + gen.next_in(span) as u32).collect();
        Ok(ExponentSeq(exps))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false // nonempty by construction
    }

    /// 1-based accessor for `s_k`.
    pub fn exponent(&self, k: usize) -> u32 {
        self.0[k - 1]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, u32> {
        self.0.iter()
    }
}

impl FromStr for ExponentSeq {
    type Err = PowerSumError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PowerSumError::BadSequenceText(s.to_owned());
        if let Some(rest) = s.strip_prefix("const:") {
            let (c, n) = rest.split_once(':').ok_or_else(bad)?;
            let c: u32 = c.parse().map_err(|_| bad())?;
            let n: usize = n.parse().map_err(|_| bad())?;
            return ExponentSeq::constant(c, n);
        }
        if let Some(rest) = s.strip_prefix("random:") {
            let mut it = rest.split(':');
            let seed: u64 = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            let max: u32 = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            let n: usize = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            if it.next().is_some() {
                return Err(bad());
            }
            return ExponentSeq::random(seed, max, n);
        }
        let exps: Result<Vec<u32>, _> = s.split(',').map(|t| t.trim().parse::<u32>()).collect();
        ExponentSeq::new(exps.map_err(|_| bad())?)
    }
}

impl fmt::Display for ExponentSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for s in &self.0 {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
            first = false;
        }
        Ok(())
    }
}

/// Exact value of `sum_{k=1..n} 1/(a+(k-1)b)^{s_k}`, in lowest terms.
///
/// The sum is accumulated over a running common denominator and reduced once
/// at the end; per-step gcds would dominate the cost on long sequences.
pub fn power_sum(spec: &ProgressionSpec, seq: &ExponentSeq) -> Rational {
    let mut num = BigUint::zero();
    let mut den = BigUint::one();
    for (i, &s) in seq.iter().enumerate() {
        let t = BigUint::from(spec.term(i + 1)).pow(s);
        num = num * &t + &den;
        den *= t;
    }
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// `power_sum` with the all-ones exponent sequence of length `n >= 1`.
pub fn harmonic_sum(spec: &ProgressionSpec, n: usize) -> Rational {
    power_sum(spec, &ExponentSeq::ones(n))
}

/// Which terms among the first `n` a prime divides, with exact valuations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisibilityCensus {
    pub p: u64,
    /// 1-based indices `k` with `p | a+(k-1)b`, strictly ascending.
    pub indices: Vec<usize>,
    /// `v_p(a+(k-1)b)` for each listed index; always >= 1.
    pub valuations: Vec<u32>,
}

impl DivisibilityCensus {
    pub fn count(&self) -> usize {
        self.indices.len()
    }
}

/// Modular inverse of `x` mod prime `p` by extended Euclid.
fn mod_inverse(x: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i128, (x % p) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1, "inverse requires gcd(x, p) = 1");
    t0.rem_euclid(p as i128) as u64
}

/// First 1-based index `k <= n` with `p | a+(k-1)b`, if any, plus the stride.
/// When `p | b` either every term or no term is divisible.
fn first_divisible_index(spec: &ProgressionSpec, n: usize, p: u64) -> Option<(usize, usize)> {
    let a = spec.a % p;
    if spec.b.is_multiple_of(p) {
        return if a == 0 { Some((1, 1)) } else { None };
    }
    // a + (k-1) b = 0 (mod p)  <=>  k - 1 = -a * b^{-1} (mod p)
    let inv_b = mod_inverse(spec.b, p);
    let km1 = ((p - a) % p) as u128 * inv_b as u128 % p as u128;
    let first = km1 as usize + 1;
    (first <= n).then_some((first, p as usize))
}

/// Exact census of the multiples of `p` among the first `n` terms.
pub fn census(spec: &ProgressionSpec, n: usize, p: u64) -> DivisibilityCensus {
    let mut indices = Vec::new();
    let mut valuations = Vec::new();
    if let Some((first, stride)) = first_divisible_index(spec, n, p) {
        let mut k = first;
        while k <= n {
            indices.push(k);
            valuations.push(vp_u64(p, spec.term(k)).expect("terms are positive") as u32);
            k += stride;
        }
    }
    DivisibilityCensus { p, indices, valuations }
}

/// Number of indices `census` would report, without computing valuations.
pub fn census_count(spec: &ProgressionSpec, n: usize, p: u64) -> usize {
    match first_divisible_index(spec, n, p) {
        Some((first, stride)) => (n - first) / stride + 1,
        None => 0,
    }
}
