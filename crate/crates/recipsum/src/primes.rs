//! Deterministic primality, sieving, and interval prime search.
//!
//! Certificates must be unconditionally valid, so everything here is exact:
//! trial division for point queries and a sieve of Eratosthenes for bulk
//! enumeration. Intervals are the half-open `(low, high]` windows the
//! certifier reasons about.

use std::sync::{Arc, RwLock};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PrimesError {
    #[error("interval requires low < high, got ({low}, {high}]")]
    EmptyInterval { low: u64, high: u64 },
    #[error("no prime in ({low}, {high}]; for a Bertrand window this is an implementation bug")]
    NoPrime { low: u64, high: u64 },
}

/// The half-open integer window `(low, high]`.
///
/// Callers with a rational lower bound pass its floor: for an integer `q`,
/// `q > r` holds exactly when `q > floor(r)`, so the strict inequality
/// against the original rational bound is preserved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeInterval {
    low: u64,
    high: u64,
}

impl PrimeInterval {
    pub fn new(low: u64, high: u64) -> Result<Self, PrimesError> {
        if low < high {
            Ok(PrimeInterval { low, high })
        } else {
            Err(PrimesError::EmptyInterval { low, high })
        }
    }

    /// Exclusive lower endpoint.
    pub fn low(&self) -> u64 {
        self.low
    }

    /// Inclusive upper endpoint.
    pub fn high(&self) -> u64 {
        self.high
    }
}

/// Deterministic primality by trial division (2, 3, then 6k±1).
pub fn is_prime(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    if m.is_multiple_of(2) {
        return m == 2;
    }
    if m.is_multiple_of(3) {
        return m == 3;
    }
    let mut d = 5u64;
    while d * d <= m {
        if m.is_multiple_of(d) || m.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

/// Smallest prime factor of `m >= 2`.
pub fn smallest_prime_factor(m: u64) -> u64 {
    assert!(m >= 2, "no prime factor below 2");
    if m.is_multiple_of(2) {
        return 2;
    }
    let mut d = 3u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            return d;
        }
        d += 2;
    }
    m
}

/// All primes `q` with `low < q <= high`, ascending. May be empty.
pub fn primes_in(interval: PrimeInterval) -> Vec<u64> {
    (interval.low + 1..=interval.high).filter(|&m| is_prime(m)).collect()
}

/// The largest prime `p` with `n/2 < p <= n`. Bertrand's postulate guarantees
/// one exists for every `n >= 2`; absence is reported as an error so callers
/// can surface it as an implementation bug.
pub fn bertrand_witness(n: u64) -> Result<u64, PrimesError> {
    let low = n / 2; // q > n/2 over the integers is exactly q > floor(n/2)
    (low + 1..=n)
        .rev()
        .find(|&m| is_prime(m))
        .ok_or(PrimesError::NoPrime { low, high: n })
}

/// Classic sieve: all primes up to and including `limit`.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for m in 2..=limit {
        if !composite[m] {
            out.push(m as u64);
            let mut j = m * m;
            while j <= limit {
                composite[j] = true;
                j += m;
            }
        }
    }
    out
}

/// Shared, monotonically grown sieve cache. The returned list covers at least
/// `(0, limit]` and may extend beyond; callers slice what they need. The cache
/// is a pure memo: concurrent readers always observe a consistent prime list.
pub(crate) fn primes_up_to_shared(limit: u64) -> Arc<Vec<u64>> {
    static CACHE: RwLock<Option<(u64, Arc<Vec<u64>>)>> = RwLock::new(None);
    if let Some((cap, primes)) = CACHE.read().expect("primes cache poisoned").as_ref() {
        if *cap >= limit {
            return Arc::clone(primes);
        }
    }
    let mut guard = CACHE.write().expect("primes cache poisoned");
    if let Some((cap, primes)) = guard.as_ref() {
        if *cap >= limit {
            return Arc::clone(primes);
        }
    }
    let old_cap = guard.as_ref().map_or(0, |(cap, _)| *cap);
    let new_cap = limit.max(old_cap.saturating_mul(2)).max(1 << 12);
    let primes = Arc::new(primes_up_to(new_cap));
    *guard = Some((new_cap, Arc::clone(&primes)));
    primes
}
