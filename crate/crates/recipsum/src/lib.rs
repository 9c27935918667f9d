//! Exact arithmetic for reciprocal power sums over arithmetic progressions.
//!
//! For positive integers `a`, `b` and exponents `s_1..s_n`, the reciprocal
//! power sum `H = sum_{k=1..n} 1/(a+(k-1)b)^{s_k}` is a positive rational,
//! and for `n >= 2` it is never an integer. This crate computes `H` exactly,
//! produces machine-checkable certificates of that fact (either an exact
//! demonstration `0 < H < 1`, or a prime `p` with `v_p(H) < 0`), re-checks
//! every certificate independently, and scans the elementary symmetric
//! functions of the same reciprocals for integer values.
//!
//! Everything is exact: arbitrary-precision rationals, deterministic
//! primality, and rational enclosures for the few transcendental comparisons.
//! No floating point enters any decision.

pub mod analysis;
pub mod certify;
pub mod exactnum;
pub mod paper_check;
pub mod powersum;
pub mod primes;
pub mod scan;
pub mod seeding;
pub mod symfun;

pub use certify::{Certificate, CertificateKind, CertificateRecord, Provenance};
pub use exactnum::{Rational, Valuation};
pub use powersum::{ExponentSeq, ProgressionSpec};
