//! Non-integrality certificates: generation and independent verification.
//!
//! A certificate proves `H` is not an integer in one of two ways: the exact
//! demonstration `0 < H < 1`, or a prime `p` with `v_p(H) < 0` (an integer
//! has nonnegative valuation at every prime). Two finders produce them:
//!
//! * [`certify_guided`] follows the case analysis the certifier is built
//!   around — small-`n` envelope bounds, unique-term witnesses, and
//!   paired-term splits — and re-checks its own output before returning;
//! * [`certify_exhaustive`] computes `H` and scans primes ascending for a
//!   denominator divisor. It is the oracle the guided finder is measured
//!   against.
//!
//! [`verify`] trusts nothing but the claim: it recomputes `H` exactly and
//! checks the stated inequality or valuation literally.

mod guided;

pub use guided::{certify_guided, certify_guided_with, GuidedOptions};

use crate::exactnum::{format_ratio, parse_ratio, vp_int, vp_rat, Rational, Valuation};
use crate::powersum::{census, power_sum, ExponentSeq, PowerSumError, ProgressionSpec};
use crate::primes::{is_prime, primes_up_to_shared};
use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// What a certificate claims about `H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertificateKind {
    /// `0 < H < 1` exactly.
    LessThanOne,
    /// `v_p(H) = vp < 0` for the recorded prime.
    PrimeWitness { p: u64, vp: i64 },
}

/// Which branch of the case analysis produced a certificate.
///
/// The tags are part of the wire format; [`Provenance::as_str`] gives the
/// serialized names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    Case1Lemma21,
    Case1Unique,
    Case21Lemma22,
    Case22Lemma23,
    Case23Unique,
    Case3N2,
    Case31Fractional,
    Case32Unique,
    Case32Unequal,
    Case32Paired,
    Case4Exact,
    Lemma27Table,
    Case4Unique,
    Case4Unequal,
    Case4Paired,
    Exhaustive,
    ExactFallback,
    Other(String),
}

impl Provenance {
    pub fn as_str(&self) -> &str {
        match self {
            Provenance::Case1Lemma21 => "Case1/Lemma2.1",
            Provenance::Case1Unique => "Case1/Lemma2.8",
            Provenance::Case21Lemma22 => "Case2.1/Lemma2.2",
            Provenance::Case22Lemma23 => "Case2.2/Lemma2.3",
            Provenance::Case23Unique => "Case2.3",
            Provenance::Case3N2 => "Case3-n2",
            Provenance::Case31Fractional => "Case3.1",
            Provenance::Case32Unique => "Case3.2-unique",
            Provenance::Case32Unequal => "Case3.2-unequal",
            Provenance::Case32Paired => "Case3.2-paired",
            Provenance::Case4Exact => "Case4-exact",
            Provenance::Lemma27Table => "Lemma2.7-table",
            Provenance::Case4Unique => "Case4-unique",
            Provenance::Case4Unequal => "Case4-unequal",
            Provenance::Case4Paired => "Case4-paired",
            Provenance::Exhaustive => "exhaustive",
            Provenance::ExactFallback => "exact-fallback",
            Provenance::Other(s) => s,
        }
    }

    pub fn parse(s: &str) -> Provenance {
        match s {
            "Case1/Lemma2.1" => Provenance::Case1Lemma21,
            "Case1/Lemma2.8" => Provenance::Case1Unique,
            "Case2.1/Lemma2.2" => Provenance::Case21Lemma22,
            "Case2.2/Lemma2.3" => Provenance::Case22Lemma23,
            "Case2.3" => Provenance::Case23Unique,
            "Case3-n2" => Provenance::Case3N2,
            "Case3.1" => Provenance::Case31Fractional,
            "Case3.2-unique" => Provenance::Case32Unique,
            "Case3.2-unequal" => Provenance::Case32Unequal,
            "Case3.2-paired" => Provenance::Case32Paired,
            "Case4-exact" => Provenance::Case4Exact,
            "Lemma2.7-table" => Provenance::Lemma27Table,
            "Case4-unique" => Provenance::Case4Unique,
            "Case4-unequal" => Provenance::Case4Unequal,
            "Case4-paired" => Provenance::Case4Paired,
            "exhaustive" => Provenance::Exhaustive,
            "exact-fallback" => Provenance::ExactFallback,
            other => Provenance::Other(other.to_owned()),
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Proof object for the non-integrality of one `H` value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    /// Exact `H`, always recorded.
    pub value: Rational,
    pub kind: CertificateKind,
    pub provenance: Provenance,
    /// 1-based indices of the terms the witness argument is about
    /// (the divisible terms for a prime witness); empty when not applicable.
    pub witness_indices: Vec<usize>,
}

/// Reasons a certificate can fail independent verification.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertificateError {
    #[error("certified sums need n >= 2, got {0}")]
    SequenceTooShort(usize),
    #[error("recorded value {recorded} differs from recomputed H = {actual}")]
    ValueMismatch { recorded: String, actual: String },
    #[error("claimed 0 < H < 1 but H = {0}")]
    NotLessThanOne(String),
    #[error("witness modulus {0} is not prime")]
    NotPrime(u64),
    #[error("claimed valuation {0} is not negative")]
    ClaimedValuationNotNegative(i64),
    #[error("claimed v_{p}(H) = {claimed} but exact valuation is {actual}")]
    ValuationMismatch { p: u64, claimed: i64, actual: Valuation },
}

/// Failures of the paired-term witness preconditions, reported individually.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PairedError {
    #[error("census at p={p} lists {found} divisible terms, expected exactly the two given")]
    CensusMismatch { p: u64, found: usize },
    #[error("witness indices {k_lo} and {k_hi} are not p={p} apart")]
    IndicesNotPApart { p: u64, k_lo: usize, k_hi: usize },
    #[error("exponents at the paired terms differ: s_{k_lo}={s_lo}, s_{k_hi}={s_hi}")]
    UnequalExponents { k_lo: usize, k_hi: usize, s_lo: u32, s_hi: u32 },
    #[error("term at index {index} has v_p = {vp}, need exactly 1")]
    TermValuationNotOne { index: usize, vp: u32 },
    #[error("size bound fails: 3 * {term} >= p^2 for p = {p}")]
    LowTermTooLarge { p: u64, term: u64 },
    #[error("size bound fails: 3 * {term} >= 2 p^2 for p = {p}")]
    HighTermTooLarge { p: u64, term: u64 },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertifyError {
    #[error("certificates require n >= 2, got {0}")]
    SequenceTooShort(usize),
    #[error("census at p={p} has {found} divisible terms, expected {expected}")]
    CensusCount { p: u64, expected: usize, found: usize },
    #[error(transparent)]
    Paired(#[from] PairedError),
    #[error("no witness prime found for {spec}, n={n}: H >= 1 with integral value — implementation bug")]
    NoWitnessFound { spec: String, n: usize },
    #[error("internal assertion failed in {branch}: {detail}")]
    Internal { branch: &'static str, detail: String },
    #[error("produced certificate failed verification: {0}")]
    Unverified(#[from] CertificateError),
}

fn internal(branch: &'static str, detail: impl Into<String>) -> CertifyError {
    CertifyError::Internal { branch, detail: detail.into() }
}

/// Literal re-check of a certificate: recomputes `H` exactly and tests the
/// claim. Provenance and witness indices are never trusted or used.
pub fn check_certificate(
    spec: &ProgressionSpec,
    seq: &ExponentSeq,
    cert: &Certificate,
) -> Result<(), CertificateError> {
    let n = seq.len();
    if n < 2 {
        return Err(CertificateError::SequenceTooShort(n));
    }
    let h = power_sum(spec, seq);
    if cert.value != h {
        return Err(CertificateError::ValueMismatch {
            recorded: format_ratio(&cert.value),
            actual: format_ratio(&h),
        });
    }
    match cert.kind {
        CertificateKind::LessThanOne => {
            if h.is_positive() && h < Rational::one() {
                Ok(())
            } else {
                Err(CertificateError::NotLessThanOne(format_ratio(&h)))
            }
        }
        CertificateKind::PrimeWitness { p, vp } => {
            if !is_prime(p) {
                return Err(CertificateError::NotPrime(p));
            }
            if vp >= 0 {
                return Err(CertificateError::ClaimedValuationNotNegative(vp));
            }
            let actual = vp_rat(p, &h);
            if actual == Valuation::Finite(vp) {
                Ok(())
            } else {
                Err(CertificateError::ValuationMismatch { p, claimed: vp, actual })
            }
        }
    }
}

/// Boolean form of [`check_certificate`].
pub fn verify(spec: &ProgressionSpec, seq: &ExponentSeq, cert: &Certificate) -> bool {
    check_certificate(spec, seq, cert).is_ok()
}

/// Shared engine behind the exhaustive finder and the exact fallback:
/// `H < 1` wins immediately, otherwise the smallest prime dividing the
/// denominator of `H` is the witness (equivalently the first prime, taken
/// ascending up to the last term, with `v_p(H) < 0`).
fn certificate_from_value(
    spec: &ProgressionSpec,
    seq: &ExponentSeq,
    h: Rational,
    provenance: Provenance,
) -> Result<Certificate, CertifyError> {
    let n = seq.len();
    if h < Rational::one() {
        return Ok(Certificate {
            value: h,
            kind: CertificateKind::LessThanOne,
            provenance,
            witness_indices: Vec::new(),
        });
    }
    let den = h.denom().magnitude();
    let last = spec.term(n);
    let primes = primes_up_to_shared(last);
    for &p in primes.iter().take_while(|&&p| p <= last) {
        if (den % p).is_zero() {
            let vp = -(vp_int(p, h.denom()).expect("nonzero denominator") as i64);
            let witness_indices = census(spec, n, p).indices;
            return Ok(Certificate {
                value: h,
                kind: CertificateKind::PrimeWitness { p, vp },
                provenance,
                witness_indices,
            });
        }
    }
    Err(CertifyError::NoWitnessFound { spec: spec.to_string(), n })
}

/// Oracle finder: exact computation plus an ascending prime scan.
pub fn certify_exhaustive(
    spec: &ProgressionSpec,
    seq: &ExponentSeq,
) -> Result<Certificate, CertifyError> {
    let n = seq.len();
    if n < 2 {
        return Err(CertifyError::SequenceTooShort(n));
    }
    let h = power_sum(spec, seq);
    certificate_from_value(spec, seq, h, Provenance::Exhaustive)
}

/// Valuation of `H` at a prime dividing exactly one term: `-s_k * v_p(term_k)`
/// for the unique divisible index `k` (every other reciprocal has valuation
/// zero, so the minimum is attained at the witness term alone).
pub fn unique_term_vp(
    spec: &ProgressionSpec,
    seq: &ExponentSeq,
    p: u64,
) -> Result<Valuation, CertifyError> {
    let n = seq.len();
    let c = census(spec, n, p);
    if c.count() != 1 {
        return Err(CertifyError::CensusCount { p, expected: 1, found: c.count() });
    }
    let k = c.indices[0];
    let v = c.valuations[0] as i64;
    Ok(Valuation::Finite(-(seq.exponent(k) as i64) * v))
}

/// Valuation of `H` at a prime dividing exactly the two terms `k_lo` and
/// `k_hi = k_lo + p` with equal exponents `s` and unit valuations: the paired
/// numerator `t_lo^s + t_hi^s` stays below `p^{2s}` by the size bounds, so
/// `v_p(H) = v_p(t_lo^s + t_hi^s) - 2s < 0`.
pub fn paired_term_vp(
    spec: &ProgressionSpec,
    seq: &ExponentSeq,
    p: u64,
    k_lo: usize,
    k_hi: usize,
) -> Result<Valuation, CertifyError> {
    let n = seq.len();
    let c = census(spec, n, p);
    if c.count() != 2 || c.indices[0] != k_lo || c.indices[1] != k_hi {
        return Err(PairedError::CensusMismatch { p, found: c.count() }.into());
    }
    if k_hi - k_lo != p as usize {
        return Err(PairedError::IndicesNotPApart { p, k_lo, k_hi }.into());
    }
    let (s_lo, s_hi) = (seq.exponent(k_lo), seq.exponent(k_hi));
    if s_lo != s_hi {
        return Err(PairedError::UnequalExponents { k_lo, k_hi, s_lo, s_hi }.into());
    }
    for (i, &k) in c.indices.iter().enumerate() {
        if c.valuations[i] != 1 {
            return Err(PairedError::TermValuationNotOne { index: k, vp: c.valuations[i] }.into());
        }
    }
    let (t_lo, t_hi) = (spec.term(k_lo), spec.term(k_hi));
    let p2 = p as u128 * p as u128;
    if 3 * t_lo as u128 >= p2 {
        return Err(PairedError::LowTermTooLarge { p, term: t_lo }.into());
    }
    if 3 * t_hi as u128 >= 2 * p2 {
        return Err(PairedError::HighTermTooLarge { p, term: t_hi }.into());
    }
    let s = s_lo;
    let paired = BigUint::from(t_lo).pow(s) + BigUint::from(t_hi).pow(s);
    let v = vp_int(p, &paired.into()).expect("paired numerator is positive") as i64;
    let vp = v - 2 * s as i64;
    if vp >= 0 {
        return Err(internal(
            "paired_term_vp",
            format!("size bounds held but v_p(numerator) = {v} >= 2s = {}", 2 * s),
        ));
    }
    Ok(Valuation::Finite(vp))
}

/// Designated witness primes for the seven sub-threshold pairs, with the
/// `n` ranges over which each prime divides exactly one term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableRow {
    pub a: u64,
    pub b: u64,
    pub n_lo: usize,
    pub n_hi: usize,
    pub p: u64,
}

pub const LEMMA27_TABLE: [TableRow; 8] = [
    TableRow { a: 2, b: 3, n_lo: 6, n_hi: 17, p: 17 },
    TableRow { a: 2, b: 4, n_lo: 8, n_hi: 19, p: 13 },
    TableRow { a: 2, b: 4, n_lo: 20, n_hi: 23, p: 37 },
    TableRow { a: 2, b: 5, n_lo: 12, n_hi: 29, p: 47 },
    TableRow { a: 2, b: 6, n_lo: 18, n_hi: 35, p: 43 },
    TableRow { a: 2, b: 7, n_lo: 28, n_hi: 41, p: 163 },
    TableRow { a: 2, b: 8, n_lo: 44, n_hi: 47, p: 157 },
    TableRow { a: 3, b: 4, n_lo: 19, n_hi: 23, p: 71 },
];

/// Table lookup: the designated prime for `(a, b)` at length `n`, if a row
/// covers it.
pub fn lemma27_prime(a: u64, b: u64, n: usize) -> Option<u64> {
    LEMMA27_TABLE
        .iter()
        .find(|row| row.a == a && row.b == b && (row.n_lo..=row.n_hi).contains(&n))
        .map(|row| row.p)
}

/// Serialized certificate: one self-contained JSON object per certificate.
/// Big integers travel as decimal strings; `value` is `"num/den"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub a: u64,
    pub b: u64,
    pub n: usize,
    pub exponents: Vec<u32>,
    pub kind: String,
    pub value: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vp: Option<i64>,
    pub provenance: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_indices: Option<Vec<usize>>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RecordError {
    #[error("bad progression or exponents: {0}")]
    BadInput(#[from] PowerSumError),
    #[error("exponent list has length {got}, record says n = {n}")]
    LengthMismatch { n: usize, got: usize },
    #[error("unknown certificate kind {0:?}")]
    UnknownKind(String),
    #[error("kind {kind:?} requires field {field:?}")]
    MissingField { kind: String, field: &'static str },
    #[error("cannot parse value: {0}")]
    BadValue(#[from] crate::exactnum::RatioParseError),
}

impl CertificateRecord {
    pub fn from_parts(spec: &ProgressionSpec, seq: &ExponentSeq, cert: &Certificate) -> Self {
        let (kind, p, vp) = match cert.kind {
            CertificateKind::LessThanOne => ("LessThanOne".to_owned(), None, None),
            CertificateKind::PrimeWitness { p, vp } => {
                ("PrimeWitness".to_owned(), Some(p), Some(vp))
            }
        };
        CertificateRecord {
            a: spec.a(),
            b: spec.b(),
            n: seq.len(),
            exponents: seq.as_slice().to_vec(),
            kind,
            value: format_ratio(&cert.value),
            p,
            vp,
            provenance: cert.provenance.as_str().to_owned(),
            witness_indices: if cert.witness_indices.is_empty() {
                None
            } else {
                Some(cert.witness_indices.clone())
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("record serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    /// Rebuild the typed triple this record describes.
    pub fn reconstruct(
        &self,
    ) -> Result<(ProgressionSpec, ExponentSeq, Certificate), RecordError> {
        let spec = ProgressionSpec::new(self.a, self.b)?;
        let seq = ExponentSeq::new(self.exponents.clone())?;
        if seq.len() != self.n {
            return Err(RecordError::LengthMismatch { n: self.n, got: seq.len() });
        }
        let kind = match self.kind.as_str() {
            "LessThanOne" => CertificateKind::LessThanOne,
            "PrimeWitness" => {
                let p = self.p.ok_or(RecordError::MissingField {
                    kind: self.kind.clone(),
                    field: "p",
                })?;
                let vp = self.vp.ok_or(RecordError::MissingField {
                    kind: self.kind.clone(),
                    field: "vp",
                })?;
                CertificateKind::PrimeWitness { p, vp }
            }
            other => return Err(RecordError::UnknownKind(other.to_owned())),
        };
        let cert = Certificate {
            value: parse_ratio(&self.value)?,
            kind,
            provenance: Provenance::parse(&self.provenance),
            witness_indices: self.witness_indices.clone().unwrap_or_default(),
        };
        Ok((spec, seq, cert))
    }
}

/// Verify a serialized certificate end to end.
pub fn verify_record(record: &CertificateRecord) -> Result<(), CertifyError> {
    let (spec, seq, cert) = record
        .reconstruct()
        .map_err(|e| internal("verify_record", e.to_string()))?;
    check_certificate(&spec, &seq, &cert)?;
    Ok(())
}
