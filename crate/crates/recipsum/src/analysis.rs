//! Certified bounds for the transcendental comparisons behind the `H < 1`
//! predicates: rational enclosures of `e^x`, the length threshold that
//! guarantees `H < 1`, the envelope functions `g` and `h`, and the prime-size
//! threshold `alpha`.
//!
//! Inequalities are decided only when a rational enclosure separates the two
//! sides. Precision escalates by doubling the Taylor degree from
//! [`DEFAULT_TERMS`] up to [`PRECISION_CAP`]; a comparison that is still
//! straddled at the cap is reported as undecided, never guessed.

use crate::exactnum::Rational;
use crate::powersum::ProgressionSpec;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed};
use std::cmp::Ordering;
use thiserror::Error;

/// Starting Taylor degree for enclosure escalation.
pub const DEFAULT_TERMS: u32 = 16;
/// Hard cap on the Taylor degree; hitting it yields `Outcome::Undecided`.
pub const PRECISION_CAP: u32 = 1024;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("alpha is undefined for a == b")]
    AlphaUndefined,
}

/// Rational bracket `lower < e^argument < upper` (equality only at 0).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpEnclosure {
    pub argument: Rational,
    pub lower: Rational,
    pub upper: Rational,
    /// Effective Taylor degree used.
    pub terms_used: u32,
}

impl ExpEnclosure {
    pub fn width(&self) -> Rational {
        &self.upper - &self.lower
    }

    pub fn contains(&self, v: &Rational) -> bool {
        &self.lower <= v && v <= &self.upper
    }
}

/// `1 / 10^k` as a rational.
pub fn pow10_recip(k: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(10u32).pow(k))
}

/// Certified enclosure of `e^x` from the degree-`terms` Taylor polynomial
/// plus a geometric tail bound.
///
/// For `x >= 0` the polynomial is a strict lower bound and the tail
/// `x^(N+1)/(N+1)! * 1/(1 - x/(N+2))` dominates the remainder; the degree is
/// raised internally until `x/(N+2) < 1`. Negative arguments go through
/// `e^x = 1/e^(-x)`, so the bracket stays rigorous there too.
pub fn exp_enclose(x: &Rational, terms: u32) -> ExpEnclosure {
    let terms = terms.max(1);
    if x.is_negative() {
        let pos = exp_enclose(&-x, terms);
        return ExpEnclosure {
            argument: x.clone(),
            lower: pos.upper.recip(),
            upper: pos.lower.recip(),
            terms_used: pos.terms_used,
        };
    }

    let xn = x.numer().magnitude();
    let xd = x.denom().magnitude();

    // smallest degree with x/(N+2) < 1, i.e. (N+2) * den > num
    let mut n_min = 0u32;
    while BigUint::from(n_min + 2) * xd <= *xn {
        n_min += 1;
    }
    let degree = terms.max(n_min);

    // running sum over the common denominator den^i * i!
    let mut sum_num = BigUint::one();
    let mut term_num = BigUint::one();
    let mut common_den = BigUint::one();
    for i in 1..=degree {
        term_num *= xn;
        let step = xd * BigUint::from(i);
        common_den *= &step;
        sum_num = sum_num * step + &term_num;
    }
    let lower = Rational::new(BigInt::from(sum_num), BigInt::from(common_den.clone()));

    // tail: first omitted term divided by (1 - x/(degree+2))
    let tail_num = &term_num * xn;
    let tail_den = &common_den * (xd * BigUint::from(degree + 1));
    let tail = Rational::new(BigInt::from(tail_num), BigInt::from(tail_den));
    let ratio_den = Rational::new(
        BigInt::from(xd * BigUint::from(degree + 2) - xn),
        BigInt::from(xd * BigUint::from(degree + 2)),
    ); // 1 - x/(degree+2), positive by choice of degree
    let upper = &lower + tail / ratio_den;

    ExpEnclosure {
        argument: x.clone(),
        lower,
        upper,
        terms_used: degree,
    }
}

/// Escalate the degree (doubling from [`DEFAULT_TERMS`]) until the enclosure
/// width is at most `target`, or the cap is reached.
pub fn exp_enclose_to_width(x: &Rational, target: &Rational, cap: u32) -> ExpEnclosure {
    let mut terms = DEFAULT_TERMS;
    loop {
        let enc = exp_enclose(x, terms);
        if enc.width() <= *target || terms >= cap {
            return enc;
        }
        terms = (terms * 2).min(cap);
    }
}

/// Outcome of a certified inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    True,
    False,
    Undecided,
}

/// A decided (or undecided-at-cap) inequality plus the Taylor degree used.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundVerdict {
    pub outcome: Outcome,
    pub precision_used: u32,
}

/// Hypothesis `a = b > n/2` (grants `H < 1` for every exponent choice).
pub fn lemma21_applies(spec: &ProgressionSpec, n: usize) -> bool {
    n >= 2 && spec.a() == spec.b() && 2 * spec.a() > n as u64
}

/// Hypothesis `2 <= n < a/b + 1` (grants `H < 1`).
pub fn lemma22_applies(spec: &ProgressionSpec, n: usize) -> bool {
    n >= 2 && (n as u64 - 1) * spec.b() < spec.a()
}

/// Hypothesis `a != b`, `b in {d, 2d}`, `2 d^2 > a+(n-1)b` (grants `H < 1`).
pub fn lemma23_applies(spec: &ProgressionSpec, n: usize) -> bool {
    if n < 2 || spec.a() == spec.b() {
        return false;
    }
    let d = spec.d();
    if spec.b() != d && spec.b() != 2 * d {
        return false;
    }
    let last = spec.a() as u128 + (n as u128 - 1) * spec.b() as u128;
    2 * (d as u128) * (d as u128) > last
}

fn envelope_exponent(spec: &ProgressionSpec) -> Rational {
    // b * (1 - 1/a - 1/(a+b)); negative when a = 1
    let a = BigInt::from(spec.a());
    let ab = BigInt::from(spec.a() + spec.b());
    let b = Rational::from_integer(BigInt::from(spec.b()));
    let one = Rational::one();
    b * (&one - Rational::new(BigInt::one(), a) - Rational::new(BigInt::one(), ab))
}

/// Certified bracket of the length threshold
/// `c' = 1 + ((a+b)/b) e^{b(1 - 1/a - 1/(a+b))} - a/b`.
///
/// Any `n >= 2` strictly below the certified lower bound has `H < 1` for
/// every exponent sequence of that length.
pub fn lemma24_threshold(spec: &ProgressionSpec) -> (Rational, Rational) {
    lemma24_threshold_to_width(spec, &pow10_recip(6), PRECISION_CAP)
}

/// As [`lemma24_threshold`] with an explicit width target and degree cap.
pub fn lemma24_threshold_to_width(
    spec: &ProgressionSpec,
    target: &Rational,
    cap: u32,
) -> (Rational, Rational) {
    let x = envelope_exponent(spec);
    let coeff = Rational::new(
        BigInt::from(spec.a() + spec.b()),
        BigInt::from(spec.b()),
    );
    let shift = Rational::one() - Rational::new(BigInt::from(spec.a()), BigInt::from(spec.b()));
    let mut terms = DEFAULT_TERMS;
    loop {
        let enc = exp_enclose(&x, terms);
        let lo = &coeff * &enc.lower + &shift;
        let hi = &coeff * &enc.upper + &shift;
        if &hi - &lo <= *target || terms >= cap {
            return (lo, hi);
        }
        terms = (terms * 2).min(cap);
    }
}

/// Certified comparison of `n` against the threshold of [`lemma24_threshold`]:
/// `True` means `n < c'` (so `H < 1`), `False` means `n >= c'`.
pub fn compare_to_threshold(spec: &ProgressionSpec, n: usize) -> BoundVerdict {
    compare_to_threshold_with_cap(spec, n, PRECISION_CAP)
}

/// As [`compare_to_threshold`] with a caller-chosen degree cap.
pub fn compare_to_threshold_with_cap(
    spec: &ProgressionSpec,
    n: usize,
    cap: u32,
) -> BoundVerdict {
    let cap = cap.max(DEFAULT_TERMS);
    let x = envelope_exponent(spec);
    let coeff = Rational::new(BigInt::from(spec.a() + spec.b()), BigInt::from(spec.b()));
    let shift = Rational::one() - Rational::new(BigInt::from(spec.a()), BigInt::from(spec.b()));
    let n_rat = Rational::from_integer(BigInt::from(n as u64));
    let mut terms = DEFAULT_TERMS;
    loop {
        let enc = exp_enclose(&x, terms);
        let lo = &coeff * &enc.lower + &shift;
        let hi = &coeff * &enc.upper + &shift;
        if n_rat < lo {
            return BoundVerdict { outcome: Outcome::True, precision_used: enc.terms_used };
        }
        if n_rat >= hi {
            return BoundVerdict { outcome: Outcome::False, precision_used: enc.terms_used };
        }
        if terms >= cap {
            return BoundVerdict { outcome: Outcome::Undecided, precision_used: enc.terms_used };
        }
        terms = (terms * 2).min(cap);
    }
}

fn envelope_pair(a: u64, b: u64, terms: u32) -> (Rational, Rational) {
    // ((a+b)/(2b)) e^{b(1-1/a-1/(a+b))}, the shared leading term of g and h
    let spec = ProgressionSpec::new(a, b).expect("positive arguments");
    let x = envelope_exponent(&spec);
    let enc = exp_enclose(&x, terms);
    let coeff = Rational::new(BigInt::from(a + b), BigInt::from(2 * b));
    (&coeff * &enc.lower, &coeff * &enc.upper)
}

/// Certified bracket of `g(a,b) = ((a+b)/(2b)) e^{...} - 3b - 3a/(2b) + 1/2`.
pub fn g_enclosure(a: u64, b: u64, target: &Rational) -> (Rational, Rational) {
    let offset = Rational::new(BigInt::from(1i64), BigInt::from(2i64))
        - Rational::from_integer(BigInt::from(3 * b))
        - Rational::new(BigInt::from(3 * a), BigInt::from(2 * b));
    enclose_with_offset(a, b, offset, target)
}

/// Certified bracket of `h(a,b) = ((a+b)/(2b)) e^{...} - a/(2b) + 1/2 - 3b`.
pub fn h_enclosure(a: u64, b: u64, target: &Rational) -> (Rational, Rational) {
    let offset = Rational::new(BigInt::from(1i64), BigInt::from(2i64))
        - Rational::from_integer(BigInt::from(3 * b))
        - Rational::new(BigInt::from(a), BigInt::from(2 * b));
    enclose_with_offset(a, b, offset, target)
}

fn enclose_with_offset(
    a: u64,
    b: u64,
    offset: Rational,
    target: &Rational,
) -> (Rational, Rational) {
    let mut terms = DEFAULT_TERMS;
    loop {
        let (lo, hi) = envelope_pair(a, b, terms);
        let lo = lo + &offset;
        let hi = hi + &offset;
        if &hi - &lo <= *target || terms >= PRECISION_CAP {
            return (lo, hi);
        }
        terms = (terms * 2).min(PRECISION_CAP);
    }
}

fn sign_verdict(mut bracket: impl FnMut(u32) -> (Rational, Rational)) -> BoundVerdict {
    let mut terms = DEFAULT_TERMS;
    loop {
        let (lo, hi) = bracket(terms);
        if lo.is_positive() {
            return BoundVerdict { outcome: Outcome::True, precision_used: terms };
        }
        if hi.is_negative() {
            return BoundVerdict { outcome: Outcome::False, precision_used: terms };
        }
        if terms >= PRECISION_CAP {
            return BoundVerdict { outcome: Outcome::Undecided, precision_used: terms };
        }
        terms = (terms * 2).min(PRECISION_CAP);
    }
}

/// Certified sign of `g(a, b)`: `True` means `> 0`, `False` means `< 0`.
pub fn g_sign(a: u64, b: u64) -> BoundVerdict {
    let offset = Rational::new(BigInt::from(1i64), BigInt::from(2i64))
        - Rational::from_integer(BigInt::from(3 * b))
        - Rational::new(BigInt::from(3 * a), BigInt::from(2 * b));
    sign_verdict(|terms| {
        let (lo, hi) = envelope_pair(a, b, terms);
        (lo + &offset, hi + &offset)
    })
}

/// Certified sign of `h(a, b)`: `True` means `> 0`, `False` means `< 0`.
pub fn h_sign(a: u64, b: u64) -> BoundVerdict {
    let offset = Rational::new(BigInt::from(1i64), BigInt::from(2i64))
        - Rational::from_integer(BigInt::from(3 * b))
        - Rational::new(BigInt::from(a), BigInt::from(2 * b));
    sign_verdict(|terms| {
        let (lo, hi) = envelope_pair(a, b, terms);
        (lo + &offset, hi + &offset)
    })
}

/// The nine pairs where `h < 0` (equivalently `2 <= a < b <= 9`, `4a+b <= 17`).
pub const SET_R: [(u64, u64); 9] = [
    (2, 3),
    (2, 4),
    (2, 5),
    (2, 6),
    (2, 7),
    (2, 8),
    (2, 9),
    (3, 4),
    (3, 5),
];

/// Membership in the literal nine-pair set.
pub fn in_set_r(a: u64, b: u64) -> bool {
    SET_R.contains(&(a, b))
}

/// Certified bracket of the prime-size threshold
/// `alpha = (3b + sqrt(9b^2 + 12(a-b)))/2` for `a > b`, `3b` for `a < b`.
///
/// For `a < b` (and whenever the discriminant is a perfect square) the
/// bracket is exact, lower = upper. Width target `10^-6` otherwise.
pub fn alpha(spec: &ProgressionSpec) -> Result<(Rational, Rational), AnalysisError> {
    alpha_to_width(spec, &pow10_recip(6))
}

/// As [`alpha`] with an explicit bracket-width target.
pub fn alpha_to_width(
    spec: &ProgressionSpec,
    target: &Rational,
) -> Result<(Rational, Rational), AnalysisError> {
    let (a, b) = (spec.a(), spec.b());
    match a.cmp(&b) {
        Ordering::Equal => Err(AnalysisError::AlphaUndefined),
        Ordering::Less => {
            let exact = Rational::from_integer(BigInt::from(3 * b));
            Ok((exact.clone(), exact))
        }
        Ordering::Greater => {
            let disc = BigUint::from(9u64) * BigUint::from(b) * BigUint::from(b)
                + BigUint::from(12u64) * BigUint::from(a - b);
            let root = disc.sqrt();
            let three_b = Rational::from_integer(BigInt::from(3 * b));
            let half = Rational::new(BigInt::one(), BigInt::from(2));
            if &root * &root == disc {
                let exact = (&three_b + Rational::from_integer(BigInt::from(root))) * &half;
                return Ok((exact.clone(), exact));
            }
            // bisect sqrt(disc) in (root, root+1); midpoints are non-integers
            // so mid^2 never equals the integer discriminant
            let disc = Rational::from_integer(BigInt::from(disc));
            let mut lo = Rational::from_integer(BigInt::from(root.clone()));
            let mut hi = Rational::from_integer(BigInt::from(root + BigUint::one()));
            let sqrt_target = target * Rational::from_integer(BigInt::from(2));
            while &hi - &lo > sqrt_target {
                let mid = (&lo + &hi) * &half;
                if &mid * &mid < disc {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Ok(((&three_b + lo) * &half, (&three_b + hi) * &half))
        }
    }
}

/// Certified comparison of an integer `t` against `alpha`. `Equal` arises only
/// when `alpha` is exact; otherwise the bracket is refined until it separates.
pub fn alpha_cmp_int(spec: &ProgressionSpec, t: u64) -> Result<Ordering, AnalysisError> {
    let t = Rational::from_integer(BigInt::from(t));
    let mut width = pow10_recip(6);
    loop {
        let (lo, hi) = alpha_to_width(spec, &width)?;
        if lo == hi {
            return Ok(t.cmp(&lo));
        }
        if t > hi {
            return Ok(Ordering::Greater);
        }
        if t <= lo {
            return Ok(Ordering::Less);
        }
        // t sits inside the bracket; sqrt is irrational here, so refinement
        // must eventually separate
        width *= pow10_recip(6);
    }
}
