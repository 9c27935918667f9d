//! Built-in regression fixtures: reference fractions for the harmonic-style
//! sums, the witness-prime windows, and decimal spot values the certified
//! enclosures must bracket.
//!
//! Everything here is self-contained — the expected strings are embedded as
//! fixtures and recomputed from scratch on every run.

use crate::analysis::{
    alpha_to_width, exp_enclose_to_width, lemma24_threshold, pow10_recip, PRECISION_CAP,
};
use crate::certify::LEMMA27_TABLE;
use crate::exactnum::{format_ratio, rat, Rational};
use crate::powersum::{census, harmonic_sum, ProgressionSpec};
use num_bigint::BigInt;

/// One named check with its outcome and a human-readable detail line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckItem {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckItem {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        CheckItem { name: name.into(), passed, detail: detail.into() }
    }
}

/// The nine reference fractions, compared byte-for-byte.
pub const FRACTION_FIXTURES: [(u64, u64, usize, &str); 9] = [
    (2, 3, 5, "3041/3080"),
    (2, 4, 7, "88069/90090"),
    (2, 5, 11, "3616405543/3652567776"),
    (2, 6, 17, "2038704876507433/2053923842370400"),
    (2, 7, 27, "1237220537370712858171751080193/1241931941639876926714128796800"),
    (
        2,
        8,
        43,
        "3367642441187401373402635301280230085911262853/3374879226092212539809802981326899789745565750",
    ),
    (3, 4, 18, "17609244113383887374/17652709515783236895"),
    (
        2,
        9,
        53,
        "70773412390639611995377611407286048258428112436665192898048216184826913/72993325114428717314530010109453157943718362576137475837761483670815360",
    ),
    (3, 5, 29, "61763030785793910862459859011/62877130769344946602672156032"),
];

/// Recompute every reference fraction and compare the serialized form
/// byte-for-byte. Each value must also sit strictly below 1.
pub fn check_fractions() -> Vec<CheckItem> {
    FRACTION_FIXTURES
        .iter()
        .map(|&(a, b, n, expected)| {
            let spec = ProgressionSpec::new(a, b).expect("fixture bounds");
            let h = harmonic_sum(&spec, n);
            let got = format_ratio(&h);
            let below_one = h < rat(1, 1);
            let passed = got == expected && below_one;
            let detail = if passed {
                format!("H({a},{b},{n}) = {got} < 1")
            } else {
                format!("H({a},{b},{n}) = {got}, expected {expected} (below 1: {below_one})")
            };
            CheckItem::new(format!("fraction H({a},{b},{n})"), passed, detail)
        })
        .collect()
}

/// Every table row must have exactly one divisible term at its designated
/// prime across the row's whole `n` range.
pub fn check_witness_table() -> Vec<CheckItem> {
    LEMMA27_TABLE
        .iter()
        .map(|row| {
            let spec = ProgressionSpec::new(row.a, row.b).expect("fixture bounds");
            let bad: Vec<usize> = (row.n_lo..=row.n_hi)
                .filter(|&n| census(&spec, n, row.p).count() != 1)
                .collect();
            let passed = bad.is_empty();
            let detail = if passed {
                format!(
                    "census count 1 at p={} for all n in [{}, {}]",
                    row.p, row.n_lo, row.n_hi
                )
            } else {
                format!("census count != 1 at p={} for n = {bad:?}", row.p)
            };
            CheckItem::new(
                format!("witness table ({}, {}) p={}", row.a, row.b, row.p),
                passed,
                detail,
            )
        })
        .collect()
}

/// Decimal string like `"7.576110945"` as an exact rational plus its number
/// of fractional places.
fn parse_decimal(s: &str) -> (Rational, u32) {
    let (int_part, frac_part) = s.split_once('.').unwrap_or((s, ""));
    let places = frac_part.len() as u32;
    let digits: BigInt = format!("{int_part}{frac_part}")
        .parse()
        .expect("fixture decimal");
    (
        Rational::new(digits, BigInt::from(10u32).pow(places)),
        places,
    )
}

/// Quoted decimals in the source material carry a couple of ulps of rounding
/// slop, so bracketing is checked against the quoted value plus or minus
/// five ulps of its printed precision.
const QUOTED_SLOP_ULPS: i64 = 5;

fn enclosure_item(
    name: &str,
    lo: &Rational,
    hi: &Rational,
    quoted: &str,
    side: Option<(&str, bool)>,
) -> CheckItem {
    let (q, places) = parse_decimal(quoted);
    let slop = rat(QUOTED_SLOP_ULPS, 1) * pow10_recip(places);
    let width_ok = hi - lo <= pow10_recip(6);
    let brackets = *lo <= &q + &slop && *hi >= &q - &slop;
    let side_ok = side.is_none_or(|(_, ok)| ok);
    let passed = width_ok && brackets && side_ok;
    let mut detail = format!(
        "[{:.12}, {:.12}] vs quoted {quoted}",
        approx_f64(lo),
        approx_f64(hi)
    );
    if let Some((label, ok)) = side {
        detail.push_str(&format!("; {label}: {}", if ok { "holds" } else { "FAILS" }));
    }
    if !width_ok {
        detail.push_str("; width above 1e-6");
    }
    if !brackets {
        detail.push_str("; does not bracket quoted value");
    }
    CheckItem::new(name.to_owned(), passed, detail)
}

// display helper only; never used in any decision
fn approx_f64(x: &Rational) -> f64 {
    let scaled = (x * rat(1_000_000_000_000i64, 1)).to_integer();
    let approx: f64 = scaled.to_string().parse().unwrap_or(f64::NAN);
    approx / 1e12
}

/// Enclosure spot checks: each quoted decimal must be bracketed at width
/// `<= 1e-6`, and every strict inequality the case analysis relies on must
/// hold on the certified side.
pub fn check_enclosures() -> Vec<CheckItem> {
    let mut items = Vec::new();
    let target = pow10_recip(8);
    let half = rat(1, 2);

    // e^{81/40}
    let enc = exp_enclose_to_width(&rat(81, 40), &target, PRECISION_CAP);
    items.push(enclosure_item("exp(81/40)", &enc.lower, &enc.upper, "7.576110945", None));

    // threshold(4,3)/2 = (7/6) e^{51/28} - 1/6
    let (lo, hi) = lemma24_threshold(&ProgressionSpec::new(4, 3).unwrap());
    let (lo, hi) = (lo * &half, hi * &half);
    items.push(enclosure_item("threshold(4,3)/2", &lo, &hi, "7.044128639", None));

    // threshold(5,3)/2, strictly above 9.7
    let (lo, hi) = lemma24_threshold(&ProgressionSpec::new(5, 3).unwrap());
    let (lo, hi) = (lo * &half, hi * &half);
    let above = lo > rat(97, 10);
    items.push(enclosure_item(
        "threshold(5,3)/2",
        &lo,
        &hi,
        "9.768147927",
        Some(("> 9.7", above)),
    ));

    // alpha(5,3) = (9 + sqrt(105))/2, strictly below 9.7
    let (lo, hi) = alpha_to_width(&ProgressionSpec::new(5, 3).unwrap(), &pow10_recip(8))
        .expect("a != b");
    let below = hi < rat(97, 10);
    items.push(enclosure_item("alpha(5,3)", &lo, &hi, "9.623475385", Some(("< 9.7", below))));

    // g(6,3), strictly positive
    let (lo, hi) = crate::analysis::g_enclosure(6, 3, &target);
    let positive = lo > rat(0, 1);
    items.push(enclosure_item("g(6,3)", &lo, &hi, "1.59370755", Some(("> 0", positive))));

    // (1/2) e^{25/6} - 30, strictly positive
    let enc = exp_enclose_to_width(&rat(25, 6), &target, PRECISION_CAP);
    let lo = &enc.lower * &half - rat(30, 1);
    let hi = &enc.upper * &half - rat(30, 1);
    let positive = lo > rat(0, 1);
    items.push(enclosure_item(
        "exp(25/6)/2 - 30",
        &lo,
        &hi,
        "2.25004654",
        Some(("> 0", positive)),
    ));

    // e^{124/45} - 12 - 11/8, strictly positive
    let enc = exp_enclose_to_width(&rat(124, 45), &target, PRECISION_CAP);
    let shift = rat(12, 1) + rat(11, 8);
    let lo = &enc.lower - &shift;
    let hi = &enc.upper - &shift;
    let positive = lo > rat(0, 1);
    items.push(enclosure_item(
        "exp(124/45) - 12 - 11/8",
        &lo,
        &hi,
        "2.35477725",
        Some(("> 0", positive)),
    ));

    // alpha(4,3) = (9 + sqrt(93))/2
    let (lo, hi) = alpha_to_width(&ProgressionSpec::new(4, 3).unwrap(), &pow10_recip(8))
        .expect("a != b");
    items.push(enclosure_item("alpha(4,3)", &lo, &hi, "9.321825380", None));

    items
}

/// All fixture groups in a fixed order.
pub fn run_all() -> Vec<CheckItem> {
    let mut items = check_fractions();
    items.extend(check_witness_table());
    items.extend(check_enclosures());
    items
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_fixture_groups_pass() {
        for item in run_all() {
            assert!(item.passed, "{}: {}", item.name, item.detail);
        }
    }

    #[test]
    fn expected_item_counts() {
        assert_eq!(check_fractions().len(), 9);
        assert_eq!(check_witness_table().len(), 8);
        assert_eq!(check_enclosures().len(), 8);
    }

    #[test]
    fn parse_decimal_forms() {
        let (q, places) = parse_decimal("7.576110945");
        assert_eq!(places, 9);
        assert_eq!(q, rat(7_576_110_945, 1_000_000_000));
        let (q, places) = parse_decimal("15");
        assert_eq!(places, 0);
        assert_eq!(q, rat(15, 1));
    }
}
