//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Run with `cargo test -p recipsum --test acceptance -- --nocapture` to see
//! every line; the grid criteria use all available cores.

use rayon::prelude::*;
use recipsum::analysis::{h_sign, in_set_r, Outcome};
use recipsum::certify::{certify_exhaustive, certify_guided, check_certificate, CertificateKind};
use recipsum::exactnum::{rat, vp_rat, Rational, Valuation};
use recipsum::paper_check;
use recipsum::powersum::{ExponentSeq, ProgressionSpec};
use recipsum::scan::{run_grid, GridConfig};
use recipsum::seeding::SplitMix64;
use recipsum::symfun::{conjecture_scan, sym_all, ConjectureScanConfig};
use std::time::Instant;

fn report(criterion: &str, passed: bool, detail: &str, elapsed_s: f64) {
    let verdict = if passed { "PASS" } else { "FAIL" };
    println!("criterion {criterion}: {verdict} — {detail} [{elapsed_s:.2}s]");
    assert!(passed, "criterion {criterion} failed: {detail}");
}

#[test]
fn criterion_1_reference_fractions() {
    let start = Instant::now();
    let items = paper_check::check_fractions();
    let elapsed = start.elapsed().as_secs_f64();
    let failed: Vec<&str> = items.iter().filter(|i| !i.passed).map(|i| i.name.as_str()).collect();
    let passed = failed.is_empty() && elapsed < 5.0;
    report(
        "1 (reference fractions)",
        passed,
        &format!("{}/{} byte-exact, failures: {failed:?}", items.len() - failed.len(), items.len()),
        elapsed,
    );
}

#[test]
fn criterion_2_witness_prime_table() {
    let start = Instant::now();
    let items = paper_check::check_witness_table();
    let elapsed = start.elapsed().as_secs_f64();
    let failed: Vec<&str> = items.iter().filter(|i| !i.passed).map(|i| i.name.as_str()).collect();
    let passed = failed.is_empty() && elapsed < 1.0;
    report(
        "2 (witness-prime table)",
        passed,
        &format!("{} rows, every n in range has census count 1, failures: {failed:?}", items.len()),
        elapsed,
    );
}

#[test]
fn criterion_3_certified_enclosures() {
    let start = Instant::now();
    let items = paper_check::check_enclosures();
    let elapsed = start.elapsed().as_secs_f64();
    let failed: Vec<String> = items
        .iter()
        .filter(|i| !i.passed)
        .map(|i| format!("{}: {}", i.name, i.detail))
        .collect();
    let passed = failed.is_empty() && elapsed < 1.0;
    report(
        "3 (certified enclosures)",
        passed,
        &format!(
            "{} spot values bracketed at width <= 1e-6 with correct sides, failures: {failed:?}",
            items.len()
        ),
        elapsed,
    );
}

#[test]
fn criterion_4_set_r_equivalence() {
    let start = Instant::now();
    let mut pairs = 0u32;
    let mut bad = Vec::new();
    for a in 2u64..=9 {
        for b in (a + 1)..=9 {
            pairs += 1;
            let in_r = in_set_r(a, b);
            let linear = 4 * a + b <= 17;
            let sign = h_sign(a, b);
            let h_negative = match sign.outcome {
                Outcome::False => true,
                Outcome::True => false,
                Outcome::Undecided => {
                    bad.push(format!("h undecided at ({a},{b})"));
                    continue;
                }
            };
            if in_r != linear || in_r != h_negative {
                bad.push(format!("({a},{b}): set={in_r} linear={linear} h<0={h_negative}"));
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let passed = bad.is_empty() && pairs == 28 && elapsed < 1.0;
    report(
        "4 (set-R equivalence)",
        passed,
        &format!("three characterizations agree on all {pairs} pairs, failures: {bad:?}"),
        elapsed,
    );
}

#[test]
fn criterion_5_desk_scale_completeness() {
    // 1 <= a,b <= 10, 2 <= n <= 100, 20 seeded sequences with s_k in [1,5]:
    // both finders succeed and every certificate verifies
    let start = Instant::now();
    let cfg = GridConfig {
        a_max: 10,
        b_max: 10,
        n_min: 2,
        n_max: 100,
        trials: 20,
        exponent_max: 5,
        seed: 0x5EED_CA5E,
    };
    let rows = run_grid(&cfg, None, |outcome| {
        let failure = outcome.failure();
        let lt1 = matches!(
            outcome.guided.as_ref().map(|c| &c.kind),
            Ok(CertificateKind::LessThanOne)
        );
        (failure, lt1)
    });
    let cases = rows.len() as u64;
    let failures: Vec<&String> = rows.iter().filter_map(|(f, _)| f.as_ref()).collect();
    let lt1 = rows.iter().filter(|(_, lt1)| *lt1).count();
    let elapsed = start.elapsed().as_secs_f64();
    let passed = cases == cfg.case_count()
        && cases == 198_000
        && failures.is_empty()
        && elapsed < 600.0;
    report(
        "5 (desk-scale completeness)",
        passed,
        &format!(
            "{cases} cases, both finders certified and verified ({lt1} below 1, {} witnessed), \
             first failures: {:?}",
            cases as usize - lt1,
            failures.iter().take(3).collect::<Vec<_>>()
        ),
        elapsed,
    );
}

fn certify_both_and_check(spec: &ProgressionSpec, seq: &ExponentSeq) -> Result<(), String> {
    for (label, result) in [
        ("guided", certify_guided(spec, seq)),
        ("exhaustive", certify_exhaustive(spec, seq)),
    ] {
        let cert = result.map_err(|e| format!("{label} failed at {spec}, n={}: {e}", seq.len()))?;
        check_certificate(spec, seq, &cert)
            .map_err(|e| format!("{label} rejected at {spec}, n={}: {e}", seq.len()))?;
    }
    Ok(())
}

#[test]
fn criterion_6_specialization_suites() {
    let start = Instant::now();

    // all-ones exponents over a,b <= 20, n <= 200
    let cells: Vec<(u64, u64)> =
        (1u64..=20).flat_map(|a| (1u64..=20).map(move |b| (a, b))).collect();
    let all_ones_failures: Vec<String> = cells
        .par_iter()
        .flat_map_iter(|&(a, b)| {
            let spec = ProgressionSpec::new(a, b).unwrap();
            (2usize..=200)
                .filter_map(|n| certify_both_and_check(&spec, &ExponentSeq::ones(n)).err())
                .collect::<Vec<_>>()
        })
        .collect();

    // a = b = 1 with seeded random exponents, n <= 200
    let spec11 = ProgressionSpec::new(1, 1).unwrap();
    let unit_progression_failures: Vec<String> = (2usize..=200)
        .into_par_iter()
        .flat_map_iter(|n| {
            (0u64..5)
                .filter_map(|trial| {
                    let seed = recipsum::seeding::derive_seed(0x1111, &[n as u64, trial]);
                    let seq = ExponentSeq::random(seed, 5, n).unwrap();
                    certify_both_and_check(&spec11, &seq).err()
                })
                .collect::<Vec<_>>()
        })
        .collect();

    let elapsed = start.elapsed().as_secs_f64();
    let passed = all_ones_failures.is_empty() && unit_progression_failures.is_empty();
    report(
        "6 (specialization suites)",
        passed,
        &format!(
            "all-ones grid: {} cases certified; a=b=1 random: {} cases certified; failures: {:?} {:?}",
            400 * 199,
            199 * 5,
            all_ones_failures.first(),
            unit_progression_failures.first()
        ),
        elapsed,
    );
}

#[test]
fn criterion_7_ultrametric_property() {
    let start = Instant::now();
    const PRIMES_TO_100: [u64; 25] = [
        2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83,
        89, 97,
    ];
    let mut gen = SplitMix64::new(0x7E57);
    let mut violations = 0u32;
    let total = 100_000u32;
    for _ in 0..total {
        let p = PRIMES_TO_100[(gen.next_u64() % 25) as usize];
        // random rationals, scaled by powers of p so valuations vary
        let draw = |gen: &mut SplitMix64| -> Rational {
            let num = gen.next_u64() % 2001;
            let num = num as i64 - 1000; // may be zero: exercises +inf
            let den = 1 + (gen.next_u64() % 1000) as i64;
            let scale_up = (gen.next_u64() % 4) as u32;
            let scale_down = (gen.next_u64() % 4) as u32;
            rat(num * (p as i64).pow(scale_up), den * (p as i64).pow(scale_down))
        };
        let x = draw(&mut gen);
        let y = draw(&mut gen);
        let vx = vp_rat(p, &x);
        let vy = vp_rat(p, &y);
        let vs = vp_rat(p, &(&x + &y));
        if vs < vx.min(vy) {
            violations += 1;
        }
        if vx != vy && vs != vx.min(vy) {
            violations += 1;
        }
        // the zero convention keeps the law total
        if x == rat(0, 1) {
            assert_eq!(vx, Valuation::PlusInfinity);
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        "7 (ultrametric property)",
        violations == 0,
        &format!("{total} random (x, y, p) triples, {violations} violations"),
        elapsed,
    );
}

#[test]
fn criterion_8_conjecture_scan() {
    let start = Instant::now();
    let cfg = ConjectureScanConfig {
        a_max: 5,
        b_max: 5,
        n_max: 20,
        trials_per_cell: 10,
        exponent_max: 3,
        seed: 0xC033,
    };
    let scan = conjecture_scan(&cfg, None);

    // detector control: e_2 of {1, 1/2, 1/3} is exactly 1 at the excluded n=3
    let boundary = sym_all(&ProgressionSpec::new(1, 1).unwrap(), &ExponentSeq::ones(3));
    let detector_ok = boundary.e(2) == &rat(1, 1) && boundary.integer_hits() == vec![2];
    // and the scan itself never visits n < 4
    let min_n = scan.cells.iter().map(|c| c.n).min().unwrap_or(4);

    let elapsed = start.elapsed().as_secs_f64();
    let passed =
        scan.hits_total == 0 && detector_ok && min_n >= 4 && elapsed < 120.0;
    report(
        "8 (conjecture scan)",
        passed,
        &format!(
            "{} sampled cells with zero integer hits; boundary case e_2(1,1/2,1/3) = 1 detected: {detector_ok}",
            scan.cells.len()
        ),
        elapsed,
    );
}

#[test]
fn criterion_9_newton_identity_oracle() {
    let start = Instant::now();
    let mut gen = SplitMix64::new(0x9E);
    let mut checked = 0u32;
    let mut bad = Vec::new();
    for trial in 0..100u32 {
        let a = gen.next_in(12);
        let b = gen.next_in(12);
        let n = gen.next_in(8) as usize;
        let spec = ProgressionSpec::new(a, b).unwrap();
        let seq = ExponentSeq::random(gen.next_u64(), 4, n).unwrap();
        let e = sym_all(&spec, &seq);

        // independent route: direct power sums p_j = sum x_i^j feeding
        // m e_m = sum_{j=1..m} (-1)^{j-1} e_{m-j} p_j
        let xs: Vec<Rational> = (1..=n)
            .map(|k| {
                let t = rat(spec.term(k) as i64, 1);
                (1..seq.exponent(k)).fold(rat(1, 1) / &t, |acc, _| acc / &t)
            })
            .collect();
        let power = |j: u32| -> Rational {
            xs.iter()
                .map(|x| (1..j).fold(x.clone(), |acc, _| acc * x))
                .fold(rat(0, 1), |acc, t| acc + t)
        };
        for m in 1..=n {
            let mut rhs = rat(0, 1);
            for j in 1..=m {
                let e_prev = if m == j { rat(1, 1) } else { e.e(m - j).clone() };
                let term = e_prev * power(j as u32);
                rhs = if j % 2 == 1 { rhs + term } else { rhs - term };
            }
            checked += 1;
            if rat(m as i64, 1) * e.e(m).clone() != rhs {
                bad.push(format!("trial {trial}: a={a} b={b} n={n} m={m}"));
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let passed = bad.is_empty() && elapsed < 5.0;
    report(
        "9 (Newton-identity oracle)",
        passed,
        &format!("100 random inputs, {checked} identities hold exactly, failures: {bad:?}"),
        elapsed,
    );
}
