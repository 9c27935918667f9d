//! Command-line front end: exact sums, certificates, verification, grid
//! scans, fixture regression, and symmetric-function scans.
//!
//! Exit codes: 0 success, 2 usage or parse error, 3 verification or
//! internal-assertion failure, 4 fixture mismatch. Scan outputs are
//! byte-deterministic for a fixed configuration (including seed) regardless
//! of the worker count; set `RECIPSUM_WORKERS` to cap the pool.

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use recipsum::certify::{
    certify_exhaustive, certify_guided_with, check_certificate, Certificate, CertificateRecord,
    CertifyError, GuidedOptions,
};
use recipsum::exactnum::{format_ratio, Rational};
use recipsum::paper_check;
use recipsum::powersum::{power_sum, ExponentSeq, ProgressionSpec};
use recipsum::scan::{run_grid, CaseOutcome, GridConfig, GridSummary};
use recipsum::symfun::{conjecture_scan, sym_all, ConjectureScanConfig};
use serde::Serialize;
use std::collections::HashMap;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

const EXIT_USAGE: u8 = 2;
const EXIT_VERIFY: u8 = 3;
const EXIT_FIXTURE: u8 = 4;

#[derive(Parser)]
#[command(
    name = "recipsum",
    version,
    about = "Exact reciprocal power sums over arithmetic progressions, \
             with machine-checkable non-integrality certificates"
)]
struct Cli {
    /// Optional flat key=value config file; explicit flags take precedence
    #[arg(long, value_name = "FILE", global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute H exactly and print it as num/den
    Compute(ComputeArgs),
    /// Produce a non-integrality certificate for H (one JSON line per finder)
    Certify(CertifyArgs),
    /// Re-check a serialized certificate against an exact recomputation
    Verify(VerifyArgs),
    /// Run both finders over a seeded (a, b, n, trial) grid; JSON lines out
    Scan(ScanArgs),
    /// Recompute the built-in reference fractions, witness-prime windows,
    /// and enclosure spot values
    #[command(name = "paper-check")]
    PaperCheck,
    /// Print the elementary symmetric functions e_1..e_n exactly
    Symfun(SymfunArgs),
    /// Sample exponent sequences and report integer values among e_1..e_n
    #[command(name = "conjecture-scan")]
    ConjectureScan(ConjScanArgs),
}

#[derive(Args)]
struct ComputeArgs {
    /// First term of the progression
    #[arg(long)]
    a: Option<u64>,
    /// Common difference
    #[arg(long)]
    b: Option<u64>,
    /// Exponents: "1,2,1", "const:c:n", or "random:seed:max:n"
    #[arg(long)]
    exp: Option<String>,
    /// Expected sequence length (cross-checked against --exp)
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(long)]
    a: Option<u64>,
    #[arg(long)]
    b: Option<u64>,
    /// Exponents: "1,2,1", "const:c:n", or "random:seed:max:n"
    #[arg(long)]
    exp: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    /// guided, exhaustive, or both (guided first, then an agreement line)
    #[arg(long)]
    finder: Option<String>,
    /// Taylor-degree cap for certified threshold comparisons
    #[arg(long)]
    precision_cap: Option<u32>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Certificate JSON file, or "-" for stdin
    #[arg(long)]
    cert: Option<String>,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long)]
    a_max: Option<u64>,
    #[arg(long)]
    b_max: Option<u64>,
    /// Smallest sequence length (default 2)
    #[arg(long)]
    n_min: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
    /// Seeded exponent sequences per (a, b, n) cell
    #[arg(long)]
    trials: Option<u32>,
    /// Exponents are uniform in [1, exp-max]
    #[arg(long)]
    exp_max: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output path; written atomically (temp file, then rename)
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SymfunArgs {
    #[arg(long)]
    a: Option<u64>,
    #[arg(long)]
    b: Option<u64>,
    #[arg(long)]
    exp: Option<String>,
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args)]
struct ConjScanArgs {
    #[arg(long)]
    a_max: Option<u64>,
    #[arg(long)]
    b_max: Option<u64>,
    /// Cells run over 4 <= n <= n-max
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    trials: Option<u32>,
    #[arg(long)]
    exp_max: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output path (stdout when absent); written atomically
    #[arg(long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

/// Usage-level failure: message plus exit 2.
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

fn usage_exit(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

/// Config-file fallback for optional flags.
struct Settings {
    values: HashMap<String, String>,
}

impl Settings {
    fn load(path: Option<&Path>) -> Result<Self, Usage> {
        let mut values = HashMap::new();
        if let Some(path) = path {
            let text = fs::read_to_string(path)
                .map_err(|e| Usage(format!("cannot read config {}: {e}", path.display())))?;
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (key, value) = line.split_once('=').ok_or_else(|| {
                    Usage(format!("config line {} is not key=value: {line:?}", lineno + 1))
                })?;
                values.insert(key.trim().to_owned(), value.trim().to_owned());
            }
        }
        Ok(Settings { values })
    }

    /// Flag value, falling back to the config file.
    fn get<T>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, Usage>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|e| Usage(format!("config key {key}={raw:?}: {e}"))),
        }
    }

    fn require<T>(&self, flag: Option<T>, key: &str) -> Result<T, Usage>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        self.get(flag, key)?
            .ok_or_else(|| Usage(format!("missing required --{key} (or config key {key})")))
    }
}

/// Worker cap from the environment; `None` uses the default pool.
fn workers() -> Result<Option<usize>, Usage> {
    match std::env::var("RECIPSUM_WORKERS") {
        Err(_) => Ok(None),
        Ok(raw) => raw
            .parse::<usize>()
            .map(Some)
            .map_err(|_| Usage(format!("RECIPSUM_WORKERS={raw:?} is not a worker count"))),
    }
}

fn parse_case(
    settings: &Settings,
    a: Option<u64>,
    b: Option<u64>,
    exp: Option<String>,
    n: Option<usize>,
) -> Result<(ProgressionSpec, ExponentSeq), Usage> {
    let a = settings.require(a, "a")?;
    let b = settings.require(b, "b")?;
    let exp: String = settings.require(exp, "exp")?;
    let spec = ProgressionSpec::new(a, b)?;
    let seq: ExponentSeq = exp.parse()?;
    if let Some(n) = settings.get(n, "n")? {
        if n != seq.len() {
            return Err(Usage(format!(
                "--n {n} does not match the exponent sequence length {}",
                seq.len()
            )));
        }
    }
    Ok((spec, seq))
}

fn run(cli: Cli) -> Result<ExitCode> {
    let settings = match Settings::load(cli.config.as_deref()) {
        Ok(s) => s,
        Err(Usage(msg)) => return Ok(usage_exit(&msg)),
    };
    match cli.command {
        Command::Compute(args) => cmd_compute(&settings, args),
        Command::Certify(args) => cmd_certify(&settings, args),
        Command::Verify(args) => cmd_verify(&settings, args),
        Command::Scan(args) => cmd_scan(&settings, args),
        Command::PaperCheck => cmd_paper_check(),
        Command::Symfun(args) => cmd_symfun(&settings, args),
        Command::ConjectureScan(args) => cmd_conjecture_scan(&settings, args),
    }
}

fn cmd_compute(settings: &Settings, args: ComputeArgs) -> Result<ExitCode> {
    let (spec, seq) = match parse_case(settings, args.a, args.b, args.exp, args.n) {
        Ok(v) => v,
        Err(Usage(msg)) => return Ok(usage_exit(&msg)),
    };
    let h = power_sum(&spec, &seq);
    println!("{}", format_ratio(&h));
    println!("≈ {} (approximate)", decimal_approx(&h, 12));
    Ok(ExitCode::SUCCESS)
}

fn cmd_certify(settings: &Settings, args: CertifyArgs) -> Result<ExitCode> {
    let parsed = parse_case(settings, args.a, args.b, args.exp, args.n)
        .and_then(|case| {
            let finder = settings
                .get(args.finder, "finder")?
                .unwrap_or_else(|| "guided".to_owned());
            if !["guided", "exhaustive", "both"].contains(&finder.as_str()) {
                return Err(Usage(format!(
                    "--finder must be guided, exhaustive, or both, got {finder:?}"
                )));
            }
            let cap = settings.get(args.precision_cap, "precision-cap")?;
            Ok((case, finder, cap))
        });
    let ((spec, seq), finder, cap) = match parsed {
        Ok(v) => v,
        Err(Usage(msg)) => return Ok(usage_exit(&msg)),
    };
    if seq.len() < 2 {
        return Ok(usage_exit("certificates require a sequence of length >= 2"));
    }
    let options = GuidedOptions {
        precision_cap: cap.unwrap_or_else(|| GuidedOptions::default().precision_cap),
    };

    let mut certificates: Vec<(&str, Certificate)> = Vec::new();
    let finders: &[&str] = match finder.as_str() {
        "guided" => &["guided"],
        "exhaustive" => &["exhaustive"],
        _ => &["guided", "exhaustive"],
    };
    for &name in finders {
        let result = match name {
            "guided" => certify_guided_with(&spec, &seq, options),
            _ => certify_exhaustive(&spec, &seq),
        };
        match result {
            Ok(cert) => certificates.push((name, cert)),
            Err(e) => {
                eprintln!("error: {name} finder failed: {e}");
                return Ok(ExitCode::from(EXIT_VERIFY));
            }
        }
    }
    for (_, cert) in &certificates {
        if let Err(e) = check_certificate(&spec, &seq, cert) {
            eprintln!("error: certificate failed verification: {e}");
            return Ok(ExitCode::from(EXIT_VERIFY));
        }
        println!("{}", CertificateRecord::from_parts(&spec, &seq, cert).to_json());
    }
    if finder == "both" {
        println!("agreement: both certificates verify against the exact value");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(settings: &Settings, args: VerifyArgs) -> Result<ExitCode> {
    let source = match settings.require(args.cert, "cert") {
        Ok(v) => v,
        Err(Usage(msg)) => return Ok(usage_exit(&msg)),
    };
    let text = if source == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf).context("reading stdin")?;
        buf
    } else {
        fs::read_to_string(&source).with_context(|| format!("reading {source}"))?
    };
    let line = match text.lines().find(|l| !l.trim().is_empty()) {
        Some(l) => l,
        None => return Ok(usage_exit("certificate input is empty")),
    };
    let record = match CertificateRecord::from_json(line) {
        Ok(r) => r,
        Err(e) => return Ok(usage_exit(&format!("cannot parse certificate JSON: {e}"))),
    };
    let reconstructed = match record.reconstruct() {
        Ok(v) => v,
        Err(e) => {
            println!("invalid: {e}");
            return Ok(ExitCode::from(EXIT_VERIFY));
        }
    };
    let (spec, seq, cert) = reconstructed;
    match check_certificate(&spec, &seq, &cert) {
        Ok(()) => {
            println!(
                "valid: {} certificate for a={}, b={}, n={} verifies against exact recomputation",
                record.kind,
                spec.a(),
                spec.b(),
                seq.len()
            );
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => {
            println!("invalid: {e}");
            Ok(ExitCode::from(EXIT_VERIFY))
        }
    }
}

#[derive(Serialize)]
struct ScanLine {
    a: u64,
    b: u64,
    n: usize,
    trial: u32,
    seed: u64,
    guided: Option<CertificateRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    guided_error: Option<String>,
    exhaustive: Option<CertificateRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    exhaustive_error: Option<String>,
}

#[derive(Serialize)]
struct SummaryLine<'a> {
    summary: &'a SummaryBody,
}

#[derive(Serialize)]
struct SummaryBody {
    cases: u64,
    less_than_one: u64,
    prime_witness: u64,
    max_abs_vp: u64,
    failures: u64,
}

fn record_side(
    spec: &ProgressionSpec,
    seq: &ExponentSeq,
    side: &Result<Certificate, CertifyError>,
) -> (Option<CertificateRecord>, Option<String>) {
    match side {
        Ok(cert) => (Some(CertificateRecord::from_parts(spec, seq, cert)), None),
        Err(e) => (None, Some(e.to_string())),
    }
}

fn cmd_scan(settings: &Settings, args: ScanArgs) -> Result<ExitCode> {
    let parsed = (|| -> Result<(GridConfig, PathBuf, Option<usize>), Usage> {
        let cfg = GridConfig {
            a_max: settings.require(args.a_max, "a-max")?,
            b_max: settings.require(args.b_max, "b-max")?,
            n_min: settings.get(args.n_min, "n-min")?.unwrap_or(2),
            n_max: settings.require(args.n_max, "n-max")?,
            trials: settings.require(args.trials, "trials")?,
            exponent_max: settings.require(args.exp_max, "exp-max")?,
            seed: settings.require(args.seed, "seed")?,
        };
        if cfg.a_max < 1 || cfg.b_max < 1 || cfg.exponent_max < 1 {
            return Err(Usage("grid bounds and exp-max must be at least 1".into()));
        }
        let output: PathBuf = settings.require(args.output, "output")?;
        Ok((cfg, output, workers()?))
    })();
    let (cfg, output, threads) = match parsed {
        Ok(v) => v,
        Err(Usage(msg)) => return Ok(usage_exit(&msg)),
    };

    let start = Instant::now();
    let rows = run_grid(&cfg, threads, |outcome: CaseOutcome| {
        let spec = ProgressionSpec::new(outcome.a, outcome.b).expect("grid bounds");
        let mut summary = GridSummary::default();
        summary.absorb(&outcome);
        let (guided, guided_error) = record_side(&spec, &outcome.seq, &outcome.guided);
        let (exhaustive, exhaustive_error) = record_side(&spec, &outcome.seq, &outcome.exhaustive);
        let line = ScanLine {
            a: outcome.a,
            b: outcome.b,
            n: outcome.n,
            trial: outcome.trial,
            seed: outcome.case_seed,
            guided,
            guided_error,
            exhaustive,
            exhaustive_error,
        };
        let failure = outcome.failure();
        (serde_json::to_string(&line).expect("line serialization"), summary, failure)
    });

    let mut body = String::new();
    let mut summary = GridSummary::default();
    let mut first_failure: Option<String> = None;
    for (line, part, failure) in rows {
        body.push_str(&line);
        body.push('\n');
        summary = summary.merge(part);
        if first_failure.is_none() {
            first_failure = failure;
        }
    }
    let summary_body = SummaryBody {
        cases: summary.cases,
        less_than_one: summary.less_than_one,
        prime_witness: summary.prime_witness,
        max_abs_vp: summary.max_abs_vp,
        failures: summary.failures,
    };
    body.push_str(&serde_json::to_string(&SummaryLine { summary: &summary_body })?);
    body.push('\n');

    write_atomically(&output, &body)?;
    // wall time goes to stderr only: the output file must be byte-identical
    // across reruns of the same configuration
    eprintln!(
        "scan: {} cases in {:.2}s -> {} ({} below 1, {} witnessed, max |vp| {})",
        summary.cases,
        start.elapsed().as_secs_f64(),
        output.display(),
        summary.less_than_one,
        summary.prime_witness,
        summary.max_abs_vp
    );
    if summary.failures > 0 {
        eprintln!(
            "error: {} case(s) failed verification; first: {}",
            summary.failures,
            first_failure.as_deref().unwrap_or("unknown")
        );
        return Ok(ExitCode::from(EXIT_VERIFY));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_paper_check() -> Result<ExitCode> {
    let items = paper_check::run_all();
    let mut first_failure: Option<&paper_check::CheckItem> = None;
    for item in &items {
        let verdict = if item.passed { "PASS" } else { "FAIL" };
        println!("{verdict} {}: {}", item.name, item.detail);
        if !item.passed && first_failure.is_none() {
            first_failure = Some(item);
        }
    }
    let failed = items.iter().filter(|i| !i.passed).count();
    println!("paper-check: {}/{} items pass", items.len() - failed, items.len());
    if let Some(item) = first_failure {
        eprintln!("error: first failing item: {}: {}", item.name, item.detail);
        return Ok(ExitCode::from(EXIT_FIXTURE));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_symfun(settings: &Settings, args: SymfunArgs) -> Result<ExitCode> {
    let (spec, seq) = match parse_case(settings, args.a, args.b, args.exp, args.n) {
        Ok(v) => v,
        Err(Usage(msg)) => return Ok(usage_exit(&msg)),
    };
    let values = sym_all(&spec, &seq);
    for k in 1..=values.len() {
        println!("e[{k}] = {}", format_ratio(values.e(k)));
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct CellLine<'a> {
    a: u64,
    b: u64,
    n: usize,
    seed: u64,
    trial: u32,
    hits: &'a [usize],
}

fn cmd_conjecture_scan(settings: &Settings, args: ConjScanArgs) -> Result<ExitCode> {
    let parsed = (|| -> Result<(ConjectureScanConfig, Option<PathBuf>, Option<usize>), Usage> {
        let cfg = ConjectureScanConfig {
            a_max: settings.require(args.a_max, "a-max")?,
            b_max: settings.require(args.b_max, "b-max")?,
            n_max: settings.require(args.n_max, "n-max")?,
            trials_per_cell: settings.require(args.trials, "trials")?,
            exponent_max: settings.require(args.exp_max, "exp-max")?,
            seed: settings.require(args.seed, "seed")?,
        };
        if cfg.a_max < 1 || cfg.b_max < 1 || cfg.exponent_max < 1 {
            return Err(Usage("grid bounds and exp-max must be at least 1".into()));
        }
        Ok((cfg, settings.get(args.output, "output")?, workers()?))
    })();
    let (cfg, output, threads) = match parsed {
        Ok(v) => v,
        Err(Usage(msg)) => return Ok(usage_exit(&msg)),
    };

    let start = Instant::now();
    let report = conjecture_scan(&cfg, threads);
    let mut body = String::new();
    for cell in &report.cells {
        let line = CellLine {
            a: cell.a,
            b: cell.b,
            n: cell.n,
            seed: cell.cell_seed,
            trial: cell.trial,
            hits: &cell.hits,
        };
        body.push_str(&serde_json::to_string(&line)?);
        body.push('\n');
    }
    body.push_str(&format!(
        "{{\"summary\":{{\"cells\":{},\"hits\":{}}}}}\n",
        report.cells.len(),
        report.hits_total
    ));
    match &output {
        Some(path) => write_atomically(path, &body)?,
        None => print!("{body}"),
    }
    eprintln!(
        "conjecture-scan: {} cells in {:.2}s, {} integer hit(s)",
        report.cells.len(),
        start.elapsed().as_secs_f64(),
        report.hits_total
    );
    if report.hits_total > 0 {
        eprintln!("note: integer hits are findings, not errors; see the output lines");
    }
    Ok(ExitCode::SUCCESS)
}

/// Write via a sibling temp file and rename, so readers never see torn output.
fn write_atomically(path: &Path, contents: &str) -> Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, contents).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path)
        .with_context(|| format!("renaming {} to {}", tmp.display(), path.display()))?;
    Ok(())
}

/// Decimal rendering with `sig` significant digits, for display only.
fn decimal_approx(x: &Rational, sig: usize) -> String {
    use num_bigint::BigUint;
    use num_traits::{Signed, Zero};
    if x.numer().is_zero() {
        return "0".to_owned();
    }
    let negative = x.numer().is_negative();
    let n = x.numer().magnitude().clone();
    let d = x.denom().magnitude().clone();
    let ten = BigUint::from(10u32);

    // scale so the quotient has comfortably more than `sig` digits
    let guard = sig as i64 + 8;
    let nd = n.to_string().len() as i64;
    let dd = d.to_string().len() as i64;
    let shift = guard + dd - nd + 1;
    let scaled = if shift >= 0 {
        &n * ten.pow(shift as u32) / &d
    } else {
        &n / (&d * ten.pow((-shift) as u32))
    };
    let digits = scaled.to_string();
    // leading digit sits at 10^exp
    let exp = digits.len() as i64 - 1 - shift;

    // round to `sig` digits
    let drop = digits.len() as i64 - sig as i64;
    let (rounded, exp) = if drop > 0 {
        let keep = scaled / ten.pow(drop as u32 - 1);
        let redone = (&keep + BigUint::from(5u32)) / &ten;
        let s = redone.to_string();
        if s.len() as i64 > sig as i64 {
            // carry overflowed into a new leading digit
            ((&redone / &ten).to_string(), exp + 1)
        } else {
            (s, exp)
        }
    } else {
        (digits, exp)
    };

    let sign = if negative { "-" } else { "" };
    if (-4..=15).contains(&exp) {
        if exp >= 0 {
            let int_len = (exp + 1) as usize;
            if int_len >= rounded.len() {
                let zeros = "0".repeat(int_len - rounded.len());
                format!("{sign}{rounded}{zeros}")
            } else {
                format!("{sign}{}.{}", &rounded[..int_len], &rounded[int_len..])
            }
        } else {
            let zeros = "0".repeat((-exp - 1) as usize);
            format!("{sign}0.{zeros}{rounded}")
        }
    } else {
        format!("{sign}{}.{}e{exp}", &rounded[..1], &rounded[1..])
    }
}
