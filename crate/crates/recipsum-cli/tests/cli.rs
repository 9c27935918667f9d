//! End-to-end tests against the compiled binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_recipsum"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn compute_examples() {
    let out = run(&["compute", "--a", "2", "--b", "6", "--exp", "const:1:17"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("2038704876507433/2053923842370400\n"), "{text}");
    assert!(text.contains("(approximate)"));

    let out = run(&["compute", "--a", "5", "--b", "7", "--exp", "1"]);
    assert!(stdout(&out).starts_with("1/5\n"));

    // the long reference value reproduces through the CLI too
    let out = run(&["compute", "--a", "2", "--b", "9", "--exp", "const:1:53"]);
    assert!(stdout(&out).starts_with(
        "70773412390639611995377611407286048258428112436665192898048216184826913/\
         72993325114428717314530010109453157943718362576137475837761483670815360\n"
    ));
}

#[test]
fn compute_usage_errors_exit_2() {
    assert_eq!(run(&["compute", "--a", "2", "--b", "3", "--exp", "1,x"]).status.code(), Some(2));
    assert_eq!(run(&["compute", "--a", "0", "--b", "3", "--exp", "1"]).status.code(), Some(2));
    assert_eq!(run(&["compute", "--a", "2", "--exp", "1"]).status.code(), Some(2));
    assert_eq!(
        run(&["compute", "--a", "2", "--b", "3", "--exp", "1,1", "--n", "3"]).status.code(),
        Some(2)
    );
    // unknown flag: clap reports usage
    assert_eq!(run(&["compute", "--bogus"]).status.code(), Some(2));
}

#[test]
fn certify_examples() {
    let out = run(&["certify", "--a", "1", "--b", "2", "--exp", "1,4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("\"p\":3"), "{text}");
    assert!(text.contains("\"vp\":-4"));

    let out = run(&["certify", "--a", "2", "--b", "2", "--exp", "2,2", "--finder", "guided"]);
    let text = stdout(&out);
    assert!(text.contains("\"kind\":\"LessThanOne\""));
    assert!(text.contains("\"value\":\"5/16\""));
    assert!(text.contains("\"provenance\":\"Case1/Lemma2.1\""));

    let out = run(&["certify", "--a", "1", "--b", "1", "--exp", "const:1:2"]);
    assert!(stdout(&out).contains("\"p\":2"));

    // both finders print two records plus an agreement line
    let out = run(&["certify", "--a", "2", "--b", "3", "--exp", "const:1:10", "--finder", "both"]);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].contains("\"provenance\":\"Lemma2.7-table\""));
    assert!(lines[1].contains("\"provenance\":\"exhaustive\""));
    assert!(lines[2].starts_with("agreement:"));

    // certificates need n >= 2
    assert_eq!(run(&["certify", "--a", "2", "--b", "3", "--exp", "1"]).status.code(), Some(2));
}

#[test]
fn certify_then_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for finder in ["guided", "exhaustive"] {
        let out = run(&["certify", "--a", "1", "--b", "3", "--exp", "1,2,1,3,1", "--finder", finder]);
        assert!(out.status.success());
        let cert_path = dir.path().join(format!("{finder}.json"));
        fs::write(&cert_path, stdout(&out)).unwrap();
        let out = run(&["verify", "--cert", cert_path.to_str().unwrap()]);
        assert!(out.status.success(), "{finder}: {}", stdout(&out));
        assert!(stdout(&out).starts_with("valid:"));
    }
}

#[test]
fn verify_rejects_bad_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");

    // wrong valuation claim
    fs::write(
        &bad,
        r#"{"a":1,"b":1,"n":2,"exponents":[1,1],"kind":"PrimeWitness","value":"3/2","p":3,"vp":-1,"provenance":"x"}"#,
    )
    .unwrap();
    let out = run(&["verify", "--cert", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).starts_with("invalid:"));

    // composite modulus
    fs::write(
        &bad,
        r#"{"a":1,"b":1,"n":2,"exponents":[1,1],"kind":"PrimeWitness","value":"3/2","p":4,"vp":-1,"provenance":"x"}"#,
    )
    .unwrap();
    let out = run(&["verify", "--cert", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("not prime"));

    // unparseable input is a usage error
    fs::write(&bad, "not json").unwrap();
    assert_eq!(run(&["verify", "--cert", bad.to_str().unwrap()]).status.code(), Some(2));
}

fn scan_args(output: &Path) -> Vec<String> {
    [
        "scan", "--a-max", "3", "--b-max", "3", "--n-max", "10", "--trials", "2", "--exp-max",
        "4", "--seed", "7", "--output",
    ]
    .iter()
    .map(|s| s.to_string())
    .chain([output.to_str().unwrap().to_owned()])
    .collect()
}

#[test]
fn scan_is_deterministic_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("one.jsonl");
    let second = dir.path().join("two.jsonl");

    let out = bin().args(scan_args(&first)).env("RECIPSUM_WORKERS", "1").output().unwrap();
    assert!(out.status.success());
    let out = bin().args(scan_args(&second)).env("RECIPSUM_WORKERS", "8").output().unwrap();
    assert!(out.status.success());

    let a = fs::read(&first).unwrap();
    let b = fs::read(&second).unwrap();
    assert_eq!(a, b, "scan output differs across worker counts");

    let text = String::from_utf8(a).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    // 3 * 3 * 9 * 2 cases plus the summary line
    assert_eq!(lines.len(), 162 + 1);
    let summary = lines.last().unwrap();
    assert!(summary.contains("\"cases\":162"));
    assert!(summary.contains("\"failures\":0"));
    // no stray temp file left behind
    assert!(!dir.path().join("one.tmp").exists());
}

#[test]
fn scan_empty_grid() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.jsonl");
    let out = run(&[
        "scan", "--a-max", "3", "--b-max", "3", "--n-max", "1", "--trials", "2", "--exp-max",
        "4", "--seed", "7", "--output", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 1);
    assert!(text.contains("\"cases\":0"));
}

#[test]
fn scan_requires_arguments() {
    assert_eq!(run(&["scan", "--a-max", "3"]).status.code(), Some(2));
    let out = bin()
        .args(["scan", "--a-max", "1", "--b-max", "1", "--n-max", "3", "--trials", "1",
               "--exp-max", "1", "--seed", "1", "--output", "/tmp/never-written.jsonl"])
        .env("RECIPSUM_WORKERS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn paper_check_passes() {
    let out = run(&["paper-check"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("PASS fraction H(2,3,5): H(2,3,5) = 3041/3080 < 1"));
    assert!(text.contains("25/25 items pass"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn symfun_prints_exact_values() {
    let out = run(&["symfun", "--a", "1", "--b", "1", "--exp", "const:1:3"]);
    let text = stdout(&out);
    assert_eq!(text, "e[1] = 11/6\ne[2] = 1/1\ne[3] = 1/6\n");
}

#[test]
fn conjecture_scan_stdout_and_file_agree() {
    let args = [
        "conjecture-scan", "--a-max", "2", "--b-max", "2", "--n-max", "6", "--trials", "2",
        "--exp-max", "3", "--seed", "1",
    ];
    let out = run(&args);
    assert!(out.status.success());
    let streamed = stdout(&out);
    assert!(streamed.trim_end().ends_with("{\"summary\":{\"cells\":24,\"hits\":0}}"));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("conj.jsonl");
    let mut with_file: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    with_file.extend(["--output".to_owned(), path.to_str().unwrap().to_owned()]);
    let out = bin().args(&with_file).output().unwrap();
    assert!(out.status.success());
    assert_eq!(fs::read_to_string(&path).unwrap(), streamed);
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("recipsum.conf");
    fs::write(&conf, "a = 2\nb = 3\n# comment line\nexp = const:1:5\n").unwrap();

    let out = run(&["compute", "--config", conf.to_str().unwrap()]);
    assert!(stdout(&out).starts_with("3041/3080\n"));

    // explicit flag overrides the config value
    let out = run(&["compute", "--config", conf.to_str().unwrap(), "--exp", "const:1:7"]);
    assert!(stdout(&out).starts_with("11479/10472\n"));

    // malformed config is a usage error
    fs::write(&conf, "a 2\n").unwrap();
    assert_eq!(
        run(&["compute", "--config", conf.to_str().unwrap()]).status.code(),
        Some(2)
    );
}
