use std::path::Path;
use std::process::{Command, Output};

use nkoszul::Presentation;
use nkoszul_cli::{run, CommandKind, FieldChoice, OutputFormat, RunConfig};
use proptest::prelude::*;
use rand::SeedableRng;
use serde_json::Value;
use tempfile::TempDir;

const CUBIC: &str = "generators = x\ndegree = 3\nrel: x*x*x\n";

fn write(dir: &TempDir, name: &str, text: &str) -> std::path::PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn nkoszul(args: &[&str], input: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nkoszul"))
        .args(args)
        .arg(input)
        .output()
        .unwrap()
}

fn json(output: &Output) -> Value {
    serde_json::from_slice(&output.stdout).unwrap()
}

#[test]
fn jdims_of_yang_mills() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "ym.txt", &Presentation::yang_mills(3).unwrap().to_string());
    let out = nkoszul(&["jdims", "--max-degree", "4", "--format", "json"], &input);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["j_dims"], serde_json::json!([1, 3, 9, 3, 1]));
}

#[test]
fn koszul_exit_codes() {
    let dir = TempDir::new().unwrap();
    let cubic = write(&dir, "cubic.txt", CUBIC);
    let out = nkoszul(&["koszul", "--max-degree", "9", "--max-index", "5", "--format", "json"], &cubic);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["result"]["exact"], Value::Bool(true));
    assert_eq!(report["result"]["verdict"], "exact through (5, 9)");

    let overlap = write(&dir, "xyx.txt", "generators = x, y\ndegree = 3\nrel: x*y*x\n");
    let out = nkoszul(&["koszul", "--max-degree", "8", "--max-index", "3"], &overlap);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("not exact"));
}

#[test]
fn window_too_small_names_required_degree() {
    let dir = TempDir::new().unwrap();
    let cubic = write(&dir, "cubic.txt", CUBIC);
    let out = nkoszul(&["koszul", "--max-degree", "3", "--max-index", "2"], &cubic);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("at least 4"), "{stderr}");
}

#[test]
fn parse_errors_report_position() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.txt", "generators = x, y\ndegree = 2\nrel: x*y - x\n");
    let out = nkoszul(&["validate"], &bad);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.starts_with("error: 3:"), "{stderr}");
    assert!(stderr.contains("non-homogeneous"), "{stderr}");

    let out = nkoszul(&["validate"], &dir.path().join("missing.txt"));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn validate_json_keeps_rationals_exact() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "frac.txt", "generators = a, b\ndegree = 2\nrel: 2*a*b - 3*b*a\n");
    let out = nkoszul(&["validate", "--format", "json"], &input);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["schema"], 1);
    assert_eq!(report["command"], "validate");
    assert_eq!(report["field"], "Q");
    let terms = report["result"]["relations"][0].as_array().unwrap();
    let coeffs: Vec<&str> = terms.iter().map(|t| t["coefficient"].as_str().unwrap()).collect();
    assert_eq!(coeffs, ["1", "-3/2"]);
    assert!(report.get("timing_seconds").is_none());
}

#[test]
fn output_is_independent_of_thread_count() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "ym.txt", &Presentation::yang_mills(2).unwrap().to_string());
    let runs: Vec<Output> = ["1", "3"]
        .iter()
        .map(|t| nkoszul(&["koszul", "--format", "json", "--threads", t], &input))
        .collect();
    assert_eq!(runs[0].status.code(), Some(0));
    assert_eq!(runs[0].stdout, runs[1].stdout);
}

#[test]
fn tsv_and_prime_field() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "plane.txt", "generators = x, y\ndegree = 2\nrel: x*y - y*x\n");
    let out = nkoszul(&["dims", "--max-degree", "4", "--format", "tsv", "--field", "fp:7"], &input);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "n\tdim\n0\t1\n1\t2\n2\t3\n3\t4\n4\t5\n");

    let out = nkoszul(&["hochschild", "--format", "json", "--field", "fp:7", "--max-index", "1"], &input);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["field"], "F_7");

    let out = nkoszul(&["dims", "--field", "fp:8"], &input);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracle_compare_agrees_on_plane() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "plane.txt", "generators = x, y\ndegree = 2\nrel: x*y - y*x\n");
    let out = nkoszul(&["oracle-compare", "--format", "json"], &input);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["result"]["agree"], Value::Bool(true));
    assert_eq!(report["result"]["tor"]["concentrated"], Value::Bool(true));
}

fn config(command: CommandKind, input: &Path) -> RunConfig {
    RunConfig {
        command,
        input: input.to_path_buf(),
        max_degree: 4,
        max_index: None,
        format: OutputFormat::Json,
        field: FieldChoice::Rational,
        threads: Some(1),
        timing: false,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn canonical_text_round_trips(seed in any::<u64>(), g in 1usize..=3, s in 2usize..=3, dim in 0usize..6) {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let p = Presentation::random(g, s, dim, &mut rng).unwrap();
        let dir = TempDir::new().unwrap();
        let first = write(&dir, "a.txt", &p.to_string());
        let report = serde_json::to_value(run(&config(CommandKind::Validate, &first)).unwrap()).unwrap();
        let canonical = report["result"]["canonical"].as_str().unwrap().to_string();
        let second = write(&dir, "b.txt", &canonical);
        let again = serde_json::to_value(run(&config(CommandKind::Validate, &second)).unwrap()).unwrap();
        prop_assert_eq!(&again["result"]["canonical"], &Value::String(canonical));
        prop_assert_eq!(&again["presentation"]["relation_dim"], &Value::from(p.relations().dim()));
    }
}
