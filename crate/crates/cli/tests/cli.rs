use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lalg::examples::four_element_ckl;
use lalg::families::make_a;
use lalg::AlgebraTable;
use serde_json::Value;
use tempfile::TempDir;

const ACTION: &str = "# X\n3\n0 1 2\n0 0 1\n0 1 0\n# Y\n2\n0 1\n0 0\n# rho\n0 1 2\n0 0 0\n";

fn lalg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lalg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json report")
}

#[test]
fn check_reports_flags_of_a4() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "a4.txt", &make_a(4).unwrap().to_text());
    let o = lalg(&["check", s(&f)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("flags l kl ckl linear bounded simple\n"), "{}", stdout(&o));

    let o = lalg(&["check", s(&f), "--format", "json"]);
    let r = json(&o);
    for flag in ["is_l", "is_kl", "is_ckl", "is_linear", "is_simple"] {
        assert_eq!(r[flag], true, "{flag}");
    }
    assert_eq!(r["is_hilbert"], false);
}

#[test]
fn classification_failure_is_not_an_error() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "anti.txt", "3\n0 1 2\n0 0 0\n0 0 0\n");
    let o = lalg(&["check", s(&f), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["is_l"], false);
    assert_eq!(r["witnesses"]["l"]["axiom"], "antisymmetry");
    assert_eq!(r["witnesses"]["l"]["elements"], serde_json::json!([1, 2]));
}

#[test]
fn malformed_input_exits_2() {
    let dir = TempDir::new().unwrap();
    for (name, body) in [
        ("range.txt", "2\n0 1\n0 5\n"),
        ("short.txt", "3\n0 1 2\n0 0 1\n"),
        ("junk.txt", "two\n"),
    ] {
        let f = write(&dir, name, body);
        let o = lalg(&["check", s(&f)]);
        assert_eq!(o.status.code(), Some(2), "{name}: {}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(lalg(&["check", "/nonexistent/table.txt"]).status.code(), Some(2));
}

#[test]
fn ideals_of_a_non_l_algebra_are_rejected() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "anti.txt", "3\n0 1 2\n0 0 0\n0 0 0\n");
    assert_eq!(lalg(&["ideals", s(&f)]).status.code(), Some(2));
}

#[test]
fn ideals_and_subset_witness() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "four.txt", &four_element_ckl().to_text());
    let o = lalg(&["ideals", s(&f), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let ideals = json(&o)["ideals"].clone();
    assert!(ideals.as_array().unwrap().contains(&serde_json::json!([0, 1, 3])));
    assert!(ideals.as_array().unwrap().contains(&serde_json::json!([0, 2])));

    let o = lalg(&["ideals", s(&f), "--subset", "0 1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("is not an ideal"), "{}", stdout(&o));
}

#[test]
fn spectrum_of_a_chain() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "a3.txt", &make_a(3).unwrap().to_text());
    let o = lalg(&["spectrum", s(&f)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("1 primes\n{0}\n"), "{}", stdout(&o));
}

#[test]
fn semidirect_example_has_three_ideals() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "act.txt", ACTION);
    let o = lalg(&["semidirect", s(&f), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["ideals"].as_array().unwrap().len(), 3);
    assert_eq!(r["table"].as_array().unwrap().len(), 6);
    assert_eq!(r["checks"]["failures"], serde_json::json!([]));
}

#[test]
fn symmetric_requires_a_ckl_operation() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "act.txt", ACTION);
    assert_eq!(lalg(&["symmetric", s(&f)]).status.code(), Some(2));

    let f = write(&dir, "a2.txt", "2\n0 1\n0 0\n2\n0 1\n0 0\n0 1\n0 1\n");
    let o = lalg(&["symmetric", s(&f)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("4 ideals, 4 in the semidirect product"), "{}", stdout(&o));
}

#[test]
fn invalid_action_exits_2() {
    let dir = TempDir::new().unwrap();
    // rho_u is not an endomorphism of A_3
    let f = write(&dir, "bad.txt", "3\n0 1 2\n0 0 1\n0 0 0\n2\n0 1\n0 0\n0 1 2\n0 2 1\n");
    assert_eq!(lalg(&["semidirect", s(&f)]).status.code(), Some(2));
}

#[test]
fn closure_compares_words() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "x3.txt", "3\n0 1 2\n0 0 1\n0 1 0\n");
    let o = lalg(&["closure", s(&f), "--left", "0", "--right", "", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["result"]["outcome"], "equivalent");

    let o = lalg(&["closure", s(&f), "--left", "1 2", "--right", "2 1", "--format", "json"]);
    assert_eq!(json(&o)["result"]["outcome"], "distinguished");

    let o = lalg(&["closure", s(&f), "--left", "1 2", "--right", "2 1", "--word-budget", "1"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn enumerate_streams_parseable_tables() {
    let o = lalg(&["enumerate", "-n", "4", "--class", "ckl"]);
    assert_eq!(o.status.code(), Some(0));
    let tables = AlgebraTable::parse_stream(&stdout(&o)).unwrap();
    let expected = lalg::families::enumerate(&lalg::families::EnumerationTask::new(4, lalg::families::ClassFilter::Ckl)).unwrap();
    assert_eq!(tables, expected);
    assert_eq!(AlgebraTable::write_stream(&tables), stdout(&o));
}

#[test]
fn enumerate_is_identical_across_worker_counts() {
    let one = lalg(&["enumerate", "--max-n", "4", "--workers", "1", "--format", "json"]);
    let two = lalg(&["enumerate", "--max-n", "4", "--workers", "3", "--format", "json"]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, two.stdout);
    let size4 = lalg::families::enumerate(&lalg::families::EnumerationTask::new(4, lalg::families::ClassFilter::L)).unwrap();
    assert_eq!(json(&one)["sizes"][3]["count"], size4.len());
}

#[test]
fn budget_exhaustion_exits_3() {
    let o = lalg(&["enumerate", "-n", "5", "--budget-nodes", "10"]);
    assert_eq!(o.status.code(), Some(3));
    let o = lalg(&["conjecture", "--max-n", "6", "--budget-nodes", "10"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn conjecture_up_to_4_has_no_counterexample() {
    let o = lalg(&["conjecture", "--max-n", "4", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["counterexamples"], serde_json::json!([]));
    assert_eq!(r["frontier"], Value::Null);
}

#[test]
fn output_flag_writes_the_report() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "a2.txt", &make_a(2).unwrap().to_text());
    let out = dir.path().join("report.json");
    let o = lalg(&["check", s(&f), "--format", "json", "--output", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(r["n"], 2);
}

#[test]
fn verify_all_at_small_sizes() {
    let o = lalg(&["verify-all", "--max-n", "3", "--triples", "50", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let r = json(&o);
    assert_eq!(r["examples"]["failures"], serde_json::json!([]));
    assert_eq!(r["config"]["product_max_n"], 3);
}

#[test]
fn seed_is_read_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_lalg"))
        .args(["verify-all", "--max-n", "2", "--triples", "5", "--format", "json"])
        .env("LALG_SEED", "12345")
        .output()
        .unwrap();
    assert_eq!(json(&o)["config"]["seed"], 12345);
}
