use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const SHIPPED: [(&str, i32); 3] = [("identity_energy", 0), ("broken_cover", 1), ("brane_uncertainty_demo", 0)];

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn scenario(name: &str) -> PathBuf {
    root().join("scenarios").join(format!("{name}.json"))
}

fn branes(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_branes"))
        .args(args)
        .env_remove("BRANES_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Set `BRANES_BLESS=1` to rewrite the golden files from the current binary.
fn golden(path: &Path, actual: &str) {
    if std::env::var_os("BRANES_BLESS").is_some() {
        std::fs::write(path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "report differs from {}", path.display());
}

#[test]
fn shipped_scenarios_match_golden_reports() {
    for (name, code) in SHIPPED {
        let file = scenario(name);
        let file = file.to_str().unwrap();
        for (format, ext) in [("json", "json"), ("text", "txt")] {
            let out = branes(&["--format", format, "run", file]);
            assert_eq!(out.status.code(), Some(code), "{name}: {}", String::from_utf8_lossy(&out.stderr));
            golden(&root().join("tests/golden").join(format!("{name}.{ext}")), &stdout(&out));
        }
    }
}

#[test]
fn reports_are_deterministic_across_thread_counts() {
    for (name, _) in SHIPPED {
        let file = scenario(name);
        let file = file.to_str().unwrap();
        let one = stdout(&branes(&["--jobs", "1", "run", file]));
        let many = stdout(&branes(&["--jobs", "4", "run", file]));
        assert_eq!(one, many, "{name}");
    }
}

#[test]
fn timings_only_add_elapsed_fields() {
    let file = scenario("identity_energy");
    let file = file.to_str().unwrap();
    let plain: serde_json::Value = serde_json::from_str(&stdout(&branes(&["run", file]))).unwrap();
    let mut timed: serde_json::Value = serde_json::from_str(&stdout(&branes(&["--timings", "run", file]))).unwrap();
    for c in timed["checks"].as_array_mut().unwrap() {
        assert!(c.as_object_mut().unwrap().remove("elapsed_ms").is_some());
    }
    assert_eq!(plain, timed);
}

#[test]
fn broken_cover_reports_a_witness() {
    let out = branes(&["run", scenario("broken_cover").to_str().unwrap()]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let axioms = report["checks"].as_array().unwrap().iter().find(|c| c["check"] == "energy_axioms").unwrap();
    assert_eq!(axioms["status"], "fail");
    assert_eq!(axioms["detail"]["failures"], serde_json::json!(["preserves_covers"]));
    assert_eq!(axioms["detail"]["matches_intended"], true);
    assert!(axioms["summary"].as_str().unwrap().contains("not a cover"));
    assert_eq!(report["exit_code"], 1);
}

#[test]
fn demo_uncertainty_matches_deformation_oracle() {
    let out = branes(&["uncertainty", scenario("brane_uncertainty_demo").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let checks = report["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 1);
    let d = &checks[0]["detail"];
    assert_eq!(d["product"]["status"], "non_contractible");
    // homs F2[t]/t² → F2 ⊕ F2 over t ↦ 0: t ↦ (0, m), two choices
    assert_eq!(d["e_side"]["pi0"], 2);
    assert_eq!(d["v_side"]["pi0"], 1);
    assert_eq!(d["v_side"]["kind"]["der_f"], 2);
    assert_eq!(d["v_side"]["kind"]["der_tf"], 4);
}

#[test]
fn unknown_check_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("unknown.json");
    std::fs::write(&path, r#"{"name": "x", "checks": [{"check": "no_such_check"}]}"#).unwrap();
    let out = branes(&["run", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("no_such_check") && err.contains("line 1"), "{err}");
}

#[test]
fn unknown_field_names_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("field.json");
    std::fs::write(&path, "{\"name\": \"x\",\n  \"bogus\": 1,\n  \"checks\": []}").unwrap();
    let out = branes(&["run", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bogus") && err.contains("line 2"), "{err}");
}

#[test]
fn undefined_reference_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ref.json");
    std::fs::write(&path, r#"{"name": "x", "checks": [{"check": "topology", "site": "missing"}]}"#).unwrap();
    let out = branes(&["run", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn cap_violations_exit_with_three() {
    let out = branes(&["--carrier-cap", "3", "run", scenario("brane_uncertainty_demo").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn missing_file_exits_with_two() {
    let out = branes(&["run", "/nonexistent/scenario.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn seed_flag_and_env_agree() {
    let file = scenario("identity_energy");
    let file = file.to_str().unwrap();
    let flag = stdout(&branes(&["--seed", "11", "run", file]));
    let env = Command::new(env!("CARGO_BIN_EXE_branes"))
        .args(["run", file])
        .env("BRANES_SEED", "11")
        .output()
        .unwrap();
    assert_eq!(flag, stdout(&env));
    let report: serde_json::Value = serde_json::from_str(&flag).unwrap();
    assert_eq!(report["seed"], 11);
}

#[test]
fn catalog_lists_at_least_twelve_checks() {
    let out = branes(&["list-checks"]);
    assert_eq!(out.status.code(), Some(0));
    let rows: Vec<serde_json::Value> = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(rows.len() >= 12);
    let mut stages: Vec<u64> = rows.iter().map(|r| r["stage"].as_u64().unwrap()).collect();
    let sorted = {
        let mut s = stages.clone();
        s.sort();
        s
    };
    assert_eq!(stages, sorted);
    stages.dedup();
    assert_eq!(stages.len(), 6);
}

#[test]
fn schema_covers_every_check_kind() {
    let out = branes(&["schema"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let schema: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!(schema["scenario"].is_object());
    assert!(schema["state_table"].is_object());
    for (name, _, _) in branes::cli::CATALOG {
        assert!(text.contains(&format!("\"{name}\"")), "{name} missing from schema");
    }
}

#[test]
fn entropy_command_reads_a_state_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.json");
    std::fs::write(&path, r#"{"energies": [0.0, 0.0, 0.0, 0.0], "beta": 1.0}"#).unwrap();
    let out = branes(&["--format", "text", "entropy", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).starts_with("sharp S = 2 bits"), "{}", stdout(&out));
    let csv = branes(&["entropy", "--csv", path.to_str().unwrap()]);
    let csv = stdout(&csv);
    assert_eq!(csv.lines().count(), 6);
    assert_eq!(csv.lines().last(), Some("total,,1,2"));
}
