use std::path::PathBuf;

use branes::cli::{self, RunOptions, Scenario};

fn shipped() -> Vec<PathBuf> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    files.sort();
    files
}

#[test]
fn every_shipped_scenario_round_trips() {
    let files = shipped();
    assert!(files.len() >= 5);
    for path in files {
        let s = cli::load(&path).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        let back = Scenario::from_json(&text).unwrap();
        assert_eq!(s, back, "{}", path.display());
    }
}

#[test]
fn every_shipped_scenario_builds() {
    for path in shipped() {
        let s = cli::load(&path).unwrap();
        let limits = cli::effective_limits(&s, |_| {}).unwrap();
        s.build(&limits).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    }
}

#[test]
fn schema_names_every_scenario_field() {
    let schema = cli::schema();
    let props = schema["scenario"]["properties"].as_object().unwrap();
    for key in ["name", "seed", "limits", "rings", "modules", "sites", "energies", "functors", "branes", "systems", "checks"] {
        assert!(props.contains_key(key), "{key}");
    }
}

#[test]
fn compliant_and_faulty_suites_exit_as_expected() {
    for (name, code) in [("compliant_energies", 0), ("fault_suite", 1)] {
        let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("scenarios/{name}.json"));
        let s = cli::load(&path).unwrap();
        let limits = cli::effective_limits(&s, |_| {}).unwrap();
        let report = cli::run(&s, &limits, &RunOptions::default()).unwrap();
        assert_eq!(report.exit_code, code, "{name}");
    }
}
