use std::path::PathBuf;
use std::process::Command;

use regrade::harness::{parse_and_validate, random_module, run_campaign, run_campaign_with_cap};
use regrade::fixtures;
use regrade::linalg::FieldSpec;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn read(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap()
}

fn regrade() -> Command {
    Command::new(env!("CARGO_BIN_EXE_regrade"))
}

#[test]
fn dual_numbers_fixture_resolves() {
    let doc = parse_and_validate(&read("dual_numbers.toml")).unwrap();
    assert_eq!(doc.algebras.len(), 1);
    assert_eq!(doc.modules.len(), 2);
    let collapse = &doc.morphisms["collapse"];
    assert_eq!(collapse.domain().rank(), 1);
    assert!(collapse.codomain().is_trivial());
    assert_eq!(doc.algebras["dual"].dim(), 2);
}

#[test]
fn dangling_reference_is_named() {
    let err = parse_and_validate(&read("dangling.toml")).unwrap_err().to_string();
    assert!(err.contains("[modules.lost]"), "{err}");
    assert!(err.contains("dual_numbers"), "{err}");
    assert!(err.contains("line 13"), "{err}");
}

#[test]
fn pid_campaign_passes() {
    let doc = parse_and_validate(&read("pid_demo.toml")).unwrap();
    let report = run_campaign(&doc, 0);
    assert!(!report.failed(), "{}", report.table());
    let status = regrade().args(["campaign"]).arg(fixture("pid_demo.toml")).output().unwrap();
    assert!(status.status.success());
}

#[test]
fn planted_expectation_fails_by_name() {
    let doc = parse_and_validate(&read("planted_inequality.toml")).unwrap();
    let report = run_campaign(&doc, 0);
    assert!(report.failed());
    assert_eq!(report.failures().len(), 1);
    assert!(report.failures()[0].starts_with("planted/expected d_g"), "{:?}", report.failures());
    let out = regrade().args(["campaign"]).arg(fixture("planted_inequality.toml")).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("planted/expected d_g"));
}

#[test]
fn randomized_campaign_is_reproducible() {
    let doc = parse_and_validate(&read("inequality_campaign.toml")).unwrap();
    let a = run_campaign_with_cap(&doc, 11, 6).to_json();
    let b = run_campaign_with_cap(&doc, 11, 6).to_json();
    assert_eq!(a, b);
    let c = run_campaign_with_cap(&doc, 12, 6).to_json();
    assert_ne!(a, c);
}

#[test]
fn cli_json_matches_library_report() {
    let dir = std::env::temp_dir().join(format!("regrade-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("report.json");
    let status = regrade()
        .args(["campaign"])
        .arg(fixture("dual_numbers.toml"))
        .args(["--seed", "3", "--json"])
        .arg(&out)
        .env_remove("REGRADE_CAP")
        .output()
        .unwrap();
    assert!(status.status.success());
    let doc = parse_and_validate(&read("dual_numbers.toml")).unwrap();
    assert_eq!(std::fs::read_to_string(&out).unwrap(), run_campaign(&doc, 3).to_json());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn cli_single_verbs() {
    let file = fixture("dual_numbers.toml");
    let run = |args: &[&str]| {
        let out = regrade().arg(args[0]).arg(&file).args(&args[1..]).output().unwrap();
        let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap_or(serde_json::Value::Null);
        (out.status.code(), json)
    };
    let (code, json) = run(&["resolve", "--module", "top", "--cap", "3"]);
    assert_eq!(code, Some(0));
    assert_eq!(json["schema"], "regrade-report/1");
    assert_eq!(json["jobs"][0]["data"]["terms"].as_array().unwrap().len(), 4);
    let (code, json) = run(&["injdim", "--module", "free"]);
    assert_eq!(code, Some(0));
    assert_eq!(json["jobs"][0]["data"]["injective_dimension"]["value"], 0);
    let (code, json) = run(&["ext", "--module", "top", "--target", "top", "--degree", "0"]);
    assert_eq!(code, Some(0));
    assert_eq!(json["jobs"][0]["data"]["dim"], 1);
    for args in [
        &["regrade", "--module", "free", "--morphism", "collapse"][..],
        &["verify-inequality", "--module", "free", "--morphism", "collapse"],
        &["verify-lemma", "--module", "free", "--morphism", "collapse", "--window", "3"],
        &["verify-acyclicity", "--module", "top", "--morphism", "collapse", "--vertex", "1", "--cap", "4"],
    ] {
        let (code, json) = run(args);
        assert_eq!(code, Some(0), "{args:?}: {json}");
    }
    let (code, json) = run(&["verify-lemma", "--module", "top", "--morphism", "collapse", "--product"]);
    assert_eq!(code, Some(1));
    assert!(json["jobs"][0]["error"].as_str().unwrap().contains("finite kernel"));
    let (code, _) = run(&["resolve", "--module", "missing"]);
    assert_eq!(code, Some(1));
    let out = regrade().arg("validate").arg(fixture("dangling.toml")).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = regrade().arg("demo-pid").output().unwrap();
    assert!(out.status.success());
}

#[test]
fn cap_from_environment() {
    let out = regrade()
        .arg("injdim")
        .arg(fixture("dual_numbers.toml"))
        .args(["--module", "top"])
        .env("REGRADE_CAP", "3")
        .output()
        .unwrap();
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["cap"], 3);
    assert_eq!(json["jobs"][0]["data"]["injective_dimension"]["kind"], "at_least");
}

#[test]
fn random_modules_on_kronecker_validate() {
    let a = fixtures::kronecker(FieldSpec::Rationals).unwrap().algebra;
    for seed in 100..150 {
        let m = random_module(&a, seed, 6, 2).unwrap();
        assert!(m.validate().is_ok());
    }
    let d = fixtures::dual_numbers(FieldSpec::Rationals).unwrap().algebra;
    assert_eq!(random_module(&d, 5, 4, 1).unwrap(), random_module(&d, 5, 4, 1).unwrap());
}
