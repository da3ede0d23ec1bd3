use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use skos::berezinian::SuperMatrixRecord;
use skos::bott::{bott_table, CohomologyTable, Method};
use skos::complexes::{build_koszul, ComplexRecord};
use skos::exact_linalg::homology;
use skos::{Base, HomologySummary};

fn skos(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skos")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = skos(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    skos(args).status.code().expect("exited normally")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    fs::write(&path, contents).unwrap();
    path
}

#[test]
fn koszul_of_odd_line_has_three_torsion() {
    let out = stdout(&["homology", "--kind", "koszul", "--rank", "0,1", "--base", "Z", "--weight", "3", "--position", "-2", "--output", "json"]);
    let report: Value = serde_json::from_str(&out).unwrap();
    let h = &report["homology"][0];
    assert_eq!(h["position"], -2);
    assert_eq!(h["torsion_odd"], serde_json::json!([3]));
    assert_eq!(h["torsion_even"], serde_json::json!([]));
    assert_eq!((h["even_rank"].as_u64(), h["odd_rank"].as_u64()), (Some(0), Some(0)));
}

#[test]
fn berezinian_of_identity_is_one() {
    let identity = r#"{"p":1,"q":1,"grassmann_gens":2,"entries":[
        [[{"coeff":"1","thetas":[]}], []],
        [[], [{"coeff":"1","thetas":[]}]]
    ]}"#;
    let path = scratch("identity.json", identity);
    assert_eq!(stdout(&["ber", "--input", path.to_str().unwrap()]).trim(), "1");
}

#[test]
fn bott_csv_row() {
    let out = stdout(&["bott", "--m", "1", "--n", "1", "--p", "1", "--r", "2", "--method", "both", "--output", "csv"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "m,n,p,r,i,even,odd,method");
    assert!(lines.contains(&"1,1,1,2,0,2,2,both"), "{out}");
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["koszul", "--rank", "1,1", "--weight", "2"]), 0);
    // usage errors
    assert_eq!(code(&["koszul", "--rank", "1,1", "--weight", "2", "--bogus"]), 2);
    assert_eq!(code(&["koszul", "--rank", "1", "--weight", "2"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&[]), 2);
    assert_eq!(code(&["homology", "--kind", "koszul", "--rank", "1,1", "--weight", "2", "--base", "Fp:6"]), 2);
    assert_eq!(code(&["koszul", "--rank", "1,1", "--weight", "2", "--output", "csv"]), 2);
    assert_eq!(code(&["bott", "--m", "1", "--n", "1", "--r", "2"]), 2);
    // computation errors
    assert_eq!(code(&["bott", "--m", "1", "--n", "1", "--p", "1", "--r", "2", "--method", "both", "--base", "Z"]), 1);
    assert_eq!(code(&["specialize", "--rank", "1,1", "--omega", "1,1"]), 1);
    assert_eq!(code(&["homology", "--kind", "koszul", "--rank", "1,1", "--weight", "9", "--cap", "3", "--position", "-3"]), 1);
    let singular = scratch("singular.json", r#"{"p":1,"q":0,"grassmann_gens":1,"entries":[[{"coeff":"0","thetas":[]},{"coeff":"0","thetas":[1]}]]}"#);
    let singular_even = scratch("singular_even.json", r#"{"p":1,"q":0,"grassmann_gens":0,"entries":[[]]}"#);
    assert_eq!(code(&["ber", "--input", singular.to_str().unwrap()]), 1);
    assert_eq!(code(&["ber", "--input", singular_even.to_str().unwrap()]), 1);
    assert_eq!(code(&["ber", "--input", "/nonexistent/matrix.json"]), 1);
}

#[test]
fn output_is_deterministic() {
    let invocations: [&[&str]; 4] = [
        &["bott", "--m", "2", "--n", "1", "--p-min", "0", "--p-max", "3", "--r-min", "-3", "--r-max", "3", "--method", "direct", "--output", "csv"],
        &["ber", "--random", "--seed", "17", "--rank", "2,2", "--gens", "4", "--output", "json"],
        &["berezinian-complex", "--rank", "1,2", "--weight", "1", "--output", "json"],
        &["homology", "--kind", "derham", "--rank", "2,1", "--weight", "3"],
    ];
    for args in invocations {
        assert_eq!(skos(args).stdout, skos(args).stdout, "{args:?}");
    }
    assert_ne!(
        stdout(&["ber", "--random", "--seed", "1", "--output", "json"]),
        stdout(&["ber", "--random", "--seed", "2", "--output", "json"])
    );
}

#[test]
fn complex_record_round_trips_through_homology() {
    let json = stdout(&["koszul", "--rank", "0,1", "--weight", "4", "--output", "json"]);
    let record: ComplexRecord = serde_json::from_str(&json).unwrap();
    assert_eq!(record, build_koszul(0, 1, 4, 4).to_record());
    assert_eq!(serde_json::to_string_pretty(&record).unwrap(), json.trim_end());

    let path = scratch("koszul.json", &json);
    let from_file = stdout(&["homology", "--input", path.to_str().unwrap(), "--output", "json"]);
    let from_flags = stdout(&["homology", "--kind", "koszul", "--rank", "0,1", "--weight", "4", "--output", "json"]);
    assert_eq!(from_file, from_flags);

    let report: Value = serde_json::from_str(&from_file).unwrap();
    let summaries: Vec<HomologySummary> = serde_json::from_value(report["homology"].clone()).unwrap();
    let complex = build_koszul(0, 1, 4, 4);
    for h in &summaries {
        assert_eq!(h, &homology(&complex, Base::Z, h.position).unwrap());
    }
    assert_eq!(summaries.len(), 5);
}

#[test]
fn tables_round_trip() {
    let json = stdout(&["bott", "--m", "1", "--n", "2", "--p-min", "0", "--p-max", "2", "--r-min", "-2", "--r-max", "2", "--output", "json"]);
    let tables: Vec<CohomologyTable> = serde_json::from_str(&json).unwrap();
    assert_eq!(tables, bott_table(1, 2, 0..=2, -2..=2, Method::Formula, Base::Q).unwrap());
    assert_eq!(serde_json::to_string_pretty(&tables).unwrap(), json.trim_end());

    let lb: Vec<CohomologyTable> = serde_json::from_str(&stdout(&["line-bundle", "--m", "2", "--n", "1", "--r", "-4", "--output", "json"])).unwrap();
    assert_eq!(lb.len(), 1);
    assert_eq!(lb[0].rows.len(), 3);
}

#[test]
fn random_berezinian_report_is_reproducible_from_its_matrix() {
    let json = stdout(&["ber", "--random", "--seed", "5", "--rank", "2,1", "--gens", "3", "--output", "json"]);
    let report: Value = serde_json::from_str(&json).unwrap();
    let record: SuperMatrixRecord = serde_json::from_value(report["matrix"].clone()).unwrap();
    let matrix = record.to_matrix::<num_rational::BigRational>().unwrap();
    assert_eq!(report["ber"].as_str().unwrap(), matrix.ber().unwrap().to_string());

    let path = scratch("random.json", &serde_json::to_string(&record).unwrap());
    assert_eq!(stdout(&["ber", "--input", path.to_str().unwrap()]).trim(), report["ber"].as_str().unwrap());
}

#[test]
fn negative_arguments_parse() {
    let out = stdout(&["bott", "--m", "1", "--n", "0", "--p", "1", "--r", "-3", "--method", "direct"]);
    assert!(out.contains("H^1=(4|0)"), "{out}");
    let out = stdout(&["berezinian-complex", "--rank", "1,1", "--weight", "-2", "--cap", "3"]);
    assert!(out.contains("window [0, 3]"), "{out}");
}
