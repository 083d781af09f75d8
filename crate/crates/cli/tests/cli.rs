//! End-to-end tests of the `toric-gk` binary: exit codes, report schemas,
//! determinism and the documented command examples.

use assert_cmd::Command;
use std::path::PathBuf;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_toric-gk"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

#[test]
fn validate_square_passes_with_vertex_table() {
    let out = bin()
        .arg("validate")
        .arg(fixture("square.json"))
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    let report: toric_gk::ValidateOut = serde_json::from_slice(&out).unwrap();
    assert!(report.pass);
    assert_eq!(report.report.vertices.len(), 4);
    for v in &report.report.vertices {
        assert_eq!(v.det_abs.as_deref(), Some("1"));
    }
}

#[test]
fn polytope_flag_form_is_equivalent_to_positional() {
    let positional = bin()
        .arg("validate")
        .arg(fixture("square.json"))
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    let flagged = bin()
        .arg("validate")
        .arg("--polytope")
        .arg(fixture("square.json"))
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    assert_eq!(positional, flagged);
    bin().arg("validate").assert().code(2);
}

#[test]
fn validate_non_delzant_exits_one_and_names_the_facets() {
    let assert = bin()
        .arg("validate")
        .arg(fixture("bad_triangle.json"))
        .assert()
        .code(1);
    let err = String::from_utf8_lossy(&assert.get_output().stderr).to_string();
    assert!(err.contains("[0, 2]"), "stderr: {err}");
}

#[test]
fn input_errors_exit_two() {
    bin()
        .arg("validate")
        .arg("/no/such/file.json")
        .assert()
        .code(2);
    // malformed C matrix
    bin()
        .arg("tensors")
        .arg(fixture("square.json"))
        .args(["--C", "[[0,1],[1,0]]"]) // symmetric, rejected
        .assert()
        .code(2);
    // boundary point
    bin()
        .arg("tensors")
        .arg(fixture("square.json"))
        .args(["--C", "[[0,1],[-1,0]]", "--points", "0.0,0.25"])
        .assert()
        .code(2);
    // non-positive tolerance
    bin()
        .arg("check-identities")
        .arg(fixture("square.json"))
        .args(["--C", "[[0,1],[-1,0]]", "--tol", "-1"])
        .assert()
        .code(2);
}

#[test]
fn c_matrix_can_come_from_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let c_path = dir.path().join("c.json");
    std::fs::write(&c_path, r#"[["0","3/4"],["-3/4","0"]]"#).unwrap();
    let out = bin()
        .arg("tensors")
        .arg(fixture("square.json"))
        .arg("--C")
        .arg(&c_path)
        .args(["--points", "0.25,0.25"])
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    let report: toric_gk::TensorsOut = serde_json::from_slice(&out).unwrap();
    assert_eq!(report.c[0][1], "3/4");
    assert_eq!(report.interior_type, 0);
}

#[test]
fn reports_are_byte_identical_for_fixed_seed() {
    let run = || {
        bin()
            .arg("tensors")
            .arg(fixture("cp2.json"))
            .args([
                "--C",
                "[[0,\"1/2\"],[\"-1/2\",0]]",
                "--points",
                "sample:5:42",
            ])
            .assert()
            .success()
            .get_output()
            .stdout
            .clone()
    };
    assert_eq!(run(), run());
}

#[test]
fn tensors_report_round_trips_and_csv_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let json_path = dir.path().join("report.json");
    let csv_path = dir.path().join("table.csv");
    bin()
        .arg("tensors")
        .arg(fixture("square.json"))
        .args(["--C", "[[0,1],[-1,0]]", "--points", "sample:4:9"])
        .arg("--out")
        .arg(&json_path)
        .arg("--csv")
        .arg(&csv_path)
        .assert()
        .success();
    let text = std::fs::read_to_string(&json_path).unwrap();
    let report: toric_gk::TensorsOut = serde_json::from_str(&text).unwrap();
    assert!(report.pass);
    assert_eq!(report.interior_type, 0);
    assert_eq!(report.points.len(), 4);
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert!(csv.starts_with("point,"));
    assert!(csv.contains("det_one_plus_psi_inv_c"));
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn faces_with_c_emits_type_map() {
    let out = bin()
        .arg("faces")
        .arg(fixture("square.json"))
        .args(["--C", "[[0,1],[-1,0]]"])
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    let report: toric_gk::FacesOut = serde_json::from_slice(&out).unwrap();
    for f in &report.faces {
        match f.codim {
            0 => assert_eq!(f.ambient_type, Some(0)),
            1 => {
                assert_eq!(f.ambient_type, Some(2));
                assert_eq!(f.submanifold_type, Some(1));
            }
            2 => assert_eq!(f.ambient_type, Some(2)),
            _ => unreachable!(),
        }
    }
}

#[test]
fn boundary_square_aggregate_passes() {
    let out = bin()
        .arg("boundary")
        .arg(fixture("square.json"))
        .args(["--C", "[[0,1],[-1,0]]"])
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    let report: toric_gk::BoundaryOut = serde_json::from_slice(&out).unwrap();
    assert!(report.pass);
    assert!(report.compactification.control_flagged);
    assert!(report.det_bound.min_det >= 1.0 - 1e-12);
}

#[test]
fn boundary_with_non_convex_potential_fails() {
    bin()
        .arg("boundary")
        .arg(fixture("square.json"))
        .args([
            "--C",
            "[[0,1],[-1,0]]",
            "--potential",
            r#"{"type":"guillemin","correction":[{"coeffs":"-10","monomial":[2,0]}]}"#,
        ])
        .assert()
        .code(1);
}

#[test]
fn check_identities_passes_with_corrected_potential() {
    let out = bin()
        .arg("check-identities")
        .arg(fixture("cp2.json"))
        .args([
            "--C",
            "[[0,\"2/3\"],[\"-2/3\",0]]",
            "--potential",
            r#"{"type":"guillemin","correction":[{"coeffs":"1/9","monomial":[2,1]}]}"#,
            "--points",
            "sample:6:3",
        ])
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    let report: toric_gk::IdentitiesOut = serde_json::from_slice(&out).unwrap();
    assert!(report.pass);
    assert_eq!(report.per_point.len(), 6);
}

#[test]
fn golden_example_matches_closed_forms() {
    let out = bin()
        .args(["example-cp1xcp1", "--c", "1", "--mu", "0.25,0.25"])
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    let report: toric_gk::GoldenOut = serde_json::from_slice(&out).unwrap();
    assert!(report.pass);
    assert!((report.report.p_value - 16.0).abs() < 1e-12);
    assert!((report.report.det_phi - 17.0).abs() < 1e-12);
    let names: Vec<&str> = report
        .report
        .comparisons
        .iter()
        .map(|c| c.name.as_str())
        .collect();
    assert_eq!(names, vec!["g", "b", "Q", "b_prime"]);
    // degenerate c is an input error
    bin().args(["example-cp1xcp1", "--c", "0"]).assert().code(2);
}

#[test]
fn cp2_example_reproduces_combination_invariance() {
    let out = bin()
        .args(["example-cp2", "--coeffs", "1,1,0", "--coeffs-alt", "3,4,1"])
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    let report: toric_gk::Cp2Out = serde_json::from_slice(&out).unwrap();
    assert!(report.frames_identical);
    assert_eq!(report.combination, "0");
    assert_eq!(report.interior_type, 2); // downstairs C = 0: Kähler
}

#[test]
fn cpn_bracket_example_passes() {
    let out = bin()
        .args(["example-cpn-bracket", "--n", "4", "--k", "2"])
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    let report: toric_gk::CpnOut = serde_json::from_slice(&out).unwrap();
    assert_eq!(report.report.max_bracket, 0.0);
    assert!(report.report.fault_max_bracket.unwrap() >= 1e-3);
    // invalid block is an input error
    bin()
        .args(["example-cpn-bracket", "--n", "3", "--k", "3"])
        .assert()
        .code(2);
}

#[test]
fn reduce_reports_reduction_data() {
    let out = bin()
        .arg("reduce")
        .arg(fixture("cp2.json"))
        .args(["--C", "[[0,1],[-1,0]]", "--points", "sample:3:5"])
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    let report: toric_gk::ReduceOut = serde_json::from_slice(&out).unwrap();
    assert!(report.exactness);
    assert_eq!(report.roundtrip_exact, Some(true));
    assert_eq!(report.kernel_basis, vec![vec!["1"], vec!["1"], vec!["1"]]);
    let fixture_report = report.fixture.unwrap();
    assert!(fixture_report.roundtrip_exact && fixture_report.identities_pass);
}
