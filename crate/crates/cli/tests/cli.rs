//! Behaviour of the `glab` binary: reports, exit codes and example files.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use glab_core::families::Component;
use glab_core::FamilyId;
use serde_json::Value;

fn example(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("examples")
        .join(name)
}

fn glab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_glab"))
        .args(args)
        .env_remove("GLAB_DEFAULT_K")
        .output()
        .expect("glab runs")
}

fn json(args: &[&str]) -> Value {
    let out = glab(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn analyze(name: &str) -> Value {
    json(&["analyze", example(name).to_str().unwrap(), "--json"])
}

#[test]
fn e6_report() {
    let r = analyze("e6.json");
    assert_eq!(r["schema_version"], 1);
    assert_eq!(
        r["invariants"]["gap_sequence"],
        serde_json::json!([1, 1, 0, 0, 1])
    );
    assert_eq!(r["invariants"]["delta"], 3);
    assert_eq!(r["verdicts"]["gorenstein"], true);
    assert_eq!(
        r["verdicts"]["differential"]["stratum"],
        serde_json::json!([4])
    );
    assert_eq!(r["verdicts"]["parity"]["odd"], 1);
}

#[test]
fn rational_triple_point_is_not_gorenstein() {
    let r = analyze("rational_triple_point.json");
    assert_eq!(r["verdicts"]["gorenstein"], false);
    assert_eq!(r["verdicts"]["differential"]["generates"], false);
}

#[test]
fn family_examples_match_the_table() {
    for id in FamilyId::ALL {
        let r = analyze(&format!("{}.json", id.name().to_lowercase()));
        let v = &r["verdicts"];
        assert_eq!(r["invariants"]["b"], id.b_min(), "{id}");
        assert_eq!(r["invariants"]["genus"], 3, "{id}");
        assert_eq!(
            r["invariants"]["gap_sequence"],
            serde_json::json!(id.gap_sequence()),
            "{id}"
        );
        assert_eq!(v["gorenstein"], true, "{id}");
        assert_eq!(v["decomposable"], Value::Null, "{id}");
        assert_eq!(v["differential"]["source"], "file", "{id}");
        assert_eq!(v["differential"]["generates"], true, "{id}");
        assert_eq!(
            v["differential"]["stratum"],
            serde_json::json!(id.stratum()),
            "{id}"
        );
        match id.component() {
            Component::Odd => assert_eq!(v["parity"]["odd"], 1, "{id}"),
            Component::Even => assert_eq!(v["parity"]["even"], 1, "{id}"),
            Component::Unique => assert_eq!(v["parity"], Value::Null, "{id}"),
        }
    }
}

#[test]
fn malformed_coefficient_is_an_input_error() {
    let out = glab(&["analyze", example("malformed_coeff.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("generators[0].terms[0].coeff"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn bad_json_names_the_field() {
    let path = Path::new(env!("CARGO_TARGET_TMPDIR")).join("bad_branch.json");
    std::fs::write(
        &path,
        r#"{"branches": 1, "generators": [{"name": "x", "terms": [{"branch": -1, "exp": 2, "coeff": "1"}]}]}"#,
    )
    .unwrap();
    let out = glab(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("generators[0].terms[0].branch"), "{err}");
    assert!(err.contains("line 1"), "{err}");
}

#[test]
fn short_truncation_exits_3() {
    let path = Path::new(env!("CARGO_TARGET_TMPDIR")).join("e6_untruncated.json");
    std::fs::write(
        &path,
        r#"{"branches": 1, "generators": [
            {"name": "x", "terms": [{"branch": 1, "exp": 3, "coeff": "1"}]},
            {"name": "y", "terms": [{"branch": 1, "exp": 4, "coeff": "1"}]}]}"#,
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_glab"))
        .args(["analyze", p])
        .env("GLAB_DEFAULT_K", "8")
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    // the default order certifies it
    assert_eq!(glab(&["analyze", p]).status.code(), Some(0));
}

#[test]
fn verify_family_examples() {
    let r = json(&[
        "verify-family",
        "H211",
        "--branches",
        "3",
        "--samples",
        "50",
        "--seed",
        "7",
        "--json",
    ]);
    assert_eq!(r["verdicts"]["all_passed"], true);
    assert_eq!(r["verdicts"]["passed"], 50);

    let out = glab(&["verify-family", "H1111", "--branches", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("at least 4 branches"));

    let r = json(&[
        "verify-family",
        "H4even",
        "--branches",
        "1",
        "--samples",
        "50",
        "--json",
    ]);
    assert_eq!(r["verdicts"]["all_passed"], true);
    assert_eq!(r["verdicts"]["predicted"]["component"], "even");

    assert_eq!(
        glab(&["verify-family", "H5", "--branches", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        glab(&[
            "verify-family",
            "H4odd",
            "--branches",
            "1",
            "--truncation",
            "10"
        ])
        .status
        .code(),
        Some(3)
    );
}

#[test]
fn falsify_reports_facts() {
    let none = json(&[
        "falsify",
        "--profile",
        "3",
        "--branches",
        "4",
        "--samples",
        "200",
        "--json",
    ]);
    assert_eq!(none["verdicts"]["finding"], "none found in 200 samples");
    assert_eq!(none["verdicts"]["first_hit"], Value::Null);

    let hit = json(&[
        "falsify",
        "--profile",
        "2,1",
        "--branches",
        "4",
        "--samples",
        "200",
        "--json",
    ]);
    assert!(hit["verdicts"]["gorenstein"].as_u64().unwrap() > 0);
    assert_eq!(
        hit["verdicts"]["first_hit"]["len_r_mod_c"],
        hit["verdicts"]["first_hit"]["delta"]
    );

    let none = json(&[
        "falsify",
        "--profile",
        "2,1",
        "--branches",
        "3",
        "--samples",
        "200",
        "--json",
    ]);
    assert_eq!(none["verdicts"]["gorenstein"], 0);

    // a profile that cannot even be drawn surfaces the exhaustion warning
    let exhausted = json(&[
        "falsify",
        "--profile",
        "3",
        "--branches",
        "2",
        "--samples",
        "5",
        "--json",
    ]);
    assert_eq!(exhausted["verdicts"]["exhausted"], 5);
    assert!(exhausted["diagnostics"][0]
        .as_str()
        .unwrap()
        .starts_with("warning:"));
}

#[test]
fn theta_examples() {
    let counts = |r: &Value| {
        (
            r["verdicts"]["even"].as_u64().unwrap(),
            r["verdicts"]["odd"].as_u64().unwrap(),
        )
    };
    let path = |n: &str| example(n).to_str().unwrap().to_string();
    assert_eq!(
        counts(&json(&["theta", &path("two_cusps.json"), "--json"])),
        (0, 1)
    );
    assert_eq!(
        counts(&json(&["theta", &path("a7.json"), "--json"])),
        (1, 0)
    );
    let node = json(&["theta", &path("node.json"), "--json"]);
    assert_eq!(counts(&node), (1, 1));
    assert_eq!(node["verdicts"]["l_identically_zero"], false);
    // without a torus the node's data is inconsistent
    assert_eq!(
        glab(&["theta", &path("node.json"), "--beta", "0"])
            .status
            .code(),
        Some(2)
    );
    let family = json(&["theta", "--family", "H22odd", "--json"]);
    assert_eq!(counts(&family), (0, 1));
    assert_eq!(family["verdicts"]["implied_component"], "odd");
}

#[test]
fn table_recomputes_every_row() {
    let r = json(&["table", "--json"]);
    let rows = r["verdicts"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 7);
    for (row, id) in rows.iter().zip(FamilyId::ALL) {
        assert_eq!(row["family"], id.name());
        assert_eq!(row["gap_sequence"], serde_json::json!(id.gap_sequence()));
        assert_eq!(row["stratum_signature"], serde_json::json!(id.stratum()));
        assert_eq!(row["parity"], id.component().to_string());
        assert_eq!(row["verified"], true);
    }
    let text = String::from_utf8(glab(&["table"]).stdout).unwrap();
    assert!(text.contains("H4even   H(4)^even"), "{text}");
}
