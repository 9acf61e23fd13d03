use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn agcalc(args: &[&str]) -> Output {
    agcalc_env(args, &[])
}

fn agcalc_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_agcalc"));
    cmd.args(args).env_remove("AGCALC_TERM_CEILING");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&o.stdout),
            String::from_utf8_lossy(&o.stderr)
        )
    })
}

/// Compares stdout with `tests/golden/<name>`; set `AGCALC_UPDATE_GOLDEN=1`
/// to rewrite the file instead.
fn golden(name: &str, o: &Output) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    let got = String::from_utf8(o.stdout.clone()).unwrap();
    if std::env::var_os("AGCALC_UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &got).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path).unwrap();
    assert_eq!(got, want, "golden file {name} differs");
}

fn path(name: &str) -> String {
    data(name).to_str().unwrap().to_string()
}

#[test]
fn invert_catalan() {
    let o = agcalc(&[
        "invert",
        &path("catalan.json"),
        "--degree",
        "5",
        "--method",
        "all",
        "--json",
    ]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(
        r["outputs"]["g"][0],
        "14*z1^5 + 5*z1^4 + 2*z1^3 + z1^2 + z1"
    );
    assert_eq!(r["checks"][0]["name"], "method agreement");
    golden("invert_catalan.json", &o);
}

#[test]
fn invert_single_methods() {
    for m in ["fixedpoint", "ag", "lambda"] {
        let o = agcalc(&[
            "invert",
            &path("catalan.json"),
            "-d",
            "6",
            "--method",
            m,
            "--json",
        ]);
        assert_eq!(code(&o), 0, "{m}");
        assert_eq!(
            json(&o)["outputs"]["g"][0],
            "42*z1^6 + 14*z1^5 + 5*z1^4 + 2*z1^3 + z1^2 + z1"
        );
    }
}

#[test]
fn invert_zero_map_is_identity() {
    let o = agcalc(&["invert", &path("zero.json"), "-d", "4", "--json"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["outputs"]["g"], serde_json::json!(["z1", "z2"]));
}

#[test]
fn invert_text_output() {
    let o = agcalc(&["invert", &path("triangular.json"), "-d", "3", "--audit"]);
    assert_eq!(code(&o), 0);
    golden("invert_triangular.txt", &o);
}

#[test]
fn input_errors_exit_2() {
    let o = agcalc(&["invert", &path("bad_coeff.json"), "-d", "3"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("1/0"));
    let o = agcalc(&["invert", &path("linear.json"), "-d", "3"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("order"));
    let o = agcalc(&["invert", &path("missing.json"), "-d", "3"]);
    assert_eq!(code(&o), 2);
    let o = agcalc(&["invert", &path("catalan.json"), "-d", "0"]);
    assert_eq!(code(&o), 2);
    // a series known to degree 6 cannot be inverted to degree 8
    let o = agcalc(&["invert", &path("series.json"), "-d", "8"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn series_input_is_truncated_on_load() {
    let o = agcalc(&["invert", &path("series.json"), "-d", "6", "--json"]);
    assert_eq!(code(&o), 0);
    let g = json(&o)["outputs"]["g"][0].as_str().unwrap().to_string();
    assert!(g.ends_with("+ z1^2 + z1"), "{g}");
}

#[test]
fn known_inverse_mismatch_exits_1() {
    let o = agcalc(&["invert", &path("wrong_inverse.json"), "-d", "3", "--json"]);
    assert_eq!(code(&o), 1);
    let r = json(&o);
    assert_eq!(r["pass"], false);
    let failed: Vec<_> = r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["pass"] == false)
        .collect();
    assert_eq!(failed.len(), 1);
    assert_eq!(failed[0]["witness"]["monomial"], "z2^2");
    assert_eq!(failed[0]["witness"]["left"], "1");
    assert_eq!(failed[0]["witness"]["right"], "-1");
}

#[test]
fn verify_triangular() {
    let o = agcalc(&[
        "verify",
        &path("triangular.json"),
        "-d",
        "4",
        "-k",
        "2",
        "--json",
    ]);
    assert_eq!(code(&o), 0);
    golden("verify_triangular.json", &o);
}

#[test]
fn verify_with_nontrivial_jacobian() {
    let o = agcalc(&[
        "verify",
        &path("catalan.json"),
        "-d",
        "6",
        "-k",
        "2",
        "--q",
        "1 + z1",
        "--json",
    ]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["outputs"]["jf"], "-2*z1 + 1");
    assert!(r["checks"].as_array().unwrap().len() >= 8);
}

#[test]
fn verify_caps_xi_degree() {
    let o = agcalc(&[
        "verify",
        &path("catalan.json"),
        "-d",
        "2",
        "-k",
        "5",
        "--json",
    ]);
    assert_eq!(code(&o), 0);
    let w = json(&o)["warnings"][0].as_str().unwrap().to_string();
    assert!(w.contains("caps it at 2"), "{w}");
}

#[test]
fn verify_rejects_bad_q() {
    let o = agcalc(&["verify", &path("catalan.json"), "-d", "2", "--q", "z3"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn lab_triangular() {
    let o = agcalc(&[
        "lab",
        &path("triangular.json"),
        "--m-max",
        "6",
        "--checks",
        "all",
        "--json",
    ]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["outputs"]["nilpotent"], true);
    assert_eq!(r["outputs"]["stabilization_index"], 0);
    golden("lab_triangular.json", &o);
}

#[test]
fn lab_control() {
    let o = agcalc(&["lab", &path("control.json"), "--json"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["outputs"]["nilpotent"], false);
    assert_eq!(r["outputs"]["scan0"]["first_nonzero"], 1);
    assert_eq!(r["outputs"]["scan0"]["values"][0]["value"], "2*z1");
    assert_eq!(r["skipped"].as_array().unwrap().len(), 2);
}

#[test]
fn lab_single_checks() {
    let o = agcalc(&[
        "lab",
        &path("triangular3.json"),
        "--checks",
        "scan1",
        "--json",
    ]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["outputs"]["scan1"]["last_nonzero"], 2);
    assert!(r["outputs"].get("scan0").is_none());
    let o = agcalc(&[
        "lab",
        &path("triangular3.json"),
        "--checks",
        "nilpotent",
        "--json",
    ]);
    assert_eq!(json(&o)["outputs"]["det_i_minus_t_jh"], "1");
}

#[test]
fn lab_term_ceiling_exits_3() {
    let o = agcalc_env(
        &["lab", &path("triangular3.json"), "--json"],
        &[("AGCALC_TERM_CEILING", "4")],
    );
    assert_eq!(code(&o), 3);
    let r = json(&o);
    assert_eq!(r["aborted"], true);
    assert_eq!(r["pass"], false);
    assert_eq!(r["outputs"]["scan0"]["values"].as_array().unwrap().len(), 1);
    let o = agcalc_env(
        &["lab", &path("control.json")],
        &[("AGCALC_TERM_CEILING", "lots")],
    );
    assert_eq!(code(&o), 2);
}

#[test]
fn lab_rejects_series() {
    let o = agcalc(&["lab", &path("series.json")]);
    assert_eq!(code(&o), 2);
}

#[test]
fn corpus_triangular_invert_all() {
    let o = agcalc(&[
        "corpus",
        "--family",
        "triangular",
        "--n",
        "2",
        "--run",
        "invert-all",
        "-d",
        "8",
        "--json",
    ]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["pass"], true);
    assert_eq!(r["instances"][0]["id"], "triangular-n2-00");
    assert_eq!(r["instances"][0]["outputs"]["g"][0], "z2^2 + z1");
}

#[test]
fn corpus_control_lab() {
    let o = agcalc(&["corpus", "--family", "control", "--run", "lab", "--json"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    let inst = r["instances"].as_array().unwrap();
    assert_eq!(inst.len(), 9);
    for i in inst {
        assert_eq!(i["outputs"]["nilpotent"], false, "{}", i["id"]);
        let w = i["outputs"]["witness_m"].as_u64().unwrap();
        assert!(w <= i["n"].as_u64().unwrap());
    }
}

#[test]
fn corpus_empty_family_exits_2() {
    let o = agcalc(&["corpus", "--family", "", "--run", "lab"]);
    assert_eq!(code(&o), 2);
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    std::fs::write(
        &spec,
        r#"{"families":[],"ns":[2],"count":3,"seed":0,"max_degree":3,"series_trunc":8}"#,
    )
    .unwrap();
    let o = agcalc(&["corpus", "--spec", spec.to_str().unwrap(), "--run", "lab"]);
    assert_eq!(code(&o), 2);
    let o = agcalc(&["corpus", "--family", "cubic", "--run", "lab"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn corpus_writes_outputs_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let args = [
        "corpus",
        "--run",
        "verify",
        "-d",
        "5",
        "--count",
        "2",
        "--seed",
        "7",
        "--out",
        out.to_str().unwrap(),
        "--json",
    ];
    let a = agcalc(&args);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stdout));
    let b = agcalc(&args);
    assert_eq!(a.stdout, b.stdout);
    let written = std::fs::read(out.join("report.json")).unwrap();
    assert_eq!(written, a.stdout);
    let summary = std::fs::read_to_string(out.join("summary.txt")).unwrap();
    assert!(summary.starts_with("corpus PASS"));
    let maps: Vec<_> = std::fs::read_dir(out.join("maps")).unwrap().collect();
    assert_eq!(maps.len(), json(&a)["instances"].as_array().unwrap().len());

    // a written corpus map is a valid map file
    let m = out.join("maps").join("triangular-n2-00.json");
    let o = agcalc(&["lab", m.to_str().unwrap(), "--json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["outputs"]["stabilization_index"], 0);
}

#[test]
fn report_round_trips_and_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("r.json");
    let o = agcalc(&[
        "invert",
        &path("catalan.json"),
        "-d",
        "4",
        "--report",
        file.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&file).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(again, v);
    assert_eq!(
        text.as_bytes(),
        agcalc(&["invert", &path("catalan.json"), "-d", "4", "--json"]).stdout
    );
    assert!(v["input_digest"].as_str().unwrap().starts_with("sha256:"));
}

#[test]
fn timing_goes_to_stderr() {
    let a = agcalc(&[
        "invert",
        &path("catalan.json"),
        "-d",
        "4",
        "--json",
        "--timing",
    ]);
    let b = agcalc(&["invert", &path("catalan.json"), "-d", "4", "--json"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(String::from_utf8_lossy(&a.stderr).contains("elapsed"));
}
