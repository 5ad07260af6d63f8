use std::process::{Command, Output};

use causalkit::classical::Prob;
use causalkit::games::{cyril_gyni_strategy, eval_gyni, GameValue};
use causalkit::reproduce::{ReproductionRecord, Value};

fn causalkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_causalkit"))
        .args(args)
        .env_remove("CAUSALKIT_TOL")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn gyni_json_matches_library() {
    let o = causalkit(&["gyni", "--process", "cyril", "--json"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let v: GameValue = serde_json::from_str(&text).unwrap();
    assert_eq!(v, eval_gyni(&cyril_gyni_strategy()).unwrap());
    assert_eq!(serde_json::to_string_pretty(&v).unwrap(), text.trim_end());
}

#[test]
fn classical_exact() {
    let o = causalkit(&["classical", "tdr", "--strategy", "ebw", "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v, Value::exact(Prob::new(27, 32)));
    let human = stdout(&causalkit(&[
        "classical",
        "tdr",
        "--strategy",
        "ebw",
        "--exact",
    ]));
    assert!(human.contains("27/32"), "{human}");
}

#[test]
fn ppt_named_process() {
    let o = causalkit(&["ppt", "--process", "cyril", "--cut", "B", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["ppt"], true);
    let o = causalkit(&["ppt", "--process", "phi-plus", "--cut", "B", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["ppt"], false);
}

#[test]
fn validate_dumped_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cyril.process");
    let dump = causalkit(&["dump", "--object", "cyril"]);
    std::fs::write(&path, &dump.stdout).unwrap();
    let o = causalkit(&["validate", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("valid: true"));
}

#[test]
fn certificate_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.json");
    let o = causalkit(&[
        "duality",
        "--direction",
        "gyni2dr",
        "--emit-certificate",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let cert: causalkit::duality::DualityCertificate =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(cert.gap() < 1e-9);
}

#[test]
fn manifest_exit_codes() {
    let o = causalkit(&["manifest", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let recs: Vec<ReproductionRecord> = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(recs.len() >= 12);

    let strict = Command::new(env!("CARGO_BIN_EXE_causalkit"))
        .args(["manifest"])
        .env("CAUSALKIT_TOL", "1e-20")
        .output()
        .unwrap();
    assert_eq!(strict.status.code(), Some(1));
    assert!(stdout(&strict).contains("FAIL drb-pauli-y "));
}

#[test]
fn usage_errors() {
    for args in [
        &["drb", "--strategy", "telepathy"][..],
        &["dump", "--object", "mystery"],
        &["dump", "--object", "bell:0"],
        &["classical", "tdr", "--strategy", "psychic"],
        &["duality", "--direction", "sideways"],
    ] {
        assert_eq!(causalkit(args).status.code(), Some(2), "{args:?}");
    }
    let bad_tol = Command::new(env!("CARGO_BIN_EXE_causalkit"))
        .args(["manifest"])
        .env("CAUSALKIT_TOL", "loose")
        .output()
        .unwrap();
    assert_eq!(bad_tol.status.code(), Some(2));
}
