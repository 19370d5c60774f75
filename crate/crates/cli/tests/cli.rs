use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn kq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kq")).args(args).env("KQ_PROFILE", "small").output().expect("kq runs")
}

fn scratch(name: &str, contents: &[u8]) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("kq-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    fs::write(&p, contents).unwrap();
    p
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn build_then_homology() {
    let out = kq(&["build", "boundary:2"]);
    assert!(out.status.success());
    let p = scratch("b2.json", &out.stdout);
    let h = kq(&["homology", p.to_str().unwrap()]);
    assert_eq!(h.status.code(), Some(0));
    assert_eq!(stdout(&h).trim(), "H0 = Z, H1 = Z");
}

#[test]
fn kan_exit_codes() {
    let horn = scratch("h21.json", &kq(&["build", "horn:2:1"]).stdout);
    assert_eq!(kq(&["kan", horn.to_str().unwrap()]).status.code(), Some(1));
    let pt = scratch("pt.json", &kq(&["build", "point"]).stdout);
    assert_eq!(kq(&["kan", pt.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn lift_through_terminal() {
    let left = scratch("l.json", &kq(&["inclusion", "horn:2:1"]).stdout);
    let right = scratch("r.json", &kq(&["inclusion", "--terminal", "simplex:2"]).stdout);
    let out = kq(&[
        "lift",
        left.to_str().unwrap(),
        right.to_str().unwrap(),
        left.to_str().unwrap(),
        right.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("\"assignment\""));

    let bottom = scratch("bad.json", &kq(&["inclusion", "--terminal", "horn:2:1"]).stdout);
    let out = kq(&[
        "lift",
        left.to_str().unwrap(),
        right.to_str().unwrap(),
        bottom.to_str().unwrap(),
        right.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn soa_on_a_discrete_set_is_a_fixed_point() {
    let f = scratch("t.json", &kq(&["inclusion", "--terminal", "boundary:1"]).stdout);
    let out = kq(&["soa", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["fixed_point"], true);
    assert_eq!(v["attachments"], 0);
}

#[test]
fn soa_round_cap_exits_three() {
    let f = scratch("th.json", &kq(&["inclusion", "--terminal", "horn:2:1"]).stdout);
    let out = kq(&["soa", f.to_str().unwrap(), "--rounds", "1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn map_constructions() {
    let d1 = scratch("d1.json", &kq(&["build", "simplex:1"]).stdout);
    let sd = kq(&["map", "sd", d1.to_str().unwrap()]);
    assert!(sd.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&sd)).unwrap();
    assert_eq!(v["cells"][0].as_array().unwrap().len(), 3);
    assert_eq!(v["cells"][1].as_array().unwrap().len(), 2);

    let bi = scratch("c.json", &kq(&["build", "--bi", "const", "horn:2:1"]).stdout);
    let diag = kq(&["map", "diag", bi.to_str().unwrap()]);
    assert!(diag.status.success());
    for op in ["extend", "counit", "ex"] {
        assert!(kq(&["map", op, d1.to_str().unwrap()]).status.success(), "{op}");
    }
    assert!(kq(&["map", "product", d1.to_str().unwrap(), d1.to_str().unwrap()]).status.success());
    assert_eq!(kq(&["map", "product", d1.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn bad_input_exits_two() {
    let bad = scratch("garbage.json", b"{\"schema\": \"SSX v1\"}");
    assert_eq!(kq(&["homology", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(kq(&["build", "torus"]).status.code(), Some(2));
    assert_eq!(kq(&["homology", "/nonexistent/file.json"]).status.code(), Some(2));
}

#[test]
fn verify_reports() {
    let out = kq(&["verify", "--scenario", "S10", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["schema"], "KQR v1");
    assert_eq!(v["profile"], "small");
    assert_eq!(v["scenarios"][0]["verdict"], "PASS");

    let text = kq(&["verify", "--scenario", "S10", "--text"]);
    assert!(stdout(&text).contains("status: PASS"));
    assert_eq!(kq(&["verify", "--scenario", "S11"]).status.code(), Some(2));
}

#[test]
fn verify_config_errors_name_line_and_field() {
    let cfg = scratch("bad.toml", b"profile = \"small\"\n\n[caps]\nhorn_dimm = 3\n");
    let out = kq(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 4"), "{err}");
    assert!(err.contains("horn_dimm"), "{err}");
}

#[test]
fn verify_config_selects_scenarios() {
    let cfg = scratch("ok.toml", b"profile = \"small\"\nscenarios = [\"S1\", \"S10\"]\n[scenario.S1]\nenabled = false\n");
    let out = kq(&["verify", "--config", cfg.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let ids: Vec<&str> = v["scenarios"].as_array().unwrap().iter().map(|s| s["id"].as_str().unwrap()).collect();
    assert_eq!(ids, vec!["S10"]);
}
