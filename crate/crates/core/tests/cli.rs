use std::path::PathBuf;

use openbook::cli::run;
use openbook::exit;
use serde_json::Value;

fn corpus() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn path(name: &str) -> String {
    corpus().join(name).to_string_lossy().into_owned()
}

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("openbook").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let (code, out, err) = call(&full);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}\n{err}"));
    (code, v)
}

#[test]
fn check_accepts_whole_corpus() {
    let entries = std::fs::read_dir(corpus()).unwrap();
    let mut files: Vec<String> = entries
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == "obk"))
        .map(|p| p.to_string_lossy().into_owned())
        .collect();
    files.sort();
    assert!(files.len() >= 12);
    let mut args = vec!["check"];
    args.extend(files.iter().map(String::as_str));
    let (code, _, err) = call(&args);
    assert_eq!(code, exit::OK, "{err}");
}

#[test]
fn sigma3_homology() {
    let (code, v) = json(&["homology", &path("sigma3.obk")]);
    assert_eq!(code, exit::OK);
    let h = if v.is_array() { v[0].clone() } else { v };
    let h = h.get("homology").cloned().unwrap_or(h);
    assert_eq!(h["H2"], "Z/3 + Z/3");
    assert_eq!(h["H1"], "0");
    assert_eq!(h["spin"], "yes");
}

#[test]
fn classify_reports_names() {
    let (code, out, _) = call(&["classify", &path("unknot_rot0.obk")]);
    assert_eq!(code, exit::OK);
    assert!(out.contains("S²×S³"), "{out}");
    assert!(out.contains("ξ₀"), "{out}");
    let (code, v) = json(&["classify", &path("figure5.obk")]);
    assert_eq!(code, exit::OK);
    let c = if v.is_array() { v[0].clone() } else { v };
    assert_eq!(c["m"], 2);
    assert_eq!(c["d"], 1);
}

#[test]
fn one_handle_pages_are_unsupported_for_homology() {
    let (code, _, err) = call(&["homology", &path("fig8.obk")]);
    assert_eq!(code, exit::UNSUPPORTED, "{err}");
}

#[test]
fn syntax_errors_exit_with_syntax_code() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.obk");
    std::fs::write(&bad, "knot A:\nl0 q7 r0\n").unwrap();
    let (code, _, _) = call(&["check", bad.to_str().unwrap()]);
    assert_eq!(code, exit::SYNTAX);
    let (code, _, _) = call(&["no-such-command"]);
    assert_eq!(code, exit::SYNTAX);
}

#[test]
fn missing_file_is_a_failure() {
    let (code, _, _) = call(&["check", "/nonexistent/x.obk"]);
    assert_eq!(code, exit::FAILURE);
}

#[test]
fn move_script_and_illegal_move() {
    let dir = tempfile::tempdir().unwrap();
    let ok = dir.path().join("ok.txt");
    std::fs::write(&ok, "moveI S\nmoveI_inv S\nflip S\n").unwrap();
    let out = dir.path().join("out.json");
    let (code, _, err) = call(&[
        "move",
        &path("shark_pos.obk"),
        ok.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, exit::OK, "{err}");
    let (code, v) = json(&["classify", out.to_str().unwrap()]);
    assert_eq!(code, exit::OK);
    let c = if v.is_array() { v[0].clone() } else { v };
    assert_eq!(c["d"], 1);

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "moveI_inv S\n").unwrap();
    let (code, _, _) = call(&["move", &path("shark_pos.obk"), bad.to_str().unwrap()]);
    assert_eq!(code, exit::ILLEGAL_MOVE);
}

#[test]
fn shipped_traces_verify_and_corruptions_fail() {
    for name in ["traces/trivial_g.json", "traces/ab_b.json"] {
        let (code, out, _) = call(&["tietze-verify", &path(name)]);
        assert_eq!(code, exit::OK, "{name}: {out}");
    }
    let text = std::fs::read_to_string(path("traces/ab_b.json")).unwrap();
    let mut v: Value = serde_json::from_str(&text).unwrap();
    v["steps"][0]["inverse"] = Value::Bool(false);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, v.to_string()).unwrap();
    let (code, _, _) = call(&["tietze-verify", bad.to_str().unwrap()]);
    assert_eq!(code, exit::ILLEGAL_MOVE);
}

#[test]
fn stable_certificate_verifies() {
    let (code, v) = json(&[
        "stable-verify",
        &path("traces/shark_left.json"),
        &path("traces/shark_right.json"),
        &path("traces/shark_stable.json"),
    ]);
    assert_eq!(code, exit::OK);
    assert_eq!(v["accepted"], true);
    assert_eq!(v["rank_identity"], true);
}

#[test]
fn ac_search_finds_short_trivializations() {
    let (code, v) = json(&["ac-search", "<a, b | a b, b>", "--depth", "4"]);
    assert_eq!(code, exit::OK);
    assert_eq!(v["outcome"], "found");
    let (code, v) = json(&["ac-search", "<a | a a>", "--depth", "3"]);
    assert_eq!(code, exit::OK);
    assert_eq!(v["outcome"], "exhausted");
}

#[test]
fn examples_and_render_write_files() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = call(&["examples", dir.path().to_str().unwrap()]);
    assert_eq!(code, exit::OK);
    assert!(out.lines().count() >= 17);
    let svg = dir.path().join("s.svg");
    let (code, _, _) = call(&["render", &path("sigma2.obk"), "--out", svg.to_str().unwrap()]);
    assert_eq!(code, exit::OK);
    assert!(std::fs::read_to_string(svg).unwrap().starts_with("<svg"));
}

#[test]
fn cover_doubles_the_twist_word() {
    let (code, out, _) = call(&["cover", &path("dtstar_tau.obk")]);
    assert_eq!(code, exit::OK);
    assert!(out.contains("twists: L L"), "{out}");
}

#[test]
fn fuzz_is_clean() {
    let (code, out, _) = call(&["fuzz", "--seed", "3", "--count", "50", "--steps", "6"]);
    assert_eq!(code, exit::OK, "{out}");
}

#[test]
fn parallel_batch_matches_serial() {
    let files: Vec<String> = ["sigma1.obk", "sigma2.obk", "sigma3.obk", "sigma5.obk"]
        .iter()
        .map(|f| path(f))
        .collect();
    let mut serial = vec!["homology"];
    serial.extend(files.iter().map(String::as_str));
    let mut parallel = vec!["--jobs", "4", "homology"];
    parallel.extend(files.iter().map(String::as_str));
    assert_eq!(call(&serial).1, call(&parallel).1);
}
