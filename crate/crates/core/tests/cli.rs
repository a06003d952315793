use std::path::PathBuf;

use cubal::cli::run_with;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let args: Vec<String> = std::iter::once("cubal").chain(args.iter().copied()).map(String::from).collect();
    let (mut o, mut e) = (Vec::new(), Vec::new());
    let code = run_with(&args, &mut o, &mut e);
    (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
}

#[test]
fn validate_file_and_generator_agree() {
    let (c1, a, _) = run(&["validate", &data("zz2.dgc")]);
    let (c2, b, _) = run(&["validate", "square:Z2"]);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
}

#[test]
fn broken_model_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(data("zz2.dgc")).unwrap();
    let path = dir.path().join("bad.dgc");
    std::fs::write(&path, text.replacen("  * -> 0\n", "  * -> 1\n", 1)).unwrap();
    let (code, out, _) = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.contains("FAIL edge.unit"));
}

#[test]
fn syntax_error_exits_two_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.dgc");
    std::fs::write(&path, "objects\n  x\nwidgets\n").unwrap();
    let (code, _, err) = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn eval_and_replay_scripts() {
    let (code, out, _) = run(&["eval", &data("zz2.dgc"), &data("cancellation.txt")]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("derivations: 2"));
    let (code, out, _) = run(&["replay", &data("zz2.dgc"), &data("cancellation.txt")]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn interval_loop_reports_budget_exceeded() {
    let (code, out, _) = run(&[
        "--coeq-budget",
        "500",
        "coeq",
        &data("point.dgc"),
        &data("interval.dgc"),
        &data("point_to_0.map"),
        &data("point_to_1.map"),
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("status: budget_exceeded"));
}

#[test]
fn vk_writes_json() {
    let (code, out, _) = run(&["--format", "json", "vk", "ind3", "--cover", "0,1", "--cover", "1,2"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["summary"]["status"], "finite");
}

#[test]
fn output_is_deterministic() {
    let a = run(&["--seed", "7", "theorem25", "square:ind3", "--samples", "200"]);
    let b = run(&["--seed", "7", "theorem25", "square:ind3", "--samples", "200"]);
    assert_eq!(a, b);
}

#[test]
fn zero_budget_is_rejected() {
    let (code, _, err) = run(&["--coeq-budget", "0", "vk", "Z2", "--cover", "0"]);
    assert_eq!(code, 2);
    assert!(err.contains("positive"));
}
