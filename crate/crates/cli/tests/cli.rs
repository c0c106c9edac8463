use std::io::Write as _;
use std::process::{Command, Stdio};

fn run(args: &[&str], input: &str) -> (i32, String, String) {
    let mut argv = vec!["vee".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = vee_cli::run(&argv, &mut input.as_bytes(), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

const B2_UNEQUAL: &str = "dim 2\nvector 1 0 mult 1\nvector 0 1 mult 2\nvector 1 1 mult 1\nvector 1 -1 mult 1\n";

#[test]
fn check_a2_golden() {
    let (code, out, _) = run(&["check", "catalog:A2"], "");
    assert_eq!(code, 0);
    assert_eq!(out, "trig-vee: PASS, irreducible: yes, lambda2 = 36\n");
}

#[test]
fn check_a2_from_stdin() {
    let text = "# A2\ndim 2\nvector 1 0 mult 1\nvector 0 1 mult 1\nvector 1 1 mult 1\n";
    let (code, out, _) = run(&["check", "-"], text);
    assert_eq!(code, 0);
    assert_eq!(out, "trig-vee: PASS, irreducible: yes, lambda2 = 36\n");
}

#[test]
fn failing_series_prints_witness() {
    let (code, out, _) = run(&["check", "-"], B2_UNEQUAL);
    assert_eq!(code, 1);
    assert!(out.starts_with("trig-vee: FAIL, irreducible: yes"));
    assert!(out.contains("series failure: base (1, 1), members (1, -1), residual = 1/12"));
}

#[test]
fn orthogonal_pair_has_no_solution() {
    let (code, out, _) = run(&["check", "catalog:OrthogonalPair"], "");
    assert_eq!(code, 1);
    assert!(out.contains("lambda2: NO SOLUTION (reducible configuration)"));
    let (code, out, _) = run(&["lambda", "catalog:A1+G2"], "");
    assert_eq!(code, 1);
    assert!(out.contains("lambda2: NO SOLUTION"));
}

#[test]
fn declared_lambda_mismatch() {
    let text = "dim 2\nvector 1 0 mult 1\nvector 0 1 mult 1\nvector 1 1 mult 1\nlambda2 35\n";
    let (code, out, _) = run(&["check", "-"], text);
    assert_eq!(code, 1);
    assert!(out.contains("declared lambda2 = 35 does not match"));
    let (code, _, _) = run(&["check", "-"], &text.replace("35", "36"));
    assert_eq!(code, 0);
}

#[test]
fn input_errors_exit_2() {
    let (code, _, err) = run(&["check", "-"], "dim 2\nvector 0 0 mult 1\n");
    assert_eq!(code, 2);
    assert!(err.contains("line 2, column 8"), "{err}");
    let (code, _, _) = run(&["check", "-"], "dim 2\nvector 1 0 mult ?a\n");
    assert_eq!(code, 2);
    let (code, _, _) = run(&["check", "catalog:Nope"], "");
    assert_eq!(code, 2);
    let (code, _, _) = run(&["check", "catalog:A2", "--set", "q=1"], "");
    assert_eq!(code, 2);
    let (code, _, _) = run(&["frobnicate"], "");
    assert_eq!(code, 2);
    let (code, _, _) = run(&["check", "/nonexistent/file.vee"], "");
    assert_eq!(code, 2);
    let (code, out, _) = run(&["--help"], "");
    assert_eq!(code, 0);
    assert!(out.contains("Usage"));
}

#[test]
fn degenerate_form_fails() {
    let (code, out, _) = run(&["check", "-"], "dim 2\nvector 1 0 mult 1\nvector 2 0 mult -1/4\n");
    assert_eq!(code, 1);
    assert!(out.contains("degenerate"));
}

#[test]
fn wdvv_and_report_kv() {
    let (code, out, _) = run(&["wdvv", "catalog:G2", "--report-kv", "--seed", "3"], "");
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("wdvv = pass"));
    assert!(out.contains("lambda2 = 288/5"));
    assert!(out.ends_with("exit = 0\n"));
    let text = "dim 2\nvector 1 0 mult 1\nvector 0 1 mult 1\nvector 1 1 mult 1\nlambda2 40\n";
    let (code, out, _) = run(&["wdvv", "-"], text);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("wdvv: FAIL"));
}

#[test]
fn kv_lines_parse() {
    let (_, out, _) = run(&["check", "catalog:B3", "--report-kv"], "");
    let kv: Vec<(&str, &str)> = out.lines().filter_map(|l| l.split_once(" = ")).collect();
    assert!(kv.contains(&("command", "check")));
    assert!(kv.contains(&("trig_vee", "pass")));
    assert!(kv.contains(&("exit", "0")));
}

#[test]
fn cms_with_metric_file() {
    let (code, out, _) = run(&["cms", "catalog:A2"], "");
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("identity constant = -0.666666666667"));
    assert!(out.contains("eigenvalue = 2.666666666667"));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("metric.txt");
    std::fs::write(&path, "# scaled on one summand\n1 0\n0 2\n").unwrap();
    let pair = "dim 2\nvector 1 0 mult 1\nvector 0 1 mult 1\n";
    let (code, out, _) = run(&["cms", "-", "--metric", path.to_str().unwrap()], pair);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("component: scalar 1, dimension 1"));
    assert!(out.contains("component: scalar 2, dimension 1"));
    std::fs::write(&path, "1 0\n").unwrap();
    let (code, _, _) = run(&["cms", "-", "--metric", path.to_str().unwrap()], pair);
    assert_eq!(code, 2);
}

#[test]
fn constraints_family_search() {
    let (code, out, _) = run(&["constraints", "catalog:G2timesScaledA2"], "");
    assert_eq!(code, 0);
    assert!(out.contains("variables: s l d"));
    assert!(out.contains("distinct up to scale: 1"));

    let args = [
        "family", "catalog:Prop5", "--param", "t", "--param", "s",
        "--set", "c1=t(3t-2s)/(3t+4s)", "--set", "c2=3t+2s", "--set", "d2=s",
        "--set", "a=3t", "--set", "b=t",
    ];
    let (code, out, _) = run(&args, "");
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("denominator of c1: 3*t + 4*s"));
    let mut bad = args.to_vec();
    bad[9] = "c2=3t";
    let (code, out, _) = run(&bad, "");
    assert_eq!(code, 1);
    assert!(out.contains("family: FAIL"));

    let (code, out, _) = run(&["search", "catalog:TenVector", "--normalize", "c"], "");
    assert_eq!(code, 0);
    assert!(out.contains("a=3/2 b=3/8 c=1 d=1/4"));
}

#[test]
fn export_round_trip() {
    for name in ["A2", "B3", "G2", "Prop4", "Prop5", "TenVector", "A2+B2"] {
        let (code, exported, _) = run(&["catalog", "export", name], "");
        assert_eq!(code, 0);
        let direct = run(&["check", &format!("catalog:{name}"), "--report-kv"], "");
        let piped = run(&["check", "-", "--report-kv"], &exported);
        assert_eq!(direct, piped, "{name}");
    }
    let (_, exported, _) = run(&["catalog", "export", "A2", "--set", "ca=2", "--set", "cb=3", "--set", "cg=5"], "");
    assert_eq!(
        run(&["check", "-"], &exported),
        run(&["check", "catalog:A2", "--set", "ca=2", "--set", "cb=3", "--set", "cg=5"], "")
    );
}

#[test]
fn deterministic_output() {
    for args in [
        vec!["wdvv", "catalog:B3", "--seed", "11"],
        vec!["cms", "catalog:G2", "--points", "5"],
        vec!["search", "catalog:G2timesScaledA2", "--normalize", "l", "--starts", "16"],
    ] {
        assert_eq!(run(&args, ""), run(&args, ""));
    }
}

#[test]
fn catalog_list_and_show() {
    let (code, out, _) = run(&["catalog", "list"], "");
    assert_eq!(code, 0);
    assert_eq!(out.lines().next().unwrap().split_whitespace().next(), Some("A1"));
    assert!(out.lines().count() >= 16);
    let (code, out, _) = run(&["catalog", "show", "TenVector"], "");
    assert_eq!(code, 0);
    assert!(out.contains("lambda2 = 225/4 [DERIVED]"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_vee");
    let status = Command::new(bin).args(["check", "catalog:A2"]).output().unwrap();
    assert_eq!(status.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&status.stdout), "trig-vee: PASS, irreducible: yes, lambda2 = 36\n");

    let mut child = Command::new(bin)
        .args(["check", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(B2_UNEQUAL.as_bytes()).unwrap();
    assert_eq!(child.wait_with_output().unwrap().status.code(), Some(1));

    let status = Command::new(bin).arg("nonsense").output().unwrap();
    assert_eq!(status.status.code(), Some(2));
}
