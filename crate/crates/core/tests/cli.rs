use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bs-shift"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn eval_prints_normal_forms() {
    assert_eq!(stdout(&["eval", "-N", "2", "b a"]), "a^2 b (0,2,1)\n");
    assert_eq!(stdout(&["eval", "-N", "2", ""]), "identity (0,0,0)\n");
    assert_eq!(stdout(&["eval", "-N", "3", "B a a a b"]), "a (0,1,0)\n");
    let json: serde_json::Value =
        serde_json::from_str(&stdout(&["eval", "-N", "2", "B a", "--format", "json"])).unwrap();
    assert_eq!(json["j"], 1);
    assert_eq!(json["k"], "1");
}

#[test]
fn parse_errors_are_usage_errors() {
    let out = run(&["eval", "-N", "2", "a b c"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("position 4"));
    assert_eq!(run(&["eval", "-N", "1", "a"]).status.code(), Some(2));
    assert_eq!(
        run(&["gamma", "-N", "2", "-m", "2", "--format", "dot"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn count_examples() {
    for (args, want) in [
        (["-N", "2", "-n", "3", "-m", "1"], "6"),
        (["-N", "2", "-n", "2", "-m", "2"], "0"),
        (["-N", "3", "-n", "2", "-m", "3"], "2"),
    ] {
        let mut full = vec!["count"];
        full.extend(args);
        assert_eq!(stdout(&full).lines().next(), Some(want), "{args:?}");
    }
}

#[test]
fn counts_do_not_depend_on_threads() {
    let base = [
        "count",
        "-N",
        "2",
        "-n",
        "4",
        "-m",
        "3",
        "--method",
        "backtracking",
        "--format",
        "json",
    ];
    let one = stdout(&[&base[..], &["--threads", "1"]].concat());
    let four = stdout(&[&base[..], &["--threads", "4"]].concat());
    assert_eq!(one, four);
    assert!(one.contains("18697202256"));
}

#[test]
fn gamma_rows() {
    let text = stdout(&["gamma", "-N", "2", "-m", "4", "--format", "csv"]);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "m,brute,closed,ratio");
    assert_eq!(&rows[2..], ["2,14,14,7/4", "3,30,30,5/4", "4,62,62,31/32"]);
}

#[test]
fn entropy_and_resource_exit() {
    let csv = stdout(&["entropy", "-N", "2", "-n", "3", "-m", "3"]);
    assert_eq!(csv.lines().count(), 4);
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",ok")));
    let out = run(&[
        "entropy",
        "-N",
        "2",
        "-n",
        "4",
        "-m",
        "3",
        "--max-states",
        "10",
        "--max-nodes",
        "100",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stdout).contains("resource"));
    let out = run(&[
        "count",
        "-N",
        "2",
        "-n",
        "4",
        "-m",
        "3",
        "--max-states",
        "10",
        "--max-nodes",
        "100",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn frozen_windows() {
    let text = stdout(&["frozen", "-N", "4", "--window", "R2"]);
    assert!(text.contains("unique: true"), "{text}");
    assert!(text.contains("proper on ball(8): true"));
    // the N = 0 mod 3 formula is not proper for even N
    let out = run(&[
        "frozen",
        "-N",
        "6",
        "--variant",
        "frozen-mod0",
        "--radius",
        "2",
        "--window",
        "r2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("carries"));
}

#[test]
fn periodic_search() {
    let dir = tempfile::tempdir().unwrap();
    let gcs3 = dir.path().join("gcs3.json");
    let all_distinct: Vec<[u8; 2]> = (0..3)
        .flat_map(|s| (0..3).filter(move |&t| t != s).map(move |t| [s, t]))
        .collect();
    std::fs::write(
        &gcs3,
        serde_json::json!({"n": 3, "allowed_a": all_distinct, "allowed_b": all_distinct})
            .to_string(),
    )
    .unwrap();
    assert_eq!(
        stdout(&["periodic", "--sft", gcs3.to_str().unwrap()]),
        "none\n"
    );
    let two = dir.path().join("two.json");
    std::fs::write(
        &two,
        r#"{"n": 2, "allowed_a": [[0,0],[1,1]], "allowed_b": [[0,1],[1,0]]}"#,
    )
    .unwrap();
    let w: serde_json::Value =
        serde_json::from_str(&stdout(&["periodic", "--sft", two.to_str().unwrap()])).unwrap();
    assert_eq!(w["levels"], "01");
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{").unwrap();
    assert_eq!(
        run(&["periodic", "--sft", bad.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn witness_families() {
    let text = stdout(&["witness", "-N", "3", "-m", "2"]);
    assert!(
        text.contains("family size: 512") && text.contains("count >= family size: true"),
        "{text}"
    );
    let text = stdout(&["witness", "-N", "2", "-m", "2"]);
    assert!(
        text.contains("free cells: 6") && text.contains("verified members: 64"),
        "{text}"
    );
    assert_eq!(
        run(&["witness", "-N", "4", "-m", "2"]).status.code(),
        Some(1)
    );
}

#[test]
fn random_runs_are_reproducible() {
    let a = stdout(&["glue", "--trials", "20", "--seed", "7"]);
    assert_eq!(a, stdout(&["glue", "--trials", "20", "--seed", "7"]));
    assert!(a.contains("glued: 20/20"));
    assert!(stdout(&["extend", "--trials", "20"]).contains("20/20"));
}

#[test]
fn export_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let win = dir.path().join("r2.json");
    stdout(&[
        "export",
        "-N",
        "2",
        "--rect",
        "2",
        "--format",
        "json",
        "-o",
        win.to_str().unwrap(),
    ]);
    let text = stdout(&["window", "--window-file", win.to_str().unwrap()]);
    assert_eq!(text, "vertices: 8\nedges: 9\nboundary: 14\n");
    let dot = stdout(&[
        "export",
        "-N",
        "2",
        "--rect",
        "1",
        "--config",
        "frozen-mod2",
        "--format",
        "dot",
    ]);
    assert!(dot.contains("label=\"a : 1\""));
    // a pattern export can be extended from file
    let pat = dir.path().join("p.json");
    stdout(&[
        "export",
        "-N",
        "4",
        "--rect",
        "1",
        "--config",
        "frozen-mod1",
        "--format",
        "json",
        "-o",
        pat.to_str().unwrap(),
    ]);
    assert!(stdout(&["extend", "--pattern", pat.to_str().unwrap()]).contains("admissible"));
}
