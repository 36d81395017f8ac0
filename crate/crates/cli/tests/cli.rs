mod common;

use std::fs;

use common::{bin, data_dir, golden_bytes, golden_dir, run, CASES, D2};
use serde_json::Value;

/// Set `SHRUBKIT_BLESS=1` to rewrite the golden files.
#[test]
fn golden_outputs() {
    let bless = std::env::var_os("SHRUBKIT_BLESS").is_some();
    let dir = golden_dir();
    fs::create_dir_all(&dir).unwrap();
    let mut failures = Vec::new();
    for case in CASES {
        let (code, out, err) = run(case.args);
        assert_eq!(
            code,
            case.code,
            "{}: exit code\n{}",
            case.name,
            String::from_utf8_lossy(&err)
        );
        let got = golden_bytes(&out, &err);
        let path = dir.join(format!("{}.out", case.name));
        if bless {
            fs::write(&path, &got).unwrap();
            continue;
        }
        match fs::read(&path) {
            Ok(want) if want == got => {}
            Ok(_) => failures.push(format!(
                "{}: output differs from {}",
                case.name,
                path.display()
            )),
            Err(_) => failures.push(format!("{}: missing {}", case.name, path.display())),
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn stderr_is_one_json_line_on_failure() {
    for case in CASES.iter().filter(|c| c.code != 0 && c.code != 2) {
        let (_, _, err) = run(case.args);
        let text = String::from_utf8(err).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 1, "{}", case.name);
        let v: Value = serde_json::from_str(lines[0]).unwrap();
        assert!(
            v["error"].is_string() && v["message"].is_string(),
            "{}",
            case.name
        );
    }
}

#[test]
fn adequacy_witness_is_a_disagreeing_pair_of_pairs() {
    let (code, _, err) = run(&[
        "bush",
        "build",
        "-g",
        "p4.graph",
        "-r",
        "1",
        "-q",
        "0",
        "--formula",
        D2,
    ]);
    assert_eq!(code, 3);
    let v: Value = serde_json::from_slice(&err).unwrap();
    let w: Vec<usize> = serde_json::from_value(v["witness"].clone()).unwrap();
    // distance on P4 is |i - j|
    let d2 = |a: usize, b: usize| a != b && a.abs_diff(b) <= 2;
    assert_ne!(d2(w[0], w[1]), d2(w[2], w[3]));
}

#[test]
fn tampered_bush_reports_the_flipped_pair() {
    let (code, _, err) = run(&[
        "bush",
        "verify",
        "k2.tampered.bush.json",
        "-g",
        "k2.graph",
        "--formula",
        "E(x,y)",
    ]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_slice(&err).unwrap();
    let pair: Vec<usize> = serde_json::from_value(v["witness"]["pair"].clone()).unwrap();
    assert_eq!(pair, [0, 1]);
}

#[test]
fn build_then_verify_through_files() {
    let tmp = tempfile::tempdir().unwrap();
    let g = data_dir().join("colored.graph");
    let g = g.to_str().unwrap();
    for (kind, ext) in [("bush", "bush.json"), ("qbush", "qb.json")] {
        for phi in ["E(x,y)", "E(x,y) & red(x)", D2] {
            let out = tmp.path().join(format!("a.{ext}"));
            let out = out.to_str().unwrap();
            let (code, _, err) = run(&[
                kind,
                "build",
                "-g",
                g,
                "-r",
                "2",
                "-q",
                "1",
                "--formula",
                phi,
                "-o",
                out,
            ]);
            assert_eq!(code, 0, "{kind} {phi}: {}", String::from_utf8_lossy(&err));
            let (code, _, _) = run(&[kind, "verify", out, "-g", g, "--formula", phi]);
            assert_eq!(code, 0, "{kind} {phi}");
        }
    }
}

#[test]
fn formula_file_matches_inline_formula() {
    let tmp = tempfile::tempdir().unwrap();
    let f = tmp.path().join("phi.txt");
    fs::write(&f, format!("{D2}\n")).unwrap();
    let a = run(&["graph", "interpret", "-g", "p4.graph", "--formula", D2]);
    let b = run(&[
        "graph",
        "interpret",
        "-g",
        "p4.graph",
        "--formula-file",
        f.to_str().unwrap(),
    ]);
    assert_eq!(a, b);
    assert_eq!(a.0, 0);
}

#[test]
fn order_file_matches_csv() {
    let tmp = tempfile::tempdir().unwrap();
    let f = tmp.path().join("ord.txt");
    fs::write(&f, "# reversed\norder 2 1 0\n").unwrap();
    let a = run(&[
        "wcol",
        "-g",
        "p3.graph",
        "--order",
        f.to_str().unwrap(),
        "-r",
        "1,2",
    ]);
    let b = run(&["wcol", "-g", "p3.graph", "--order", "2,1,0", "-r", "1,2"]);
    assert_eq!(a, b);
    let (code, _, _) = run(&["wcol", "-g", "p3.graph", "--order", "0,1"]);
    assert_eq!(code, 2);
}

#[test]
fn kernel_writes_graph_formula_and_ledger() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("k");
    let (code, out, _) = run(&[
        "kernel",
        "-g",
        "star50.graph",
        "-A",
        "7",
        "--formula",
        "exists y. E(x,y)",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let ledger: Value = serde_json::from_slice(&out).unwrap();
    assert!(ledger["total_size"].as_u64().unwrap() <= 4);
    assert_eq!(fs::read(dir.join("ledger.json")).unwrap(), out);
    let g = shrubkit::graph::load_graph(&fs::read_to_string(dir.join("kernel.graph")).unwrap())
        .unwrap();
    assert_eq!(g.n() as u64, ledger["total_size"].as_u64().unwrap());
    let phi = shrubkit::logic::parse_formula(
        fs::read_to_string(dir.join("kernel.formula"))
            .unwrap()
            .trim(),
    )
    .unwrap();
    assert_eq!(phi.free_vars().into_iter().collect::<Vec<_>>(), ["x"]);
}

#[test]
fn thread_count_does_not_change_output() {
    let args = [
        "qbush",
        "stats",
        "-g",
        "colored.graph",
        "-r",
        "2",
        "--format",
        "json",
    ];
    let base = run(&args);
    for threads in ["1", "3"] {
        let out = bin()
            .args(args)
            .env("SHRUBKIT_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!((out.status.code().unwrap(), out.stdout, out.stderr), base);
    }
    let bad = bin()
        .args(args)
        .env("SHRUBKIT_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn wrong_format_is_a_usage_error() {
    let (code, _, _) = run(&["bush", "decode", "k2.bush.json", "--format", "dot"]);
    assert_eq!(code, 2);
}
