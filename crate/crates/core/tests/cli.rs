use std::process::{Command, Output};

use triq::{Verdict, Witness};

fn triq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_triq"))
        .args(args)
        .env_remove("TRIQ_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn decide_examples() {
    let o = triq(&[
        "decide", "--set", "F", "--p", "2", "--mu", "0.5,0.5", "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Verdict = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.member);
    assert_eq!(v.clause.tag(), "Thm2.4(i)");

    let o = triq(&["decide", "--set", "F", "--p", "2", "--mu", "0.5,0.5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(
        stdout(&o).starts_with("member of F(2) by Thm 2.4(i)"),
        "{}",
        stdout(&o)
    );

    let o = triq(&["decide", "--set", "F", "--p", "2", "--mu", "1,0,1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("mu entries must be nonzero"));
    assert!(o.stdout.is_empty());
}

#[test]
fn verdict_json_round_trips() {
    for (set, p, mu) in [
        ("F", "2", "0.5,0.5"),
        ("F", "0.5", "1,2"),
        ("G", "3", "4,-0.5,-0.25"),
        ("G", "2", "-1,-1"),
        ("G", "0.7", "1,1,-1"),
        ("H", "2", "-0.25,-0.25"),
        ("H", "0.5", "1,-1"),
    ] {
        let o = triq(&["decide", "--set", set, "--p", p, "--mu", mu, "--json"]);
        assert_eq!(o.status.code(), Some(0));
        let text = stdout(&o);
        let v: Verdict = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string(&v).unwrap(), text.trim_end());
    }
}

#[test]
fn falsify_witness_round_trips() {
    let o = triq(&[
        "falsify", "--set", "F", "--p", "2", "--mu", "0.6,0.6", "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let w: Witness = serde_json::from_value(report["witness"].clone()).unwrap();
    assert!((w.gap + 1.0 / 6.0).abs() < 1e-9, "{}", w.gap);
    assert_eq!(serde_json::to_value(&w).unwrap(), report["witness"]);

    let o = triq(&["falsify", "--set", "F", "--p", "2", "--mu", "0.6,0.6"]);
    assert!(
        stdout(&o).starts_with("witness in lq:2:2"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn falsify_in_other_spaces() {
    for space in ["lq:1:2", "lq:inf:3", "lq:3.5:4"] {
        let o = triq(&[
            "falsify", "--set", "G", "--p", "2", "--mu", "1.5,-1", "--space", space,
        ]);
        assert_eq!(o.status.code(), Some(0), "{space}: {}", stderr(&o));
        assert!(stdout(&o).starts_with(&format!("witness in {space}")));
    }
}

#[test]
fn falsify_seed_env_fallback() {
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_triq"));
        cmd.args([
            "falsify", "--set", "F", "--p", "2", "--mu", "0.3,0.3", "--budget", "300",
        ]);
        cmd.args(extra).env_remove("TRIQ_SEED");
        if let Some(v) = env {
            cmd.env("TRIQ_SEED", v);
        }
        cmd.output().unwrap()
    };
    let flag = run(None, &["--seed", "9"]);
    let env = run(Some("9"), &[]);
    assert_eq!(flag.status.code(), Some(0));
    assert_eq!(flag.stdout, env.stdout);
    assert!(stdout(&flag).starts_with("no witness found (min gap = "));
    assert_eq!(run(Some("nine"), &[]).status.code(), Some(2));
}

#[test]
fn envelope_writes_file() {
    let dir = std::env::temp_dir().join(format!("triq-envelope-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("h.csv");
    let o = triq(&[
        "envelope",
        "--p",
        "2",
        "--n",
        "3",
        "--grid",
        "4",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let csv = std::fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("a1,a2,h_p"));
    assert_eq!(lines.count(), 10);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["decide", "--set", "F", "--p", "2.x", "--mu", "1"][..],
        &["decide", "--set", "F", "--p", "-1", "--mu", "1"],
        &[
            "decide",
            "--set",
            "F",
            "--p",
            "2",
            "--mu",
            "1",
            "--frobnicate",
        ],
        &["envelope", "--p", "0.5", "--n", "2", "--grid", "3"],
        &["crosscheck", "--n-range", "3"],
        &[
            "falsify", "--set", "F", "--p", "2", "--mu", "1", "--budget", "0",
        ],
        &["bogus"],
    ] {
        let o = triq(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn crosscheck_json_is_stable() {
    let args = [
        "crosscheck",
        "--trials",
        "20",
        "--seed",
        "5",
        "--p-range",
        "0.3,3",
        "--n-range",
        "1,4",
        "--json",
    ];
    let a = triq(&args);
    let b = triq(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["disagreements"], 0);
    assert_eq!(v["agreements"], 40);
}
