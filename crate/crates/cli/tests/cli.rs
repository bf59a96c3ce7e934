use std::io::Write;
use std::process::{Command, Output, Stdio};

const A1: &str = "dfa v1\nstates 3\nletters 2\ntable\n0 0 1\n1 2 2\n";
const IDENTITY: &str = "dfa v1\nstates 2\nletters 1\ntable\n0 1\n";

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_syncword"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn cerny4() -> String {
    let o = run(&["gen", "cerny", "--n", "4"], "");
    assert!(o.status.success());
    stdout(&o)
}

#[test]
fn gen_cerny_is_canonical() {
    assert_eq!(cerny4(), "dfa v1\nstates 4\nletters 2\ntable\n1 2 3 0\n1 1 2 3\n");
}

#[test]
fn analyze_a1() {
    let o = run(&["analyze", "-"], A1);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("synchronizable: yes"));
    assert!(out.contains("aperiodic: yes"));
    assert!(out.contains("sinks: 0 1 2"));
    assert!(out.contains("monoid_size: 7"));
}

#[test]
fn analyze_cerny_reports_witness() {
    let o = run(&["analyze", "-"], &cerny4());
    let out = stdout(&o);
    assert!(out.contains("aperiodic: no"));
    assert!(out.contains("witness: a"));
    assert!(out.contains("period: 4"));
}

#[test]
fn analyze_tsv_and_identity() {
    let o = run(&["analyze", "-", "--format", "tsv"], IDENTITY);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("synchronizable\tno"));
}

#[test]
fn analyze_monoid_cap() {
    let o = run(&["--monoid-cap", "10", "analyze", "-"], &cerny4());
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("monoid_size: capped"));
}

#[test]
fn synthesize_a1() {
    let o = run(&["synthesize", "-"], A1);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("word: aa\n"));
    assert!(out.contains("bound: 3\n"));
    assert!(out.contains("bound_ok: true\n"));
    assert!(out.contains("verified: true\n"));
}

#[test]
fn synthesize_cerny_falls_back() {
    let o = run(&["synthesize", "-"], &cerny4());
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("t_cycle: 0 1 0"));
    assert!(out.contains("bound_kind: none"));
    assert!(out.contains("verified: true"));
}

#[test]
fn synthesize_without_sink() {
    let o = run(&["synthesize", "-"], IDENTITY);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "not synchronizable\n");
}

#[test]
fn check_words() {
    let o = run(&["check", "-", "aa"], A1);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "synchronizes\n"));
    let o = run(&["check", "-", "a"], A1);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(1), "does not synchronize\n"));
    assert_eq!(run(&["check", "-", "ac"], A1).status.code(), Some(2));
}

#[test]
fn shortest_cerny() {
    let o = run(&["shortest", "-"], &cerny4());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("length: 9\n"));
    assert_eq!(run(&["--oracle-cap", "3", "shortest", "-"], &cerny4()).status.code(), Some(3));
    assert_eq!(run(&["shortest", "-"], IDENTITY).status.code(), Some(1));
}

#[test]
fn parse_errors_exit_2() {
    let o = run(&["analyze", "-"], "dfa v1\nstates 3\nletters 2\ntable\n0 0 1\n1 2 3\n");
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 6"));
    assert_eq!(run(&["analyze", "/nonexistent/file"], "").status.code(), Some(2));
}

#[test]
fn gen_is_deterministic() {
    let a = run(&["gen", "monotone", "--n", "6", "--k", "3", "--seed", "11"], "");
    let b = run(&["gen", "monotone", "--n", "6", "--k", "3", "--seed", "11"], "");
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(run(&["gen", "cerny", "--n", "1"], "").status.code(), Some(2));
}

#[test]
fn bench_rows_are_ordered_and_deterministic() {
    let args = ["bench", "--count", "40", "--n-min", "2", "--n-max", "7", "--seed", "5"];
    let a = stdout(&run(&args, ""));
    assert_eq!(a, stdout(&run(&args, "")));
    let lines: Vec<&str> = a.lines().collect();
    assert_eq!(lines[0], "seed\tn\tk\taperiodic\tsynchronizable\toracle_len\tsynth_len\tbound\tbound_ok");
    assert_eq!(lines.len(), 41);
    for (i, line) in lines[1..].iter().enumerate() {
        let cols: Vec<&str> = line.split('\t').collect();
        assert_eq!(cols.len(), 9);
        assert_eq!(cols[0], (5 + i).to_string());
        assert_eq!(cols[3], "true", "monotone automata are aperiodic");
        if cols[4] == "true" {
            assert_eq!(cols[8], "true");
            let (oracle, synth): (i64, i64) = (cols[5].parse().unwrap(), cols[6].parse().unwrap());
            assert!(oracle <= synth);
        }
    }
}
