use std::fs;
use std::process::{Command, Output};

const TREFOIL: &str = "PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]";

fn khpos(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_khpos")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn compute_trefoil_text() {
    let o = khpos(&["compute", "--pd", TREFOIL, "--all"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("t + t^3 - t^4"), "{s}");
    assert!(s.contains("1 + z^2"));
    assert!(s.contains("j_lower 1 <= j_upper 9"));
}

#[test]
fn kinked_unknot_reduces() {
    let o = khpos(&["compute", "--braid", "strands=2; 1", "--format", "record"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("\"jones\":\"1\""), "{s}");
    assert!(s.contains("\"reduced_crossings\":0"));
}

#[test]
fn selected_invariants_only() {
    let o = khpos(&["compute", "--pd", TREFOIL, "--jones"]);
    let s = stdout(&o);
    assert!(s.contains("jones"));
    assert!(!s.contains("khovanov"));
    assert!(!s.contains("conway"));
}

#[test]
fn record_output_is_deterministic() {
    let run = || {
        let s = stdout(&khpos(&["test", "--pd", TREFOIL, "--braid", "strands=3; 1 1 2 1 2", "--format", "record"]));
        s.lines().map(|l| l.split("\"elapsed_ms\"").next().unwrap().to_string()).collect::<Vec<_>>()
    };
    let a = run();
    assert_eq!(a.len(), 2);
    assert_eq!(a, run());
}

#[test]
fn test_reports_equality_for_trefoil() {
    let o = khpos(&["test", "--pd", TREFOIL]);
    let s = stdout(&o);
    assert!(s.contains("KhovanovTest       9 <= 9 : Pass"), "{s}");
}

#[test]
fn exit_codes() {
    assert_eq!(khpos(&["compute"]).status.code(), Some(2));
    assert_eq!(khpos(&["compute", "--frobnicate"]).status.code(), Some(2));
    assert_eq!(khpos(&["compute", "--pd", "PD[X[1,2]]"]).status.code(), Some(1));
}

#[test]
fn batch_file_isolates_bad_lines() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("links.txt");
    fs::write(&path, format!("# fixtures\ntrefoil: {TREFOIL}\nbroken: PD[X[1,2,3]]\nhopf: strands=2; 1 1\n")).unwrap();
    let o = khpos(&["compute", "--file", path.to_str().unwrap(), "--jones"]);
    assert_eq!(o.status.code(), Some(1));
    let s = stdout(&o);
    assert!(s.contains("== trefoil [ok]"));
    assert!(s.contains("== broken [error]"));
    assert!(s.contains("== hopf [ok]"));
}

#[test]
fn ingest_csv_with_columns_and_out() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("table.csv");
    fs::write(&csv, "Name,Jones Polynomial\n3_1,t+ t^3-t^4\n").unwrap();
    let out = dir.path().join("out.jsonl");
    let o = khpos(&[
        "ingest",
        csv.to_str().unwrap(),
        "--columns",
        "name=Name,jones=Jones Polynomial",
        "--test",
        "--format",
        "record",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let s = fs::read_to_string(&out).unwrap();
    assert!(s.contains("\"name\":\"3_1\""));
    assert!(s.contains("JonesTest"));
}

#[test]
fn missing_column_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("table.csv");
    fs::write(&csv, "Name\n3_1\n").unwrap();
    let o = khpos(&["ingest", csv.to_str().unwrap(), "--columns", "jones=Jones"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn survey_small() {
    let o = khpos(&["survey", "--survey", "strands=2,length=3"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("violations 0"));
    assert!(s.contains("equality strands=2; 1 1 1"));
    assert_eq!(khpos(&["survey", "--survey", "bogus"]).status.code(), Some(2));
}
