//! The `grepo` binary: command examples and the exit-code contract.

mod common;

use std::path::{Path, PathBuf};

use common::*;
use grepo_cli::BenchReport;
use serde_json::Value;
use tempfile::TempDir;

struct F3 {
    tmp: TempDir,
    config: PathBuf,
    db: PathBuf,
}

impl F3 {
    fn drilled() -> Self {
        let tmp = tempfile::tempdir().unwrap();
        let repo = make_f3(tmp.path(), false).unwrap();
        let db = tmp.path().join("f3.db");
        let config = write_config(tmp.path(), "f3", "F3", &repo, &db, "").unwrap();
        grepo_ok(&["drill", "--config", s(&config)]).unwrap();
        Self { tmp, config, db }
    }

    fn mine(&self, args: &[&str]) -> Run {
        let mut full = vec!["mine"];
        full.extend_from_slice(args);
        full.extend_from_slice(&["--project", "F3", "--db", s(&self.db)]);
        grepo(&full, &[]).unwrap()
    }

    fn path(&self, name: &str) -> PathBuf {
        self.tmp.path().join(name)
    }
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn drill_prints_a_report_and_rerun_creates_nothing() {
    let f3 = F3::drilled();
    let run = grepo(&["drill", "--config", s(&f3.config)], &[]).unwrap();
    assert_eq!(run.code, 0, "{}", run.stderr);
    let report: Value = serde_json::from_str(&run.stdout).unwrap();
    assert_eq!(report["commits"], 3);
    for section in ["nodes", "edges"] {
        for (label, c) in report[section].as_object().unwrap() {
            assert_eq!(c["created"], 0, "{label}");
        }
    }
}

#[test]
fn config_problems_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("c.yaml");
    std::fs::write(&cfg, "project_id: F3\n").unwrap();
    let run = grepo(&["drill", "--config", s(&cfg)], &[]).unwrap();
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("repo_path"), "{}", run.stderr);

    let run = grepo(&["drill", "--config", s(&tmp.path().join("absent.yaml"))], &[]).unwrap();
    assert_eq!(run.code, 2);
    std::fs::write(&cfg, "project_id: [unclosed\n").unwrap();
    assert_eq!(grepo(&["drill", "--config", s(&cfg)], &[]).unwrap().code, 2);
    assert_eq!(grepo(&["frobnicate"], &[]).unwrap().code, 2);
}

#[test]
fn drill_failures_exit_1() {
    let tmp = tempfile::tempdir().unwrap();
    let db = tmp.path().join("g.db");
    let cfg = write_config(tmp.path(), "c", "P", &tmp.path().join("not-a-repo"), &db, "").unwrap();
    assert_eq!(grepo(&["drill", "--config", s(&cfg)], &[]).unwrap().code, 1);

    let repo = make_f3(tmp.path(), false).unwrap();
    let cfg = write_config(tmp.path(), "c", "P", &repo, &db, "").unwrap();
    std::fs::write(tmp.path().join("g.db.lock"), "4242\n").unwrap();
    let run = grepo(&["drill", "--config", s(&cfg)], &[]).unwrap();
    assert_eq!(run.code, 1);
    assert!(run.stderr.contains("locked"), "{}", run.stderr);
}

#[test]
fn q2_csv_lists_three_updates_oldest_first() {
    let f3 = F3::drilled();
    let run = f3.mine(&["q2", "--file", "b.py", "--format", "csv"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let lines: Vec<&str> = run.stdout.lines().collect();
    assert_eq!(lines[0], "commit_sha,timestamp,nloc");
    assert_eq!(lines.len(), 4);
    let stamps: Vec<&str> = lines[1..].iter().map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(stamps, ["1600000000", "1600086400", "1600172800"]);
    // The pre-rename path names the same file.
    assert_eq!(f3.mine(&["q2", "--file", "a.py", "--format", "csv"]).stdout, run.stdout);
}

#[test]
fn q5_prints_a_single_float() {
    let f3 = F3::drilled();
    let run = f3.mine(&["q5", "--dev", "a@x.y"]);
    assert_eq!((run.code, run.stdout.as_str()), (0, "2.0\n"));
    assert_eq!(f3.mine(&["q5", "--dev", "A@X.Y", "--format", "json"]).stdout, "2.0\n");
    assert_eq!(f3.mine(&["q5", "--dev", "b@x.y"]).stdout, "3.0\n");
}

#[test]
fn q4_matches_the_golden_csv() {
    let f3 = F3::drilled();
    let run = f3.mine(&["q4", "--dev", "a@x.y"]);
    let golden = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/f3_q4_alice.csv")).unwrap();
    assert_eq!(run.stdout, golden);
}

#[test]
fn q3_modes_agree() {
    let f3 = F3::drilled();
    let it = f3.mine(&["q3", "--file", "b.py", "--mode", "iterative"]);
    let sp = f3.mine(&["q3", "--file", "b.py", "--mode", "single-pass"]);
    assert_eq!(it.code, 0);
    assert_eq!(it.stdout, sp.stdout);
    assert_eq!(it.stdout.lines().count(), 4);
}

#[test]
fn unknown_targets_exit_3() {
    let f3 = F3::drilled();
    for args in [
        &["q2", "--file", "nope.py"][..],
        &["q3", "--file", "nope.py"],
        &["q4", "--dev", "nobody@x.y"],
        &["q5", "--dev", "nobody@x.y"],
        &["commits", "--branch", "nope"],
        &["method-history", "--method", "not-an-id"],
    ] {
        let run = f3.mine(args);
        assert_eq!(run.code, 3, "{args:?}: {}", run.stderr);
        assert!(run.stdout.is_empty());
    }
}

#[test]
fn usage_errors_exit_2() {
    let f3 = F3::drilled();
    assert_eq!(f3.mine(&["q2"]).code, 2);
    assert_eq!(f3.mine(&["q9"]).code, 2);
    assert_eq!(f3.mine(&["worst-case"]).code, 2);
    let run = grepo(&["mine", "q2", "--project", "F3", "--file", "b.py", "--db", s(&f3.path("absent.db"))], &[]).unwrap();
    assert_eq!(run.code, 2);
    assert_eq!(grepo(&["mine", "q2", "--project", "F3", "--file", "b.py"], &[]).unwrap().code, 2);
}

#[test]
fn store_comes_from_grepo_db_unless_the_flag_is_given() {
    let f3 = F3::drilled();
    let env = [("GREPO_DB", s(&f3.db))];
    let run = grepo(&["mine", "q5", "--project", "F3", "--dev", "a@x.y"], &env).unwrap();
    assert_eq!((run.code, run.stdout.as_str()), (0, "2.0\n"));

    let bogus = f3.path("bogus.db");
    let env = [("GREPO_DB", s(&bogus))];
    let run = grepo(&["mine", "q5", "--project", "F3", "--dev", "a@x.y", "--db", s(&f3.db)], &env).unwrap();
    assert_eq!(run.code, 0, "{}", run.stderr);
    let run = grepo(&["mine", "q5", "--project", "F3", "--dev", "a@x.y"], &env).unwrap();
    assert_eq!(run.code, 2);
}

#[test]
fn drill_db_override_beats_the_config() {
    let f3 = F3::drilled();
    let other = f3.path("other.db");
    let run = grepo(&["drill", "--config", s(&f3.config), "--db", s(&other)], &[]).unwrap();
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert!(other.exists());
    let report: Value = serde_json::from_str(&run.stdout).unwrap();
    assert_eq!(report["nodes"]["Commit"]["created"], 3);
}

#[test]
fn pipeline_and_out_file() {
    let f3 = F3::drilled();
    let pipeline = f3.path("desc.json");
    std::fs::write(&pipeline, r#"{"steps":[{"op":"sort","column":"timestamp","dir":"desc"},{"op":"select","columns":["nloc"]}]}"#)
        .unwrap();
    let out = f3.path("q2.json");
    let run = f3.mine(&["q2", "--file", "b.py", "--format", "json", "--pipeline", s(&pipeline), "--out", s(&out)]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert!(run.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&out).unwrap(), "[{\"nloc\":7},{\"nloc\":7},{\"nloc\":9}]\n");

    std::fs::write(&pipeline, r#"{"steps":[{"op":"sort","column":"missing","dir":"asc"}]}"#).unwrap();
    assert_eq!(f3.mine(&["q2", "--file", "b.py", "--pipeline", s(&pipeline)]).code, 2);
    std::fs::write(&pipeline, "not json").unwrap();
    assert_eq!(f3.mine(&["q2", "--file", "b.py", "--pipeline", s(&pipeline)]).code, 2);
}

#[test]
fn primitive_operations() {
    let f3 = F3::drilled();
    assert_eq!(f3.mine(&["branches"]).stdout, "name\ndev\nmaster\n");
    assert_eq!(f3.mine(&["commits", "--branch", "dev"]).stdout.lines().count(), 3);
    assert_eq!(f3.mine(&["commits"]).stdout.lines().count(), 4);
    assert_eq!(f3.mine(&["developers"]).stdout.lines().count(), 3);
    assert_eq!(f3.mine(&["file-methods", "--file", "b.py"]).stdout.lines().count(), 3);
    let worst = f3.mine(&["worst-case", "--for", "q5", "--format", "json"]);
    let v: Value = serde_json::from_str(&worst.stdout).unwrap();
    assert_eq!(v[0]["workload"], 2);
}

#[test]
fn export_is_deterministic_and_empty_stores_give_empty_files() {
    let f3 = F3::drilled();
    let (a, b) = (f3.path("a.jsonl"), f3.path("b.jsonl"));
    for out in [&a, &b] {
        let run = grepo(&["export", "--project", "F3", "--out", s(out), "--db", s(&f3.db)], &[]).unwrap();
        assert_eq!(run.code, 0, "{}", run.stderr);
    }
    let first = std::fs::read(&a).unwrap();
    assert_eq!(first, std::fs::read(&b).unwrap());
    assert_eq!(first.iter().filter(|&&c| c == b'\n').count(), 30);

    let empty = f3.path("empty.jsonl");
    let run = grepo(&["export", "--out", s(&empty), "--db", s(&f3.path("none.db"))], &[]).unwrap();
    assert_eq!(run.code, 0);
    assert!(std::fs::read(&empty).unwrap().is_empty());
}

#[test]
fn bench_report_holds_its_invariants() {
    let f3 = F3::drilled();
    let out = f3.path("bench.json");
    let run = grepo(&["bench", "--config", s(&f3.config), "--out", s(&out)], &[]).unwrap();
    assert_eq!(run.code, 0, "{}", run.stderr);
    let report: BenchReport = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    report.validate().unwrap();
    assert_eq!(report.repeats, 3);
    assert_eq!(report.queries["Q5"].workload, 2);
    assert_eq!(report.queries["Q2"].workload, 3);
    assert_eq!(report.queries["Q3"].traversals, Some(2));
    assert_eq!(report.queries["Q3_single_pass"].traversals, Some(1));
    assert!(report.environment.cpus >= 1);

    // Non-timing fields are stable across runs.
    let again = f3.path("bench2.json");
    grepo_ok(&["bench", "--config", s(&f3.config), "--out", s(&again)]).unwrap();
    let second: BenchReport = serde_json::from_str(&std::fs::read_to_string(&again).unwrap()).unwrap();
    for (name, q) in &report.queries {
        let r = &second.queries[name];
        assert_eq!((&q.target, q.workload), (&r.target, r.workload), "{name}");
    }
}

#[test]
fn source_text_makes_update_file_the_costliest_insert() {
    let tmp = tempfile::tempdir().unwrap();
    let repo = make_f3(tmp.path(), true).unwrap();
    let cfg = write_config(tmp.path(), "f3l", "F3L", &repo, &tmp.path().join("g.db"), "index_source_code: true\n").unwrap();
    let out = tmp.path().join("bench.json");
    grepo_ok(&["bench", "--config", s(&cfg), "--out", s(&out)]).unwrap();
    let report: BenchReport = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report.most_costly_insert.label, "UpdateFile");
}

#[test]
fn version_and_help_exit_0() {
    let v = grepo(&["--version"], &[]).unwrap();
    assert_eq!(v.code, 0);
    assert!(v.stdout.starts_with("grepo "));
    let h = grepo(&["--help"], &[]).unwrap();
    assert_eq!(h.code, 0);
    for cmd in ["drill", "mine", "export", "bench"] {
        assert!(h.stdout.contains(cmd), "{cmd}");
    }
}
