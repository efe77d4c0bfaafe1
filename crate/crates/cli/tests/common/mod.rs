//! Fixture repositories, oracle scripts and a `grepo` runner shared by the
//! CLI test targets.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;

use anyhow::{bail, Context, Result};
use serde_json::Value;

pub const DESK_WINDOW: (i64, i64) = (1_503_000_000, 1_540_000_000);

fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn oracle(name: &str) -> PathBuf {
    manifest_dir().join("tests/oracles").join(name)
}

fn f3_script() -> PathBuf {
    manifest_dir().join("../driller/tests/fixtures/make_f3.py")
}

/// Runs a python script and returns its stdout.
pub fn python(script: &Path, args: &[&str]) -> Result<String> {
    let out = Command::new("python3")
        .arg(script)
        .args(args)
        .output()
        .with_context(|| format!("running python3 {}", script.display()))?;
    if !out.status.success() {
        bail!("{} failed: {}", script.display(), String::from_utf8_lossy(&out.stderr));
    }
    Ok(String::from_utf8(out.stdout)?)
}

pub fn make_f3(dir: &Path, large: bool) -> Result<PathBuf> {
    let repo = dir.join(if large { "f3-large" } else { "f3" });
    let repo_str = repo.to_str().context("utf-8 path")?;
    let mut args = vec![repo_str];
    if large {
        args.push("--large");
    }
    python(&f3_script(), &args)?;
    Ok(repo)
}

pub fn make_desk(dir: &Path) -> Result<PathBuf> {
    let repo = dir.join("desk");
    python(&oracle("make_desk_repo.py"), &[repo.to_str().context("utf-8 path")?])?;
    Ok(repo)
}

/// Writes a YAML drill config and returns its path.
pub fn write_config(dir: &Path, name: &str, project: &str, repo: &Path, db: &Path, extra: &str) -> Result<PathBuf> {
    let path = dir.join(format!("{name}.yaml"));
    let text = format!(
        "project_id: {project}\nrepo_path: {}\ndb_path: {}\n{extra}",
        serde_json::to_string(&repo.to_string_lossy())?,
        serde_json::to_string(&db.to_string_lossy())?,
    );
    std::fs::write(&path, text)?;
    Ok(path)
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the `grepo` binary with `GREPO_DB` cleared unless given in `env`.
pub fn grepo(args: &[&str], env: &[(&str, &str)]) -> Result<Run> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_grepo"));
    cmd.args(args).env_remove("GREPO_DB");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output()?;
    Ok(Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout)?,
        stderr: String::from_utf8(out.stderr)?,
    })
}

pub fn grepo_ok(args: &[&str]) -> Result<String> {
    let run = grepo(args, &[])?;
    if run.code != 0 {
        bail!("grepo {} exited {}: {}", args.join(" "), run.code, run.stderr);
    }
    Ok(run.stdout)
}

/// Per-label record counts of a canonical dump.
pub fn dump_counts(dump: &str) -> Result<BTreeMap<String, u64>> {
    let mut counts = BTreeMap::new();
    for line in dump.lines() {
        let rec: Value = serde_json::from_str(line)?;
        let label = rec["l"].as_str().context("record label")?;
        *counts.entry(label.to_owned()).or_default() += 1;
    }
    Ok(counts)
}

/// Flattens the count oracle's `{"nodes": {..}, "edges": {..}}` output.
pub fn oracle_counts(repo: &Path, window: Option<(i64, i64)>) -> Result<BTreeMap<String, u64>> {
    let mut args = vec![repo.to_str().context("utf-8 path")?.to_owned()];
    if let Some((since, until)) = window {
        args.extend(["--since".into(), since.to_string(), "--until".into(), until.to_string()]);
    }
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    let v: Value = serde_json::from_str(&python(&oracle("oracle_counts.py"), &args)?)?;
    let mut out = BTreeMap::new();
    for section in ["nodes", "edges"] {
        for (label, n) in v[section].as_object().context("oracle section")? {
            let n = n.as_u64().context("count")?;
            // Labels without records are absent from a dump.
            if n > 0 {
                out.insert(label.clone(), n);
            }
        }
    }
    Ok(out)
}
