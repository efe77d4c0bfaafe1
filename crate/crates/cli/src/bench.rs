//! Cold drill plus worst-case query timings.

use std::collections::BTreeMap;
use std::time::Instant;

use grepo_core::{GraphStore, MineManager, Q3Mode, WorstCaseQuery};
use grepo_driller::{drill, ProjectConfig};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Rounds a non-negative duration to the nearest integer, halves upward.
pub fn round_half_up(x: f64) -> u64 {
    (x + 0.5).floor().max(0.0) as u64
}

/// Human-facing form: whole milliseconds below one second, whole seconds
/// from one second up, both rounded half up.
pub fn reported(ms: f64) -> String {
    if ms >= 1000.0 {
        format!("{} s", round_half_up(ms / 1000.0))
    } else {
        format!("{} ms", round_half_up(ms))
    }
}

/// Middle element of the sorted samples; for an even count, the lower one.
///
/// # Panics
/// On an empty slice.
pub fn median(samples: &[f64]) -> f64 {
    assert!(!samples.is_empty(), "median of no samples");
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    s[(s.len() - 1) / 2]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostlyInsert {
    pub label: String,
    pub time_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QueryTiming {
    /// Worst-case node the query ran on; absent for Q1.
    pub target: Option<String>,
    pub workload: u64,
    /// `updates`, `methods`, `files` or `records`.
    pub workload_unit: String,
    /// Median of `samples_ms`, rounded half up.
    pub time_ms: u64,
    pub reported: String,
    pub samples_ms: Vec<f64>,
    /// `UpdateMethod` store traversals of one run (Q3 only).
    pub traversals: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub cpus: usize,
    pub memory_total_kb: Option<u64>,
    pub os: String,
    pub arch: String,
}

impl Environment {
    pub fn probe() -> Self {
        let memory_total_kb = std::fs::read_to_string("/proc/meminfo").ok().and_then(|text| {
            text.lines()
                .find_map(|l| l.strip_prefix("MemTotal:"))
                .and_then(|v| v.trim().trim_end_matches("kB").trim().parse().ok())
        });
        Self {
            cpus: std::thread::available_parallelism().map_or(1, |n| n.get()),
            memory_total_kb,
            os: std::env::consts::OS.to_owned(),
            arch: std::env::consts::ARCH.to_owned(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub project_id: String,
    pub commits: u64,
    pub nodes: u64,
    pub edges: u64,
    /// Git walking, diffing and metrics.
    pub driller_time_ms: u64,
    pub insert_index_time_ms: u64,
    pub most_costly_insert: CostlyInsert,
    /// Keyed `Q1`..`Q5`, plus `Q3_single_pass` for the one-traversal variant.
    pub queries: BTreeMap<String, QueryTiming>,
    pub repeats: u32,
    pub environment: Environment,
}

impl BenchReport {
    /// Checks the report's internal consistency.
    pub fn validate(&self) -> Result<(), String> {
        if self.most_costly_insert.time_ms > self.insert_index_time_ms {
            return Err(format!(
                "most costly insert {} ms exceeds total insert time {} ms",
                self.most_costly_insert.time_ms, self.insert_index_time_ms
            ));
        }
        for name in ["Q1", "Q2", "Q3", "Q4", "Q5"] {
            let q = self.queries.get(name).ok_or_else(|| format!("missing {name}"))?;
            if q.samples_ms.len() != self.repeats as usize {
                return Err(format!("{name}: {} samples, expected {}", q.samples_ms.len(), self.repeats));
            }
            if q.time_ms != round_half_up(median(&q.samples_ms)) {
                return Err(format!("{name}: time_ms is not the rounded median"));
            }
            if (name == "Q1") != q.target.is_none() {
                return Err(format!("{name}: target presence is wrong"));
            }
        }
        Ok(())
    }
}

fn timed<T>(repeats: u32, mut run: impl FnMut() -> Result<T, CliError>) -> Result<(T, Vec<f64>), CliError> {
    let mut samples = Vec::with_capacity(repeats as usize);
    let mut last = None;
    for _ in 0..repeats {
        let t = Instant::now();
        let value = run()?;
        samples.push(t.elapsed().as_secs_f64() * 1000.0);
        last = Some(value);
    }
    Ok((last.expect("at least one repetition"), samples))
}

fn timing(target: Option<String>, workload: u64, unit: &str, samples: Vec<f64>) -> QueryTiming {
    let m = median(&samples);
    QueryTiming {
        target,
        workload,
        workload_unit: unit.to_owned(),
        time_ms: round_half_up(m),
        reported: reported(m),
        samples_ms: samples,
        traversals: None,
    }
}

/// Cold-drills `config` into a fresh in-memory store (no cache, no
/// snapshot) and times Q1-Q5 on their worst-case targets.
pub fn run_bench(config: &ProjectConfig, repeats: u32) -> Result<(BenchReport, GraphStore), CliError> {
    assert!(repeats >= 1, "at least one repetition");
    let mut config = config.clone();
    config.cache_dir = None;
    let mut store = GraphStore::new();
    let drilled = drill(&config, &mut store)?;

    let mm = MineManager::new(&store, config.project_id.clone());
    let mut queries = BTreeMap::new();

    let ((nodes, edges), samples) = timed(repeats, || Ok(mm.q1_all()))?;
    queries.insert("Q1".to_owned(), timing(None, (nodes.len() + edges.len()) as u64, "records", samples));

    let wc = mm.worst_case_target(WorstCaseQuery::Q2)?;
    let (_, samples) = timed(repeats, || Ok(mm.files().file_update_history(wc.target.as_str())?))?;
    queries.insert("Q2".to_owned(), timing(Some(wc.target.to_string()), wc.workload, "updates", samples));

    let wc = mm.worst_case_target(WorstCaseQuery::Q3)?;
    for (key, mode) in [("Q3", Q3Mode::Iterative), ("Q3_single_pass", Q3Mode::SinglePass)] {
        let (_, samples) = timed(repeats, || Ok(mm.methods().q3_file_complexity(wc.target.as_str(), mode)?))?;
        mm.reset_traversal_count();
        mm.methods().q3_file_complexity(wc.target.as_str(), mode)?;
        let mut t = timing(Some(wc.target.to_string()), wc.workload, "methods", samples);
        t.traversals = Some(mm.update_method_traversals());
        queries.insert(key.to_owned(), t);
    }

    let wc = mm.worst_case_target(WorstCaseQuery::Q4)?;
    let (_, samples) = timed(repeats, || Ok(mm.developers().developer_files_by_type(wc.target.as_str())?))?;
    queries.insert("Q4".to_owned(), timing(Some(wc.target.to_string()), wc.workload, "files", samples));

    let wc = mm.worst_case_target(WorstCaseQuery::Q5)?;
    let (_, samples) =
        timed(repeats, || Ok(mm.developers().developer_avg_method_complexity(wc.target.as_str())?))?;
    queries.insert("Q5".to_owned(), timing(Some(wc.target.to_string()), wc.workload, "updates", samples));

    let (label, time) = drilled.most_costly_insert().map(|(l, t)| (l.to_owned(), t)).unwrap_or_default();
    let report = BenchReport {
        project_id: config.project_id.as_str().to_owned(),
        commits: drilled.commits,
        nodes: store.node_count() as u64,
        edges: store.edge_count() as u64,
        driller_time_ms: round_half_up(drilled.extraction_ms),
        insert_index_time_ms: round_half_up(drilled.insert_total_ms),
        most_costly_insert: CostlyInsert { label, time_ms: round_half_up(time) },
        queries,
        repeats,
        environment: Environment::probe(),
    };
    Ok((report, store))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rounding_is_half_up() {
        assert_eq!(round_half_up(0.5), 1);
        assert_eq!(round_half_up(1.49), 1);
        assert_eq!(round_half_up(2.5), 3);
        assert_eq!(reported(23.5), "24 ms");
        assert_eq!(reported(999.4), "999 ms");
        assert_eq!(reported(1500.0), "2 s");
        assert_eq!(reported(2499.0), "2 s");
    }

    #[test]
    fn median_of_three_ignores_one_outlier() {
        assert_eq!(median(&[5.0, 900.0, 4.0]), 5.0);
        assert_eq!(median(&[7.0]), 7.0);
    }

    proptest! {
        #[test]
        fn rounding_is_monotone(a in 0.0f64..1e7, b in 0.0f64..1e7) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(round_half_up(lo) <= round_half_up(hi));
            prop_assert!((round_half_up(a) as f64 - a).abs() <= 0.5);
        }
    }
}
