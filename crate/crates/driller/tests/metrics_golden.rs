//! Function metrics agree with a recorded reference analyzer run over the
//! fixture corpus (see `fixtures/metrics_corpus/make_golden.py`).

use std::path::PathBuf;

use grepo_driller::lang::{analyze, Language};
use serde_json::Value;

fn corpus() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/metrics_corpus")
}

#[test]
fn corpus_matches_reference_analyzer() {
    let golden: Value = serde_json::from_str(&std::fs::read_to_string(corpus().join("golden.json")).unwrap()).unwrap();
    let files = golden["files"].as_object().unwrap();
    let mut mismatches = Vec::new();
    let mut checked = 0;
    for (file, expected) in files {
        let source = std::fs::read_to_string(corpus().join(file)).unwrap();
        assert!(Language::from_path(file).is_some(), "{file}");
        let got = analyze(file, &source).unwrap().methods;
        let want: Vec<(String, u64, u64, u64, u64, u64)> = expected
            .as_array()
            .unwrap()
            .iter()
            .map(|f| {
                (
                    f["name"].as_str().unwrap().to_owned(),
                    f["start_line"].as_u64().unwrap(),
                    f["end_line"].as_u64().unwrap(),
                    f["nloc"].as_u64().unwrap(),
                    f["ccn"].as_u64().unwrap(),
                    f["params"].as_u64().unwrap(),
                )
            })
            .collect();
        let mut have: Vec<(String, u64, u64, u64, u64, u64)> = got
            .iter()
            .map(|m| {
                (m.name.clone(), m.start_line.into(), m.end_line.into(), m.nloc.into(), m.complexity.into(), m.parameter_count.into())
            })
            .collect();
        let mut want = want;
        want.sort();
        have.sort();
        checked += want.len();
        if want != have {
            mismatches.push(format!("{file}:\n  want {want:?}\n  have {have:?}"));
        }
    }
    assert!(checked >= 20, "corpus too small: {checked}");
    assert!(mismatches.is_empty(), "{}", mismatches.join("\n"));
}
