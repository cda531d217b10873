use std::collections::HashSet;
use std::fs::{self, OpenOptions};
use std::io::BufReader;

use sumlab::harness::{
    find_claim, list_claims, read_records, run_claim, settled_keys, summarize, write_summary, ClaimKind,
    RangeSpec, RunConfig, Status, SUMMARY_HEADER,
};

fn scratch(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("sumlab-harness-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn crashed_run_resumes_to_the_same_summary() {
    let claim = find_claim("CONJ-PM").unwrap();
    let range = RangeSpec {
        max_order: Some(9),
        max_h: Some(3),
        ..RangeSpec::default()
    };
    let cfg = RunConfig {
        jobs: 3,
        ..RunConfig::default()
    };
    let full_path = scratch("full.jsonl");
    let file = fs::File::create(&full_path).unwrap();
    run_claim(claim, &range, &cfg, &HashSet::new(), file).unwrap();
    let full = read_records(BufReader::new(fs::File::open(&full_path).unwrap())).unwrap();

    // A killed run leaves a prefix of the stream.
    let text = fs::read_to_string(&full_path).unwrap();
    let keep: Vec<&str> = text.lines().take(full.len() / 2).collect();
    let crashed = scratch("crashed.jsonl");
    fs::write(&crashed, keep.join("\n") + "\n").unwrap();
    let partial = read_records(BufReader::new(fs::File::open(&crashed).unwrap())).unwrap();

    let append = OpenOptions::new().append(true).open(&crashed).unwrap();
    let s = run_claim(claim, &range, &cfg, &settled_keys(&partial), append).unwrap();
    assert_eq!(s.skipped, partial.len());
    let resumed = read_records(BufReader::new(fs::File::open(&crashed).unwrap())).unwrap();
    assert_eq!(resumed.len(), full.len());
    assert_eq!(summarize(&resumed).unwrap(), summarize(&full).unwrap());

    let mut a = Vec::new();
    let mut b = Vec::new();
    write_summary(&summarize(&resumed).unwrap(), &mut a).unwrap();
    write_summary(&summarize(&full).unwrap(), &mut b).unwrap();
    assert_eq!(a, b);
}

#[test]
fn summary_is_idempotent_under_replay() {
    let claim = find_claim("CHI-EQ-V").unwrap();
    let range = RangeSpec {
        max_order: Some(10),
        ..RangeSpec::default()
    };
    let mut buf = Vec::new();
    run_claim(claim, &range, &RunConfig::default(), &HashSet::new(), &mut buf).unwrap();
    let once = read_records(buf.as_slice()).unwrap();
    let twice: Vec<_> = once.iter().chain(once.iter()).cloned().collect();
    assert_eq!(summarize(&once).unwrap(), summarize(&twice).unwrap());

    let mut csv = Vec::new();
    write_summary(&summarize(&once).unwrap(), &mut csv).unwrap();
    let text = String::from_utf8(csv).unwrap();
    assert_eq!(text.lines().next().unwrap(), SUMMARY_HEADER.join(","));
    assert_eq!(text.lines().count(), 1 + 9);
}

#[test]
fn theorem_claims_hold_on_small_grids() {
    let range = RangeSpec {
        max_order: Some(8),
        max_h: Some(3),
        ..RangeSpec::default()
    };
    for claim in list_claims().iter().filter(|c| c.kind == ClaimKind::Theorem) {
        let mut buf = Vec::new();
        let s = run_claim(claim, &range, &RunConfig::default(), &HashSet::new(), &mut buf)
            .unwrap_or_else(|e| panic!("{}: {e}", claim.id));
        assert_eq!(s.discrepancies, 0, "{}", claim.id);
        for r in read_records(buf.as_slice()).unwrap() {
            assert!(matches!(r.status, Status::Match | Status::Undefined | Status::Refused), "{r:?}");
        }
    }
}

#[test]
fn every_claim_runs_on_its_default_h_range() {
    let range = RangeSpec {
        max_order: Some(7),
        ..RangeSpec::default()
    };
    for claim in list_claims() {
        let mut buf = Vec::new();
        let s = run_claim(claim, &range, &RunConfig::default(), &HashSet::new(), &mut buf)
            .unwrap_or_else(|e| panic!("{}: {e}", claim.id));
        assert_eq!(s.refused, 0, "{}", claim.id);
    }
}
