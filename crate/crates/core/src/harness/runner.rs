//! Runs a claim over its grid: points fan out to a worker pool, records come
//! back over a channel and a single writer emits them in grid order.

use std::collections::{BTreeMap, HashSet};
use std::io::Write;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::mpsc;
use std::time::Instant;

use rayon::prelude::*;

use super::claims::{evaluate, points, Claim, ClaimKind, RangeSpec};
use super::report::{ClaimRecord, PointKey, Status};
use crate::error::{Error, Result};
use crate::search::{SearchConfig, DEFAULT_BUDGET, DEFAULT_WITNESS_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunConfig {
    /// Worker threads for the point pool; each point searches on one thread.
    pub jobs: usize,
    pub budget: u64,
    pub witness_cap: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            jobs: 1,
            budget: DEFAULT_BUDGET,
            witness_cap: DEFAULT_WITNESS_CAP,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunSummary {
    pub claim_id: String,
    /// Points evaluated in this run.
    pub points: usize,
    /// Points skipped because the stream already held them.
    pub skipped: usize,
    pub matches: usize,
    pub discrepancies: usize,
    pub refused: usize,
    pub undefined: usize,
}

impl RunSummary {
    fn count(&mut self, status: Status) {
        self.points += 1;
        match status {
            Status::Match => self.matches += 1,
            Status::Discrepancy => self.discrepancies += 1,
            Status::Refused => self.refused += 1,
            Status::Undefined => self.undefined += 1,
        }
    }
}

fn key_of(claim: &Claim, p: &super::claims::Point) -> PointKey {
    PointKey {
        claim_id: claim.id.to_string(),
        group: p.group.to_string(),
        m: p.m,
        h: p.h,
    }
}

/// Keys already settled in a stream: every recorded point except refusals.
pub fn settled_keys(records: &[ClaimRecord]) -> HashSet<PointKey> {
    let mut latest: BTreeMap<PointKey, Status> = BTreeMap::new();
    for r in records {
        latest.insert(r.key(), r.status);
    }
    latest
        .into_iter()
        .filter(|(_, s)| *s != Status::Refused)
        .map(|(k, _)| k)
        .collect()
}

/// Evaluates `claim` over its grid, skipping `settled` points, and appends
/// one line per point to `sink` in grid order. A theorem discrepancy stops
/// the run after the records computed so far are written.
pub fn run_claim<W: Write>(
    claim: &Claim,
    range: &RangeSpec,
    cfg: &RunConfig,
    settled: &HashSet<PointKey>,
    mut sink: W,
) -> Result<RunSummary> {
    let grid = points(claim, claim.defaults.apply(range));
    let total = grid.len();
    let todo: Vec<_> = grid
        .into_iter()
        .filter(|p| !settled.contains(&key_of(claim, p)))
        .collect();
    let mut summary = RunSummary {
        claim_id: claim.id.to_string(),
        skipped: total - todo.len(),
        ..RunSummary::default()
    };
    let search_cfg = SearchConfig {
        budget: cfg.budget,
        witness_cap: cfg.witness_cap,
        jobs: 1,
    };
    let stop = AtomicBool::new(false);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.max(1))
        .build()
        .map_err(|e| Error::Io(format!("worker pool: {e}")))?;
    let (tx, rx) = mpsc::channel::<(usize, Result<ClaimRecord>)>();

    let mut failure: Option<Error> = None;
    std::thread::scope(|scope| {
        let todo = &todo;
        let stop = &stop;
        scope.spawn(move || {
            pool.install(|| {
                todo.par_iter().enumerate().for_each_with(tx, |tx, (i, p)| {
                    if stop.load(Ordering::Relaxed) {
                        return;
                    }
                    let started = Instant::now();
                    let rec = match evaluate(claim, p, &search_cfg) {
                        Ok(ev) => {
                            let status = Status::judge(ev.expected, ev.observed);
                            if status == Status::Discrepancy && claim.kind == ClaimKind::Theorem {
                                stop.store(true, Ordering::Relaxed);
                            }
                            Ok(ClaimRecord {
                                claim_id: claim.id.to_string(),
                                group: p.group.to_string(),
                                m: p.m,
                                h: p.h,
                                expected: Some(ev.expected),
                                observed: Some(ev.observed),
                                status,
                                witness: ev.witness.map(|w| p.group.format_set(&w)),
                                elapsed_ms: started.elapsed().as_millis() as u64,
                            })
                        }
                        Err(Error::BudgetExceeded { .. }) => Ok(ClaimRecord {
                            claim_id: claim.id.to_string(),
                            group: p.group.to_string(),
                            m: p.m,
                            h: p.h,
                            expected: None,
                            observed: None,
                            status: Status::Refused,
                            witness: None,
                            elapsed_ms: started.elapsed().as_millis() as u64,
                        }),
                        Err(e) => {
                            stop.store(true, Ordering::Relaxed);
                            Err(e)
                        }
                    };
                    let _ = tx.send((i, rec));
                });
            });
        });

        // Single writer: release records strictly in grid order.
        let mut pending: BTreeMap<usize, Result<ClaimRecord>> = BTreeMap::new();
        let mut next = 0usize;
        let mut emit = |rec: Result<ClaimRecord>, summary: &mut RunSummary| -> Result<()> {
            let rec = rec?;
            writeln!(sink, "{}", rec.to_line())?;
            sink.flush()?;
            summary.count(rec.status);
            if rec.status == Status::Discrepancy && claim.kind == ClaimKind::Theorem {
                return Err(Error::TheoremFailure {
                    claim: rec.claim_id.clone(),
                    point: format!("{} m={:?} h={}", rec.group, rec.m, rec.h),
                    expected: format!("{:?}", rec.expected),
                    observed: format!("{:?}", rec.observed),
                });
            }
            Ok(())
        };
        for (i, rec) in rx {
            pending.insert(i, rec);
            while let Some(rec) = pending.remove(&next) {
                next += 1;
                if let Err(e) = emit(rec, &mut summary) {
                    failure.get_or_insert(e);
                    stop.store(true, Ordering::Relaxed);
                }
            }
        }
        // After an abort some indices never arrive; keep what was computed.
        for (_, rec) in std::mem::take(&mut pending) {
            if let Err(e) = emit(rec, &mut summary) {
                failure.get_or_insert(e);
            }
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(summary),
    }
}

#[cfg(test)]
mod tests {
    use super::super::claims::find_claim;
    use super::super::report::{read_records, summarize};
    use super::*;

    fn small() -> RangeSpec {
        RangeSpec {
            max_order: Some(8),
            ..RangeSpec::default()
        }
    }

    #[test]
    fn output_order_is_independent_of_workers() {
        let claim = find_claim("RHO-EQ-U").unwrap();
        let run = |jobs| {
            let mut buf = Vec::new();
            let cfg = RunConfig {
                jobs,
                ..RunConfig::default()
            };
            let s = run_claim(claim, &small(), &cfg, &HashSet::new(), &mut buf).unwrap();
            let recs = read_records(buf.as_slice()).unwrap();
            (s, recs.into_iter().map(|r| r.key()).collect::<Vec<_>>())
        };
        let (s1, k1) = run(1);
        let (s4, k4) = run(4);
        assert_eq!(k1, k4);
        assert_eq!(s1, s4);
        assert_eq!(s1.matches, s1.points);
    }

    #[test]
    fn resume_adds_no_duplicates() {
        let claim = find_claim("CHI-EQ-V").unwrap();
        let cfg = RunConfig::default();
        let mut full = Vec::new();
        run_claim(claim, &small(), &cfg, &HashSet::new(), &mut full).unwrap();
        let all = read_records(full.as_slice()).unwrap();

        // A crash after three records, then a resumed run.
        let mut partial: Vec<u8> = all[..3].iter().map(|r| r.to_line() + "\n").collect::<String>().into();
        let done = settled_keys(&read_records(partial.as_slice()).unwrap());
        let s = run_claim(claim, &small(), &cfg, &done, &mut partial).unwrap();
        assert_eq!(s.skipped, 3);
        let resumed = read_records(partial.as_slice()).unwrap();
        assert_eq!(resumed.len(), all.len());
        assert_eq!(summarize(&resumed).unwrap(), summarize(&all).unwrap());

        let again = settled_keys(&resumed);
        let s = run_claim(claim, &small(), &cfg, &again, &mut partial).unwrap();
        assert_eq!((s.points, s.skipped), (0, all.len()));
    }

    #[test]
    fn refused_points_are_recorded_and_retried() {
        let claim = find_claim("RHO-EQ-U").unwrap();
        let cfg = RunConfig {
            budget: 1,
            ..RunConfig::default()
        };
        let mut buf = Vec::new();
        let s = run_claim(claim, &small(), &cfg, &HashSet::new(), &mut buf).unwrap();
        assert!(s.refused > 0);
        let recs = read_records(buf.as_slice()).unwrap();
        assert!(settled_keys(&recs).len() < recs.len());
    }

    #[test]
    fn conjecture_discrepancies_are_data() {
        let claim = find_claim("SIGMA-INV-NORM").unwrap();
        let range = RangeSpec {
            min_order: Some(17),
            max_order: Some(17),
            ..RangeSpec::default()
        };
        let mut buf = Vec::new();
        let s = run_claim(claim, &range, &RunConfig::default(), &HashSet::new(), &mut buf).unwrap();
        assert_eq!(s.discrepancies, 1);
        let rec = &read_records(buf.as_slice()).unwrap()[0];
        assert!(rec.witness.is_some());
    }
}
