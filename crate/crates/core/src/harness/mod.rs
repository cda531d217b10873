//! Claim registry, grid runner and report streams.

mod claims;
mod report;
mod runner;

pub use claims::{
    evaluate, find_claim, list_claims, points, Claim, ClaimKind, Evaluation, Point, Range, RangeSpec,
};
pub use report::{
    read_records, summarize, write_summary, ClaimRecord, Expected, Observed, Param, PointKey, Status,
    SummaryRow, SUMMARY_HEADER,
};
pub use runner::{run_claim, settled_keys, RunConfig, RunSummary};
