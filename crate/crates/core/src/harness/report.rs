//! Line-oriented claim records and the CSV summary.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::group::GroupSpec;

/// The second parameter of a point: a fold count, the unbounded variants,
/// or a `(k, l)` pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "Value", try_from = "Value")]
pub enum Param {
    None,
    H(u64),
    /// Any number of terms, empty sum included.
    N0,
    /// Any positive number of terms.
    N,
    Pair(u64, u64),
}

impl From<Param> for Value {
    fn from(p: Param) -> Value {
        match p {
            Param::None => Value::Null,
            Param::H(h) => Value::from(h),
            Param::N0 => Value::from("N0"),
            Param::N => Value::from("N"),
            Param::Pair(k, l) => Value::from(format!("{k},{l}")),
        }
    }
}

impl TryFrom<Value> for Param {
    type Error = String;

    fn try_from(v: Value) -> std::result::Result<Self, String> {
        match v {
            Value::Null => Ok(Param::None),
            Value::Number(n) => n.as_u64().map(Param::H).ok_or_else(|| format!("bad h {n}")),
            Value::String(s) => match s.as_str() {
                "N0" => Ok(Param::N0),
                "N" => Ok(Param::N),
                _ => {
                    let (k, l) = s.split_once(',').ok_or_else(|| format!("bad h {s:?}"))?;
                    let k = k.trim().parse().map_err(|_| format!("bad h {s:?}"))?;
                    let l = l.trim().parse().map_err(|_| format!("bad h {s:?}"))?;
                    Ok(Param::Pair(k, l))
                }
            },
            other => Err(format!("bad h {other}")),
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::None => f.write_str("-"),
            Param::H(h) => write!(f, "{h}"),
            Param::N0 => f.write_str("N0"),
            Param::N => f.write_str("N"),
            Param::Pair(k, l) => write!(f, "{k},{l}"),
        }
    }
}

/// What a checker predicts: an exact value, a one-sided comparison, or
/// that the quantity does not exist.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "Value", try_from = "Value")]
pub enum Expected {
    Eq(u64),
    Le(u64),
    Ge(u64),
    Lt(u64),
    Gt(u64),
    Undefined,
}

impl Expected {
    pub fn accepts(self, observed: Observed) -> bool {
        match (self, observed) {
            (Expected::Undefined, Observed::Undefined) => true,
            (Expected::Undefined, _) | (_, Observed::Undefined) => false,
            (Expected::Eq(e), Observed::Value(o)) => o == e,
            (Expected::Le(e), Observed::Value(o)) => o <= e,
            (Expected::Ge(e), Observed::Value(o)) => o >= e,
            (Expected::Lt(e), Observed::Value(o)) => o < e,
            (Expected::Gt(e), Observed::Value(o)) => o > e,
        }
    }

    pub fn value(self) -> Option<u64> {
        match self {
            Expected::Eq(v) | Expected::Le(v) | Expected::Ge(v) | Expected::Lt(v) | Expected::Gt(v) => {
                Some(v)
            }
            Expected::Undefined => None,
        }
    }
}

impl From<Expected> for Value {
    fn from(e: Expected) -> Value {
        match e {
            Expected::Eq(v) => Value::from(v),
            Expected::Le(v) => Value::from(format!("<={v}")),
            Expected::Ge(v) => Value::from(format!(">={v}")),
            Expected::Lt(v) => Value::from(format!("<{v}")),
            Expected::Gt(v) => Value::from(format!(">{v}")),
            Expected::Undefined => Value::from("undefined"),
        }
    }
}

impl TryFrom<Value> for Expected {
    type Error = String;

    fn try_from(v: Value) -> std::result::Result<Self, String> {
        let s = match v {
            Value::Number(n) => {
                return n.as_u64().map(Expected::Eq).ok_or_else(|| format!("bad expected {n}"))
            }
            Value::String(s) => s,
            other => return Err(format!("bad expected {other}")),
        };
        if s == "undefined" {
            return Ok(Expected::Undefined);
        }
        let (ctor, rest): (fn(u64) -> Expected, &str) = if let Some(r) = s.strip_prefix("<=") {
            (Expected::Le, r)
        } else if let Some(r) = s.strip_prefix(">=") {
            (Expected::Ge, r)
        } else if let Some(r) = s.strip_prefix('<') {
            (Expected::Lt, r)
        } else if let Some(r) = s.strip_prefix('>') {
            (Expected::Gt, r)
        } else {
            return Err(format!("bad expected {s:?}"));
        };
        rest.parse().map(ctor).map_err(|_| format!("bad expected {s:?}"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "Value", try_from = "Value")]
pub enum Observed {
    Value(u64),
    Undefined,
}

impl From<Observed> for Value {
    fn from(o: Observed) -> Value {
        match o {
            Observed::Value(v) => Value::from(v),
            Observed::Undefined => Value::from("undefined"),
        }
    }
}

impl TryFrom<Value> for Observed {
    type Error = String;

    fn try_from(v: Value) -> std::result::Result<Self, String> {
        match v {
            Value::Number(n) => n.as_u64().map(Observed::Value).ok_or_else(|| format!("bad observed {n}")),
            Value::String(s) if s == "undefined" => Ok(Observed::Undefined),
            other => Err(format!("bad observed {other}")),
        }
    }
}

impl From<Option<u64>> for Observed {
    fn from(v: Option<u64>) -> Self {
        v.map_or(Observed::Undefined, Observed::Value)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Match,
    Discrepancy,
    Refused,
    Undefined,
}

impl Status {
    pub fn judge(expected: Expected, observed: Observed) -> Status {
        match (expected.accepts(observed), observed) {
            (true, Observed::Undefined) => Status::Undefined,
            (true, _) => Status::Match,
            (false, _) => Status::Discrepancy,
        }
    }
}

/// One evaluated parameter point. Field order is the on-disk order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimRecord {
    pub claim_id: String,
    pub group: String,
    pub m: Option<u64>,
    pub h: Param,
    /// `null` on refused points.
    pub expected: Option<Expected>,
    pub observed: Option<Observed>,
    pub status: Status,
    /// Set literal in the group's notation.
    pub witness: Option<String>,
    pub elapsed_ms: u64,
}

/// Identity of a parameter point within a stream.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointKey {
    pub claim_id: String,
    pub group: String,
    pub m: Option<u64>,
    pub h: Param,
}

impl ClaimRecord {
    pub fn key(&self) -> PointKey {
        PointKey {
            claim_id: self.claim_id.clone(),
            group: self.group.clone(),
            m: self.m,
            h: self.h,
        }
    }

    /// `observed - expected` when both are numbers.
    pub fn gap(&self) -> Option<i64> {
        match (self.expected?.value(), self.observed?) {
            (Some(e), Observed::Value(o)) => Some(o as i64 - e as i64),
            _ => None,
        }
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }
}

/// Parses a record stream, rejecting malformed lines with their 1-based
/// line number. Blank lines are skipped.
pub fn read_records<R: BufRead>(reader: R) -> Result<Vec<ClaimRecord>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec = serde_json::from_str(&line).map_err(|e| Error::MalformedRecord {
            line: i + 1,
            msg: e.to_string(),
        })?;
        out.push(rec);
    }
    Ok(out)
}

pub const SUMMARY_HEADER: [&str; 8] = [
    "claim",
    "group_order",
    "points",
    "match",
    "discrepancy",
    "refused",
    "undefined",
    "max_gap",
];

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SummaryRow {
    pub points: u64,
    pub matches: u64,
    pub discrepancies: u64,
    pub refused: u64,
    pub undefined: u64,
    /// Largest `|observed - expected|` over numeric points.
    pub max_gap: Option<u64>,
}

/// Rows keyed by `(claim, group order)`. A point recorded more than once
/// counts with its last record.
pub fn summarize(records: &[ClaimRecord]) -> Result<BTreeMap<(String, u64), SummaryRow>> {
    let mut latest: BTreeMap<PointKey, &ClaimRecord> = BTreeMap::new();
    for r in records {
        latest.insert(r.key(), r);
    }
    let mut rows: BTreeMap<(String, u64), SummaryRow> = BTreeMap::new();
    for r in latest.values() {
        let order = GroupSpec::parse(&r.group)?.order();
        let row = rows.entry((r.claim_id.clone(), order)).or_default();
        row.points += 1;
        match r.status {
            Status::Match => row.matches += 1,
            Status::Discrepancy => row.discrepancies += 1,
            Status::Refused => row.refused += 1,
            Status::Undefined => row.undefined += 1,
        }
        if let Some(g) = r.gap() {
            row.max_gap = Some(row.max_gap.unwrap_or(0).max(g.unsigned_abs()));
        }
    }
    Ok(rows)
}

pub fn write_summary<W: Write>(rows: &BTreeMap<(String, u64), SummaryRow>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(SUMMARY_HEADER).map_err(io)?;
    for ((claim, order), row) in rows {
        w.write_record([
            claim.clone(),
            order.to_string(),
            row.points.to_string(),
            row.matches.to_string(),
            row.discrepancies.to_string(),
            row.refused.to_string(),
            row.undefined.to_string(),
            row.max_gap.map_or(String::new(), |g| g.to_string()),
        ])
        .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}
