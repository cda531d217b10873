//! Critical numbers: the least `m` such that every `m`-subset has a full
//! target set.
//!
//! Failing to cover is inherited by subsets, so the sizes admitting a
//! non-covering set form an initial segment. The scan climbs it: find a
//! non-covering set, extend it greedily to a maximal one, then search
//! exhaustively one size higher. The first size with no non-covering set is
//! the critical number.

use serde::{Deserialize, Serialize};

use super::{check_budget, engine_spec, enumerate, state_for, Reduction, SearchConfig, Target};
use crate::error::Result;
use crate::formula::KnownValue;
use crate::group::GroupSpec;
use crate::kernel::MaskGroup;
use crate::set::ElementSet;
use crate::sumset::{self, SumsetKind};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalOutcome {
    /// `None` when even the whole domain fails to cover.
    pub value: Option<u64>,
    /// A maximal non-covering set of size `value - 1` (or the whole domain
    /// when undefined).
    pub witness: Option<ElementSet>,
}

impl CriticalOutcome {
    pub fn known(&self, source: &str) -> KnownValue {
        match self.value {
            Some(v) => KnownValue::exact(v, source),
            None => KnownValue::undefined(source),
        }
    }
}

pub(crate) fn target_set(g: &GroupSpec, a: &ElementSet, target: Target) -> Result<ElementSet> {
    Ok(match target {
        Target::Sumset { kind, h } => sumset::sumset(g, a, h, kind)?,
        Target::Sigma { include_empty } => sumset::sigma(g, a, include_empty),
        Target::Span => sumset::span(g, a),
    })
}

fn covers(g: &GroupSpec, a: &ElementSet, target: Target) -> Result<bool> {
    Ok(target_set(g, a, target)?.is_full())
}

/// Some non-covering `m`-subset of the domain, if one exists.
fn noncovering(
    g: &GroupSpec,
    m: u64,
    target: Target,
    exclude_zero: bool,
    reduction: Reduction,
    cfg: &SearchConfig,
) -> Result<Option<ElementSet>> {
    check_budget(g, m, reduction, cfg.budget)?;
    let m = m as usize;
    let state = state_for(target, m);
    let spec = engine_spec(g, m, state, reduction, exclude_zero, false);
    let found = match MaskGroup::new(g) {
        Some(k) => enumerate(
            &k,
            spec,
            cfg.jobs,
            1,
            false,
            true,
            |e, l, _| e.is_full(l),
            |e, node| !e.is_full(node.layers),
        )?,
        None => enumerate(
            g,
            spec,
            cfg.jobs,
            1,
            false,
            true,
            |e, l, _| e.is_full(l),
            |e, node| !e.is_full(node.layers),
        )?,
    };
    Ok(found.sets.into_iter().next())
}

fn critical_for(
    g: &GroupSpec,
    target: Target,
    exclude_zero: bool,
    cfg: &SearchConfig,
) -> Result<CriticalOutcome> {
    let reduction = if exclude_zero {
        Reduction::Dilation
    } else {
        Reduction::full_for(target, super::Filter::All)
    };
    let domain: Vec<usize> = (usize::from(exclude_zero)..g.n()).collect();
    let mut witness: Option<ElementSet> = None;
    let mut largest = 0u64;
    loop {
        let m = largest + 1;
        if m > domain.len() as u64 {
            return Ok(CriticalOutcome {
                value: None,
                witness,
            });
        }
        match noncovering(g, m, target, exclude_zero, reduction, cfg)? {
            None => {
                return Ok(CriticalOutcome {
                    value: Some(m),
                    witness,
                })
            }
            Some(mut w) => {
                for &x in &domain {
                    if w.contains(x) {
                        continue;
                    }
                    w.insert(x);
                    if covers(g, &w, target)? {
                        w.remove(x);
                    }
                }
                largest = w.len() as u64;
                witness = Some(w);
            }
        }
    }
}

/// The `h`-critical number for the given sumset kind.
pub fn critical_number(
    g: &GroupSpec,
    h: u64,
    kind: SumsetKind,
    cfg: &SearchConfig,
) -> Result<CriticalOutcome> {
    critical_for(g, Target::Sumset { kind, h }, false, cfg)
}

/// Least `m` with `ΣA = G` for all `m`-subsets of `G`, or of `G \ {0}` when
/// `exclude_zero`.
pub fn critical_sigma(g: &GroupSpec, exclude_zero: bool, cfg: &SearchConfig) -> Result<CriticalOutcome> {
    critical_for(g, Target::Sigma { include_empty: true }, exclude_zero, cfg)
}

/// Least `m` with `<A> = G` for all `m`-subsets.
pub fn critical_span(g: &GroupSpec, cfg: &SearchConfig) -> Result<CriticalOutcome> {
    critical_for(g, Target::Span, false, cfg)
}
