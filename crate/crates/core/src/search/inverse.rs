//! Searches over hereditary families: `(k, l)`-sum-free sets and subsets of
//! `Z_p` whose subset sums miss an element, plus the dilated norm.

use serde::{Deserialize, Serialize};

use super::engine::StateKind;
use super::{check_budget, engine_spec, enumerate, Enumerated, Reduction, SearchConfig};
use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::kernel::MaskGroup;
use crate::set::ElementSet;
use crate::sumset::{h_fold_sumset, signed_view, Arena, SumsetKind};

/// `min ||bA||` over nonzero `b`, with the least `b` attaining it.
pub fn min_dilated_norm(p: u64, a: &ElementSet) -> Result<(u64, u64)> {
    let g = GroupSpec::cyclic(p)?;
    let mut best: Option<(u64, u64)> = None;
    for b in 1..p {
        let norm = signed_view(p, &g.dilate_set(b as i64, a))?.norm;
        if best.is_none_or(|(v, _)| norm < v) {
            best = Some((norm, b));
        }
    }
    best.ok_or_else(|| Error::Unsupported(format!("Z_{p} has no nonzero elements")))
}

/// Every `m`-subset of `Z_p` with `ΣA != Z_p`, one per dilation orbit
/// (least member), ascending; `truncated` when the cap cut the list.
pub fn sigma_noncovering_sets(p: u64, m: u64, cfg: &SearchConfig) -> Result<(Vec<ElementSet>, bool)> {
    if p % 2 == 0 || !is_prime(p) {
        return Err(Error::Unsupported(format!("{p} is not an odd prime")));
    }
    let g = GroupSpec::cyclic(p)?;
    if m == 0 || m > p {
        return Err(Error::InvalidSize { n: p, m });
    }
    check_budget(&g, m, Reduction::Dilation, cfg.budget)?;
    let spec = engine_spec(
        &g,
        m as usize,
        StateKind::Sigma {
            include_empty: true,
        },
        Reduction::Dilation,
        false,
        false,
    );
    let cap = cfg.witness_cap;
    let Enumerated { sets, truncated } = match MaskGroup::new(&g) {
        Some(k) => enumerate(
            &k,
            spec,
            cfg.jobs,
            cap,
            true,
            false,
            |e, l, _| e.is_full(l),
            |e, node| !e.is_full(node.layers),
        )?,
        None => enumerate(
            &g,
            spec,
            cfg.jobs,
            cap,
            true,
            false,
            |e, l, _| e.is_full(l),
            |e, node| !e.is_full(node.layers),
        )?,
    };
    Ok((sets, truncated))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumfreeOutcome {
    pub size: u64,
    /// Largest `(k, l)`-sum-free sets, one per dilation orbit, ascending.
    pub witnesses: Vec<ElementSet>,
    pub truncated: bool,
}

fn kl_free(g: &GroupSpec, a: &ElementSet, k: u64, l: u64) -> bool {
    h_fold_sumset(g, a, k).is_disjoint(&h_fold_sumset(g, a, l))
}

fn kl_enumerate(
    g: &GroupSpec,
    m: u64,
    k: usize,
    l: usize,
    cap: usize,
    first_only: bool,
    cfg: &SearchConfig,
) -> Result<Enumerated> {
    check_budget(g, m, Reduction::Dilation, cfg.budget)?;
    let spec = engine_spec(
        g,
        m as usize,
        StateKind::Layers(SumsetKind::Fold, k),
        Reduction::Dilation,
        false,
        false,
    );
    match MaskGroup::new(g) {
        Some(km) => enumerate(
            &km,
            spec,
            cfg.jobs,
            cap,
            !first_only,
            first_only,
            |e, lay, _| e.ar.intersects(&lay[k], &lay[l]),
            |_, _| true,
        ),
        None => enumerate(
            g,
            spec,
            cfg.jobs,
            cap,
            !first_only,
            first_only,
            |e, lay, _| e.ar.intersects(&lay[k], &lay[l]),
            |_, _| true,
        ),
    }
}

/// Largest `m` such that some `m`-subset `A` of `Z_n` has `kA ∩ lA = ∅`.
pub fn max_kl_sumfree(n: u64, k: u64, l: u64, cfg: &SearchConfig) -> Result<SumfreeOutcome> {
    if l == 0 || k <= l {
        return Err(Error::InvalidParams(format!("need k > l >= 1, got k={k}, l={l}")));
    }
    let g = GroupSpec::cyclic(n)?;
    let (ku, lu) = (k as usize, l as usize);
    let mut largest = 0u64;
    while largest < n {
        let m = largest + 1;
        let hit = kl_enumerate(&g, m, ku, lu, 1, true, cfg)?;
        let Some(mut w) = hit.sets.into_iter().next() else {
            break;
        };
        for x in 0..g.n() {
            if w.contains(x) {
                continue;
            }
            w.insert(x);
            if !kl_free(&g, &w, k, l) {
                w.remove(x);
            }
        }
        largest = w.len() as u64;
    }
    if largest == 0 {
        return Ok(SumfreeOutcome {
            size: 0,
            witnesses: Vec::new(),
            truncated: false,
        });
    }
    let all = kl_enumerate(&g, largest, ku, lu, cfg.witness_cap, false, cfg)?;
    Ok(SumfreeOutcome {
        size: largest,
        witnesses: all.sets,
        truncated: all.truncated,
    })
}
