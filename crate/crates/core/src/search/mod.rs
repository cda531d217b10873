//! Exhaustive extremal searches: minimum sumset sizes over `m`-subsets,
//! critical numbers, witness classification, and the sum-free and
//! subset-sum inverse searches.

mod classify;
mod critical;
mod engine;
mod inverse;

use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::arith::binomial;
use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::kernel::MaskGroup;
use crate::set::ElementSet;
use crate::sumset::{Arena, SumsetKind};

use engine::{Engine, EngineSpec, FirstHit, Node, StateKind, Visitor};

pub use classify::{
    ap_step, classify_witness, coset_profile, cubes, prime_coset_subsets, progressions, CosetProfile,
    WitnessClassification,
};
pub use critical::{critical_number, critical_sigma, critical_span, CriticalOutcome};
pub use inverse::{max_kl_sumfree, min_dilated_norm, sigma_noncovering_sets, SumfreeOutcome};

pub const DEFAULT_BUDGET: u64 = 50_000_000;
pub const DEFAULT_WITNESS_CAP: usize = 10_000;

/// The quantity minimised over `m`-subsets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "type")]
pub enum Target {
    Sumset { kind: SumsetKind, h: u64 },
    /// `ΣA`, or `Σ*A` when `include_empty` is false.
    Sigma { include_empty: bool },
    /// The generated subgroup.
    Span,
}

impl Target {
    pub fn fold(h: u64) -> Self {
        Target::Sumset {
            kind: SumsetKind::Fold,
            h,
        }
    }
    pub fn restricted(h: u64) -> Self {
        Target::Sumset {
            kind: SumsetKind::Restricted,
            h,
        }
    }
    pub fn signed(h: u64) -> Self {
        Target::Sumset {
            kind: SumsetKind::Signed,
            h,
        }
    }

    /// Whether `|S(A + t)| = |S(A)|` for every translation `t`.
    pub fn translation_invariant(self) -> bool {
        matches!(
            self,
            Target::Sumset {
                kind: SumsetKind::Fold | SumsetKind::Restricted,
                ..
            }
        )
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Filter {
    #[default]
    All,
    Symmetric,
    NearSymmetric,
    Asymmetric,
}

impl std::str::FromStr for Filter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Filter::All),
            "sym" | "symmetric" => Ok(Filter::Symmetric),
            "nsym" | "near_symmetric" => Ok(Filter::NearSymmetric),
            "asym" | "asymmetric" => Ok(Filter::Asymmetric),
            _ => Err(Error::Unsupported(format!("unknown filter {s:?}"))),
        }
    }
}

/// Symmetry group used to cut the enumeration down to orbit
/// representatives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reduction {
    None,
    Translation,
    TranslationNegation,
    /// Translations and multiplication by units.
    Affine,
    /// Multiplication by units (negation included), no translations.
    Dilation,
}

impl Reduction {
    /// The largest reduction that preserves the target and filter: affine
    /// maps for fold and restricted sumsets, unit dilations otherwise.
    pub fn full_for(target: Target, filter: Filter) -> Self {
        if filter == Filter::All && target.translation_invariant() {
            Reduction::Affine
        } else {
            Reduction::Dilation
        }
    }

    fn translations(self) -> bool {
        matches!(
            self,
            Reduction::Translation | Reduction::TranslationNegation | Reduction::Affine
        )
    }

    /// Element maps of the automorphism part, identity first, deduplicated.
    fn tables(self, g: &GroupSpec) -> Vec<Vec<usize>> {
        let n = g.n();
        let multipliers: Vec<i64> = match self {
            Reduction::None => return Vec::new(),
            Reduction::Translation => vec![1],
            Reduction::TranslationNegation => vec![1, -1],
            Reduction::Affine | Reduction::Dilation => {
                g.unit_multipliers().into_iter().map(|u| u as i64).collect()
            }
        };
        let mut out: Vec<Vec<usize>> = Vec::new();
        for u in multipliers {
            let t: Vec<usize> = (0..n).map(|x| g.scale_idx(u, x)).collect();
            if !out.contains(&t) {
                out.push(t);
            }
        }
        out
    }

    /// Size of the acting group.
    pub fn group_size(self, g: &GroupSpec) -> u64 {
        let autos = self.tables(g).len().max(1) as u64;
        if self.translations() {
            autos * g.order()
        } else {
            autos
        }
    }
}

impl std::str::FromStr for Reduction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Reduction::None),
            "translation" => Ok(Reduction::Translation),
            "translation_negation" => Ok(Reduction::TranslationNegation),
            "affine" => Ok(Reduction::Affine),
            "dilation" => Ok(Reduction::Dilation),
            _ => Err(Error::Unsupported(format!("unknown reduction {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchTask {
    pub group: GroupSpec,
    pub m: u64,
    pub target: Target,
    pub filter: Filter,
    pub reduction: Reduction,
}

impl SearchTask {
    /// A task with no filter and the full reduction for its target.
    pub fn new(group: GroupSpec, m: u64, target: Target) -> Self {
        SearchTask {
            group,
            m,
            target,
            filter: Filter::All,
            reduction: Reduction::full_for(target, Filter::All),
        }
    }

    pub fn with_filter(mut self, filter: Filter) -> Self {
        self.filter = filter;
        self.reduction = Reduction::full_for(self.target, filter);
        self
    }

    pub fn with_reduction(mut self, reduction: Reduction) -> Self {
        self.reduction = reduction;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Largest estimated orbit count a search may enumerate.
    pub budget: u64,
    pub witness_cap: usize,
    pub jobs: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            budget: DEFAULT_BUDGET,
            witness_cap: DEFAULT_WITNESS_CAP,
            jobs: 1,
        }
    }
}

impl SearchConfig {
    pub fn with_cap(mut self, cap: usize) -> Self {
        self.witness_cap = cap;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub value: u64,
    /// Canonical minimisers (least in their orbit), ascending.
    pub witnesses: Vec<ElementSet>,
    /// More canonical minimisers exist beyond the cap.
    pub truncated: bool,
}

/// Estimated orbit count `C(n, m) / |reduction group|`, rounded up.
pub fn orbit_estimate(g: &GroupSpec, m: u64, reduction: Reduction) -> u64 {
    binomial(g.order(), m).div_ceil(reduction.group_size(g))
}

pub(crate) fn check_budget(g: &GroupSpec, m: u64, reduction: Reduction, budget: u64) -> Result<()> {
    let estimate = orbit_estimate(g, m, reduction);
    if estimate > budget {
        return Err(Error::BudgetExceeded { estimate, budget });
    }
    Ok(())
}

fn validate(task: &SearchTask) -> Result<()> {
    let n = task.group.order();
    if task.m == 0 || task.m > n {
        return Err(Error::InvalidSize { n, m: task.m });
    }
    if task.reduction.translations() {
        if !task.target.translation_invariant() {
            return Err(Error::InvalidParams(format!(
                "{:?} reduction does not preserve the size of {:?}",
                task.reduction, task.target
            )));
        }
        if task.filter != Filter::All {
            return Err(Error::InvalidParams(
                "symmetry filters are not preserved by translations".into(),
            ));
        }
    }
    if let Target::Sumset {
        kind: SumsetKind::Signed,
        h,
    } = task.target
    {
        if h > n + task.m {
            return Err(Error::InvalidFold {
                h,
                reason: format!("signed sumsets are capped at n + m = {}", n + task.m),
            });
        }
    }
    Ok(())
}

fn state_for(target: Target, m: usize) -> StateKind {
    match target {
        Target::Sumset { kind, h } => {
            let h = h as usize;
            // |h^A| = |(m-h)^A| by complementing the chosen elements.
            if kind == SumsetKind::Restricted && h <= m && 2 * h > m {
                StateKind::Layers(kind, m - h)
            } else {
                StateKind::Layers(kind, h)
            }
        }
        Target::Sigma { include_empty } => StateKind::Sigma { include_empty },
        Target::Span => StateKind::Span,
    }
}

pub(crate) fn engine_spec(
    g: &GroupSpec,
    m: usize,
    state: StateKind,
    reduction: Reduction,
    exclude_zero: bool,
    asym_only: bool,
) -> EngineSpec {
    EngineSpec {
        n: g.n(),
        m,
        state,
        translations: reduction.translations(),
        reduce: reduction != Reduction::None,
        tables: reduction.tables(g),
        exclude_zero,
        asym_only,
    }
}

fn passes<A: Arena>(eng: &Engine<'_, A>, filter: Filter, cur: &A::Set, elems: &[usize]) -> bool {
    let unpaired = || {
        elems
            .iter()
            .filter(|&&x| !eng.ar.contains(cur, eng.neg(x)))
            .count()
    };
    match filter {
        Filter::All => true,
        Filter::Symmetric => unpaired() == 0,
        Filter::NearSymmetric => unpaired() == 1,
        Filter::Asymmetric => elems.iter().all(|&x| !eng.ar.contains(cur, eng.neg(x))),
    }
}

struct MinVisitor<'s, S> {
    shared: &'s AtomicU64,
    filter: Filter,
    cap: usize,
    best: u64,
    witnesses: Vec<S>,
    truncated: bool,
}

impl<'s, S> MinVisitor<'s, S> {
    fn limit(&self) -> u64 {
        self.best.min(self.shared.load(Ordering::Relaxed))
    }
}

impl<A: Arena> Visitor<A> for MinVisitor<'_, A::Set> {
    fn cut(&self, eng: &Engine<'_, A>, layers: &[A::Set], remaining: usize) -> bool {
        eng.bound(layers, remaining) as u64 > self.limit()
    }

    fn leaf(&mut self, eng: &Engine<'_, A>, node: Node<'_, A::Set>) -> bool {
        if !passes(eng, self.filter, node.cur, node.elems) {
            return true;
        }
        let value = eng.value(node.layers) as u64;
        if value > self.limit() {
            return true;
        }
        if value < self.best {
            self.best = value;
            self.witnesses.clear();
            self.truncated = false;
            self.shared.fetch_min(value, Ordering::Relaxed);
        }
        if self.witnesses.len() < self.cap {
            if eng.is_canonical(node.cur, node.elems) {
                self.witnesses.push(node.cur.clone());
            }
        } else if !self.truncated && eng.is_canonical(node.cur, node.elems) {
            self.truncated = true;
        }
        true
    }
}

fn min_with<A: Arena + Sync>(ar: &A, task: &SearchTask, cfg: &SearchConfig) -> Result<SearchOutcome> {
    let g = &task.group;
    let m = task.m as usize;
    let spec = engine_spec(
        g,
        m,
        state_for(task.target, m),
        task.reduction,
        false,
        task.filter == Filter::Asymmetric,
    );
    let eng = Engine::new(ar, spec);
    let shared = AtomicU64::new(u64::MAX);
    let chunks = eng.run(cfg.jobs, |_| MinVisitor {
        shared: &shared,
        filter: task.filter,
        cap: cfg.witness_cap,
        best: u64::MAX,
        witnesses: Vec::new(),
        truncated: false,
    })?;
    let best = chunks.iter().map(|c| c.best).min().unwrap_or(u64::MAX);
    if best == u64::MAX {
        return Err(Error::EmptySearchSpace(format!(
            "no {m}-subset of {g} passes the {:?} filter",
            task.filter
        )));
    }
    let mut witnesses = Vec::new();
    let mut truncated = false;
    for c in chunks.into_iter().filter(|c| c.best == best) {
        truncated |= c.truncated;
        for w in c.witnesses {
            if witnesses.len() < cfg.witness_cap {
                witnesses.push(ar.to_element_set(&w));
            } else {
                truncated = true;
            }
        }
    }
    Ok(SearchOutcome {
        value: best,
        witnesses,
        truncated,
    })
}

/// Exact minimum of the target size over all `m`-subsets passing the
/// filter, with the canonical minimisers.
pub fn min_size(task: &SearchTask, cfg: &SearchConfig) -> Result<SearchOutcome> {
    validate(task)?;
    check_budget(&task.group, task.m, task.reduction, cfg.budget)?;
    match MaskGroup::new(&task.group) {
        Some(k) => min_with(&k, task, cfg),
        None => min_with(&task.group, task, cfg),
    }
}

/// Minimum of `|ΣA|` (or `|Σ*A|`) over `m`-subsets passing the filter.
pub fn min_size_sigma(
    g: &GroupSpec,
    m: u64,
    include_empty: bool,
    filter: Filter,
    cfg: &SearchConfig,
) -> Result<SearchOutcome> {
    let task = SearchTask::new(g.clone(), m, Target::Sigma { include_empty }).with_filter(filter);
    min_size(&task, cfg)
}

/// Every `m`-subset (no symmetry reduction) whose target size is exactly
/// `value`, ascending.
pub fn sets_attaining(task: &SearchTask, value: u64, cfg: &SearchConfig) -> Result<Vec<ElementSet>> {
    let task = task.clone().with_reduction(Reduction::None);
    validate(&task)?;
    check_budget(&task.group, task.m, Reduction::None, cfg.budget)?;
    let g = &task.group;
    let m = task.m as usize;
    let filter = task.filter;
    let spec = engine_spec(g, m, state_for(task.target, m), Reduction::None, false, false);
    let out = match MaskGroup::new(g) {
        Some(k) => enumerate(
            &k,
            spec,
            cfg.jobs,
            usize::MAX,
            false,
            false,
            |e, l, r| e.bound(l, r) as u64 > value,
            |e, node| e.value(node.layers) as u64 == value && passes(e, filter, node.cur, node.elems),
        )?,
        None => enumerate(
            g,
            spec,
            cfg.jobs,
            usize::MAX,
            false,
            false,
            |e, l, r| e.bound(l, r) as u64 > value,
            |e, node| e.value(node.layers) as u64 == value && passes(e, filter, node.cur, node.elems),
        )?,
    };
    Ok(out.sets)
}

/// Predicate-driven enumeration: `cut` prunes hereditary failures, `keep`
/// selects leaves. In `first_only` mode each chunk stops at its first kept
/// leaf and later chunks stop once an earlier chunk has a hit.
struct PredVisitor<'s, C, K, S> {
    cut: &'s C,
    keep: &'s K,
    canonical_only: bool,
    first_only: bool,
    chunk: usize,
    hits: &'s FirstHit,
    cap: usize,
    found: Vec<S>,
    truncated: bool,
}

impl<A, C, K> Visitor<A> for PredVisitor<'_, C, K, A::Set>
where
    A: Arena + Sync,
    C: Fn(&Engine<'_, A>, &[A::Set], usize) -> bool,
    K: Fn(&Engine<'_, A>, &Node<'_, A::Set>) -> bool,
{
    fn cut(&self, eng: &Engine<'_, A>, layers: &[A::Set], remaining: usize) -> bool {
        (self.cut)(eng, layers, remaining)
    }

    fn leaf(&mut self, eng: &Engine<'_, A>, node: Node<'_, A::Set>) -> bool {
        if !(self.keep)(eng, &node) {
            return true;
        }
        if self.canonical_only && !eng.is_canonical(node.cur, node.elems) {
            return true;
        }
        if self.found.len() >= self.cap {
            self.truncated = true;
            return false;
        }
        self.found.push(node.cur.clone());
        if self.first_only {
            self.hits.report(self.chunk);
            return false;
        }
        true
    }

    fn abandoned(&self) -> bool {
        self.first_only && self.hits.beaten(self.chunk)
    }
}

pub(crate) struct Enumerated {
    pub sets: Vec<ElementSet>,
    pub truncated: bool,
}

/// Runs a predicate enumeration and returns kept leaves in lexicographic
/// order (only the first one when `first_only`).
#[allow(clippy::too_many_arguments)]
pub(crate) fn enumerate<A, C, K>(
    ar: &A,
    spec: EngineSpec,
    jobs: usize,
    cap: usize,
    canonical_only: bool,
    first_only: bool,
    cut: C,
    keep: K,
) -> Result<Enumerated>
where
    A: Arena + Sync,
    C: Fn(&Engine<'_, A>, &[A::Set], usize) -> bool + Sync,
    K: Fn(&Engine<'_, A>, &Node<'_, A::Set>) -> bool + Sync,
{
    let eng = Engine::new(ar, spec);
    let hits = FirstHit::new();
    let chunks = eng.run(jobs, |chunk| PredVisitor {
        cut: &cut,
        keep: &keep,
        canonical_only,
        first_only,
        chunk,
        hits: &hits,
        cap,
        found: Vec::new(),
        truncated: false,
    })?;
    let mut sets = Vec::new();
    let mut truncated = false;
    for c in chunks {
        truncated |= c.truncated;
        for s in c.found {
            if sets.len() < cap {
                sets.push(ar.to_element_set(&s));
            } else {
                truncated = true;
            }
        }
        if first_only && !sets.is_empty() {
            break;
        }
    }
    Ok(Enumerated { sets, truncated })
}

/// One representative (the lexicographically least) of every orbit of
/// `m`-subsets under the reduction group, ascending.
pub fn subset_stream(
    g: &GroupSpec,
    m: u64,
    reduction: Reduction,
    cfg: &SearchConfig,
) -> Result<Vec<ElementSet>> {
    if m == 0 || m > g.order() {
        return Err(Error::InvalidSize { n: g.order(), m });
    }
    check_budget(g, m, reduction, cfg.budget)?;
    let spec = engine_spec(g, m as usize, StateKind::Nothing, reduction, false, false);
    let out = match MaskGroup::new(g) {
        Some(k) => enumerate(&k, spec, cfg.jobs, usize::MAX, true, false, |_, _, _| false, |_, _| true)?,
        None => enumerate(g, spec, cfg.jobs, usize::MAX, true, false, |_, _, _| false, |_, _| true)?,
    };
    Ok(out.sets)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64) -> GroupSpec {
        GroupSpec::cyclic(n).unwrap()
    }

    #[test]
    fn stream_counts() {
        let cfg = SearchConfig::default();
        // Burnside over the dihedral action on Z_5: (10 + 0 + 5*2) / 10.
        let reps = subset_stream(&z(5), 2, Reduction::TranslationNegation, &cfg).unwrap();
        assert_eq!(reps.len(), 2);
        assert_eq!(subset_stream(&z(9), 4, Reduction::None, &cfg).unwrap().len(), 126);
        let reps = subset_stream(&z(9), 2, Reduction::Dilation, &cfg).unwrap();
        // {0,x} splits by the order of x; pairs without 0 fall into more orbits.
        assert!(reps.contains(&ElementSet::from_indices(9, [0, 1])));
        assert!(reps.contains(&ElementSet::from_indices(9, [0, 3])));
        assert!(!reps.contains(&ElementSet::from_indices(9, [0, 2])));
    }

    #[test]
    fn min_examples() {
        let cfg = SearchConfig::default();
        let out = min_size(&SearchTask::new(z(15), 6, Target::fold(2)), &cfg).unwrap();
        assert_eq!(out.value, 9);
        let z3x3 = GroupSpec::new(&[3, 3]).unwrap();
        let out = min_size(&SearchTask::new(z3x3, 4, Target::signed(2)), &cfg).unwrap();
        assert_eq!(out.value, 8);
        let out = min_size(&SearchTask::new(z(11), 4, Target::restricted(2)), &cfg).unwrap();
        assert_eq!(out.value, 5);
    }

    #[test]
    fn attaining_sets_are_the_unreduced_minimisers() {
        let cfg = SearchConfig::default();
        let task = SearchTask::new(z(15), 6, Target::fold(2));
        let all = sets_attaining(&task, 9, &cfg).unwrap();
        // Two of the five cosets of {0,5,10}.
        assert_eq!(all.len(), 10);
        let none = min_size(&task.clone().with_reduction(Reduction::None), &cfg).unwrap();
        assert_eq!(none.witnesses, all);
    }

    #[test]
    fn sigma_examples() {
        let cfg = SearchConfig::default();
        assert_eq!(min_size_sigma(&z(11), 4, true, Filter::All, &cfg).unwrap().value, 5);
        let asym = min_size_sigma(&z(11), 4, true, Filter::Asymmetric, &cfg).unwrap();
        assert_eq!(asym.value, 11);
        assert_eq!(min_size_sigma(&z(15), 6, true, Filter::All, &cfg).unwrap().value, 10);
        assert!(matches!(
            min_size_sigma(&z(7), 4, true, Filter::Asymmetric, &cfg),
            Err(Error::EmptySearchSpace(_))
        ));
    }

    #[test]
    fn budget_refusal() {
        let cfg = SearchConfig {
            budget: 10,
            ..SearchConfig::default()
        };
        let err = min_size(&SearchTask::new(z(20), 10, Target::fold(2)), &cfg).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn invalid_reductions_rejected() {
        let cfg = SearchConfig::default();
        let task = SearchTask::new(z(9), 3, Target::signed(2)).with_reduction(Reduction::Translation);
        assert!(matches!(min_size(&task, &cfg), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let task = SearchTask::new(z(15), 7, Target::fold(2));
        let one = min_size(&task, &SearchConfig::default()).unwrap();
        let four = min_size(&task, &SearchConfig { jobs: 4, ..SearchConfig::default() }).unwrap();
        assert_eq!(one, four);
    }
}
