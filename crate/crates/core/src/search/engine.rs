//! Depth-first enumeration of `m`-subsets as ascending element sequences,
//! carrying incremental sumset state and pruning by symmetry.
//!
//! Orbit pruning keeps every set that could be the lexicographically least
//! member of its orbit: with translations the least member contains 0 and
//! no difference of its elements maps below its second element; with
//! automorphisms alone no element maps below its first element. Leaves are
//! therefore a superset of the canonical representatives, and
//! [`Engine::is_canonical`] picks those out exactly.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::sumset::{
    fold_push, initial_layers, restricted_push, sigma_push, sigma_star_push, signed_push, Arena,
    SumsetKind,
};

/// What the per-depth state tracks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum StateKind {
    Layers(SumsetKind, usize),
    Sigma { include_empty: bool },
    Span,
    Nothing,
}

pub(crate) struct Engine<'a, A: Arena> {
    pub ar: &'a A,
    pub n: usize,
    pub m: usize,
    pub state: StateKind,
    translations: bool,
    reduce: bool,
    /// Element maps of the automorphisms in the reduction, identity first.
    tables: Vec<Vec<usize>>,
    umin: Vec<usize>,
    neg: Vec<usize>,
    allowed: Vec<bool>,
    asym_only: bool,
}

/// Per-node view passed to visitors.
pub(crate) struct Node<'s, S> {
    pub cur: &'s S,
    pub elems: &'s [usize],
    pub layers: &'s [S],
}

pub(crate) trait Visitor<A: Arena> {
    /// Cut the subtree below a partial set with `remaining` elements to go.
    fn cut(&self, eng: &Engine<'_, A>, layers: &[A::Set], remaining: usize) -> bool;
    /// Handle a full-size set; returning false stops this chunk.
    fn leaf(&mut self, eng: &Engine<'_, A>, node: Node<'_, A::Set>) -> bool;
    /// Whether the chunk may stop early because an earlier chunk already
    /// produced the answer.
    fn abandoned(&self) -> bool {
        false
    }
}

pub(crate) struct EngineSpec {
    pub n: usize,
    pub m: usize,
    pub state: StateKind,
    pub translations: bool,
    pub reduce: bool,
    pub tables: Vec<Vec<usize>>,
    pub exclude_zero: bool,
    pub asym_only: bool,
}

impl<'a, A: Arena + Sync> Engine<'a, A> {
    pub fn new(ar: &'a A, spec: EngineSpec) -> Self {
        let n = spec.n;
        let umin = (0..n)
            .map(|x| spec.tables.iter().map(|t| t[x]).min().unwrap_or(x))
            .collect();
        let neg = (0..n).map(|x| ar.neg_elem(x)).collect();
        let mut allowed = vec![true; n];
        if spec.exclude_zero {
            allowed[0] = false;
        }
        Engine {
            ar,
            n,
            m: spec.m,
            state: spec.state,
            translations: spec.translations,
            reduce: spec.reduce,
            tables: spec.tables,
            umin,
            neg,
            allowed,
            asym_only: spec.asym_only,
        }
    }

    pub fn initial_state(&self) -> Vec<A::Set> {
        match self.state {
            StateKind::Layers(_, h) => initial_layers(self.ar, h),
            StateKind::Sigma { include_empty: true } | StateKind::Span => vec![self.ar.origin()],
            StateKind::Sigma { include_empty: false } => vec![self.ar.empty()],
            StateKind::Nothing => Vec::new(),
        }
    }

    pub fn push(&self, layers: &mut [A::Set], x: usize) {
        let ar = self.ar;
        match self.state {
            StateKind::Layers(SumsetKind::Fold, _) => fold_push(ar, layers, x),
            StateKind::Layers(SumsetKind::Restricted, _) => restricted_push(ar, layers, x),
            StateKind::Layers(SumsetKind::Signed, _) => signed_push(ar, layers, x),
            StateKind::Sigma { include_empty: true } => sigma_push(ar, &mut layers[0], x),
            StateKind::Sigma { include_empty: false } => sigma_star_push(ar, &mut layers[0], x),
            StateKind::Span => {
                let s = &mut layers[0];
                loop {
                    let mut next = s.clone();
                    ar.join(&mut next, &ar.shift(s, x));
                    if next == *s {
                        break;
                    }
                    *s = next;
                }
            }
            StateKind::Nothing => {}
        }
    }

    /// Size of the tracked target set.
    pub fn value(&self, layers: &[A::Set]) -> usize {
        layers.last().map_or(0, |s| self.ar.count(s))
    }

    /// Lower bound on the final target size over all completions.
    pub fn bound(&self, layers: &[A::Set], remaining: usize) -> usize {
        let ar = self.ar;
        match self.state {
            StateKind::Layers(SumsetKind::Restricted, h) => layers[h.saturating_sub(remaining)..]
                .iter()
                .map(|s| ar.count(s))
                .max()
                .unwrap_or(0),
            // hA contains tA' + (h - t)a for any later element a.
            StateKind::Layers(_, _) if remaining > 0 => {
                layers.iter().map(|s| ar.count(s)).max().unwrap_or(0)
            }
            _ => self.value(layers),
        }
    }

    pub fn is_full(&self, layers: &[A::Set]) -> bool {
        self.value(layers) == self.n
    }

    pub fn neg(&self, x: usize) -> usize {
        self.neg[x]
    }

    fn admissible(&self, elems: &[usize], cur: &A::Set, x: usize) -> bool {
        if !self.allowed[x] {
            return false;
        }
        if self.asym_only && (self.neg[x] == x || self.ar.contains(cur, self.neg[x])) {
            return false;
        }
        if !self.reduce {
            return true;
        }
        let j = elems.len();
        if self.translations {
            if j == 0 {
                return x == 0;
            }
            let a1 = if j == 1 { x } else { elems[1] };
            elems.iter().all(|&y| {
                let d = self.ar.add_elem(x, self.neg[y]);
                self.umin[d] >= a1 && self.umin[self.neg[d]] >= a1
            })
        } else if j == 0 {
            self.umin[x] == x
        } else {
            self.umin[x] >= elems[0]
        }
    }

    /// Whether `cur` is the lexicographically least set in its orbit.
    pub fn is_canonical(&self, cur: &A::Set, elems: &[usize]) -> bool {
        if !self.reduce {
            return true;
        }
        let ar = self.ar;
        if self.translations {
            for &b in elems {
                let moved = ar.shift(cur, self.neg[b]);
                for (i, t) in self.tables.iter().enumerate() {
                    if b == 0 && i == 0 {
                        continue;
                    }
                    if ar.lex_lt(&ar.map(&moved, t), cur) {
                        return false;
                    }
                }
            }
        } else {
            for t in &self.tables[1..] {
                if ar.lex_lt(&ar.map(cur, t), cur) {
                    return false;
                }
            }
        }
        true
    }

    /// Admissible prefixes of length `min(depth, m)` in lexicographic order.
    fn prefixes(&self, depth: usize) -> Vec<Vec<usize>> {
        let depth = depth.min(self.m);
        let mut out = Vec::new();
        let mut elems = Vec::new();
        let mut cur = self.ar.empty();
        self.collect_prefixes(depth, &mut elems, &mut cur, &mut out);
        out
    }

    fn collect_prefixes(
        &self,
        depth: usize,
        elems: &mut Vec<usize>,
        cur: &mut A::Set,
        out: &mut Vec<Vec<usize>>,
    ) {
        if elems.len() == depth {
            out.push(elems.clone());
            return;
        }
        let start = elems.last().map_or(0, |&x| x + 1);
        let need = self.m - elems.len();
        for x in start..=(self.n - need) {
            if !self.admissible(elems, cur, x) {
                continue;
            }
            let saved = cur.clone();
            self.ar.insert(cur, x);
            elems.push(x);
            self.collect_prefixes(depth, elems, cur, out);
            elems.pop();
            *cur = saved;
        }
    }

    /// Runs one chunk: replays `prefix`, then explores below it.
    fn run_chunk<V: Visitor<A>>(&self, prefix: &[usize], v: &mut V) {
        let m = self.m;
        let mut layers: Vec<Vec<A::Set>> = vec![self.initial_state(); m + 1];
        let mut curs = vec![self.ar.empty(); m + 1];
        let mut elems = Vec::with_capacity(m);
        for (j, &x) in prefix.iter().enumerate() {
            let (lo, hi) = layers.split_at_mut(j + 1);
            hi[0].clone_from(&lo[j]);
            self.push(&mut hi[0], x);
            curs[j + 1] = curs[j].clone();
            self.ar.insert(&mut curs[j + 1], x);
            elems.push(x);
            if v.cut(self, &layers[j + 1], m - j - 1) {
                return;
            }
        }
        self.descend(&mut elems, &mut curs, &mut layers, v);
    }

    fn descend<V: Visitor<A>>(
        &self,
        elems: &mut Vec<usize>,
        curs: &mut [A::Set],
        layers: &mut [Vec<A::Set>],
        v: &mut V,
    ) -> bool {
        let j = elems.len();
        if j == self.m {
            return v.leaf(
                self,
                Node {
                    cur: &curs[j],
                    elems,
                    layers: &layers[j],
                },
            );
        }
        if v.abandoned() {
            return false;
        }
        let start = elems.last().map_or(0, |&x| x + 1);
        let need = self.m - j;
        for x in start..=(self.n - need) {
            if !self.admissible(elems, &curs[j], x) {
                continue;
            }
            {
                let (lo, hi) = layers.split_at_mut(j + 1);
                hi[0].clone_from(&lo[j]);
                self.push(&mut hi[0], x);
            }
            {
                let (lo, hi) = curs.split_at_mut(j + 1);
                hi[0].clone_from(&lo[j]);
                self.ar.insert(&mut hi[0], x);
            }
            elems.push(x);
            let go_on = v.cut(self, &layers[j + 1], self.m - j - 1)
                || self.descend(elems, curs, layers, v);
            elems.pop();
            if !go_on {
                return false;
            }
        }
        true
    }

    /// Runs `make(i)` visitors over chunks in a pool of `jobs` threads and
    /// returns them in chunk order.
    pub fn run<V, F>(&self, jobs: usize, make: F) -> Result<Vec<V>>
    where
        V: Visitor<A> + Send,
        F: Fn(usize) -> V + Sync,
    {
        if self.m == 0 {
            return Ok(Vec::new());
        }
        let prefixes = self.prefixes(2);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map_err(|e| Error::Io(format!("worker pool: {e}")))?;
        Ok(pool.install(|| {
            prefixes
                .par_iter()
                .enumerate()
                .map(|(i, p)| {
                    let mut v = make(i);
                    self.run_chunk(p, &mut v);
                    v
                })
                .collect()
        }))
    }
}

/// Lowest chunk index that has reported a hit; later chunks may stop.
pub(crate) struct FirstHit(AtomicUsize);

impl FirstHit {
    pub fn new() -> Self {
        FirstHit(AtomicUsize::new(usize::MAX))
    }
    pub fn report(&self, chunk: usize) {
        self.0.fetch_min(chunk, Ordering::Relaxed);
    }
    pub fn beaten(&self, chunk: usize) -> bool {
        self.0.load(Ordering::Relaxed) < chunk
    }
}
