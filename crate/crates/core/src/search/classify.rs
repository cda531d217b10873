//! Structure tags for extremal sets.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::arith::divisors;
use crate::error::Result;
use crate::group::{cyclic_divisor_subgroup, GroupSpec};
use crate::set::ElementSet;
use crate::sumset::{symmetry_class, SymmetryClass};

/// How a set sits over the cosets of the order-`d` subgroup of `Z_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetProfile {
    pub d: u64,
    /// Cosets contained in the set.
    pub full_cosets: u64,
    /// Cosets meeting the set without being contained in it.
    pub partial_cosets: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessClassification {
    pub is_ap: bool,
    pub in_prime_coset: bool,
    pub coset_union_profile: Option<CosetProfile>,
    pub is_cube: bool,
    pub symmetry: SymmetryClass,
}

/// Coset profile of `a` against the order-`d` subgroup of the cyclic group.
pub fn coset_profile(g: &GroupSpec, a: &ElementSet, d: u64) -> Result<CosetProfile> {
    let h = cyclic_divisor_subgroup(g.order(), d)?.subgroup;
    let index = g.order() / d;
    let (mut full, mut partial) = (0, 0);
    for r in 0..index as usize {
        let coset = g.translate_set(&h, r);
        let hit = coset.intersection(a).len();
        if hit == d as usize {
            full += 1;
        } else if hit > 0 {
            partial += 1;
        }
    }
    Ok(CosetProfile {
        d,
        full_cosets: full,
        partial_cosets: partial,
    })
}

/// The least common difference of `a` as an arithmetic progression, if it
/// is one.
pub fn ap_step(g: &GroupSpec, a: &ElementSet) -> Option<usize> {
    let elems = a.to_vec();
    let m = elems.len();
    if m <= 1 {
        return Some(0);
    }
    let mut best: Option<usize> = None;
    for &start in &elems {
        for &next in &elems {
            if next == start {
                continue;
            }
            let step = g.add_idx(next, g.neg_idx(start));
            let mut x = start;
            let mut ok = true;
            for _ in 1..m {
                x = g.add_idx(x, step);
                if !a.contains(x) || x == start {
                    ok = false;
                    break;
                }
            }
            if ok && best.is_none_or(|b| step < b) {
                best = Some(step);
            }
        }
    }
    best
}

fn in_prime_coset(g: &GroupSpec, a: &ElementSet) -> bool {
    let Some(first) = a.iter().next() else {
        return false;
    };
    let p = g.smallest_prime();
    if p == 0 || a.len() as u64 > p {
        return false;
    }
    let shifted = g.translate_set(a, g.neg_idx(first));
    g.prime_order_subgroups(p)
        .map(|subs| subs.iter().any(|c| shifted.is_subset(&c.subgroup)))
        .unwrap_or(false)
}

fn is_cube(g: &GroupSpec, a: &ElementSet) -> bool {
    let e = a.to_vec();
    if e.len() != 4 {
        return false;
    }
    // {a, a+g1, a+g2, a+g1+g2}: some pairing has b + c = a + d.
    let pairings = [(0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2)];
    pairings
        .iter()
        .any(|&(i, j, k, l)| g.add_idx(e[i], e[j]) == g.add_idx(e[k], e[l]))
}

fn best_profile(g: &GroupSpec, a: &ElementSet) -> Option<CosetProfile> {
    if !g.is_cyclic() {
        return None;
    }
    let n = g.order();
    divisors(n)
        .into_iter()
        .filter(|&d| d > 1 && d < n)
        .filter_map(|d| coset_profile(g, a, d).ok())
        .min_by_key(|p| (p.partial_cosets, std::cmp::Reverse(p.full_cosets), p.d))
}

fn subsets_of(pool: &[usize], m: usize, n: usize, out: &mut BTreeSet<ElementSet>) {
    fn walk(pool: &[usize], m: usize, n: usize, from: usize, cur: &mut Vec<usize>, out: &mut BTreeSet<ElementSet>) {
        if cur.len() == m {
            out.insert(ElementSet::from_indices(n, cur.iter().copied()));
            return;
        }
        for i in from..pool.len() {
            if pool.len() - i < m - cur.len() {
                break;
            }
            cur.push(pool[i]);
            walk(pool, m, n, i + 1, cur, out);
            cur.pop();
        }
    }
    walk(pool, m, n, 0, &mut Vec::new(), out);
}

/// Every arithmetic progression of `m` distinct elements.
pub fn progressions(g: &GroupSpec, m: usize) -> BTreeSet<ElementSet> {
    let n = g.n();
    let mut out = BTreeSet::new();
    if m == 0 || m > n {
        return out;
    }
    for step in 0..n {
        if m > 1 && (g.element_order(step) as usize) < m {
            continue;
        }
        for start in 0..n {
            let mut x = start;
            let mut s = ElementSet::empty(n);
            for _ in 0..m {
                s.insert(x);
                x = g.add_idx(x, step);
            }
            out.insert(s);
        }
    }
    out
}

/// Every `m`-subset of a coset of a subgroup whose order is the smallest
/// prime divisor of the group order.
pub fn prime_coset_subsets(g: &GroupSpec, m: usize) -> BTreeSet<ElementSet> {
    let mut out = BTreeSet::new();
    let Ok(subs) = g.prime_order_subgroups(g.smallest_prime()) else {
        return out;
    };
    for c in subs {
        for r in 0..g.n() {
            let coset = g.translate_set(&c.subgroup, r).to_vec();
            subsets_of(&coset, m, g.n(), &mut out);
        }
    }
    out
}

/// Every set `{a, a+g1, a+g2, a+g1+g2}` with four distinct elements.
pub fn cubes(g: &GroupSpec) -> BTreeSet<ElementSet> {
    let n = g.n();
    let mut out = BTreeSet::new();
    for g1 in 1..n {
        for g2 in 1..n {
            let s = ElementSet::from_indices(n, [0, g1, g2, g.add_idx(g1, g2)]);
            if s.len() != 4 {
                continue;
            }
            for a in 0..n {
                out.insert(g.translate_set(&s, a));
            }
        }
    }
    out
}

pub fn classify_witness(g: &GroupSpec, a: &ElementSet) -> WitnessClassification {
    WitnessClassification {
        is_ap: ap_step(g, a).is_some(),
        in_prime_coset: in_prime_coset(g, a),
        coset_union_profile: best_profile(g, a),
        is_cube: is_cube(g, a),
        symmetry: symmetry_class(g, a),
    }
}
