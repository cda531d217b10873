//! Naive reference implementations. Group arithmetic is redone on residue
//! vectors here so nothing below shares code with the library engines.

#![allow(dead_code)]

use std::collections::BTreeSet;

use sumlab::{ElementSet, GroupSpec};

/// `Z_{n_1} x ... x Z_{n_r}` on residue vectors, indexed mixed-radix with
/// the last factor least significant.
pub struct Naive {
    pub factors: Vec<u64>,
    pub n: usize,
}

impl Naive {
    pub fn of(g: &GroupSpec) -> Self {
        Naive {
            factors: g.factors().to_vec(),
            n: g.order() as usize,
        }
    }

    pub fn decode(&self, mut x: usize) -> Vec<u64> {
        let mut out = vec![0; self.factors.len()];
        for (i, &f) in self.factors.iter().enumerate().rev() {
            out[i] = x as u64 % f;
            x /= f as usize;
        }
        out
    }

    pub fn encode(&self, r: &[i64]) -> usize {
        let mut x = 0usize;
        for (&v, &f) in r.iter().zip(&self.factors) {
            x = x * f as usize + v.rem_euclid(f as i64) as usize;
        }
        x
    }

    /// `sum coeffs[i] * elems[i]`.
    pub fn combine(&self, elems: &[usize], coeffs: &[i64]) -> usize {
        let mut acc = vec![0i64; self.factors.len()];
        for (&e, &c) in elems.iter().zip(coeffs) {
            for (a, r) in acc.iter_mut().zip(self.decode(e)) {
                *a += c * r as i64;
            }
        }
        self.encode(&acc)
    }

    pub fn neg(&self, x: usize) -> usize {
        self.combine(&[x], &[-1])
    }

    pub fn add(&self, x: usize, y: usize) -> usize {
        self.combine(&[x, y], &[1, 1])
    }
}

/// Every coefficient vector of length `m` with entries in `range` whose
/// absolute values sum to `h`.
fn vectors(m: usize, h: i64, range: &[i64], out: &mut Vec<Vec<i64>>) {
    fn walk(m: usize, left: i64, range: &[i64], cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == m {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for &c in range {
            if c.abs() <= left {
                cur.push(c);
                walk(m, left - c.abs(), range, cur, out);
                cur.pop();
            }
        }
    }
    walk(m, h, range, &mut Vec::new(), out);
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Fold,
    Restricted,
    Signed,
}

/// The sumset as the image of all admissible coefficient vectors.
pub fn coefficient_sumset(z: &Naive, a: &[usize], h: u64, op: Op) -> BTreeSet<usize> {
    let h = h as i64;
    let range: Vec<i64> = match op {
        Op::Fold => (0..=h).collect(),
        Op::Restricted => vec![0, 1],
        Op::Signed => (-h..=h).collect(),
    };
    let mut vs = Vec::new();
    vectors(a.len(), h, &range, &mut vs);
    vs.iter().map(|c| z.combine(a, c)).collect()
}

/// All subset sums, the empty one included when asked.
pub fn subset_sums(z: &Naive, a: &[usize], include_empty: bool) -> BTreeSet<usize> {
    let m = a.len();
    (0u64..1 << m)
        .filter(|&bits| include_empty || bits != 0)
        .map(|bits| {
            let c: Vec<i64> = (0..m).map(|i| (bits >> i & 1) as i64).collect();
            z.combine(a, &c)
        })
        .collect()
}

/// The subgroup generated by `a`, by closure under addition.
pub fn generated(z: &Naive, a: &[usize]) -> BTreeSet<usize> {
    let mut out: BTreeSet<usize> = [z.encode(&vec![0; z.factors.len()])].into();
    loop {
        let next: BTreeSet<usize> = out
            .iter()
            .flat_map(|&x| a.iter().map(move |&y| (x, y)))
            .map(|(x, y)| z.add(x, y))
            .chain(out.iter().copied())
            .collect();
        if next == out {
            return out;
        }
        out = next;
    }
}

/// Calls `f` on every `m`-subset of `pool` in lexicographic order.
pub fn for_each_subset(pool: &[usize], m: usize, mut f: impl FnMut(&[usize])) {
    fn walk(pool: &[usize], m: usize, from: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == m {
            f(cur);
            return;
        }
        for i in from..pool.len() {
            if pool.len() - i < m - cur.len() {
                return;
            }
            cur.push(pool[i]);
            walk(pool, m, i + 1, cur, f);
            cur.pop();
        }
    }
    walk(pool, m, 0, &mut Vec::new(), &mut f);
}

/// Minimum of `size` over all `m`-subsets passing `keep`.
pub fn naive_min(
    n: usize,
    m: usize,
    keep: impl Fn(&[usize]) -> bool,
    size: impl Fn(&[usize]) -> usize,
) -> Option<usize> {
    let pool: Vec<usize> = (0..n).collect();
    let mut best = None;
    for_each_subset(&pool, m, |a| {
        if keep(a) {
            let s = size(a);
            best = Some(best.map_or(s, |b: usize| b.min(s)));
        }
    });
    best
}

/// Least `m` such that every `m`-subset of `pool` covers the group, or
/// `None` if even `pool` does not.
pub fn naive_critical(pool: &[usize], covers: impl Fn(&[usize]) -> bool) -> Option<u64> {
    let mut ok = None;
    for m in (1..=pool.len()).rev() {
        let mut all = true;
        for_each_subset(pool, m, |a| all &= covers(a));
        if !all {
            break;
        }
        ok = Some(m as u64);
    }
    ok
}

pub fn is_symmetric(z: &Naive, a: &[usize]) -> bool {
    a.iter().all(|&x| a.contains(&z.neg(x)))
}

pub fn is_asymmetric(z: &Naive, a: &[usize]) -> bool {
    a.iter().all(|&x| !a.contains(&z.neg(x)))
}

pub fn is_near_symmetric(z: &Naive, a: &[usize]) -> bool {
    a.iter().filter(|&&x| !a.contains(&z.neg(x))).count() == 1
}

pub fn to_set(n: usize, xs: impl IntoIterator<Item = usize>) -> ElementSet {
    ElementSet::from_indices(n, xs)
}

/// All abelian groups with order in `lo..=hi`.
pub fn groups(lo: u64, hi: u64) -> Vec<GroupSpec> {
    sumlab::group::abelian_groups_in_range(lo, hi)
}
