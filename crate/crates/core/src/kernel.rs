//! Single-word set arithmetic for groups of order at most 64.
//!
//! A translation by `(t_1, ..., t_r)` is a composition of block rotations:
//! coordinate `i` moves every bit by `t_i * stride_i` inside blocks of
//! `n_i * stride_i` bits. Each rotation is two masked shifts, so a translate
//! costs `O(r)` word operations regardless of the set size.

use crate::group::GroupSpec;

pub const MAX_MASK_ORDER: usize = 64;

#[derive(Clone, Copy, Default, Debug)]
struct Rotation {
    /// Bits whose in-block offset stays inside the block after the shift.
    stay: u64,
    shl: u32,
    shr: u32,
}

#[derive(Clone, Debug)]
pub struct MaskGroup {
    n: usize,
    full: u64,
    /// Per element: the rotations of its nonzero coordinates.
    steps: Vec<([Rotation; 6], u8)>,
    neg: Vec<u8>,
    add: Vec<u8>,
}

impl MaskGroup {
    pub fn new(g: &GroupSpec) -> Option<Self> {
        let n = g.n();
        if n > MAX_MASK_ORDER {
            return None;
        }
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let factors = g.factors();
        let mut strides = vec![1usize; factors.len()];
        for i in (0..factors.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * factors[i + 1] as usize;
        }
        let mut steps = Vec::with_capacity(n);
        for x in 0..n {
            let residues = g.decode(x);
            let mut rots = [Rotation::default(); 6];
            let mut len = 0;
            for (i, &t) in residues.iter().enumerate() {
                if t == 0 {
                    continue;
                }
                let block = factors[i] as usize * strides[i];
                let shift = t as usize * strides[i];
                let mut stay = 0u64;
                for p in 0..n {
                    if p % block + shift < block {
                        stay |= 1 << p;
                    }
                }
                rots[len] = Rotation {
                    stay,
                    shl: shift as u32,
                    shr: (block - shift) as u32,
                };
                len += 1;
            }
            steps.push((rots, len as u8));
        }
        let neg = (0..n).map(|x| g.neg_idx(x) as u8).collect();
        let mut add = vec![0u8; n * n];
        for a in 0..n {
            for b in 0..n {
                add[a * n + b] = g.add_idx(a, b) as u8;
            }
        }
        Some(MaskGroup {
            n,
            full,
            steps,
            neg,
            add,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn full(&self) -> u64 {
        self.full
    }

    #[inline]
    pub fn translate(&self, mut set: u64, by: usize) -> u64 {
        let (rots, len) = &self.steps[by];
        for r in &rots[..*len as usize] {
            set = ((set & r.stay) << r.shl) | ((set & !r.stay) >> r.shr);
        }
        set
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.n + b] as usize
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.neg[a] as usize
    }

    pub fn negate(&self, set: u64) -> u64 {
        bits(set).fold(0, |acc, x| acc | 1 << self.neg[x])
    }

    /// Image of `set` under the element map `table`.
    pub fn map(&self, set: u64, table: &[u8]) -> u64 {
        bits(set).fold(0, |acc, x| acc | 1 << table[x])
    }

    /// `set + other` (Minkowski sum).
    pub fn sum(&self, set: u64, other: u64) -> u64 {
        bits(other).fold(0, |acc, b| acc | self.translate(set, b))
    }
}

/// Ascending iterator over the set bits of a word.
#[inline]
pub fn bits(mut w: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if w == 0 {
            None
        } else {
            let b = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(b)
        }
    })
}
