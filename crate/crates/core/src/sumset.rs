//! The sumset operators: h-fold, restricted, signed, subset-sum closure, and
//! the generated subgroup, plus symmetry predicates and the signed norm on
//! `Z_p`.
//!
//! Every operator is a layered reachability table updated one element at a
//! time. The same incremental updates drive the exhaustive search, where a
//! table is extended as elements are pushed onto the current subset.

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::kernel::{bits, MaskGroup};
use crate::set::{mask_lex_key, ElementSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SumsetKind {
    Fold,
    Restricted,
    Signed,
}

impl SumsetKind {
    pub fn name(self) -> &'static str {
        match self {
            SumsetKind::Fold => "fold",
            SumsetKind::Restricted => "restricted",
            SumsetKind::Signed => "signed",
        }
    }
}

impl std::str::FromStr for SumsetKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fold" => Ok(SumsetKind::Fold),
            "restricted" => Ok(SumsetKind::Restricted),
            "signed" => Ok(SumsetKind::Signed),
            _ => Err(Error::Unsupported(format!("unknown sumset kind {s:?}"))),
        }
    }
}

/// Set arithmetic backing the layered tables.
pub(crate) trait Arena: Sync {
    type Set: Clone + PartialEq + Send + Sync;
    fn empty(&self) -> Self::Set;
    /// The singleton `{0}`.
    fn origin(&self) -> Self::Set;
    fn shift(&self, s: &Self::Set, by: usize) -> Self::Set;
    fn join(&self, dst: &mut Self::Set, src: &Self::Set);
    fn neg_elem(&self, a: usize) -> usize;
    fn add_elem(&self, a: usize, b: usize) -> usize;
    fn count(&self, s: &Self::Set) -> usize;
    fn contains(&self, s: &Self::Set, x: usize) -> bool;
    fn insert(&self, s: &mut Self::Set, x: usize);
    fn intersects(&self, a: &Self::Set, b: &Self::Set) -> bool;
    /// Image of `s` under an element map.
    fn map(&self, s: &Self::Set, table: &[usize]) -> Self::Set;
    /// Lexicographic order of ascending member lists, for sets of equal size.
    fn lex_lt(&self, a: &Self::Set, b: &Self::Set) -> bool;
    fn to_element_set(&self, s: &Self::Set) -> ElementSet;
}

impl Arena for MaskGroup {
    type Set = u64;

    #[inline]
    fn empty(&self) -> u64 {
        0
    }
    #[inline]
    fn origin(&self) -> u64 {
        1
    }
    #[inline]
    fn shift(&self, s: &u64, by: usize) -> u64 {
        self.translate(*s, by)
    }
    #[inline]
    fn join(&self, dst: &mut u64, src: &u64) {
        *dst |= *src;
    }
    #[inline]
    fn neg_elem(&self, a: usize) -> usize {
        self.neg(a)
    }
    #[inline]
    fn add_elem(&self, a: usize, b: usize) -> usize {
        self.add(a, b)
    }
    #[inline]
    fn count(&self, s: &u64) -> usize {
        s.count_ones() as usize
    }
    #[inline]
    fn contains(&self, s: &u64, x: usize) -> bool {
        s >> x & 1 == 1
    }
    #[inline]
    fn insert(&self, s: &mut u64, x: usize) {
        *s |= 1 << x;
    }
    #[inline]
    fn intersects(&self, a: &u64, b: &u64) -> bool {
        a & b != 0
    }
    #[inline]
    fn map(&self, s: &u64, table: &[usize]) -> u64 {
        bits(*s).fold(0, |acc, x| acc | 1 << table[x])
    }
    #[inline]
    fn lex_lt(&self, a: &u64, b: &u64) -> bool {
        mask_lex_key(*a) < mask_lex_key(*b)
    }
    fn to_element_set(&self, s: &u64) -> ElementSet {
        ElementSet::from_mask(self.n(), *s)
    }
}

impl Arena for GroupSpec {
    type Set = ElementSet;

    fn empty(&self) -> ElementSet {
        ElementSet::empty(self.n())
    }
    fn origin(&self) -> ElementSet {
        ElementSet::singleton(self.n(), 0)
    }
    fn shift(&self, s: &ElementSet, by: usize) -> ElementSet {
        self.translate_set(s, by)
    }
    fn join(&self, dst: &mut ElementSet, src: &ElementSet) {
        dst.union_with(src)
    }
    fn neg_elem(&self, a: usize) -> usize {
        self.neg_idx(a)
    }
    fn add_elem(&self, a: usize, b: usize) -> usize {
        self.add_idx(a, b)
    }
    fn count(&self, s: &ElementSet) -> usize {
        s.len()
    }
    fn contains(&self, s: &ElementSet, x: usize) -> bool {
        s.contains(x)
    }
    fn insert(&self, s: &mut ElementSet, x: usize) {
        s.insert(x)
    }
    fn intersects(&self, a: &ElementSet, b: &ElementSet) -> bool {
        !a.is_disjoint(b)
    }
    fn map(&self, s: &ElementSet, table: &[usize]) -> ElementSet {
        ElementSet::from_indices(self.n(), s.iter().map(|x| table[x]))
    }
    fn lex_lt(&self, a: &ElementSet, b: &ElementSet) -> bool {
        a < b
    }
    fn to_element_set(&self, s: &ElementSet) -> ElementSet {
        s.clone()
    }
}

/// Layers `0..=h` for the empty subset: `{0}` then empties.
pub(crate) fn initial_layers<A: Arena>(ar: &A, h: usize) -> Vec<A::Set> {
    let mut v = vec![ar.empty(); h + 1];
    v[0] = ar.origin();
    v
}

/// `layers[t] = tA` becomes `t(A + {a})`: sums using `a` at least once are
/// `a + (t-1)(A + {a})`.
#[inline]
pub(crate) fn fold_push<A: Arena>(ar: &A, layers: &mut [A::Set], a: usize) {
    for t in 1..layers.len() {
        let moved = ar.shift(&layers[t - 1], a);
        ar.join(&mut layers[t], &moved);
    }
}

/// `layers[t]` holds the sums of exactly `t` distinct elements; descending
/// update so each element is used at most once.
#[inline]
pub(crate) fn restricted_push<A: Arena>(ar: &A, layers: &mut [A::Set], a: usize) {
    for t in (1..layers.len()).rev() {
        let moved = ar.shift(&layers[t - 1], a);
        ar.join(&mut layers[t], &moved);
    }
}

/// `layers[t]` holds the sums with total absolute coefficient weight `t`.
/// The new element takes weight `w >= 1` with either sign: the positive
/// contributions satisfy `P[t] = (L[t-1] + P[t-1]) + a`, likewise for `-a`.
#[inline]
pub(crate) fn signed_push<A: Arena>(ar: &A, layers: &mut [A::Set], a: usize) {
    let na = ar.neg_elem(a);
    let mut prev_old = layers[0].clone();
    let mut pos = ar.empty();
    let mut neg = ar.empty();
    for layer in layers.iter_mut().skip(1) {
        ar.join(&mut pos, &prev_old);
        pos = ar.shift(&pos, a);
        ar.join(&mut neg, &prev_old);
        neg = ar.shift(&neg, na);
        prev_old = layer.clone();
        ar.join(layer, &pos);
        ar.join(layer, &neg);
    }
}

/// Subset-sum closure update: `S <- S + {0, a}`.
#[inline]
pub(crate) fn sigma_push<A: Arena>(ar: &A, s: &mut A::Set, a: usize) {
    let moved = ar.shift(s, a);
    ar.join(s, &moved);
}

/// Nonempty subset sums: `T <- T + (T + {0}) + a`.
#[inline]
pub(crate) fn sigma_star_push<A: Arena>(ar: &A, s: &mut A::Set, a: usize) {
    let mut base = s.clone();
    ar.join(&mut base, &ar.origin());
    let moved = ar.shift(&base, a);
    ar.join(s, &moved);
}

pub(crate) fn layers_for<A: Arena>(
    ar: &A,
    elems: &[usize],
    h: usize,
    kind: SumsetKind,
) -> Vec<A::Set> {
    let mut layers = initial_layers(ar, h);
    for &a in elems {
        match kind {
            SumsetKind::Fold => fold_push(ar, &mut layers, a),
            SumsetKind::Restricted => restricted_push(ar, &mut layers, a),
            SumsetKind::Signed => signed_push(ar, &mut layers, a),
        }
    }
    layers
}

fn via_arena(
    g: &GroupSpec,
    a: &ElementSet,
    f_mask: impl FnOnce(&MaskGroup, &[usize]) -> u64,
    f_set: impl FnOnce(&GroupSpec, &[usize]) -> ElementSet,
) -> ElementSet {
    check_universe(g, a);
    let elems = a.to_vec();
    match MaskGroup::new(g) {
        Some(k) => ElementSet::from_mask(g.n(), f_mask(&k, &elems)),
        None => f_set(g, &elems),
    }
}

fn check_universe(g: &GroupSpec, a: &ElementSet) {
    assert_eq!(
        a.universe(),
        g.n(),
        "set over a group of order {} used with {g}",
        a.universe()
    );
}

/// The h-fold sumset `hA`. `0A = {0}`; an empty `A` gives the empty set for
/// `h >= 1`. For `h >= n` the translate `A - a_0` has stabilised to the
/// subgroup it generates, so `hA = h a_0 + <A - a_0>`.
pub fn h_fold_sumset(g: &GroupSpec, a: &ElementSet, h: u64) -> ElementSet {
    if h >= g.order() && !a.is_empty() {
        let a0 = a.iter().next().unwrap();
        let base = g.translate_set(a, g.neg_idx(a0));
        let sub = span(g, &base);
        return g.translate_set(&sub, g.scale_idx(h as i64 % g.exponent() as i64, a0));
    }
    let h = h.min(g.order()) as usize;
    via_arena(
        g,
        a,
        |k, e| layers_for(k, e, h, SumsetKind::Fold)[h],
        |g, e| layers_for(g, e, h, SumsetKind::Fold).swap_remove(h),
    )
}

/// The restricted sumset: sums of exactly `h` distinct elements.
pub fn restricted_sumset(g: &GroupSpec, a: &ElementSet, h: u64) -> ElementSet {
    if h > a.len() as u64 {
        return ElementSet::empty(g.n());
    }
    let h = h as usize;
    via_arena(
        g,
        a,
        |k, e| layers_for(k, e, h, SumsetKind::Restricted)[h],
        |g, e| layers_for(g, e, h, SumsetKind::Restricted).swap_remove(h),
    )
}

/// Largest fold count accepted by the signed engine for a set of size `m`.
pub fn fold_cap(g: &GroupSpec, m: usize) -> u64 {
    g.order() + m as u64
}

/// The signed sumset: `sum lambda_i a_i` over integer coefficients with
/// `sum |lambda_i| = h`. Fold counts above `n + |A|` are rejected.
pub fn signed_sumset(g: &GroupSpec, a: &ElementSet, h: u64) -> Result<ElementSet> {
    if h > fold_cap(g, a.len()) {
        return Err(Error::InvalidFold {
            h,
            reason: format!("signed sumsets are capped at n + m = {}", fold_cap(g, a.len())),
        });
    }
    let h = h as usize;
    Ok(via_arena(
        g,
        a,
        |k, e| layers_for(k, e, h, SumsetKind::Signed)[h],
        |g, e| layers_for(g, e, h, SumsetKind::Signed).swap_remove(h),
    ))
}

pub fn sumset(g: &GroupSpec, a: &ElementSet, h: u64, kind: SumsetKind) -> Result<ElementSet> {
    match kind {
        SumsetKind::Fold => Ok(h_fold_sumset(g, a, h)),
        SumsetKind::Restricted => Ok(restricted_sumset(g, a, h)),
        SumsetKind::Signed => signed_sumset(g, a, h),
    }
}

/// Subset-sum closure `ΣA`, or `Σ*A` (nonempty subsets) when
/// `include_empty` is false.
pub fn sigma(g: &GroupSpec, a: &ElementSet, include_empty: bool) -> ElementSet {
    via_arena(
        g,
        a,
        |k, e| sigma_from(k, e, include_empty),
        |g, e| sigma_from(g, e, include_empty),
    )
}

pub(crate) fn sigma_from<A: Arena>(ar: &A, elems: &[usize], include_empty: bool) -> A::Set {
    if include_empty {
        let mut s = ar.origin();
        for &a in elems {
            sigma_push(ar, &mut s, a);
        }
        s
    } else {
        let mut s = ar.empty();
        for &a in elems {
            sigma_star_push(ar, &mut s, a);
        }
        s
    }
}

/// The subgroup generated by `A`.
pub fn span(g: &GroupSpec, a: &ElementSet) -> ElementSet {
    let elems = a.to_vec();
    let mut s = ElementSet::singleton(g.n(), 0);
    loop {
        let mut next = s.clone();
        for &x in &elems {
            next.union_with(&g.translate_set(&s, x));
        }
        if next == s {
            return s;
        }
        s = next;
    }
}

/// The Minkowski sum `A + B`.
pub fn set_sum(g: &GroupSpec, a: &ElementSet, b: &ElementSet) -> ElementSet {
    if let (Some(k), Some(x), Some(y)) = (MaskGroup::new(g), a.to_mask(), b.to_mask()) {
        return ElementSet::from_mask(g.n(), k.sum(x, y));
    }
    let mut out = ElementSet::empty(g.n());
    for y in b.iter() {
        out.union_with(&g.translate_set(a, y));
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetryClass {
    Symmetric,
    NearSymmetric,
    Asymmetric,
    Other,
}

impl SymmetryClass {
    pub fn name(self) -> &'static str {
        match self {
            SymmetryClass::Symmetric => "symmetric",
            SymmetryClass::NearSymmetric => "near_symmetric",
            SymmetryClass::Asymmetric => "asymmetric",
            SymmetryClass::Other => "other",
        }
    }
}

pub fn is_symmetric(g: &GroupSpec, a: &ElementSet) -> bool {
    g.negate_set(a) == *a
}

/// Not symmetric, but symmetric after removing one element. Equivalent to
/// exactly one member having its negative outside `A`.
pub fn is_near_symmetric(g: &GroupSpec, a: &ElementSet) -> bool {
    a.difference(&g.negate_set(a)).len() == 1
}

pub fn is_asymmetric(g: &GroupSpec, a: &ElementSet) -> bool {
    a.is_disjoint(&g.negate_set(a))
}

/// Exclusive classification, first match in the order symmetric,
/// near-symmetric, asymmetric.
pub fn symmetry_class(g: &GroupSpec, a: &ElementSet) -> SymmetryClass {
    let neg = g.negate_set(a);
    if neg == *a {
        SymmetryClass::Symmetric
    } else if a.difference(&neg).len() == 1 {
        SymmetryClass::NearSymmetric
    } else if a.is_disjoint(&neg) {
        SymmetryClass::Asymmetric
    } else {
        SymmetryClass::Other
    }
}

/// `A ⊆ Z_p` written with representatives in `[-(p-1)/2, (p-1)/2]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedView {
    pub prime: u64,
    /// Representatives in `[0, (p-1)/2]`.
    pub positives: Vec<i64>,
    /// Representatives in `[-(p-1)/2, -1]`.
    pub negatives: Vec<i64>,
    pub norm: u64,
}

impl SignedView {
    /// `1 + sum(positives)`: not a subset sum whenever `norm <= p - 2`.
    pub fn gap_element(&self) -> u64 {
        (1 + self.positives.iter().sum::<i64>()) as u64 % self.prime
    }
}

pub fn signed_view(p: u64, a: &ElementSet) -> Result<SignedView> {
    if p % 2 == 0 || !arith::is_prime(p) {
        return Err(Error::Unsupported(format!(
            "signed representatives need an odd prime modulus, got {p}"
        )));
    }
    if a.universe() as u64 != p {
        return Err(Error::InvalidElement(format!(
            "set lives in a group of order {}, not {p}",
            a.universe()
        )));
    }
    let half = (p - 1) / 2;
    let mut positives = Vec::new();
    let mut negatives = Vec::new();
    for x in a.iter() {
        let x = x as u64;
        if x <= half {
            positives.push(x as i64);
        } else {
            negatives.push(x as i64 - p as i64);
        }
    }
    negatives.sort_unstable();
    let norm = (positives.iter().sum::<i64>() - negatives.iter().sum::<i64>()) as u64;
    Ok(SignedView {
        prime: p,
        positives,
        negatives,
        norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64) -> GroupSpec {
        GroupSpec::cyclic(n).unwrap()
    }

    fn set(n: u64, xs: &[usize]) -> ElementSet {
        ElementSet::from_indices(n as usize, xs.iter().copied())
    }

    #[test]
    fn fold_examples() {
        let g = z(15);
        let a = set(15, &[0, 5, 10, 1, 6, 11]);
        assert_eq!(
            h_fold_sumset(&g, &a, 2).to_vec(),
            vec![0, 1, 2, 5, 6, 7, 10, 11, 12]
        );
        assert_eq!(h_fold_sumset(&g, &a, 1), a);
        assert_eq!(h_fold_sumset(&g, &a, 0).to_vec(), vec![0]);
        assert!(h_fold_sumset(&g, &ElementSet::empty(15), 3).is_empty());
    }

    #[test]
    fn fold_large_h_matches_iteration() {
        let g = z(12);
        let a = set(12, &[2, 6]);
        let mut s = ElementSet::singleton(12, 0);
        for h in 1..=40u64 {
            s = set_sum(&g, &s, &a);
            assert_eq!(h_fold_sumset(&g, &a, h), s, "h={h}");
        }
    }

    #[test]
    fn restricted_examples() {
        let g = z(11);
        let a = set(11, &[1, 2, 3, 4]);
        assert_eq!(restricted_sumset(&g, &a, 2).to_vec(), vec![3, 4, 5, 6, 7]);
        assert_eq!(restricted_sumset(&g, &a, 4).to_vec(), vec![10]);
        assert!(restricted_sumset(&g, &a, 5).is_empty());
    }

    #[test]
    fn signed_examples() {
        let g = z(9);
        let a = set(9, &[1, 2]);
        let s = signed_sumset(&g, &a, 2).unwrap();
        assert_eq!(s.len(), 8);
        assert!(!s.contains(0));
        let zero = set(9, &[0]);
        for h in 0..5 {
            assert_eq!(signed_sumset(&g, &zero, h).unwrap().to_vec(), vec![0]);
        }
        let b = set(9, &[1, 3]);
        assert_eq!(signed_sumset(&g, &b, 1).unwrap().to_vec(), vec![1, 3, 6, 8]);
        assert!(signed_sumset(&g, &b, 12).is_err());
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma(&z(10), &set(10, &[1, 2]), true).to_vec(), vec![0, 1, 2, 3]);
        let s = sigma(&z(11), &set(11, &[1, 2, 3, 4]), false);
        assert_eq!(s.to_vec(), (1..=10).collect::<Vec<_>>());
        assert_eq!(sigma(&z(7), &ElementSet::empty(7), true).to_vec(), vec![0]);
        assert!(sigma(&z(7), &ElementSet::empty(7), false).is_empty());
        // 0 as a member: the nonempty subset {0} contributes 0.
        assert_eq!(sigma(&z(7), &set(7, &[0]), false).to_vec(), vec![0]);
    }

    #[test]
    fn span_examples() {
        assert_eq!(span(&z(12), &set(12, &[4])).to_vec(), vec![0, 4, 8]);
        assert_eq!(span(&z(12), &set(12, &[4, 6])).to_vec(), vec![0, 2, 4, 6, 8, 10]);
        assert_eq!(span(&z(12), &ElementSet::empty(12)).to_vec(), vec![0]);
    }

    #[test]
    fn symmetry_examples() {
        let g = z(10);
        assert_eq!(symmetry_class(&g, &set(10, &[1, 9])), SymmetryClass::Symmetric);
        assert_eq!(
            symmetry_class(&g, &set(10, &[1, 9, 3])),
            SymmetryClass::NearSymmetric
        );
        assert_eq!(
            symmetry_class(&z(9), &set(9, &[1, 2])),
            SymmetryClass::Asymmetric
        );
        assert_eq!(symmetry_class(&g, &set(10, &[0, 1, 2])), SymmetryClass::Other);
        assert!(is_asymmetric(&g, &set(10, &[3])) && is_near_symmetric(&g, &set(10, &[3])));
    }

    #[test]
    fn signed_view_examples() {
        let v = signed_view(11, &set(11, &[1, 2, 3])).unwrap();
        assert_eq!((v.positives.clone(), v.negatives.clone(), v.norm), (vec![1, 2, 3], vec![], 6));
        assert_eq!(v.gap_element(), 7);
        assert!(!sigma(&z(11), &set(11, &[1, 2, 3]), true).contains(7));
        assert_eq!(signed_view(11, &set(11, &[1, 10])).unwrap().norm, 2);
        assert!(signed_view(9, &set(9, &[1])).is_err());
        assert!(signed_view(2, &set(2, &[1])).is_err());
    }

    #[test]
    fn large_group_path() {
        // Order 128 exercises the multi-word arena.
        let g = GroupSpec::new(&[2, 64]).unwrap();
        let a = ElementSet::from_indices(128, [0, 1, 64, 70]);
        let fold = h_fold_sumset(&g, &a, 2);
        let mut expect = ElementSet::empty(128);
        for x in a.iter() {
            for y in a.iter() {
                expect.insert(g.add_idx(x, y));
            }
        }
        assert_eq!(fold, expect);
        let r = restricted_sumset(&g, &a, 2);
        assert_eq!(r.len(), 6);
        assert_eq!(set_sum(&g, &a, &a), expect);
    }
}
