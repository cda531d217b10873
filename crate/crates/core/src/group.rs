//! Finite abelian groups `Z_{n_1} x ... x Z_{n_r}` in invariant-factor form,
//! their elements, and the literal grammar used by reports and the CLI.
//!
//! Elements are encoded mixed-radix with `a_1` as the most significant digit,
//! so in a cyclic group the index of `a` is `a` itself. Every bitset in the
//! crate indexes by this encoding.

use std::fmt;

use crate::arith::{self, gcd, lcm};
use crate::error::{Error, Result};
use crate::set::ElementSet;

/// Default bound on the group order, large enough for every formula check
/// that needs explicit sets.
pub const DEFAULT_MAX_ORDER: u64 = 4096;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    factors: Vec<u64>,
    order: u64,
    smallest_prime: u64,
    /// `strides[i]` is the product of the factors after position `i`.
    strides: Vec<u64>,
}

/// A group element: residues `(a_1, ..., a_r)` and the canonical index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    index: usize,
    residues: Vec<u64>,
}

impl Element {
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn residues(&self) -> &[u64] {
        &self.residues
    }
}

/// A coset `representative + subgroup`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetDesc {
    pub subgroup: ElementSet,
    pub representative: Element,
}

impl CosetDesc {
    pub fn elements(&self, g: &GroupSpec) -> ElementSet {
        g.translate_set(&self.subgroup, self.representative.index)
    }
}

impl GroupSpec {
    /// Validates an invariant-factor chain `n_1 | n_2 | ... | n_r` with every
    /// `n_i >= 2`, under the default order bound.
    pub fn new(factors: &[u64]) -> Result<Self> {
        Self::with_bound(factors, DEFAULT_MAX_ORDER)
    }

    pub fn with_bound(factors: &[u64], bound: u64) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidGroup("no invariant factors".into()));
        }
        if let Some(&f) = factors.iter().find(|&&f| f < 2) {
            return Err(Error::InvalidGroup(format!("factor {f} is smaller than 2")));
        }
        for w in factors.windows(2) {
            if w[1] % w[0] != 0 {
                return Err(Error::InvalidGroup(format!(
                    "{} does not divide {} in the factor chain",
                    w[0], w[1]
                )));
            }
        }
        let order = factors
            .iter()
            .try_fold(1u64, |acc, &f| acc.checked_mul(f))
            .filter(|&o| o <= bound)
            .ok_or(Error::OrderTooLarge {
                order: factors.iter().fold(1u64, |a, &f| a.saturating_mul(f)),
                bound,
            })?;
        let mut strides = vec![1u64; factors.len()];
        for i in (0..factors.len() - 1).rev() {
            strides[i] = strides[i + 1] * factors[i + 1];
        }
        Ok(GroupSpec {
            factors: factors.to_vec(),
            order,
            smallest_prime: arith::smallest_prime_factor(order),
            strides,
        })
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(&[n])
    }

    /// Parses the `"12"`, `"2x6"`, `"3x3"` group notation.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut factors = Vec::new();
        let mut pos = 0;
        for part in s.split(['x', 'X']) {
            let f = part.trim().parse::<u64>().map_err(|_| Error::Parse {
                pos,
                msg: format!("expected an invariant factor, found {part:?}"),
            })?;
            factors.push(f);
            pos += part.len() + 1;
        }
        Self::new(&factors)
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Order as a `usize`, the bitset width.
    pub fn n(&self) -> usize {
        self.order as usize
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn exponent(&self) -> u64 {
        *self.factors.last().unwrap()
    }

    pub fn smallest_prime(&self) -> u64 {
        self.smallest_prime
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.len() == 1
    }

    /// `Some(p)` when the group is `Z_p^r`.
    pub fn elementary_prime(&self) -> Option<u64> {
        let e = self.exponent();
        (arith::is_prime(e) && self.factors.iter().all(|&f| f == e)).then_some(e)
    }

    pub fn is_elementary_abelian_2(&self) -> bool {
        self.elementary_prime() == Some(2)
    }

    pub fn encode(&self, residues: &[u64]) -> Result<usize> {
        if residues.len() != self.rank() {
            return Err(Error::InvalidElement(format!(
                "expected {} residues, found {}",
                self.rank(),
                residues.len()
            )));
        }
        let mut idx = 0u64;
        for (i, (&a, &f)) in residues.iter().zip(&self.factors).enumerate() {
            if a >= f {
                return Err(Error::InvalidElement(format!(
                    "residue {a} at position {} is not below {f}",
                    i + 1
                )));
            }
            idx += a * self.strides[i];
        }
        Ok(idx as usize)
    }

    pub fn decode(&self, index: usize) -> Vec<u64> {
        let idx = index as u64;
        self.factors
            .iter()
            .zip(&self.strides)
            .map(|(&f, &s)| idx / s % f)
            .collect()
    }

    pub fn element(&self, residues: &[u64]) -> Result<Element> {
        let index = self.encode(residues)?;
        Ok(Element {
            index,
            residues: residues.to_vec(),
        })
    }

    pub fn element_at(&self, index: usize) -> Element {
        assert!(index < self.n(), "index {index} outside group");
        Element {
            index,
            residues: self.decode(index),
        }
    }

    pub fn zero(&self) -> Element {
        self.element_at(0)
    }

    pub fn add_idx(&self, a: usize, b: usize) -> usize {
        if self.is_cyclic() {
            let s = a + b;
            return if s >= self.n() { s - self.n() } else { s };
        }
        let (a, b) = (a as u64, b as u64);
        let mut out = 0;
        for (&f, &s) in self.factors.iter().zip(&self.strides) {
            out += (a / s % f + b / s % f) % f * s;
        }
        out as usize
    }

    pub fn neg_idx(&self, a: usize) -> usize {
        self.scale_idx(-1, a)
    }

    /// `k * a`, for any integer `k` including negatives.
    pub fn scale_idx(&self, k: i64, a: usize) -> usize {
        let a = a as u64;
        let mut out = 0;
        for (&f, &s) in self.factors.iter().zip(&self.strides) {
            let r = (a / s % f) as i128;
            let v = (k as i128 * r).rem_euclid(f as i128) as u64;
            out += v * s;
        }
        out as usize
    }

    pub fn add(&self, a: &Element, b: &Element) -> Element {
        self.element_at(self.add_idx(a.index, b.index))
    }

    pub fn negate(&self, a: &Element) -> Element {
        self.element_at(self.neg_idx(a.index))
    }

    pub fn scale(&self, k: i64, a: &Element) -> Element {
        self.element_at(self.scale_idx(k, a.index))
    }

    /// Least `t >= 1` with `t * a = 0`.
    pub fn element_order(&self, a: usize) -> u64 {
        self.decode(a)
            .iter()
            .zip(&self.factors)
            .fold(1, |acc, (&r, &f)| lcm(acc, f / gcd(r, f)))
    }

    /// Number of elements of order exactly 2.
    pub fn involution_count(&self) -> u64 {
        (1..self.n()).filter(|&a| self.element_order(a) == 2).count() as u64
    }

    /// Residues mod the exponent that are coprime to it; multiplication by any
    /// of them is an automorphism.
    pub fn unit_multipliers(&self) -> Vec<u64> {
        let e = self.exponent();
        (1..e).filter(|&u| gcd(u, e) == 1).collect()
    }

    pub fn translate_set(&self, set: &ElementSet, by: usize) -> ElementSet {
        if by == 0 {
            return set.clone();
        }
        if self.is_cyclic() {
            return rotate(set, by);
        }
        ElementSet::from_indices(self.n(), set.iter().map(|x| self.add_idx(x, by)))
    }

    pub fn negate_set(&self, set: &ElementSet) -> ElementSet {
        self.dilate_set(-1, set)
    }

    /// The dilation `b * A`; may shrink when `b` is not a unit.
    pub fn dilate_set(&self, b: i64, set: &ElementSet) -> ElementSet {
        ElementSet::from_indices(self.n(), set.iter().map(|x| self.scale_idx(b, x)))
    }

    /// All subgroups of prime order `p`, each once, in lexicographic order.
    pub fn prime_order_subgroups(&self, p: u64) -> Result<Vec<CosetDesc>> {
        if !arith::is_prime(p) || self.order % p != 0 {
            return Err(Error::InvalidDivisor { n: self.order, d: p });
        }
        let mut subs: Vec<ElementSet> = Vec::new();
        for x in 1..self.n() {
            if self.element_order(x) != p {
                continue;
            }
            let h = ElementSet::from_indices(
                self.n(),
                (0..p as i64).map(|k| self.scale_idx(k, x)),
            );
            if !subs.contains(&h) {
                subs.push(h);
            }
        }
        subs.sort();
        Ok(subs
            .into_iter()
            .map(|subgroup| CosetDesc {
                subgroup,
                representative: self.zero(),
            })
            .collect())
    }

    pub fn format_element(&self, index: usize) -> String {
        if self.is_cyclic() {
            return index.to_string();
        }
        let parts: Vec<String> = self.decode(index).iter().map(|r| r.to_string()).collect();
        format!("({})", parts.join(","))
    }

    pub fn format_set(&self, set: &ElementSet) -> String {
        let parts: Vec<String> = set.iter().map(|x| self.format_element(x)).collect();
        format!("{{{}}}", parts.join(","))
    }

    pub fn parse_element(&self, s: &str) -> Result<usize> {
        let mut p = Parser::new(s);
        let x = p.element(self)?;
        p.end()?;
        Ok(x)
    }

    /// Parses `{a,b,...}` set literals; duplicates are rejected.
    pub fn parse_set(&self, s: &str) -> Result<ElementSet> {
        let mut p = Parser::new(s);
        let set = p.set(self)?;
        p.end()?;
        Ok(set)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|x| x.to_string()).collect();
        f.write_str(&parts.join("x"))
    }
}

impl fmt::Debug for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupSpec({self})")
    }
}

fn rotate(set: &ElementSet, by: usize) -> ElementSet {
    let n = set.universe();
    let by = by % n;
    if by == 0 {
        return set.clone();
    }
    let words = set.words();
    let mut out = vec![0u64; words.len()];
    // out[i] gets set[i - by], wrapping at n.
    for (i, w) in out.iter_mut().enumerate() {
        let mut acc = 0u64;
        for bit in 0..64 {
            let dst = i * 64 + bit;
            if dst >= n {
                break;
            }
            let src = (dst + n - by) % n;
            acc |= (words[src / 64] >> (src % 64) & 1) << bit;
        }
        *w = acc;
    }
    ElementSet::from_words(n, out)
}

/// All abelian groups of order `n`, as invariant-factor chains in
/// lexicographic order of the factor lists.
pub fn abelian_groups_of_order(n: u64) -> Result<Vec<GroupSpec>> {
    if n < 2 {
        return Err(Error::InvalidGroup(format!("order {n} is below 2")));
    }
    // Each prime power p^e contributes one partition of e.
    let per_prime: Vec<Vec<Vec<u64>>> = arith::factorize(n)
        .into_iter()
        .map(|(p, e)| {
            partitions(e)
                .into_iter()
                .map(|parts| parts.into_iter().map(|k| p.pow(k)).collect())
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; per_prime.len()];
    loop {
        let rank = per_prime
            .iter()
            .zip(&choice)
            .map(|(opts, &c)| opts[c].len())
            .max()
            .unwrap_or(0);
        // Parts are descending; align them from the top factor down.
        let mut factors = vec![1u64; rank];
        for (opts, &c) in per_prime.iter().zip(&choice) {
            for (j, &q) in opts[c].iter().enumerate() {
                factors[rank - 1 - j] *= q;
            }
        }
        out.push(GroupSpec::with_bound(&factors, u64::MAX)?);
        let mut i = 0;
        loop {
            if i == choice.len() {
                out.sort_by(|a, b| a.factors.cmp(&b.factors));
                return Ok(out);
            }
            choice[i] += 1;
            if choice[i] < per_prime[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Every abelian group with order in `lo..=hi`, by order then factor list.
pub fn abelian_groups_in_range(lo: u64, hi: u64) -> Vec<GroupSpec> {
    (lo.max(2)..=hi)
        .flat_map(|n| abelian_groups_of_order(n).unwrap_or_default())
        .collect()
}

/// Partitions of `e` with parts in descending order.
fn partitions(e: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=rest.min(max)).rev() {
            cur.push(k);
            go(rest - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(e, e, &mut Vec::new(), &mut out);
    out
}

/// The order-`d` subgroup `{j * n/d}` of `Z_n`, with representative 0.
pub fn cyclic_divisor_subgroup(n: u64, d: u64) -> Result<CosetDesc> {
    if d == 0 || n % d != 0 {
        return Err(Error::InvalidDivisor { n, d });
    }
    let g = GroupSpec::cyclic(n)?;
    let step = (n / d) as usize;
    Ok(CosetDesc {
        subgroup: ElementSet::from_indices(g.n(), (0..d as usize).map(|j| j * step)),
        representative: g.zero(),
    })
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(s: &'a str) -> Self {
        Parser {
            src: s.as_bytes(),
            pos: 0,
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn end(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(c) => self.err(format!("unexpected trailing '{}'", c as char)),
        }
    }

    fn integer(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            self.pos = start;
            return self.err("expected a non-negative integer");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        text.parse().or_else(|_| {
            self.pos = start;
            self.err("integer out of range")
        })
    }

    fn element(&mut self, g: &GroupSpec) -> Result<usize> {
        let start = {
            self.skip_ws();
            self.pos
        };
        let residues = if g.rank() == 1 && self.peek() != Some(b'(') {
            vec![self.integer()?]
        } else {
            self.expect(b'(')?;
            let mut rs = vec![self.integer()?];
            while self.peek() == Some(b',') {
                self.pos += 1;
                rs.push(self.integer()?);
            }
            self.expect(b')')?;
            rs
        };
        g.encode(&residues).map_err(|e| Error::Parse {
            pos: start,
            msg: e.to_string(),
        })
    }

    fn set(&mut self, g: &GroupSpec) -> Result<ElementSet> {
        self.expect(b'{')?;
        let mut out = ElementSet::empty(g.n());
        if self.peek() == Some(b'}') {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            let start = self.pos;
            let x = self.element(g)?;
            if out.contains(x) {
                self.pos = start;
                return self.err(format!("duplicate element {}", g.format_element(x)));
            }
            out.insert(x);
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(b'}') => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return self.err("expected ',' or '}'"),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(f: &[u64]) -> GroupSpec {
        GroupSpec::new(f).unwrap()
    }

    #[test]
    fn make_group_examples() {
        let z12 = g(&[12]);
        assert_eq!((z12.order(), z12.rank(), z12.smallest_prime()), (12, 1, 2));
        let z2x4 = g(&[2, 4]);
        assert_eq!((z2x4.order(), z2x4.rank(), z2x4.exponent()), (8, 2, 4));
        assert!(matches!(GroupSpec::new(&[4, 2]), Err(Error::InvalidGroup(_))));
        assert!(GroupSpec::new(&[1, 4]).is_err());
        assert!(GroupSpec::new(&[]).is_err());
        assert!(matches!(
            GroupSpec::new(&[4096, 2]),
            Err(Error::InvalidGroup(_))
        ));
        assert!(matches!(
            GroupSpec::new(&[2, 4096]),
            Err(Error::OrderTooLarge { .. })
        ));
    }

    #[test]
    fn groups_of_small_orders() {
        let names = |n| -> Vec<String> {
            abelian_groups_of_order(n)
                .unwrap()
                .iter()
                .map(|g| g.to_string())
                .collect()
        };
        assert_eq!(names(8), vec!["2x2x2", "2x4", "8"]);
        assert_eq!(names(12), vec!["2x6", "12"]);
        assert_eq!(names(7), vec!["7"]);
        assert_eq!(names(36), vec!["2x18", "3x12", "6x6", "36"]);
        assert!(abelian_groups_of_order(1).is_err());
    }

    #[test]
    fn arithmetic_examples() {
        let z12 = g(&[12]);
        assert_eq!(z12.add_idx(7, 8), 3);
        let z2x4 = g(&[2, 4]);
        let a = z2x4.element(&[1, 3]).unwrap();
        assert_eq!(z2x4.negate(&a).residues(), &[1, 1]);
        let z15 = g(&[15]);
        assert_eq!(z15.scale_idx(-2, 4), 7);
    }

    #[test]
    fn dilation_examples() {
        let z11 = g(&[11]);
        let a = ElementSet::from_indices(11, [1, 2, 3]);
        assert_eq!(z11.dilate_set(2, &a).to_vec(), vec![2, 4, 6]);
        let z12 = g(&[12]);
        let b = ElementSet::from_indices(12, [1, 2, 3]);
        assert_eq!(z12.dilate_set(6, &b).to_vec(), vec![0, 6]);
        let z7 = g(&[7]);
        let c = ElementSet::from_indices(7, [0, 3, 5]);
        assert_eq!(z7.dilate_set(1, &c), c);
    }

    #[test]
    fn orders_and_involutions() {
        let z12 = g(&[12]);
        assert_eq!(z12.element_order(4), 3);
        assert_eq!(z12.element_order(0), 1);
        let z2x4 = g(&[2, 4]);
        assert_eq!(z2x4.element_order(z2x4.encode(&[1, 2]).unwrap()), 2);
        assert_eq!(z12.involution_count(), 1);
        assert_eq!(z2x4.involution_count(), 3);
        assert_eq!(g(&[7]).involution_count(), 0);
    }

    #[test]
    fn divisor_subgroups() {
        assert_eq!(
            cyclic_divisor_subgroup(15, 3).unwrap().subgroup.to_vec(),
            vec![0, 5, 10]
        );
        assert_eq!(cyclic_divisor_subgroup(15, 15).unwrap().subgroup.len(), 15);
        assert_eq!(
            cyclic_divisor_subgroup(10, 2).unwrap().subgroup.to_vec(),
            vec![0, 5]
        );
        assert!(matches!(
            cyclic_divisor_subgroup(10, 3),
            Err(Error::InvalidDivisor { .. })
        ));
    }

    #[test]
    fn prime_subgroups() {
        let z9 = g(&[9]);
        let s = z9.prime_order_subgroups(3).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].subgroup.to_vec(), vec![0, 3, 6]);
        assert_eq!(g(&[3, 3]).prime_order_subgroups(3).unwrap().len(), 4);
        let z15 = g(&[15]);
        assert_eq!(
            z15.prime_order_subgroups(5).unwrap()[0].subgroup.to_vec(),
            vec![0, 3, 6, 9, 12]
        );
        assert!(z15.prime_order_subgroups(7).is_err());
    }

    #[test]
    fn literals() {
        let z2x4 = g(&[2, 4]);
        let s = z2x4.parse_set("{(0,0), (1,0),(0,2),(1,2)}").unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(z2x4.format_set(&s), "{(0,0),(0,2),(1,0),(1,2)}");
        let z15 = g(&[15]);
        assert_eq!(z15.parse_set("{0,5,10}").unwrap().to_vec(), vec![0, 5, 10]);
        assert_eq!(z15.parse_set("{}").unwrap().len(), 0);
        match z15.parse_set("{0,5,,}") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("{other:?}"),
        }
        assert!(matches!(z15.parse_set("{0,15}"), Err(Error::Parse { pos: 3, .. })));
        assert!(z15.parse_set("{1,1}").is_err());
        assert!(z2x4.parse_set("{(0,0,0)}").is_err());
        assert_eq!(GroupSpec::parse("2x6").unwrap().to_string(), "2x6");
        assert!(GroupSpec::parse("6x2").is_err());
        assert!(matches!(GroupSpec::parse("2xq"), Err(Error::Parse { pos: 2, .. })));
    }

    #[test]
    fn large_cyclic_translation() {
        let z100 = g(&[100]);
        let s = ElementSet::from_indices(100, [0, 63, 64, 99]);
        assert_eq!(z100.translate_set(&s, 37).to_vec(), vec![0, 1, 36, 37]);
    }
}
