//! Closed-form values, conjectured values, and explicit extremal
//! constructions. Everything here is exact integer arithmetic; the
//! constructions are measured with the sumset engine rather than through
//! correction-term formulas.

use serde::{Deserialize, Serialize};

use crate::arith::{ceil_div, divisors, gcd, is_power_of_two, is_prime, isqrt};
use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::set::ElementSet;
use crate::sumset::restricted_sumset;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KnownStatus {
    Exact,
    LowerBound,
    UpperBound,
    Undefined,
    Unknown,
}

/// A quantity that may be known exactly, only bounded, undefined, or open.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnownValue {
    pub status: KnownStatus,
    pub value: Option<u64>,
    pub source: String,
}

impl KnownValue {
    pub fn exact(value: u64, source: &str) -> Self {
        Self::with(KnownStatus::Exact, Some(value), source)
    }
    pub fn lower(value: u64, source: &str) -> Self {
        Self::with(KnownStatus::LowerBound, Some(value), source)
    }
    pub fn upper(value: u64, source: &str) -> Self {
        Self::with(KnownStatus::UpperBound, Some(value), source)
    }
    pub fn undefined(source: &str) -> Self {
        Self::with(KnownStatus::Undefined, None, source)
    }
    pub fn unknown(source: &str) -> Self {
        Self::with(KnownStatus::Unknown, None, source)
    }

    fn with(status: KnownStatus, value: Option<u64>, source: &str) -> Self {
        KnownValue {
            status,
            value,
            source: source.to_string(),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.status == KnownStatus::Exact
    }
}

fn check_size(n: u64, m: u64) -> Result<()> {
    if m == 0 || m > n {
        return Err(Error::InvalidSize { n, m });
    }
    Ok(())
}

fn check_divisor(n: u64, d: u64) -> Result<()> {
    if d == 0 || n % d != 0 {
        return Err(Error::InvalidDivisor { n, d });
    }
    Ok(())
}

/// `f_d(m, h) = (h * ceil(m/d) - h + 1) * d`.
pub fn f_d(d: u64, m: u64, h: u64) -> u64 {
    (h * ceil_div(m, d) - h + 1) * d
}

/// `min f_d(m, h)` over the divisors of `n`: the minimum size of `hA` over
/// `m`-subsets of any abelian group of order `n`.
pub fn u(n: u64, m: u64, h: u64) -> Result<u64> {
    check_size(n, m)?;
    Ok(divisors(n).into_iter().map(|d| f_d(d, m, h)).min().unwrap())
}

/// Smallest divisor of `n` that is at least `m`: the minimum size of the
/// subgroup generated by an `m`-subset.
pub fn rho_span(n: u64, m: u64) -> Result<u64> {
    check_size(n, m)?;
    Ok(divisors(n).into_iter().find(|&d| d >= m).unwrap())
}

/// `m = c*d + k` with `1 <= k <= d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetProgressionParams {
    pub n: u64,
    pub d: u64,
    pub c: u64,
    pub k: u64,
}

impl CosetProgressionParams {
    pub fn new(n: u64, m: u64, d: u64) -> Result<Self> {
        check_divisor(n, d)?;
        check_size(n, m)?;
        let c = (m - 1) / d;
        Ok(CosetProgressionParams {
            n,
            d,
            c,
            k: m - c * d,
        })
    }

    fn step(&self) -> u64 {
        self.n / self.d
    }
}

fn coset(out: &mut ElementSet, n: u64, step: u64, d: u64, base: i64) {
    let base = base.rem_euclid(n as i64) as u64;
    for j in 0..d {
        out.insert(((base + j * step) % n) as usize);
    }
}

/// `A_d(n, m)`: the first `c` cosets of the order-`d` subgroup `H` in full,
/// then `k` elements of `c + H`.
pub fn construct_a(n: u64, m: u64, d: u64) -> Result<ElementSet> {
    let p = CosetProgressionParams::new(n, m, d)?;
    let mut out = ElementSet::empty(n as usize);
    for i in 0..p.c {
        coset(&mut out, n, p.step(), d, i as i64);
    }
    coset(&mut out, n, p.step(), p.k, p.c as i64);
    Ok(out)
}

/// Parameters of the two-partial-coset construction `B_d(n, m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BParams {
    pub k1: u64,
    pub k2: u64,
    pub j0: u64,
    pub g: u64,
}

/// `B_d(n, m)`: `k1` elements of `H`, full cosets `i*g + H` for
/// `1 <= i < c`, and `k2` consecutive elements of `c*g + H` starting at
/// offset `j0`, where `m = k1 + (c-1)d + k2`.
pub fn construct_b(n: u64, m: u64, d: u64, params: &BParams) -> Result<ElementSet> {
    check_divisor(n, d)?;
    check_size(n, m)?;
    let BParams { k1, k2, j0, g } = *params;
    let bad = |msg: String| Err(Error::InvalidParams(msg));
    if k1 == 0 || k2 == 0 || k1 >= d || k2 >= d {
        return bad(format!("need 1 <= k1, k2 < d = {d}, got k1={k1}, k2={k2}"));
    }
    if k1 + k2 <= d {
        return bad(format!("need k1 + k2 > d, got {} <= {d}", k1 + k2));
    }
    if m < k1 + k2 || (m - k1 - k2) % d != 0 {
        return bad(format!("m = {m} is not k1 + (c-1)d + k2 for k1={k1}, k2={k2}, d={d}"));
    }
    if j0 >= d || g >= n {
        return bad(format!("need j0 < d and g < n, got j0={j0}, g={g}"));
    }
    let c = (m - k1 - k2) / d + 1;
    let step = n / d;
    if !distinct_cosets(c, g, step) {
        return bad(format!("the cosets i*{g} + H, 0 <= i <= {c}, are not distinct"));
    }
    let mut out = ElementSet::empty(n as usize);
    coset(&mut out, n, step, k1, 0);
    for i in 1..c {
        coset(&mut out, n, step, d, (i * g) as i64);
    }
    let start = (c * g + j0 * step) % n;
    coset(&mut out, n, step, k2, start as i64);
    debug_assert_eq!(out.len() as u64, m);
    Ok(out)
}

fn distinct_cosets(c: u64, g: u64, step: u64) -> bool {
    let mut seen = vec![false; step as usize];
    (0..=c).all(|i| {
        let r = (i * g % step) as usize;
        !std::mem::replace(&mut seen[r], true)
    })
}

/// All valid `B_d` parameters for `(n, m, d)` with `g` reduced mod `n/d`
/// (shifting `g` by `n/d` only moves `j0`).
pub fn b_params(n: u64, m: u64, d: u64) -> Vec<BParams> {
    if n % d != 0 || m == 0 || m > n || d < 2 {
        return Vec::new();
    }
    let r = m % d;
    if r == 0 || m < d + r {
        return Vec::new();
    }
    let c = m / d;
    let step = n / d;
    let mut out = Vec::new();
    for k1 in r + 1..d {
        let k2 = d + r - k1;
        for g in 0..step {
            if !distinct_cosets(c, g, step) {
                continue;
            }
            for j0 in 0..d {
                out.push(BParams { k1, k2, j0, g });
            }
        }
    }
    out
}

fn check_restricted(m: u64, h: u64) -> Result<()> {
    if h > m {
        return Err(Error::InvalidFold {
            h,
            reason: format!("restricted sums need h <= m = {m}"),
        });
    }
    Ok(())
}

/// `min |h^A_d(n, m)|` over divisors `d`, measured directly.
pub fn u_hat(n: u64, m: u64, h: u64) -> Result<u64> {
    check_size(n, m)?;
    check_restricted(m, h)?;
    let g = GroupSpec::cyclic(n)?;
    let mut best = u64::MAX;
    for d in divisors(n) {
        let a = construct_a(n, m, d)?;
        best = best.min(restricted_sumset(&g, &a, h).len() as u64);
    }
    Ok(best)
}

/// `min |h^B_d(n, m)|` over divisors and all valid `(k1, j0, g)`; unknown
/// when no divisor admits the construction.
pub fn w_hat(n: u64, m: u64, h: u64) -> Result<KnownValue> {
    check_size(n, m)?;
    check_restricted(m, h)?;
    let g = GroupSpec::cyclic(n)?;
    let mut best: Option<u64> = None;
    for d in divisors(n) {
        for params in b_params(n, m, d) {
            let b = construct_b(n, m, d, &params)?;
            let size = restricted_sumset(&g, &b, h).len() as u64;
            best = Some(best.map_or(size, |x| x.min(size)));
        }
    }
    Ok(match best {
        Some(v) => KnownValue::upper(v, "CONJ-RHAT-UW"),
        None => KnownValue::unknown("CONJ-RHAT-UW"),
    })
}

/// `min{u_hat, w_hat}`, with an unavailable `w_hat` ignored.
pub fn rho_hat_conjectured(n: u64, m: u64, h: u64) -> Result<u64> {
    let uh = u_hat(n, m, h)?;
    Ok(w_hat(n, m, h)?.value.map_or(uh, |w| w.min(uh)))
}

/// The `h = 2` specialisation: `min{rho(n, m, 2), 2m - 4}` when `n` and `m`
/// are both even, or `(2m - 2) | n` with `m - 1` not a power of two;
/// `min{rho(n, m, 2), 2m - 3}` otherwise.
pub fn rho_hat2_conjectured(n: u64, m: u64) -> Result<u64> {
    if m < 4 {
        return Err(Error::InvalidSize { n, m });
    }
    let rho = u(n, m, 2)?;
    let low = (n % 2 == 0 && m % 2 == 0) || (n % (2 * m - 2) == 0 && !is_power_of_two(m - 1));
    Ok(rho.min(if low { 2 * m - 4 } else { 2 * m - 3 }))
}

/// Bounds for `rho^(G, m, 2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhoHat2Bounds {
    /// `min{rho(G, m, 2), 2m - 2}`, valid in every group.
    pub upper: u64,
    /// `min{rho(G, m, 2), 2m - 3}`, proven for elementary abelian `p`-groups
    /// with `p` odd.
    pub lower: KnownValue,
    /// `min{rho(G, m, 2), 2m - 3 - |Ord(G, 2)|}`, conjectured in general.
    pub lev_lower: u64,
}

pub fn rho_hat2_bounds(g: &GroupSpec, m: u64) -> Result<RhoHat2Bounds> {
    if m < 2 {
        return Err(Error::InvalidSize { n: g.order(), m });
    }
    let rho = u(g.order(), m, 2)?;
    let lower_value = rho.min(2 * m - 3);
    let lower = match g.elementary_prime() {
        Some(p) if p > 2 => KnownValue::lower(lower_value, "BOUND-EK-LB"),
        _ => KnownValue::unknown("BOUND-EK-LB"),
    };
    let lev = (2 * m - 3).saturating_sub(g.involution_count());
    Ok(RhoHat2Bounds {
        upper: rho.min(2 * m - 2),
        lower,
        lev_lower: rho.min(lev),
    })
}

/// `min{p, hm - h^2 + 1}` for prime `p`.
pub fn rho_hat_prime(p: u64, m: u64, h: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::Unsupported(format!("{p} is not prime")));
    }
    check_size(p, m)?;
    check_restricted(m, h)?;
    Ok(p.min(h * m - h * h + 1))
}

/// Divisors `d = prod d_i` of `n` with `d_i | n_i` and `d * n_r >= d_r * m`.
pub fn d_gm(g: &GroupSpec, m: u64) -> Result<Vec<u64>> {
    check_size(g.order(), m)?;
    let factors = g.factors();
    let nr = *factors.last().unwrap();
    let mut out = Vec::new();
    let mut walk = vec![(1u64, 1u64)];
    for (i, &ni) in factors.iter().enumerate() {
        let last = i + 1 == factors.len();
        let mut next = Vec::new();
        for &(prod, _) in &walk {
            for di in divisors(ni) {
                next.push((prod * di, if last { di } else { 1 }));
            }
        }
        walk = next;
    }
    for (d, dr) in walk {
        if d * nr >= dr * m {
            out.push(d);
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// `min f_d(m, h)` over `D(G, m)`: an upper bound for `rho_pm(G, m, h)`.
pub fn u_pm(g: &GroupSpec, m: u64, h: u64) -> Result<u64> {
    Ok(d_gm(g, m)?.into_iter().map(|d| f_d(d, m, h)).min().unwrap())
}

/// Conjectured `rho_pm(G, m, h)`: `u_pm` for `h >= 3`; for `h = 2` also
/// `d_m - 1` where `d_m` is the least odd divisor of `n` above `2m`.
pub fn rho_pm_conjectured(g: &GroupSpec, m: u64, h: u64) -> Result<u64> {
    if h < 2 {
        return Err(Error::InvalidFold {
            h,
            reason: "the signed conjecture covers h >= 2".into(),
        });
    }
    let upm = u_pm(g, m, h)?;
    if h > 2 {
        return Ok(upm);
    }
    let dm = divisors(g.order())
        .into_iter()
        .find(|&d| d % 2 == 1 && d > 2 * m);
    Ok(dm.map_or(upm, |d| upm.min(d - 1)))
}

/// The quantities `delta`, `k`, `q` for `Z_p^r`, and whether they guarantee
/// `rho_pm = rho`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PGroupParams {
    pub p: u64,
    pub h: u64,
    pub m: u64,
    pub delta: u64,
    /// Largest `k` with `p^k + delta <= hm - h + 1`, if any.
    pub k: Option<u32>,
    /// Largest `q` with `(hq + 1) p^k + delta <= hm - h + 1`.
    pub q: Option<u64>,
    /// `p <= h`, or `m <= (q + 1) p^k`.
    pub equal_rho: bool,
}

pub fn pgroup_params(p: u64, h: u64, m: u64) -> Result<PGroupParams> {
    if p % 2 == 0 || !is_prime(p) {
        return Err(Error::Unsupported(format!("{p} is not an odd prime")));
    }
    if h < 2 || m < 2 {
        return Err(Error::InvalidParams(format!("need h, m >= 2, got h={h}, m={m}")));
    }
    let target = h * m - h + 1;
    let delta = u64::from((p - 1) % h != 0);
    let mut k = None;
    let mut pk = 1u64;
    let mut e = 0u32;
    while pk + delta <= target {
        k = Some(e);
        pk *= p;
        e += 1;
    }
    let (q, pk) = match k {
        Some(e) => {
            let pk = p.pow(e);
            (Some((target - delta - pk) / (h * pk)), pk)
        }
        None => (None, 0),
    };
    let equal_rho = p <= h || q.is_some_and(|q| m <= (q + 1) * pk);
    Ok(PGroupParams {
        p,
        h,
        m,
        delta,
        k,
        q,
        equal_rho,
    })
}

/// `F_d(m) = (t m - t^2 d + 1) d` with `t = ceil(c/2)`, `m = cd + k`.
pub fn big_f_d(d: u64, m: u64) -> u64 {
    let c = (m - 1) / d;
    let t = c.div_ceil(2);
    (t * m - t * t * d + 1) * d
}

/// `min F_d(m)` over the divisors of `n`.
pub fn u_sigma(n: u64, m: u64) -> Result<u64> {
    check_size(n, m)?;
    Ok(divisors(n).into_iter().map(|d| big_f_d(d, m)).min().unwrap())
}

/// `C_d(n, m)`: `c` consecutive cosets of `H` centred on 0 plus `k`
/// elements of the next coset.
pub fn construct_c(n: u64, m: u64, d: u64) -> Result<ElementSet> {
    let p = CosetProgressionParams::new(n, m, d)?;
    let c = p.c as i64;
    let (lo, hi, extra) = if c % 2 == 0 {
        (-c / 2, c / 2 - 1, c / 2)
    } else {
        (-(c - 1) / 2, (c - 1) / 2, (c + 1) / 2)
    };
    let mut out = ElementSet::empty(n as usize);
    for i in lo..=hi {
        coset(&mut out, n, p.step(), d, i);
    }
    coset(&mut out, n, p.step(), p.k, extra);
    Ok(out)
}

/// Minimum `|ΣA|` and `|Σ*A|` over asymmetric `m`-subsets of `Z_p`:
/// `(min{p, (m^2+m)/2 + 1}, min{p, (m^2+m)/2})`.
pub fn balandraud(p: u64, m: u64) -> Result<(u64, u64)> {
    if p % 2 == 0 || !is_prime(p) {
        return Err(Error::Unsupported(format!("{p} is not an odd prime")));
    }
    if m == 0 || m > (p - 1) / 2 {
        return Err(Error::InvalidSize { n: p, m });
    }
    let t = (m * m + m) / 2;
    Ok((p.min(t + 1), p.min(t)))
}

/// `v_g(n, h) = max over d | n of (floor((d - 1 - gcd(d, g)) / h) + 1) * n/d`.
pub fn v(n: u64, h: u64, g: u64) -> u64 {
    divisors(n)
        .into_iter()
        .map(|d| {
            let num = d as i64 - 1 - gcd(d, g) as i64;
            let t = num.div_euclid(h as i64) + 1;
            t.max(0) as u64 * (n / d)
        })
        .max()
        .unwrap()
}

/// The `h`-critical number of `hA`: `v_1(n, h) + 1`.
pub fn chi(g: &GroupSpec, h: u64) -> u64 {
    v(g.order(), h, 1) + 1
}

/// Least `m` with `<A> = G` for every `m`-subset: `n/p + 1`.
pub fn chi_span(g: &GroupSpec) -> u64 {
    g.order() / g.smallest_prime() + 1
}

/// Smallest prime divisor of `n` congruent to 2 mod 3.
fn smallest_prime_2_mod_3(n: u64) -> Option<u64> {
    crate::arith::factorize(n)
        .into_iter()
        .map(|(p, _)| p)
        .find(|p| p % 3 == 2)
}

/// The lower bound for the restricted 3-critical number of `Z_n`.
pub fn chi_hat3_bound(n: u64) -> u64 {
    match smallest_prime_2_mod_3(n) {
        Some(p) => {
            let base = (p + 1) * n / (3 * p);
            if n == p {
                base + 3
            } else if n == 3 * p {
                base + 2
            } else {
                base + 1
            }
        }
        None => n / 3 + if n % 9 == 0 { 4 } else { 3 },
    }
}

/// Restricted `h`-critical number where a closed form is established, in a
/// fixed priority order: undefined cases, trivial `h >= n - 1`, `h = 2` with
/// exponent at least 3, large `h`, prime order, even cyclic `n >= 12`, and
/// the `h = 3` lower bounds for cyclic groups.
pub fn chi_hat_known(g: &GroupSpec, h: u64) -> KnownValue {
    let n = g.order();
    let ord2 = g.involution_count();
    if h == 0 {
        return KnownValue::undefined("CHI-HAT-TRIVIAL");
    }
    if g.is_elementary_abelian_2() && (h == 2 || h + 2 == n) {
        return KnownValue::undefined("CHI-HAT-2");
    }
    if h >= n {
        return KnownValue::undefined("CHI-HAT-TRIVIAL");
    }
    if h == 1 || h + 1 == n {
        return KnownValue::exact(n, "CHI-HAT-TRIVIAL");
    }
    if g.exponent() >= 3 {
        if h == 2 {
            return KnownValue::exact((n + ord2).div_ceil(2) + 1, "CHI-HAT-2");
        }
        if 2 * h + 1 >= n + ord2 {
            return KnownValue::exact(h + 2, "CHI-HAT-LARGE");
        }
    }
    if is_prime(n) {
        return KnownValue::exact((n - 2) / h + h + 1, "CHI-HAT-PRIME");
    }
    if g.is_cyclic() && n % 2 == 0 && n >= 12 {
        if 3 <= h && h + 2 <= n / 2 {
            return KnownValue::exact(n / 2 + 1, "CHI-HAT-EVEN");
        }
        if h + 1 == n / 2 {
            return KnownValue::exact(n / 2 + 2, "CHI-HAT-EVEN");
        }
    }
    if g.is_cyclic() && h == 3 {
        let applies = smallest_prime_2_mod_3(n).is_none() || n >= 16;
        if applies {
            return KnownValue::lower(chi_hat3_bound(n), "CONJ-CHI-HAT-3");
        }
    }
    KnownValue::unknown("CHI-HAT")
}

/// Least `m` with `ΣA = G` for every `m`-subset, for `n >= 10`.
pub fn chi_hat_sigma(g: &GroupSpec) -> Result<u64> {
    let n = g.order();
    if n < 10 {
        return Err(Error::Unsupported(format!(
            "the closed form covers orders n >= 10, got {n}"
        )));
    }
    let p = g.smallest_prime();
    let q = n / p;
    let special = g.is_cyclic()
        && (n == p || (p >= 3 && is_prime(q) && p <= q && q <= p + isqrt(4 * (p - 2)) + 1));
    Ok(if special {
        isqrt(4 * (n - 2)) + 1
    } else {
        n / p + p - 1
    })
}

/// Maximum size of a sum-free subset of `Z_n`: `(p + 1) n / (3p)` for the
/// smallest prime divisor `p ≡ 2 mod 3` when one exists, else `floor(n/3)`.
pub fn diananda_yap(n: u64) -> u64 {
    match smallest_prime_2_mod_3(n) {
        Some(p) => (p + 1) * n / (3 * p),
        None => n / 3,
    }
}

/// `v_{k-l}(n, k+l)`, a lower bound for the largest `(k, l)`-sum-free subset
/// of `Z_n`; exact when `gcd(k - l, n) = 1` or `(k, l) = (3, 1)`.
pub fn sumfree_kl_lower(n: u64, k: u64, l: u64) -> Result<KnownValue> {
    if l == 0 || k <= l {
        return Err(Error::InvalidParams(format!("need k > l >= 1, got k={k}, l={l}")));
    }
    let value = v(n, k + l, k - l);
    Ok(if gcd(k - l, n) == 1 || (k, l) == (3, 1) {
        KnownValue::exact(value, "HP-KL-SUMFREE")
    } else {
        KnownValue::lower(value, "HP-KL-SUMFREE")
    })
}
