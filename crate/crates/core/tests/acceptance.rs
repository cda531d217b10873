//! Exit gate: one PASS/FAIL line per acceptance criterion. Exact integer
//! comparisons throughout.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{coefficient_sumset, for_each_subset, groups, to_set, Naive, Op};
use sumlab::arith::{gcd, is_prime, isqrt, primes_up_to};
use sumlab::formula;
use sumlab::search::{
    critical_number, critical_sigma, max_kl_sumfree, min_dilated_norm, min_size, min_size_sigma,
    sets_attaining, sigma_noncovering_sets, Filter, SearchConfig, SearchTask, Target,
};
use sumlab::sumset::{self, SumsetKind};
use sumlab::{ElementSet, Error, GroupSpec};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn cfg() -> SearchConfig {
    SearchConfig {
        jobs: std::thread::available_parallelism().map_or(1, |n| n.get()),
        ..SearchConfig::default()
    }
}

fn z(n: u64) -> GroupSpec {
    GroupSpec::cyclic(n).unwrap()
}

fn min(g: &GroupSpec, m: u64, target: Target) -> u64 {
    min_size(&SearchTask::new(g.clone(), m, target), &cfg())
        .unwrap_or_else(|e| panic!("{g} m={m} {target:?}: {e}"))
        .value
}

fn min_filtered(g: &GroupSpec, m: u64, target: Target, filter: Filter) -> Option<u64> {
    match min_size(&SearchTask::new(g.clone(), m, target).with_filter(filter), &cfg()) {
        Ok(out) => Some(out.value),
        Err(Error::EmptySearchSpace(_)) => None,
        Err(e) => panic!("{g} m={m} {target:?} {filter:?}: {e}"),
    }
}

fn restricted_critical(g: &GroupSpec, h: u64) -> Option<u64> {
    critical_number(g, h, SumsetKind::Restricted, &cfg()).unwrap().value
}

/// `v_g(n, h)`, written out independently of the formula library.
fn v(n: u64, h: u64, g: u64) -> u64 {
    (1..=n)
        .filter(|d| n % d == 0)
        .map(|d| {
            let t = (d as i64 - 1 - gcd(d, g) as i64).div_euclid(h as i64) + 1;
            t.max(0) as u64 * (n / d)
        })
        .max()
        .unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fold_min_equals_u() -> Outcome {
    let mut points = 0;
    for g in groups(2, 16) {
        let n = g.order();
        for m in 1..=n {
            for h in 2..=4 {
                let (got, want) = (min(&g, m, Target::fold(h)), formula::u(n, m, h).unwrap());
                ensure(got == want, || format!("{g} m={m} h={h}: search {got}, u {want}"))?;
                points += 1;
            }
        }
    }
    Ok(format!("{points} points"))
}

/// Whether membership in `a` is constant on cosets of the subgroup `<step>`.
fn union_of_cosets(n: usize, a: &ElementSet, step: usize) -> bool {
    a.iter().all(|x| a.contains((x + step) % n))
}

fn contains_coset(n: usize, a: &ElementSet, step: usize) -> bool {
    (0..step).any(|r| (r..n).step_by(step).all(|x| a.contains(x)))
}

fn full_cosets(n: usize, a: &ElementSet, step: usize) -> usize {
    (0..step).filter(|&r| (r..n).step_by(step).all(|x| a.contains(x))).count()
}

fn is_progression(n: usize, a: &ElementSet) -> bool {
    let m = a.len();
    (1..n).any(|d| {
        (0..n).any(|s| {
            let terms: BTreeSet<usize> = (0..m).map(|i| (s + i * d) % n).collect();
            terms.len() == m && terms.iter().all(|&x| a.contains(x))
        })
    })
}

fn z15_witness_structure() -> Outcome {
    let g = z(15);
    let six = SearchTask::new(g.clone(), 6, Target::fold(2));
    let v6 = min_size(&six, &cfg()).unwrap().value;
    ensure(v6 == 9, || format!("rho(Z15,6,2) = {v6}"))?;
    let sets6 = sets_attaining(&six, 9, &cfg()).unwrap();
    ensure(!sets6.is_empty() && sets6.iter().all(|a| union_of_cosets(15, a, 5)), || {
        "a minimiser at m=6 is not a union of two cosets of {0,5,10}".into()
    })?;

    let seven = SearchTask::new(g.clone(), 7, Target::fold(2));
    let v7 = min_size(&seven, &cfg()).unwrap().value;
    ensure(v7 == 13, || format!("rho(Z15,7,2) = {v7}"))?;
    let sets7 = sets_attaining(&seven, 13, &cfg()).unwrap();
    let mut counts = [0usize; 3];
    for a in &sets7 {
        let classes = [
            full_cosets(15, a, 5) == 2,
            contains_coset(15, a, 3),
            is_progression(15, a),
        ];
        ensure(classes.iter().any(|&c| c), || format!("unclassified minimiser {}", g.format_set(a)))?;
        for (c, hit) in counts.iter_mut().zip(classes) {
            *c += hit as usize;
        }
    }
    ensure(counts.iter().all(|&c| c > 0), || format!("class counts {counts:?}"))?;
    Ok(format!(
        "{} minimisers at m=6; {} at m=7 split {:?} over cosets+element / order-5 coset+2 / progression",
        sets6.len(),
        sets7.len(),
        counts
    ))
}

fn restricted_prime_formula() -> Outcome {
    let mut points = 0;
    for p in [5u64, 7, 11, 13] {
        for m in 4..=p {
            for h in 2..=m - 2 {
                let got = min(&z(p), m, Target::restricted(h));
                let want = p.min(h * m - h * h + 1);
                ensure(got == want, || format!("p={p} m={m} h={h}: {got} vs {want}"))?;
                points += 1;
            }
        }
    }
    Ok(format!("{points} points"))
}

fn restricted_cyclic_conjecture() -> Outcome {
    let (mut points, mut off_by_one) = (0, 0);
    for n in 4..=20u64 {
        for m in 4..=n {
            for h in 2..=m - 2 {
                let got = min(&z(n), m, Target::restricted(h));
                let want = formula::rho_hat_conjectured(n, m, h).unwrap();
                ensure(got == want, || format!("n={n} m={m} h={h}: search {got}, min(u^,w^) {want}"))?;
                let uh = formula::u_hat(n, m, h).unwrap();
                ensure(uh == got || uh == got + 1, || format!("n={n} m={m} h={h}: u^ {uh} vs {got}"))?;
                off_by_one += (uh != got) as usize;
                points += 1;
            }
        }
    }
    Ok(format!("{points} points, u^ one above at {off_by_one}"))
}

/// Signed sumsets are only computed up to h = n + m.
fn signed_in_domain(g: &GroupSpec, m: u64, h: u64) -> bool {
    h <= sumset::fold_cap(g, m as usize)
}

fn signed_equals_fold() -> Outcome {
    let (mut cyclic, mut capped) = (0, 0);
    for n in 2..=20 {
        for m in 1..=n {
            for h in 1..=5 {
                if !signed_in_domain(&z(n), m, h) {
                    capped += 1;
                    continue;
                }
                let (s, f) = (min(&z(n), m, Target::signed(h)), min(&z(n), m, Target::fold(h)));
                ensure(s == f, || format!("Z{n} m={m} h={h}: signed {s}, fold {f}"))?;
                cyclic += 1;
            }
        }
    }
    let mut exceptions = Vec::new();
    let mut points = 0;
    for g in groups(2, 16) {
        for m in 1..=g.order() {
            for h in 2..=6 {
                if !signed_in_domain(&g, m, h) {
                    capped += 1;
                    continue;
                }
                let (s, f) = (min(&g, m, Target::signed(h)), min(&g, m, Target::fold(h)));
                if s != f {
                    exceptions.push((g.to_string(), m, h, s, f));
                }
                points += 1;
            }
        }
    }
    let want = vec![("3x3".to_string(), 4, 2, 8, 7)];
    ensure(exceptions == want, || format!("exceptions {exceptions:?}"))?;
    Ok(format!(
        "{cyclic} cyclic points equal; {points} points, only exception {:?}; {capped} points above h = n + m skipped",
        want[0]
    ))
}

fn signed_minimum_is_symmetry_typed() -> Outcome {
    let (mut points, mut capped) = (0, 0);
    for g in groups(2, 12) {
        for m in 1..=g.order() {
            for h in 1..=4 {
                if !signed_in_domain(&g, m, h) {
                    capped += 1;
                    continue;
                }
                let all = min(&g, m, Target::signed(h));
                let typed = [Filter::Symmetric, Filter::NearSymmetric, Filter::Asymmetric]
                    .into_iter()
                    .filter_map(|f| min_filtered(&g, m, Target::signed(h), f))
                    .min();
                ensure(typed == Some(all), || format!("{g} m={m} h={h}: {typed:?} vs {all}"))?;
                points += 1;
            }
        }
    }
    Ok(format!("{points} points; {capped} points above h = n + m skipped"))
}

fn signed_gap_count(g: &GroupSpec) -> usize {
    (1..=g.order())
        .filter(|&m| min(g, m, Target::signed(2)) != min(g, m, Target::fold(2)))
        .count()
}

fn quarter_count() -> Outcome {
    let mut detail = Vec::new();
    for (spec, want) in [("3x3", 1), ("5x5", 4)] {
        let count = signed_gap_count(&GroupSpec::parse(spec).unwrap());
        ensure(count == want, || format!("{spec}: {count} values of m, want {want}"))?;
        detail.push(format!("{spec}: {count}"));
    }
    Ok(detail.join("; "))
}

fn subset_sum_minimum() -> Outcome {
    let mut points = 0;
    for n in 2..=20 {
        for m in 1..=n {
            let got = min_size_sigma(&z(n), m, true, Filter::All, &cfg()).unwrap().value;
            let want = formula::u_sigma(n, m).unwrap();
            ensure(got == want, || format!("Z{n} m={m}: {got} vs u {want}"))?;
            if is_prime(n) && n <= 17 {
                ensure(got == n.min(m * m / 4 + 1), || format!("Z{n} m={m}: prime form"))?;
            }
            points += 1;
        }
    }
    Ok(format!("{points} points"))
}

fn asymmetric_subset_sums() -> Outcome {
    let mut points = 0;
    for p in [7u64, 11, 13] {
        let g = z(p);
        for m in 1..=(p - 1) / 2 {
            let t = (m * m + m) / 2;
            let first: ElementSet = to_set(p as usize, 1..=m as usize);
            for (include_empty, want) in [(true, p.min(t + 1)), (false, p.min(t))] {
                let got = min_size_sigma(&g, m, include_empty, Filter::Asymmetric, &cfg()).unwrap().value;
                ensure(got == want, || format!("p={p} m={m} empty={include_empty}: {got} vs {want}"))?;
                let own = sumset::sigma(&g, &first, include_empty).len() as u64;
                ensure(own == want, || format!("p={p} m={m}: {{1..m}} gives {own}"))?;
            }
            ensure(sumset::is_asymmetric(&g, &first), || format!("{{1..{m}}} not asymmetric"))?;
            points += 1;
        }
    }
    Ok(format!("{points} (p, m) pairs, {{1..m}} attains both"))
}

fn involutions(z: &Naive) -> u64 {
    (1..z.n).filter(|&x| z.add(x, x) == 0).count() as u64
}

fn critical_numbers() -> Outcome {
    let mut points = 0;
    for g in groups(2, 16) {
        for h in 2..=6 {
            let got = critical_number(&g, h, SumsetKind::Fold, &cfg()).unwrap().value;
            let want = v(g.order(), h, 1) + 1;
            ensure(got == Some(want), || format!("chi({g},{h}) = {got:?}, want {want}"))?;
            points += 1;
        }
    }
    for p in primes_up_to(13).into_iter().filter(|&p| p >= 3) {
        for h in 2..p {
            let want = (p - 2) / h + h + 1;
            let got = restricted_critical(&z(p), h);
            ensure(got == Some(want), || format!("chi^(Z{p},{h}) = {got:?}, want {want}"))?;
            points += 1;
        }
    }
    for n in [12u64, 14, 16] {
        for h in 3..n / 2 {
            let want = if h == n / 2 - 1 { n / 2 + 2 } else { n / 2 + 1 };
            let got = restricted_critical(&z(n), h);
            ensure(got == Some(want), || format!("chi^(Z{n},{h}) = {got:?}, want {want}"))?;
            points += 1;
        }
    }
    for g in groups(2, 16).into_iter().filter(|g| g.exponent() > 2) {
        let zn = Naive::of(&g);
        let want = (g.order() + involutions(&zn)).div_ceil(2) + 1;
        let got = restricted_critical(&g, 2);
        ensure(got == Some(want), || format!("chi^({g},2) = {got:?}, want {want}"))?;
        points += 1;
    }
    for spec in ["2x2", "2x2x2"] {
        let g = GroupSpec::parse(spec).unwrap();
        let got = restricted_critical(&g, 2);
        ensure(got.is_none(), || format!("chi^({g},2) = {got:?}, want undefined"))?;
        points += 1;
    }
    Ok(format!("{points} checks"))
}

fn subset_sum_critical() -> Outcome {
    let mut checked = 0;
    for g in groups(10, 24) {
        let got = critical_sigma(&g, false, &cfg()).unwrap().value;
        let want = formula::chi_hat_sigma(&g).unwrap();
        ensure(got == Some(want), || format!("{g}: {got:?} vs {want}"))?;
        checked += 1;
    }
    for (spec, want) in [("11", 7), ("15", 8), ("10", 6), ("2x6", 7)] {
        let got = critical_sigma(&GroupSpec::parse(spec).unwrap(), false, &cfg()).unwrap().value;
        ensure(got == Some(want), || format!("{spec}: {got:?} vs {want}"))?;
    }
    for p in [11, 13] {
        let with = critical_sigma(&z(p), false, &cfg()).unwrap().value.unwrap();
        let without = critical_sigma(&z(p), true, &cfg()).unwrap().value.unwrap();
        ensure(without + 1 == with, || format!("Z{p}: {without} without 0, {with} with"))?;
    }
    Ok(format!("{checked} groups of order 10-24"))
}

fn has_prime_2_mod_3(n: u64) -> bool {
    (2..=n).any(|p| n % p == 0 && is_prime(p) && p % 3 == 2)
}

fn restricted_3_critical() -> Outcome {
    let mut in_scope = 0;
    let mut outside = Vec::new();
    for n in 4..=30 {
        let got = restricted_critical(&z(n), 3);
        let bound = formula::chi_hat3_bound(n);
        if !has_prime_2_mod_3(n) || n >= 16 {
            ensure(got == Some(bound), || format!("Z{n}: {got:?} vs bound {bound}"))?;
            in_scope += 1;
        } else if got != Some(bound) {
            outside.push(format!("Z{n}: {} vs {bound}", got.map_or("undefined".into(), |v| v.to_string())));
        }
    }
    Ok(format!(
        "equal at all {in_scope} orders where the bound applies; below 16 with a prime 2 mod 3 dividing n: {}",
        if outside.is_empty() { "no differences".into() } else { outside.join(", ") }
    ))
}

fn noncovering_norms() -> Outcome {
    let mut report = Vec::new();
    for p in primes_up_to(23).into_iter().filter(|&p| p >= 3) {
        let m = isqrt(4 * (p - 2));
        let (sets, truncated) = sigma_noncovering_sets(p, m, &cfg().with_cap(usize::MAX)).unwrap();
        ensure(!truncated, || format!("p={p}: truncated"))?;
        let mut worst: Option<(u64, ElementSet)> = None;
        for a in &sets {
            let (norm, _) = min_dilated_norm(p, a).unwrap();
            if worst.as_ref().is_none_or(|(w, _)| norm > *w) {
                worst = Some((norm, a.clone()));
            }
        }
        let exceeds = worst.as_ref().is_some_and(|(w, _)| *w > p - 2);
        if p == 17 {
            let (w, a) = worst.clone().unwrap();
            ensure(exceeds, || "p=17: no exceptional set".into())?;
            report.push(format!("p=17 exception {} with min norm {w}", z(17).format_set(&a)));
        } else {
            ensure(!exceeds, || format!("p={p}: set with min norm {:?}", worst.map(|w| w.0)))?;
        }
    }
    Ok(report.join("; "))
}

fn sum_free_sizes() -> Outcome {
    for n in 2..=20 {
        let got = max_kl_sumfree(n, 2, 1, &cfg()).unwrap().size;
        ensure(got == v(n, 3, 1), || format!("Z{n} sum-free: {got} vs {}", v(n, 3, 1)))?;
    }
    for n in 2..=16 {
        let got = max_kl_sumfree(n, 3, 1, &cfg()).unwrap().size;
        ensure(got == v(n, 4, 2), || format!("Z{n} (3,1)-sum-free: {got} vs {}", v(n, 4, 2)))?;
    }
    Ok("n <= 20 and n <= 16".into())
}

fn random_invariants(cases: usize) -> Result<(), String> {
    let specs = ["7", "12", "15", "2x6", "3x3", "2x2x4", "64", "4x16", "67", "2x40", "3x3x9"];
    let mut rng = ChaCha8Rng::seed_from_u64(20_160_601);
    for i in 0..cases {
        let g = GroupSpec::parse(specs[rng.gen_range(0..specs.len())]).unwrap();
        let n = g.n();
        let size = rng.gen_range(1..=7);
        let a = ElementSet::from_indices(n, (0..size).map(|_| rng.gen_range(0..n)));
        let m = a.len() as u64;
        let h = rng.gen_range(0..=5u64);
        let t = rng.gen_range(0..n);
        let units = g.unit_multipliers();
        let u = units[rng.gen_range(0..units.len())] as i64;

        let fold = sumset::h_fold_sumset(&g, &a, h);
        let restricted = sumset::restricted_sumset(&g, &a, h);
        let signed = sumset::signed_sumset(&g, &a, h).unwrap();
        let fail = |what: &str| Err(format!("case {i}: {what} for {g} {} h={h}", g.format_set(&a)));
        if !(restricted.is_subset(&fold) && fold.is_subset(&signed)) {
            return fail("containment chain");
        }
        if h <= m {
            let total = a.iter().fold(0, |s, x| g.add_idx(s, x));
            let dual = sumset::restricted_sumset(&g, &a, m - h);
            if restricted != g.translate_set(&g.negate_set(&dual), total) {
                return fail("restricted duality");
            }
        }
        let shifted = g.translate_set(&a, t);
        let ht = g.scale_idx(h as i64, t);
        if sumset::h_fold_sumset(&g, &shifted, h) != g.translate_set(&fold, ht)
            || sumset::restricted_sumset(&g, &shifted, h) != g.translate_set(&restricted, ht)
        {
            return fail("translation covariance");
        }
        let scaled = g.dilate_set(u, &a);
        if sumset::h_fold_sumset(&g, &scaled, h) != g.dilate_set(u, &fold)
            || sumset::signed_sumset(&g, &scaled, h).unwrap() != g.dilate_set(u, &signed)
        {
            return fail("dilation covariance");
        }
        if g.negate_set(&signed) != signed {
            return fail("signed symmetry");
        }
    }
    Ok(())
}

fn engine_oracles() -> Outcome {
    let mut compared = 0usize;
    for g in groups(2, 16) {
        let zn = Naive::of(&g);
        let pool: Vec<usize> = (0..zn.n).collect();
        for m in 1..=5.min(zn.n) {
            let mut failure = None;
            for_each_subset(&pool, m, |a| {
                if failure.is_some() {
                    return;
                }
                let set = to_set(zn.n, a.iter().copied());
                for h in 0..=4 {
                    for (kind, op) in [
                        (SumsetKind::Fold, Op::Fold),
                        (SumsetKind::Restricted, Op::Restricted),
                        (SumsetKind::Signed, Op::Signed),
                    ] {
                        let got = sumset::sumset(&g, &set, h, kind);
                        if kind == SumsetKind::Signed && h > sumset::fold_cap(&g, m) {
                            // Above the n + m cap the engine refuses by contract.
                            if got.is_ok() {
                                failure = Some(format!("{g} {a:?} h={h}: signed above cap accepted"));
                            }
                            continue;
                        }
                        let want: Vec<usize> = coefficient_sumset(&zn, a, h, op).into_iter().collect();
                        if got.map(|s| s.to_vec()).ok() != Some(want) {
                            failure = Some(format!("{g} {a:?} h={h} {kind:?}"));
                        }
                        compared += 1;
                    }
                }
            });
            if let Some(f) = failure {
                return Err(f);
            }
        }
    }
    random_invariants(10_000)?;
    Ok(format!("{compared} sumsets against coefficient vectors; 10000 random invariant cases"))
}

fn main() {
    let criteria: [Criterion; 15] = [
        ("fold minimum equals u, all groups n <= 16, h = 2..4", fold_min_equals_u),
        ("Z15 minima and minimiser structure at m = 6, 7", z15_witness_structure),
        ("restricted minimum in Z_p is min{p, hm-h^2+1}", restricted_prime_formula),
        ("restricted minimum in Z_n is min{u^, w^}, n <= 20", restricted_cyclic_conjecture),
        ("signed minimum equals fold minimum, single exception", signed_equals_fold),
        ("signed minimum attained by a typed set, n <= 12", signed_minimum_is_symmetry_typed),
        ("signed/fold gap counts for 3x3 and 5x5 at h = 2", quarter_count),
        ("subset-sum minimum equals u(n,m,N0), n <= 20", subset_sum_minimum),
        ("asymmetric subset-sum minima in Z_7, Z_11, Z_13", asymmetric_subset_sums),
        ("critical numbers of fold and restricted sumsets", critical_numbers),
        ("subset-sum critical numbers, orders 10-24", subset_sum_critical),
        ("restricted 3-critical number of Z_n, n <= 30", restricted_3_critical),
        ("dilated norms of non-covering sets, p <= 23", noncovering_norms),
        ("sum-free and (3,1)-sum-free maxima", sum_free_sizes),
        ("engine oracle suite and random invariants", engine_oracles),
    ];
    let only: Option<usize> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let id = i + 1;
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(msg)
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {id:>2} {name}: {detail} [{secs:.1}s]"),
            Err(why) => {
                failed += 1;
                println!("FAIL {id:>2} {name}: {why} [{secs:.1}s]");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
