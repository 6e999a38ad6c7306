#![allow(clippy::absurd_extreme_comparisons)]

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::Instant;

use dynred::arith::{rat, rat_string};
use dynred::form::FqPoint;
use dynred::reduction::reduction;
use dynred::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5eed_d1a6;
/// Every criterion is an exact count or an exact equality.
const MAX_DISAGREEMENTS: usize = 0;
const CORPUS_SIZE: usize = 240;
const ORACLE_MAPS: usize = 50;
const ORACLE_DEPTH: usize = 4;
const MOBIUS_MAPS: usize = 100;
const TIME_BUDGET_SECS: f64 = 10.0;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
        }
    }
}

fn limits() -> Limits {
    Limits::default()
}

fn map(text: &str, p: u64) -> RationalMapModel {
    parse_map(text, Some(p)).expect("fixed example parses")
}

fn pc_labels(m: &RationalMapModel, p: u64) -> Vec<String> {
    let red = reduction(m, p).unwrap();
    let pc = postcritical_set(&red, &limits()).unwrap();
    if pc.everything {
        vec!["everything".into()]
    } else {
        pc.labels()
    }
}

fn labels(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

/// Quadratic and cubic integral maps; each coefficient is p-divisible with probability 1/4.
fn corpus(rng: &mut ChaCha8Rng, size: usize, primes: &[u64]) -> Vec<(RationalMapModel, u64)> {
    let mut out = Vec::with_capacity(size);
    while out.len() < size {
        let p = primes[out.len() % primes.len()];
        let d = 2 + out.len() % 2;
        let coeff = |rng: &mut ChaCha8Rng| -> i64 {
            let c = rng.gen_range(-9i64..=9);
            if rng.gen_bool(0.25) {
                c * p as i64
            } else {
                c
            }
        };
        let f: Vec<i64> = (0..=d).map(|_| coeff(rng)).collect();
        let g: Vec<i64> = (0..=d).map(|_| coeff(rng)).collect();
        if let Ok(m) = RationalMapModel::from_int_coeffs(&f, &g) {
            if m.degree() == d {
                out.push((m, p));
            }
        }
    }
    out
}

fn criterion_1() -> Outcome {
    let mut failures = Vec::new();
    for p in [3u64, 5, 7] {
        let m = map("z^2+p", p);
        let sgr = strict_good_reduction(&m, p).unwrap();
        if sgr.res_valuation != Valuation::Finite(0) || sgr.reduced_map != "z^2" {
            failures.push(format!("p={p}: reduction {}", sgr.reduced_map));
        }
        if pc_labels(&m, p) != labels(&["0", "inf"]) {
            failures.push(format!("p={p}: PC {:?}", pc_labels(&m, p)));
        }
        for x in [1i64, 2, 3] {
            let point = ProjPointQ::from_int(x);
            let level1 =
                fiber_report(&fiber_polynomial(&m, 1, &point, p, &limits()).unwrap(), 0).unwrap();
            let expected = rat_string(&(rat(-4) * rat(p as i64 - x)));
            if level1.discriminant.as_deref() != Some(expected.as_str()) {
                failures.push(format!(
                    "p={p} x={x}: Disc {:?} != {expected}",
                    level1.discriminant
                ));
            }
            for n in 1..=3 {
                let r = fiber_report(&fiber_polynomial(&m, n, &point, p, &limits()).unwrap(), 0)
                    .unwrap();
                if r.certificate != Certificate::Unramified {
                    failures.push(format!(
                        "p={p} x={x} n={n}: {:?} (v(disc)={}, x mod p={})",
                        r.certificate,
                        r.disc_valuation,
                        x.rem_euclid(p as i64)
                    ));
                }
            }
        }
    }
    summarize(failures, "27 certificates, 9 discriminants, 3 reductions")
}

fn summarize(failures: Vec<String>, scope: &str) -> Outcome {
    if failures.is_empty() {
        Outcome::new(true, format!("{scope}: all exact"))
    } else {
        Outcome::new(false, format!("{scope}: {}", failures.join("; ")))
    }
}

fn criterion_2() -> Outcome {
    let mut failures = Vec::new();
    for p in [5u64, 7, 11] {
        let m = map("z^2-1", p);
        let minus_one = (p - 1).to_string();
        let expected = labels(&["0", &minus_one, "inf"]);
        if pc_labels(&m, p) != expected {
            failures.push(format!("p={p}: PC {:?}", pc_labels(&m, p)));
        }
        let c2 = condition2_check(&m, p, &limits()).unwrap();
        if !c2.holds {
            failures.push(format!("p={p}: fiber criterion fails"));
        }
    }
    summarize(failures, "p in {5,7,11}")
}

fn criterion_3() -> Outcome {
    let mut failures = Vec::new();
    for p in [3u64, 5, 7] {
        let m = map("p*z^2+z", p);
        let sgr = strict_good_reduction(&m, p).unwrap();
        let c2 = condition2_check(&m, p, &limits()).unwrap();
        if sgr.reduced_degree != 1 || sgr.is_strict_good_reduction || c2.holds {
            failures.push(format!(
                "p={p}: reduced degree {}, sgr {}, criterion {}",
                sgr.reduced_degree, sgr.is_strict_good_reduction, c2.holds
            ));
        }
        if c2.violations.iter().any(|v| v.degree == 2 && v.separable) {
            failures.push(format!("p={p}: a degree-2 separable fiber was reported"));
        }
    }
    summarize(failures, "p in {3,5,7}")
}

fn criterion_4() -> Outcome {
    let mut failures = Vec::new();
    for p in [3u64, 5, 7] {
        let m = map("z^2/(1+p*z^2)", p);
        let res = m.primitive().resultant();
        let sgr = strict_good_reduction(&m, p).unwrap();
        if res != rat(1) || sgr.res_valuation != Valuation::Finite(0) {
            failures.push(format!("p={p}: Res {}", rat_string(&res)));
        }
        if sgr.reduced_map != "z^2" {
            failures.push(format!("p={p}: reduction {}", sgr.reduced_map));
        }
        if pc_labels(&m, p) != labels(&["0", "inf"]) {
            failures.push(format!("p={p}: PC {:?}", pc_labels(&m, p)));
        }
    }
    summarize(failures, "p in {3,5,7}")
}

fn criterion_5(corpus: &[(RationalMapModel, u64)]) -> Outcome {
    let mut disagreements = Vec::new();
    let mut inseparable = 0;
    let mut sgr_count = 0;
    for (m, p) in corpus {
        let sgr = strict_good_reduction(m, *p).unwrap();
        let c2 = condition2_check(m, *p, &limits()).unwrap();
        sgr_count += usize::from(sgr.is_strict_good_reduction);
        if sgr.is_strict_good_reduction != c2.holds {
            inseparable += usize::from(sgr.inseparable_reduction);
            disagreements.push(format!("{m} at p={p}"));
        }
    }
    let detail = format!(
        "{} maps ({} with strict good reduction), {} disagreements ({} with inseparable reduction){}",
        corpus.len(),
        sgr_count,
        disagreements.len(),
        inseparable,
        if disagreements.is_empty() {
            String::new()
        } else {
            format!(": {}", disagreements.join(", "))
        }
    );
    Outcome::new(disagreements.len() <= MAX_DISAGREEMENTS, detail)
}

/// Smallest m >= 1 with `x` in the m-th image of the critical divisor.
fn first_postcritical_depth(red: &dynred::map::ReducedMap, x: &ClosedPoint) -> Option<usize> {
    let crit = dynred::reduction::closed_points_of_form(&critical_divisor(red)).ok()?;
    let mut frontier: BTreeSet<ClosedPoint> = crit.into_iter().map(|(c, _)| c).collect();
    let mut seen = BTreeSet::new();
    for m in 1.. {
        frontier = frontier
            .iter()
            .map(|c| pushforward(c, red).unwrap())
            .collect();
        if frontier.contains(x) {
            return Some(m);
        }
        if frontier.iter().all(|c| seen.contains(c)) {
            return None;
        }
        seen.extend(frontier.iter().cloned());
    }
    None
}

fn criterion_6(rng: &mut ChaCha8Rng) -> Outcome {
    let mut maps = Vec::new();
    for (m, p) in corpus(rng, 4 * ORACLE_MAPS, &[3, 5, 7]) {
        let red = reduction(&m, p).unwrap();
        if !critical_divisor(&red).is_zero() {
            maps.push((m, p, red));
        }
        if maps.len() == ORACLE_MAPS {
            break;
        }
    }
    let mut checked = 0;
    let mut disagreements = Vec::new();
    let mut late = 0;
    for (m, p, red) in &maps {
        let pc = postcritical_set(red, &limits()).unwrap();
        let field = red.field().clone();
        let mut points: Vec<FqPoint> = field
            .elements(&limits())
            .unwrap()
            .into_iter()
            .map(FqPoint::Affine)
            .collect();
        points.push(FqPoint::Infinity);
        for x in points {
            checked += 1;
            let cp = ClosedPoint::of_point(&field, &x);
            let etale_all =
                (1..=ORACLE_DEPTH).all(|n| etale_fiber_oracle(red, &field, &x, n).etale);
            if etale_all == pc.contains(&cp) {
                let depth = first_postcritical_depth(red, &cp);
                if depth.is_some_and(|k| k > ORACLE_DEPTH) {
                    late += 1;
                }
                disagreements.push(format!(
                    "{m} p={p} x={} first PC depth {:?}",
                    x.format(&field),
                    depth
                ));
            }
        }
    }
    let detail = format!(
        "{} maps, {checked} points, {} disagreements ({late} lie in PC only beyond depth {ORACLE_DEPTH}){}",
        maps.len(),
        disagreements.len(),
        if disagreements.is_empty() {
            String::new()
        } else {
            format!(": {}", disagreements.join("; "))
        }
    );
    Outcome::new(
        maps.len() == ORACLE_MAPS && disagreements.len() <= MAX_DISAGREEMENTS,
        detail,
    )
}

fn criterion_7(corpus: &[(RationalMapModel, u64)]) -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for (m, p) in corpus {
        if !strict_good_reduction(m, *p)
            .unwrap()
            .is_strict_good_reduction
        {
            continue;
        }
        for n in [2usize, 3] {
            checked += 1;
            let it = iterate(m, n, &limits()).unwrap();
            let model = normalize_integral(&it, *p).unwrap();
            let v = vp(*p, &model.model().resultant()).unwrap();
            if v != Valuation::Finite(0) {
                failures.push(format!("{m} p={p} n={n}: v(Res)={v}"));
            }
        }
    }
    Outcome::new(
        failures.len() <= MAX_DISAGREEMENTS,
        format!(
            "{checked} iterate models, {} failures{}",
            failures.len(),
            if failures.is_empty() {
                String::new()
            } else {
                format!(": {}", failures.join("; "))
            }
        ),
    )
}

/// Roots of `y^4 = 1` in F_25 by enumeration, and the cycle type of `y -> y^5` on them.
fn brute_force_level_two() -> (usize, Vec<usize>) {
    let field = fq_extension(5, 2, &limits()).unwrap();
    let roots: Vec<Fq> = field
        .elements(&limits())
        .unwrap()
        .into_iter()
        .filter(|y| field.pow_u64(y, 4) == field.one())
        .collect();
    let perm: Vec<usize> = roots
        .iter()
        .map(|y| {
            let fy = field.pow_u64(y, 5);
            roots.iter().position(|r| *r == fy).unwrap()
        })
        .collect();
    (roots.len(), dynred::tower::cycle_type(&perm))
}

fn criterion_8() -> Outcome {
    let expected_cycle_type = vec![1, 1, 2];
    let m = map("z^2", 5);
    let field = FqField::prime(5).unwrap();
    let x = FqPoint::Affine(field.from_u64(1));
    let tree = preimage_tree(&m, 2, &x, 5, &limits()).unwrap();
    let sizes = tree.level_sizes();
    let cycle = tree.cycle_type(2);
    let (oracle_roots, oracle_cycle) = brute_force_level_two();
    let pass = sizes == [1, 2, 4] && tree.frobenius_commutes() && cycle == expected_cycle_type;
    Outcome::new(
        pass,
        format!(
            "sizes {sizes:?}, Frobenius commutes {}, level-2 cycle type {cycle:?} (expected \
             {expected_cycle_type:?}); F_25 enumeration: {oracle_roots} roots, cycle type \
             {oracle_cycle:?}",
            tree.frobenius_commutes()
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut failures = Vec::new();
    for p in [3u64, 5, 7] {
        for text in ["p*z^2+z", "p^2*z^2"] {
            let m = map(text, p);
            let r = moduli_search(&m, p, &ModuliBounds::default_for(p)).unwrap();
            let verified = conjugate(&m, &r.best_m)
                .and_then(|c| strict_good_reduction(&c, p))
                .map(|s| s.is_strict_good_reduction)
                .unwrap_or(false);
            if !r.achieved_zero || !verified {
                failures.push(format!(
                    "{text} p={p}: best v(Res)={}",
                    r.best_res_valuation
                ));
            }
        }
    }
    summarize(failures, "2 maps at p in {3,5,7}")
}

fn criterion_10(rng: &mut ChaCha8Rng) -> Outcome {
    let primes = [2u64, 3, 5, 7];
    let mut failures = Vec::new();
    let mut by_verdict = BTreeMap::new();
    let mut made = 0;
    while made < MOBIUS_MAPS {
        let p = primes[made % primes.len()];
        let e: Vec<i64> = (0..4)
            .map(|_| {
                let c = rng.gen_range(-9i64..=9);
                c * (p as i64).pow(rng.gen_range(0..=2))
            })
            .collect();
        let Ok(m) = RationalMapModel::from_int_coeffs(&[e[0], e[1]], &[e[2], e[3]]) else {
            continue;
        };
        if m.degree() != 1 {
            continue;
        }
        made += 1;
        let r = degree_one_check(&m, p).unwrap();
        let sgr = strict_good_reduction(&m, p)
            .unwrap()
            .is_strict_good_reduction;
        *by_verdict.entry(sgr).or_insert(0) += 1;
        if r.is_sgr != sgr || !r.trivial_towers {
            failures.push(format!("{m} p={p}: det check {}, sgr {sgr}", r.is_sgr));
        }
        let x = ProjPointQ::from_int(rng.gen_range(-20..=20));
        for n in 1..=3 {
            let fiber = fiber_polynomial(&m, n, &x, p, &limits()).unwrap();
            if fiber.degree() != 1 {
                failures.push(format!("{m} p={p} n={n}: fiber degree {}", fiber.degree()));
            }
        }
    }
    Outcome::new(
        failures.len() <= MAX_DISAGREEMENTS,
        format!(
            "{made} maps ({} good, {} bad), {} failures{}",
            by_verdict.get(&true).unwrap_or(&0),
            by_verdict.get(&false).unwrap_or(&0),
            failures.len(),
            if failures.is_empty() {
                String::new()
            } else {
                format!(": {}", failures.join("; "))
            }
        ),
    )
}

fn main() -> ExitCode {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let main_corpus = corpus(&mut rng, CORPUS_SIZE, &[3, 5]);
    let mut oracle_rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let mut mobius_rng = ChaCha8Rng::seed_from_u64(SEED ^ 10);

    type Run<'a> = Box<dyn FnOnce() -> Outcome + 'a>;
    let criteria: Vec<(&str, Run)> = vec![
        (
            "z^2+p good reduction and certificates",
            Box::new(criterion_1),
        ),
        (
            "z^2-1 postcritical set and fiber criterion",
            Box::new(criterion_2),
        ),
        ("p*z^2+z bad reduction", Box::new(criterion_3)),
        ("z^2/(1+p*z^2) unit resultant", Box::new(criterion_4)),
        (
            "strict good reduction <=> fiber criterion on corpus",
            Box::new(|| criterion_5(&main_corpus)),
        ),
        (
            "etale fibers <=> outside PC, exhaustive",
            Box::new(|| criterion_6(&mut oracle_rng)),
        ),
        (
            "iterates keep a unit resultant",
            Box::new(|| criterion_7(&main_corpus)),
        ),
        ("preimage tree of z^2 over F_5 at 1", Box::new(criterion_8)),
        ("moduli search witnesses", Box::new(criterion_9)),
        (
            "degree-one maps",
            Box::new(|| criterion_10(&mut mobius_rng)),
        ),
    ];

    let mut failed = 0;
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let mut outcome = run();
        let secs = start.elapsed().as_secs_f64();
        if secs > TIME_BUDGET_SECS {
            outcome.pass = false;
            outcome
                .detail
                .push_str(&format!("; exceeded {TIME_BUDGET_SECS}s"));
        }
        failed += usize::from(!outcome.pass);
        println!(
            "{} [{:>2}] {name} ({secs:.2}s): {}",
            if outcome.pass { "PASS" } else { "FAIL" },
            i + 1,
            outcome.detail
        );
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
