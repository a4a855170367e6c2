//! One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

use std::collections::{BTreeSet, VecDeque};
use std::time::{Duration, Instant};

use defzero_core::abelian::{minimal_generators_mod_p, smith_normal_form};
use defzero_core::coset::{enumerate_group, EnumerationLimits};
use defzero_core::multiplier::{
    descendant_filter_lemma23, descendant_filter_thm24, multiplier_is_trivial, FilterInput,
};
use defzero_core::perm::Permutation;
use defzero_core::pquotient::{p_quotient, PqResult};
use defzero_core::rewriting::{complete, CompletionLimits, NormalFormCount, RewritingSystem};
use defzero_core::{free_reduce, IntMatrix, Letter, Presentation, Word};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ORDER: u64 = 2048;
const TC_LIMIT: Duration = Duration::from_secs(5);
const TC_TOTAL_LIMIT: Duration = Duration::from_secs(180);
const MULTIPLIER_LIMIT: Duration = Duration::from_secs(60);
const CALIBRATION_LIMIT: Duration = Duration::from_secs(1);
const NORMAL_FORM_BOUND: u64 = 10_000_000;
const SEED: u64 = 2048;

struct Group {
    id: u32,
    provenance: Vec<u64>,
    pres: Presentation,
}

fn dataset() -> Vec<Group> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/groups2048.txt");
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            let provenance = f[1]
                .trim_matches(|c| c == '[' || c == ']' || c == ' ')
                .split(',')
                .map(|x| x.trim().parse().unwrap())
                .collect();
            Group {
                id: f[0].parse().unwrap(),
                provenance,
                pres: Presentation::parse(f[2]).unwrap(),
            }
        })
        .collect()
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(failures: Vec<String>, ok_detail: String) -> Outcome {
    if failures.is_empty() {
        Outcome {
            pass: true,
            detail: ok_detail,
        }
    } else {
        Outcome {
            pass: false,
            detail: failures.join("; "),
        }
    }
}

/// Coset-table order of every record, with the time each took.
fn enumerate_all(groups: &[Group]) -> Vec<(Option<usize>, Duration)> {
    groups
        .iter()
        .map(|g| {
            let start = Instant::now();
            let t = enumerate_group(&g.pres, &EnumerationLimits::default()).unwrap();
            (t.is_closed().then(|| t.live_count()), start.elapsed())
        })
        .collect()
}

fn order_check(
    groups: &[Group],
    tc: &[(Option<usize>, Duration)],
    ids: impl Fn(u32) -> bool,
) -> Outcome {
    let mut failures = Vec::new();
    let mut total = Duration::ZERO;
    let mut slowest = Duration::ZERO;
    let mut count = 0;
    for (g, (order, time)) in groups.iter().zip(tc).filter(|(g, _)| ids(g.id)) {
        count += 1;
        total += *time;
        slowest = slowest.max(*time);
        match order {
            Some(n) if *n as u64 == ORDER => {}
            Some(n) => failures.push(format!(
                "#{}: order {n}, suspected transcription issue",
                g.id
            )),
            None => failures.push(format!("#{}: enumeration did not close", g.id)),
        }
        if *time > TC_LIMIT {
            failures.push(format!("#{}: {time:?} over {TC_LIMIT:?}", g.id));
        }
    }
    if total > TC_TOTAL_LIMIT {
        failures.push(format!("total {total:?} over {TC_TOTAL_LIMIT:?}"));
    }
    outcome(
        failures,
        format!("{count} groups of order {ORDER}, slowest {slowest:.2?}, total {total:.2?}"),
    )
}

fn criterion_balance(groups: &[Group]) -> Outcome {
    let balanced: Vec<u32> = groups
        .iter()
        .filter(|g| g.pres.is_balanced())
        .map(|g| g.id)
        .collect();
    let expected: Vec<u32> = (1..=48).collect();
    let failures = if balanced == expected {
        vec![]
    } else {
        vec![format!("balanced ids {balanced:?}")]
    };
    outcome(
        failures,
        format!("ids 1-48 balanced, {} unbalanced", groups.len() - 48),
    )
}

fn criterion_generators(groups: &[Group]) -> Outcome {
    let failures = groups
        .iter()
        .filter_map(|g| {
            let d = minimal_generators_mod_p(&g.pres, 2).unwrap();
            (d != 3).then(|| format!("#{}: d = {d}", g.id))
        })
        .collect();
    outcome(failures, format!("d = 3 on {} groups", groups.len()))
}

fn criterion_multiplier(groups: &[Group]) -> Outcome {
    let mut failures = Vec::new();
    let mut slowest = Duration::ZERO;
    for g in groups {
        let start = Instant::now();
        match multiplier_is_trivial(&g.pres, 2) {
            Ok(v) if v.trivial && v.multiplicator_rank == 3 => {}
            Ok(v) => failures.push(format!(
                "#{}: rank {} d {}",
                g.id, v.multiplicator_rank, v.d
            )),
            Err(e) => failures.push(format!("#{}: {e}", g.id)),
        }
        let time = start.elapsed();
        slowest = slowest.max(time);
        if time > MULTIPLIER_LIMIT {
            failures.push(format!("#{}: {time:?} over {MULTIPLIER_LIMIT:?}", g.id));
        }
    }
    outcome(
        failures,
        format!(
            "trivial with rank 3 on {} groups, slowest {slowest:.2?}",
            groups.len()
        ),
    )
}

/// Presentation of Z/m_1 x ... x Z/m_k.
fn abelian_presentation(orders: &[i64]) -> Presentation {
    let k = orders.len();
    let mut rels: Vec<Word> = orders
        .iter()
        .enumerate()
        .map(|(i, &m)| Word::generator_power(i, m))
        .collect();
    for i in 0..k {
        for j in i + 1..k {
            let (a, b) = (Word::generator_power(i, 1), Word::generator_power(j, 1));
            rels.push(a.concat(&b).concat(&a.inverse()).concat(&b.inverse()));
        }
    }
    Presentation::with_default_names(k, rels).unwrap()
}

/// p-multiplicator rank of an abelian p-group: d(G) plus the rank of
/// M(G) = sum over i < j of Z/gcd(m_i, m_j).
fn kunneth_rank(orders: &[i64], p: i64) -> usize {
    let mut pairs = 0;
    for i in 0..orders.len() {
        for j in i + 1..orders.len() {
            if orders[i].gcd(&orders[j]) % p == 0 {
                pairs += 1;
            }
        }
    }
    orders.len() + pairs
}

fn criterion_negative_controls() -> Outcome {
    let mut failures = Vec::new();
    let cases: [(&[i64], bool); 7] = [
        (&[2, 2], false),
        (&[2, 2, 2], false),
        (&[4, 2], false),
        (&[2], true),
        (&[4], true),
        (&[8], true),
        (&[64], true),
    ];
    for (orders, trivial) in cases {
        let rank = kunneth_rank(orders, 2);
        match multiplier_is_trivial(&abelian_presentation(orders), 2) {
            Ok(v)
                if v.trivial == trivial
                    && v.multiplicator_rank == rank
                    && v.invariants_of_multiplicator == vec![2; rank] => {}
            Ok(v) => failures.push(format!(
                "{orders:?}: trivial {} rank {}",
                v.trivial, v.multiplicator_rank
            )),
            Err(e) => failures.push(format!("{orders:?}: {e}")),
        }
    }
    outcome(
        failures,
        "Z2^2, Z2^3, Z4xZ2 nontrivial with ranks 3, 6, 3; cyclic trivial".into(),
    )
}

/// All elements of the group generated by `gens`, by breadth-first closure.
fn elements(gens: &[Permutation]) -> Vec<Permutation> {
    let id = Permutation::identity(gens[0].degree());
    let mut seen: BTreeSet<Vec<u32>> = BTreeSet::from([id.images().to_vec()]);
    let mut out = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.then(g);
            if seen.insert(y.images().to_vec()) {
                out.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    out
}

/// Order of the largest p-quotient `G / O^p(G)`, where `O^p(G)` is
/// generated by the elements of order prime to p.
fn largest_p_quotient_order(pres: &Presentation, p: u64) -> usize {
    let t = enumerate_group(pres, &EnumerationLimits::default()).unwrap();
    let all = elements(&t.permutation_images().unwrap());
    let coprime: Vec<Permutation> = all
        .iter()
        .filter(|x| x.order() % BigUint::from(p) != BigUint::zero())
        .cloned()
        .collect();
    let residual = if coprime.is_empty() {
        1
    } else {
        elements(&coprime).len()
    };
    all.len() / residual
}

struct KbRun {
    id: String,
    system: RewritingSystem,
    count: u64,
}

fn kb_count(pres: &Presentation) -> Option<(RewritingSystem, u64)> {
    let rs = complete(pres, &CompletionLimits::default());
    if !rs.is_confluent() {
        return None;
    }
    match rs.count_normal_forms(NORMAL_FORM_BOUND).unwrap() {
        NormalFormCount::Finite(n) => Some((rs, n)),
        NormalFormCount::ExceedsBound(_) => None,
    }
}

fn criterion_oracles(
    groups: &[Group],
    tc: &[(Option<usize>, Duration)],
    pq: &[PqResult],
    confluent: &mut Vec<KbRun>,
) -> Outcome {
    let mut failures = Vec::new();
    let mut exceeded = 0;
    for ((g, (order, _)), q) in groups.iter().zip(tc).zip(pq) {
        match kb_count(&g.pres) {
            Some((system, count)) => {
                let pq_order = q.order();
                if Some(count as usize) != *order || BigUint::from(count) != pq_order {
                    failures.push(format!("#{}: kb {count} tc {order:?} pq {pq_order}", g.id));
                }
                confluent.push(KbRun {
                    id: format!("#{}", g.id),
                    system,
                    count,
                });
            }
            None => exceeded += 1,
        }
    }
    let calibration = [
        ("trivial", "a | a", true),
        ("C6", "a | a^6", false),
        ("S3", "a b | a^2, b^3, (a*b)^2", false),
        ("D4", "a b | a^4, b^2, (a*b)^2", true),
        ("Q8", "a b | a^4, a^2*b^-2, b^-1*a*b*a", true),
    ];
    let start = Instant::now();
    for (name, text, p_group) in calibration {
        let pres = Presentation::parse(text).unwrap();
        let t = enumerate_group(&pres, &EnumerationLimits::default()).unwrap();
        let tc_order = t.is_closed().then(|| t.live_count() as u64);
        let q = p_quotient(&pres, 2, 64).unwrap();
        match kb_count(&pres) {
            Some((system, count)) => {
                if tc_order != Some(count) || !q.complete {
                    failures.push(format!("{name}: kb {count} tc {tc_order:?}"));
                }
                let expected_pq = if p_group {
                    count as usize
                } else {
                    largest_p_quotient_order(&pres, 2)
                };
                if q.order() != BigUint::from(expected_pq) {
                    failures.push(format!("{name}: pq {} expected {expected_pq}", q.order()));
                }
                confluent.push(KbRun {
                    id: name.into(),
                    system,
                    count,
                });
            }
            None => failures.push(format!("{name}: completion did not finish")),
        }
    }
    let calibration_time = start.elapsed();
    if calibration_time > CALIBRATION_LIMIT {
        failures.push(format!("calibration took {calibration_time:?}"));
    }
    let agreed = confluent.len() - calibration.len();
    outcome(
        failures,
        format!(
            "{agreed} confluent dataset systems agree, {exceeded} exceeded limits; calibration in {calibration_time:.2?}"
        ),
    )
}

fn criterion_series(groups: &[Group], pq: &[PqResult]) -> Outcome {
    let mut failures = Vec::new();
    for (g, q) in groups.iter().zip(pq) {
        let series = q.series_orders();
        let expected = match g.provenance.len() {
            3 => 512u32,
            4 => 1024,
            n => {
                failures.push(format!("#{}: provenance with {n} numbers", g.id));
                continue;
            }
        };
        let parent = series.len().checked_sub(2).map(|i| &series[i]);
        if !q.complete || parent != Some(&BigUint::from(expected)) {
            failures.push(format!("#{}: series {series:?}", g.id));
        }
    }
    outcome(failures, "parent orders 512 and 1024 as labelled".into())
}

fn criterion_filters() -> Outcome {
    let input = |order_e: u64, n: u32, inv: &[u64]| FilterInput {
        order_e,
        order_g: 1 << n,
        multiplier_invariants: inv.to_vec(),
    };
    let lemma: [(u32, &[u64], bool); 3] =
        [(9, &[2, 2], true), (9, &[2, 2, 2], false), (9, &[4], false)];
    let theorem: [(u32, &[u64], bool); 6] = [
        (8, &[2, 2, 2], true),
        (8, &[2, 2, 2, 2], false),
        (8, &[4, 2], true),
        (8, &[4, 2, 2], false),
        (9, &[4, 2], false),
        (9, &[2, 2], true),
    ];
    let mut failures = Vec::new();
    for (n, inv, want) in lemma {
        let got = descendant_filter_lemma23(&input(1 << 11, n, inv)).unwrap();
        if got != want {
            failures.push(format!("lemma n={n} {inv:?}: {got}"));
        }
    }
    for (n, inv, want) in theorem {
        let got = descendant_filter_thm24(&input(1 << 10, n, inv)).unwrap();
        if got != want {
            failures.push(format!("theorem n={n} {inv:?}: {got}"));
        }
    }
    outcome(failures, "9 boundary cases".into())
}

fn det_by_cofactors(m: &[Vec<i64>]) -> i128 {
    if m.is_empty() {
        return 1;
    }
    (0..m.len())
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(k, _)| k != j)
                        .map(|(_, &x)| x)
                        .collect()
                })
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] as i128 * det_by_cofactors(&minor)
        })
        .sum()
}

fn random_letters(rng: &mut ChaCha8Rng, gens: usize, max_len: usize) -> Vec<Letter> {
    let len = rng.gen_range(0..=max_len);
    (0..len)
        .map(|_| Letter::new(rng.gen_range(0..gens), rng.gen()))
        .collect()
}

fn criterion_properties(pq: &[PqResult], confluent: &[KbRun]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut failures = Vec::new();

    let mut snf_bad = 0;
    for _ in 0..1000 {
        let (r, c) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let rows: Vec<Vec<i64>> = (0..r)
            .map(|_| (0..c).map(|_| rng.gen_range(-9..=9)).collect())
            .collect();
        let snf = smith_normal_form(&IntMatrix::from_rows_i64(r, c, &rows), false);
        let chain = snf.diagonal.windows(2).all(|w| {
            if w[0].is_zero() {
                w[1].is_zero()
            } else {
                w[1].is_multiple_of(&w[0])
            }
        });
        let det_ok = r != c
            || snf.diagonal.iter().product::<BigInt>()
                == BigInt::from(det_by_cofactors(&rows).abs());
        if !chain || !det_ok {
            snf_bad += 1;
        }
    }
    if snf_bad > 0 {
        failures.push(format!("{snf_bad} SNF violations"));
    }

    let mut reduce_bad = 0;
    for _ in 0..10_000 {
        let letters = random_letters(&mut rng, 3, 64);
        let once = free_reduce(&letters);
        if free_reduce(once.letters()) != once {
            reduce_bad += 1;
        }
    }
    if reduce_bad > 0 {
        failures.push(format!("{reduce_bad} free_reduce violations"));
    }

    for run in confluent {
        let gens = run.system.generator_names().len();
        for _ in 0..200 {
            let u = Word::from_letters(random_letters(&mut rng, gens, 30));
            let v = Word::from_letters(random_letters(&mut rng, gens, 30));
            let nf = |w: &Word| run.system.normal_form(w).unwrap();
            if nf(&u.concat(&v)) != nf(&nf(&u).concat(&nf(&v))) {
                failures.push(format!("{}: normal form not multiplicative", run.id));
                break;
            }
        }
    }

    let mut collect_bad = 0;
    for q in pq {
        let pc = &q.pc;
        let p = pc.prime();
        for _ in 0..1000 {
            let e: Vec<u32> = (0..pc.num_generators())
                .map(|_| rng.gen_range(0..p))
                .collect();
            let word: Vec<(usize, i64)> =
                e.iter().enumerate().map(|(g, &x)| (g, x as i64)).collect();
            if pc.collect(&word) != e {
                collect_bad += 1;
            }
        }
    }
    if collect_bad > 0 {
        failures.push(format!("{collect_bad} collection violations"));
    }
    let total_forms: u64 = confluent.iter().map(|r| r.count).sum();
    outcome(
        failures,
        format!(
            "1000 matrices, 10000 words, {} confluent systems ({total_forms} normal forms), 1000 words per pc on {} pcs",
            confluent.len(),
            pq.len()
        ),
    )
}

fn main() {
    let groups = dataset();
    assert_eq!(groups.len(), 78);
    let tc = enumerate_all(&groups);
    let pq: Vec<PqResult> = groups
        .iter()
        .map(|g| p_quotient(&g.pres, 2, 64).unwrap())
        .collect();
    let mut confluent = Vec::new();

    let results = [
        (
            "order of the 48 balanced presentations",
            order_check(&groups, &tc, |id| id <= 48),
        ),
        (
            "order of all 78 presentations",
            order_check(&groups, &tc, |_| true),
        ),
        ("balance", criterion_balance(&groups)),
        ("generator count", criterion_generators(&groups)),
        ("multiplier triviality", criterion_multiplier(&groups)),
        ("negative controls", criterion_negative_controls()),
        (
            "oracle agreement",
            criterion_oracles(&groups, &tc, &pq, &mut confluent),
        ),
        ("series shape", criterion_series(&groups, &pq)),
        ("descendant filters", criterion_filters()),
        ("property suites", criterion_properties(&pq, &confluent)),
    ];
    let mut failed = 0;
    for (i, (name, o)) in results.iter().enumerate() {
        println!(
            "criterion {:>2} {}: {name}: {}",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
