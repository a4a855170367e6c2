mod common;

use std::cmp::Ordering;

use common::groups::SMALL_GROUPS;
use defzero_core::coset::{enumerate_group, EnumerationLimits};
use defzero_core::rewriting::{complete, CompletionLimits, NormalFormCount, RewritingSystem};
use defzero_core::{Letter, Presentation, Word};
use proptest::prelude::*;

fn shortlex(a: &[Letter], b: &[Letter]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

fn small_limits() -> CompletionLimits {
    CompletionLimits {
        max_rules: 400,
        ..CompletionLimits::default()
    }
}

fn confluent_small_groups() -> Vec<(Presentation, RewritingSystem, u64)> {
    SMALL_GROUPS
        .iter()
        .map(|&(text, order)| {
            let p = Presentation::parse(text).unwrap();
            let rs = complete(&p, &CompletionLimits::default());
            assert!(rs.is_confluent(), "{text}");
            (p, rs, order)
        })
        .collect()
}

#[test]
fn normal_form_count_matches_enumeration() {
    for (p, rs, order) in confluent_small_groups() {
        assert_eq!(
            rs.count_normal_forms(10_000).unwrap(),
            NormalFormCount::Finite(order),
            "{p}"
        );
        let t = enumerate_group(&p, &EnumerationLimits::default()).unwrap();
        assert_eq!(t.live_count() as u64, order);
    }
}

#[test]
fn rules_decrease_in_shortlex() {
    for (_, rs, _) in confluent_small_groups() {
        for (l, r) in rs.rules() {
            assert_eq!(shortlex(&l, &r), Ordering::Greater);
            assert!(rs.is_irreducible(&Word::from_letters(r)));
        }
    }
}

#[test]
fn relators_reduce_to_the_identity() {
    for (p, rs, _) in confluent_small_groups() {
        for r in p.relators() {
            assert!(rs.normal_form(r).unwrap().is_empty(), "{p}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn normal_forms_are_idempotent_and_never_longer(idx in 0..SMALL_GROUPS.len(), letters in common::letters(3, 40)) {
        let p = Presentation::parse(SMALL_GROUPS[idx].0).unwrap();
        let rs = complete(&p, &CompletionLimits::default());
        let n = p.num_generators();
        let w = Word::from_letters(letters.into_iter().filter(|l| l.gen() < n).collect());
        let nf = rs.normal_form(&w).unwrap();
        prop_assert_ne!(shortlex(nf.letters(), w.letters()), Ordering::Greater);
        prop_assert_eq!(rs.normal_form(&nf).unwrap(), nf.clone());
        prop_assert!(rs.is_irreducible(&nf));
    }

    #[test]
    fn normal_form_is_a_homomorphism(idx in 0..SMALL_GROUPS.len(), u in common::letters(3, 24), v in common::letters(3, 24)) {
        let p = Presentation::parse(SMALL_GROUPS[idx].0).unwrap();
        let rs = complete(&p, &CompletionLimits::default());
        let n = p.num_generators();
        let keep = |ls: Vec<Letter>| Word::from_letters(ls.into_iter().filter(|l| l.gen() < n).collect());
        let (u, v) = (keep(u), keep(v));
        let direct = rs.normal_form(&u.concat(&v)).unwrap();
        let via = rs.normal_form(&rs.normal_form(&u).unwrap().concat(&rs.normal_form(&v).unwrap())).unwrap();
        prop_assert_eq!(direct, via);
    }

    #[test]
    fn confluent_random_systems_agree_with_enumeration(
        m in 2i64..=4,
        n in 2i64..=4,
        extra in prop::collection::vec(common::word(2, 8).prop_filter("nonempty", |w| !w.is_empty()), 1..3),
    ) {
        let mut rels = vec![Word::generator_power(0, m), Word::generator_power(1, n)];
        rels.extend(extra);
        let p = Presentation::with_default_names(2, rels).unwrap();
        let rs = complete(&p, &small_limits());
        for (l, r) in rs.rules() {
            prop_assert_eq!(shortlex(&l, &r), Ordering::Greater);
        }
        let t = enumerate_group(&p, &EnumerationLimits { max_cosets: 20_000, ..Default::default() }).unwrap();
        if rs.is_confluent() && t.is_closed() {
            prop_assert_eq!(rs.count_normal_forms(100_000).unwrap(), NormalFormCount::Finite(t.live_count() as u64));
        }
    }
}
