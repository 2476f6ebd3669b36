mod common;

use common::profile;
use jagg_core::rules::{
    med_by_distance, med_by_support, rule_full_h, rule_full_h_exhaustive, rule_mc, rule_mcc,
    rule_ra, rule_ra_by_orders, rule_scoring, MedianScore, Outcome, RuleId,
};
use jagg_core::Profile;
use proptest::prelude::*;

fn all_rules() -> Vec<RuleId> {
    let mut rules = RuleId::NAMED.to_vec();
    rules.push("s_rev".parse().unwrap());
    rules
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn outputs_are_nonempty_subsets_of_j_a(p in profile()) {
        for rule in all_rules() {
            let out = rule.apply(&p).unwrap();
            prop_assert!(!out.is_empty(), "{}", rule);
            for j in &out {
                prop_assert!(p.agenda().complete_sets().contains(j), "{}", rule);
            }
        }
    }

    #[test]
    fn rules_are_anonymous(p in profile(), seed in any::<u64>()) {
        let mut order: Vec<usize> = (0..p.n()).collect();
        order.rotate_left((seed % p.n() as u64) as usize);
        order.swap(0, (seed as usize / 7) % p.n());
        let q = p.permuted(&order);
        for rule in all_rules() {
            prop_assert_eq!(rule.apply(&p).unwrap(), rule.apply(&q).unwrap(), "{}", rule);
        }
    }

    #[test]
    fn unanimity(p in profile(), n in 1usize..5) {
        let j = p.members()[0].clone();
        let u = Profile::new(p.agenda().clone(), vec![j.clone(); n]).unwrap();
        for rule in all_rules() {
            prop_assert_eq!(rule.apply(&u).unwrap(), Outcome::from([j.clone()]), "{}", rule);
        }
    }

    #[test]
    fn condorcet_inclusions(p in profile()) {
        let mc = rule_mc(&p).unwrap();
        prop_assert!(rule_mcc(&p).unwrap().is_subset(&mc));
        if p.n() % 2 == 1 {
            prop_assert!(rule_ra(&p).unwrap().is_subset(&mc));
        }
    }

    #[test]
    fn majority_consistent_profiles_agree(p in profile()) {
        prop_assume!(p.n() % 2 == 1 && p.is_majority_consistent());
        let ext: Outcome = p.agenda().extensions(&p.majority_set()).unwrap().into_iter().collect();
        for rule in [RuleId::Mc, RuleId::Mcc, RuleId::Ra, RuleId::FullH, RuleId::Med] {
            prop_assert_eq!(rule.apply(&p).unwrap(), ext.clone(), "{}", rule);
        }
    }

    #[test]
    fn median_characterizations_agree(p in profile()) {
        prop_assert_eq!(med_by_support(&p), med_by_distance(&p));
        prop_assert_eq!(rule_scoring(&p, &MedianScore).unwrap(), med_by_support(&p));
    }

    #[test]
    fn ranked_agenda_matches_order_enumeration(p in profile()) {
        prop_assume!(jagg_core::rules::compatible_order_count(&p) <= 50_000);
        prop_assert_eq!(rule_ra(&p).unwrap(), rule_ra_by_orders(&p).unwrap());
    }

    #[test]
    fn full_h_matches_exhaustive(p in profile()) {
        let size = (p.agenda().complete_sets().len() as u128).pow(p.n() as u32);
        prop_assume!(size <= 100_000);
        prop_assert_eq!(rule_full_h(&p).unwrap(), rule_full_h_exhaustive(&p).unwrap());
    }
}
