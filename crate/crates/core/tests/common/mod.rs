#![allow(dead_code)]

use std::sync::Arc;

use jagg_core::logic::{atoms, evaluate, Valuation};
use jagg_core::{Agenda, Formula, JudgmentSet, Profile, Sign};
use proptest::prelude::*;

pub const ATOMS: [&str; 3] = ["a", "b", "c"];

pub fn formula(depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        8 => prop::sample::select(&ATOMS[..]).prop_map(|a| Formula::Atom(a.to_string())),
        1 => Just(Formula::True),
        1 => Just(Formula::False),
    ];
    leaf.prop_recursive(depth, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::and(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::or(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::implies(l, r)),
            (inner.clone(), inner).prop_map(|(l, r)| Formula::iff(l, r)),
        ]
    })
}

/// Random agendas over three atoms; invalid draws (tautologies, duplicates,
/// inconsistent constraints) are discarded.
pub fn agenda() -> impl Strategy<Value = Agenda> {
    let constraint = prop_oneof![3 => Just(Formula::True), 1 => formula(2)];
    (prop::collection::vec(formula(3), 1..=5), constraint)
        .prop_filter_map("not a valid agenda", |(issues, gamma)| Agenda::new(issues, gamma).ok())
}

pub fn profile() -> impl Strategy<Value = Profile> {
    (agenda(), prop::collection::vec(any::<prop::sample::Index>(), 1..=5)).prop_map(|(a, picks)| {
        let sets = a.complete_sets().to_vec();
        let members = picks.iter().map(|i| sets[i.index(sets.len())].clone()).collect();
        Profile::new(Arc::new(a), members).unwrap()
    })
}

/// Every valuation of the atoms of `fs`, by counting.
pub fn truth_table(fs: &[Formula]) -> Vec<Valuation> {
    let names: Vec<String> = atoms(fs.iter()).into_iter().collect();
    (0..1u32 << names.len())
        .map(|bits| names.iter().enumerate().map(|(k, a)| (a.clone(), bits >> k & 1 == 1)).collect())
        .collect()
}

/// Consistency of a judgment set by a full truth table over its formulas and
/// the constraint.
pub fn consistent_by_table(a: &Agenda, j: &JudgmentSet) -> bool {
    let mut fs = vec![a.constraint().clone()];
    fs.extend(a.issues().iter().cloned());
    truth_table(&fs).iter().any(|v| {
        evaluate(a.constraint(), v).unwrap()
            && j.assigned_positions().all(|k| {
                let holds = evaluate(&a.issues()[k], v).unwrap();
                holds == (j.sign(k) == Sign::Plus)
            })
    })
}

/// All subsets of the assigned part of `s`.
pub fn subsets(s: &JudgmentSet) -> Vec<JudgmentSet> {
    let assigned: Vec<usize> = s.assigned_positions().collect();
    (0..1u32 << assigned.len())
        .map(|bits| {
            let mut signs = vec![Sign::Absent; s.len()];
            for (k, &pos) in assigned.iter().enumerate() {
                if bits >> k & 1 == 1 {
                    signs[pos] = s.sign(pos);
                }
            }
            JudgmentSet::new(signs)
        })
        .collect()
}
