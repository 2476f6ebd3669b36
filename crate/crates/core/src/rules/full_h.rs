//! Full_H: complete the majority sets of the majority-consistent profiles
//! nearest to `P` in summed Hamming distance.

use std::collections::BTreeSet;

use crate::agenda::{hamming, JudgmentSet, Profile};
use crate::error::{Error, Result};

use super::Outcome;

/// Result of the nearest-profile search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NearestProfiles {
    /// `min D_H(P, Q)` over majority-consistent `Q`.
    pub distance: usize,
    /// The distinct majority sets `m(Q)` of the minimizers.
    pub majority_sets: BTreeSet<JudgmentSet>,
    /// Search nodes expanded.
    pub states: u64,
}

struct Search<'a> {
    p: &'a Profile,
    /// per member: (distance, candidate) sorted by distance
    candidates: Vec<Vec<(usize, &'a JudgmentSet)>>,
    plus: Vec<usize>,
    states: u64,
    cap: u64,
    found: BTreeSet<JudgmentSet>,
}

impl Search<'_> {
    fn majority_of_counts(&self) -> JudgmentSet {
        let n = self.p.n();
        let m = self.plus.len();
        let (mut assigned, mut plus) = (0u64, 0u64);
        for (k, &c) in self.plus.iter().enumerate() {
            if 2 * c != n {
                assigned |= 1 << k;
            }
            if 2 * c > n {
                plus |= 1 << k;
            }
        }
        JudgmentSet::from_masks(m, assigned, plus)
    }

    /// Visits every `Q` with `D_H(P, Q) == remaining` for members `i..`.
    fn visit(&mut self, i: usize, remaining: usize) -> Result<()> {
        self.states += 1;
        if self.states > self.cap {
            return Err(Error::ResourceLimit {
                what: "Full_H search states",
                size: u128::from(self.states),
                cap: u128::from(self.cap),
            });
        }
        if i == self.candidates.len() {
            if remaining == 0 {
                let majority = self.majority_of_counts();
                if self.p.agenda().is_consistent(&majority)? {
                    self.found.insert(majority);
                }
            }
            return Ok(());
        }
        let last = i + 1 == self.candidates.len();
        for c in 0..self.candidates[i].len() {
            let (d, q) = self.candidates[i][c];
            if d > remaining {
                break;
            }
            if last && d != remaining {
                continue;
            }
            for k in q.assigned_positions().filter(|&k| q.sign(k) == crate::Sign::Plus) {
                self.plus[k] += 1;
            }
            let r = self.visit(i + 1, remaining - d);
            for k in q.assigned_positions().filter(|&k| q.sign(k) == crate::Sign::Plus) {
                self.plus[k] -= 1;
            }
            r?;
        }
        Ok(())
    }
}

/// Finds the nearest majority-consistent profiles by iterative deepening on
/// the distance: every `Q` at distance 0, then 1, and so on, until some
/// majority-consistent `Q` appears. Members try candidates in order of
/// distance to their own set and stop once the budget is exceeded.
pub fn nearest_majority_consistent(p: &Profile) -> Result<NearestProfiles> {
    let agenda = p.agenda();
    let candidates = p
        .members()
        .iter()
        .map(|j| {
            let mut c: Vec<(usize, &JudgmentSet)> = agenda
                .complete_sets()
                .iter()
                .map(|q| (hamming(j, q).expect("same agenda"), q))
                .collect();
            c.sort();
            c
        })
        .collect();
    let mut search = Search {
        p,
        candidates,
        plus: vec![0; agenda.len()],
        states: 0,
        cap: agenda.limits().full_h_states,
        found: BTreeSet::new(),
    };
    // the unanimous profile on any member is majority-consistent, so this ends
    for budget in 0..=p.n() * agenda.len() {
        search.visit(0, budget)?;
        if !search.found.is_empty() {
            return Ok(NearestProfiles {
                distance: budget,
                majority_sets: search.found,
                states: search.states,
            });
        }
    }
    unreachable!("a unanimous profile is always majority-consistent")
}

pub fn rule_full_h(p: &Profile) -> Result<Outcome> {
    let nearest = nearest_majority_consistent(p)?;
    let mut out = Outcome::new();
    for s in &nearest.majority_sets {
        out.extend(p.agenda().extensions(s)?);
    }
    Ok(out)
}

/// Full_H by scanning all of `J_A^n`. Refuses instances with more than
/// `limits.full_h_states` profiles.
pub fn rule_full_h_exhaustive(p: &Profile) -> Result<Outcome> {
    let agenda = p.agenda();
    let sets = agenda.complete_sets();
    let n = p.n();
    let total = (sets.len() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    let cap = u128::from(agenda.limits().full_h_states);
    if total > cap {
        return Err(Error::ResourceLimit { what: "profiles in J_A^n", size: total, cap });
    }
    let mut best = usize::MAX;
    let mut majorities: BTreeSet<JudgmentSet> = BTreeSet::new();
    let mut idx = vec![0usize; n];
    loop {
        let q = Profile::new(agenda.clone(), idx.iter().map(|&i| sets[i].clone()).collect())?;
        let d = p.distance(&q)?;
        if d <= best && q.is_majority_consistent() {
            if d < best {
                best = d;
                majorities.clear();
            }
            majorities.insert(q.majority_set());
        }
        // odometer increment
        let mut pos = 0;
        loop {
            if pos == n {
                let mut out = Outcome::new();
                for s in &majorities {
                    out.extend(agenda.extensions(s)?);
                }
                return Ok(out);
            }
            idx[pos] += 1;
            if idx[pos] < sets.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}
