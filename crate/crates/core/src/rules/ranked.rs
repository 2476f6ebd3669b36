//! The ranked agenda rule.
//!
//! Signed issues are grouped into blocks of equal support, highest first.
//! A compatible order only chooses the order inside each block, and greedily
//! processing one block in some order from a consistent set `S` ends in
//! `S ∪ T` where `T` is a ⊆-maximal subset of the block consistent with `S`;
//! conversely every such `T` is reached by putting `T` first. So the rule
//! advances a set of states block by block instead of enumerating orders.
//! [`rule_ra_by_orders`] enumerates the orders literally and serves as the
//! cross-check.

use std::collections::BTreeSet;

use crate::agenda::{JudgmentSet, Profile, Sign};
use crate::error::{Error, Result};

use super::Outcome;

type SignedIssue = (usize, Sign);

/// Signed issues grouped by support, highest support first. Within a block
/// issues are listed by position, `+` before `-`.
pub fn support_blocks(p: &Profile) -> Vec<Vec<SignedIssue>> {
    let table = p.support();
    let mut by_support: Vec<Vec<SignedIssue>> = vec![Vec::new(); p.n() + 1];
    for k in 0..p.agenda().len() {
        for sign in [Sign::Plus, Sign::Minus] {
            by_support[table.count(k, sign)].push((k, sign));
        }
    }
    by_support.into_iter().rev().filter(|b| !b.is_empty()).collect()
}

pub fn rule_ra(p: &Profile) -> Result<Outcome> {
    let agenda = p.agenda();
    let m = agenda.len();
    let mut states: BTreeSet<JudgmentSet> = BTreeSet::from([JudgmentSet::empty(m)]);
    for block in support_blocks(p) {
        let mut next = BTreeSet::new();
        for s in &states {
            // which block members each completion of `s` contains
            let mut agreements: Vec<u128> = agenda
                .extensions(s)?
                .iter()
                .map(|j| {
                    block
                        .iter()
                        .enumerate()
                        .filter(|(_, (k, sign))| j.sign(*k) == *sign)
                        .fold(0u128, |acc, (b, _)| acc | 1 << b)
                })
                .collect();
            agreements.sort_unstable();
            agreements.dedup();
            for &a in &agreements {
                if agreements.iter().any(|&b| b != a && a & b == a) {
                    continue;
                }
                let mut signs = s.signs().to_vec();
                for (b, (k, sign)) in block.iter().enumerate() {
                    if a >> b & 1 == 1 {
                        signs[*k] = *sign;
                    }
                }
                next.insert(JudgmentSet::new(signs));
            }
        }
        states = next;
    }
    debug_assert!(states.iter().all(JudgmentSet::is_complete));
    Ok(states)
}

/// Number of orders compatible with the support order: the product of the
/// block-size factorials.
pub fn compatible_order_count(p: &Profile) -> u128 {
    support_blocks(p)
        .iter()
        .map(|b| (1..=b.len() as u128).fold(1u128, |acc, x| acc.saturating_mul(x)))
        .fold(1u128, |acc, x| acc.saturating_mul(x))
}

/// RA by running the greedy procedure on every compatible order. Fails with a
/// resource error when the number of orders exceeds `limits.ra_orders`.
pub fn rule_ra_by_orders(p: &Profile) -> Result<Outcome> {
    let count = compatible_order_count(p);
    let cap = p.agenda().limits().ra_orders;
    if count > cap {
        return Err(Error::ResourceLimit { what: "compatible orders", size: count, cap });
    }
    let blocks = support_blocks(p);
    let mut out = Outcome::new();
    let mut order = Vec::with_capacity(2 * p.agenda().len());
    orders(p, &blocks, 0, &mut order, &mut out)?;
    Ok(out)
}

fn orders(
    p: &Profile,
    blocks: &[Vec<SignedIssue>],
    depth: usize,
    order: &mut Vec<SignedIssue>,
    out: &mut Outcome,
) -> Result<()> {
    let Some(block) = blocks.get(depth) else {
        out.insert(greedy(p, order)?);
        return Ok(());
    };
    let mut block = block.clone();
    permute(&mut block, 0, &mut |perm| {
        let len = order.len();
        order.extend_from_slice(perm);
        let r = orders(p, blocks, depth + 1, order, out);
        order.truncate(len);
        r
    })
}

fn permute<T: Clone>(
    items: &mut [T],
    k: usize,
    visit: &mut dyn FnMut(&[T]) -> Result<()>,
) -> Result<()> {
    if k == items.len() {
        return visit(items);
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit)?;
        items.swap(k, i);
    }
    Ok(())
}

fn greedy(p: &Profile, order: &[SignedIssue]) -> Result<JudgmentSet> {
    let agenda = p.agenda();
    let mut s = JudgmentSet::empty(agenda.len());
    for &(k, sign) in order {
        if let Some(candidate) = s.merged(&[k], &JudgmentSet::new(vec![sign])) {
            if agenda.is_consistent_by_formulas(&candidate)? {
                s = candidate;
            }
        }
    }
    Ok(s)
}
