//! Independent partitions and independent overlapping decompositions (IODs)
//! of an agenda: checkers, searches, and blockwise aggregation.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::agenda::{normalize_block, Agenda, JudgmentSet, Profile};
use crate::error::{Error, Result};
use crate::logic::{self, atoms, Formula};
use crate::rules::{Outcome, RuleId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecompositionKind {
    /// Blocks share no atoms (and the constraint is trivial).
    Syntactic,
    IndependentPartition,
    /// Two blocks that may overlap.
    Iod,
}

/// A certified cover of the preagenda positions. Only the checkers in this
/// module construct one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    blocks: Vec<Vec<usize>>,
    kind: DecompositionKind,
}

impl Decomposition {
    /// The single-block decomposition; vacuously an independent partition.
    pub fn trivial(m: usize) -> Self {
        Decomposition { blocks: vec![(0..m).collect()], kind: DecompositionKind::IndependentPartition }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn kind(&self) -> DecompositionKind {
        self.kind
    }

    pub fn is_trivial(&self) -> bool {
        self.blocks.len() == 1
    }

    pub fn is_partition(&self) -> bool {
        matches!(self.kind, DecompositionKind::Syntactic | DecompositionKind::IndependentPartition)
    }

    /// Certifies `blocks` as a k-block independent partition of `agenda`.
    pub fn certify_partition(agenda: &Agenda, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let blocks = canonical_partition(blocks, agenda.len())?;
        if !is_independent_kway(agenda, &blocks)? {
            return Err(Error::Precondition("the blocks are not an independent partition".into()));
        }
        Ok(Decomposition { blocks, kind: DecompositionKind::IndependentPartition })
    }

    /// Certifies `b1, b2` as an independent overlapping decomposition. An
    /// independent partition is certified with the partition kind.
    pub fn certify_iod(agenda: &Agenda, b1: &[usize], b2: &[usize]) -> Result<Self> {
        if !is_iod(agenda, b1, b2)? {
            return Err(Error::Precondition("the blocks are not an independent overlapping decomposition".into()));
        }
        let (b1, b2) = (normalize_block(b1, agenda.len())?, normalize_block(b2, agenda.len())?);
        let disjoint = b1.iter().all(|i| !b2.contains(i));
        let kind = if disjoint { DecompositionKind::IndependentPartition } else { DecompositionKind::Iod };
        Ok(Decomposition { blocks: vec![b1, b2], kind })
    }

    /// Same blocks, viewed as a two-block IOD.
    pub fn as_iod(&self) -> Option<Decomposition> {
        (self.blocks.len() == 2)
            .then(|| Decomposition { blocks: self.blocks.clone(), kind: DecompositionKind::Iod })
    }
}

fn canonical_partition(blocks: Vec<Vec<usize>>, m: usize) -> Result<Vec<Vec<usize>>> {
    let mut seen = vec![false; m];
    let mut out = Vec::with_capacity(blocks.len());
    for b in blocks {
        let b = normalize_block(&b, m)?;
        for &i in &b {
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidBlock(format!("issue {i} appears in two blocks")));
            }
        }
        out.push(b);
    }
    if let Some(i) = seen.iter().position(|s| !s) {
        return Err(Error::InvalidBlock(format!("issue {i} is in no block")));
    }
    out.sort();
    Ok(out)
}

fn check_cover(agenda: &Agenda, b1: &[usize], b2: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
    let m = agenda.len();
    let (b1, b2) = (normalize_block(b1, m)?, normalize_block(b2, m)?);
    if let Some(i) = (0..m).find(|i| !b1.contains(i) && !b2.contains(i)) {
        return Err(Error::InvalidBlock(format!("issue {i} is in neither block")));
    }
    Ok((b1, b2))
}

fn check_bipartition(agenda: &Agenda, b1: &[usize], b2: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
    let (b1, b2) = check_cover(agenda, b1, b2)?;
    if b1.iter().any(|i| b2.contains(i)) {
        return Err(Error::InvalidBlock("the blocks overlap".into()));
    }
    Ok((b1, b2))
}

/// Whether the constraint is a tautology, i.e. the agenda is unconstrained.
pub fn is_unconstrained(agenda: &Agenda) -> Result<bool> {
    logic::is_tautology(agenda.constraint(), &Formula::True, &agenda.solver())
}

fn block_atoms(agenda: &Agenda, block: &[usize]) -> std::collections::BTreeSet<String> {
    atoms(block.iter().map(|&i| &agenda.issues()[i]))
}

/// Whether the bipartition `b1, b2` shares no atoms. Only meaningful for
/// an unconstrained agenda; a non-trivial constraint is a precondition error.
pub fn is_syntactically_independent(agenda: &Agenda, b1: &[usize], b2: &[usize]) -> Result<bool> {
    let (b1, b2) = check_bipartition(agenda, b1, b2)?;
    if !is_unconstrained(agenda)? {
        return Err(Error::Precondition(
            "syntactic independence requires an unconstrained agenda".into(),
        ));
    }
    Ok(block_atoms(agenda, &b1).is_disjoint(&block_atoms(agenda, &b2)))
}

/// Parent `J_A` as a set of plus-masks, for union membership tests.
fn complete_mask_set(agenda: &Agenda) -> HashSet<u64> {
    agenda.complete_masks().iter().copied().collect()
}

/// Plus-mask of a block-level set `j`, relabelled to parent positions.
fn mask_of(j: &JudgmentSet, block: &[usize]) -> u64 {
    j.signs()
        .iter()
        .enumerate()
        .filter(|(_, s)| **s == crate::Sign::Plus)
        .fold(0u64, |acc, (k, _)| acc | 1 << block[k])
}

/// Whether every combination of blockwise complete consistent sets unions to
/// a consistent set, for a k-block partition.
pub fn is_independent_kway(agenda: &Agenda, blocks: &[Vec<usize>]) -> Result<bool> {
    let blocks = canonical_partition(blocks.to_vec(), agenda.len())?;
    let full = complete_mask_set(agenda);
    let mut per_block = Vec::with_capacity(blocks.len());
    for b in &blocks {
        let sub = agenda.sub_agenda(b)?;
        per_block.push(sub.complete_sets().iter().map(|j| mask_of(j, b)).collect::<Vec<_>>());
    }
    fn all_unions(per_block: &[Vec<u64>], acc: u64, full: &HashSet<u64>) -> bool {
        match per_block.split_first() {
            None => full.contains(&acc),
            Some((first, rest)) => first.iter().all(|&m| all_unions(rest, acc | m, full)),
        }
    }
    Ok(all_unions(&per_block, 0, &full))
}

/// Whether `b1, b2` is an independent partition: every pair of blockwise
/// complete consistent sets has a consistent union.
pub fn is_independent_partition(agenda: &Agenda, b1: &[usize], b2: &[usize]) -> Result<bool> {
    let (b1, b2) = check_bipartition(agenda, b1, b2)?;
    is_independent_kway(agenda, &[b1, b2])
}

/// Whether the cover `b1, b2` is an independent overlapping decomposition:
/// blockwise complete consistent sets that agree on the overlap always have a
/// consistent union.
pub fn is_iod(agenda: &Agenda, b1: &[usize], b2: &[usize]) -> Result<bool> {
    let (b1, b2) = check_cover(agenda, b1, b2)?;
    let overlap: u64 = b1.iter().filter(|i| b2.contains(i)).fold(0, |acc, &i| acc | 1 << i);
    let full = complete_mask_set(agenda);
    let left: Vec<u64> =
        agenda.sub_agenda(&b1)?.complete_sets().iter().map(|j| mask_of(j, &b1)).collect();
    let mut right: HashMap<u64, Vec<u64>> = HashMap::new();
    for j in agenda.sub_agenda(&b2)?.complete_sets() {
        let mask = mask_of(j, &b2);
        right.entry(mask & overlap).or_default().push(mask);
    }
    Ok(left.iter().all(|&l| {
        right.get(&(l & overlap)).is_none_or(|group| group.iter().all(|&r| full.contains(&(l | r))))
    }))
}

/// Connected components of the graph linking issues that share an atom.
pub fn atom_components(agenda: &Agenda) -> Vec<Vec<usize>> {
    let m = agenda.len();
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut owner: HashMap<String, usize> = HashMap::new();
    for (i, f) in agenda.issues().iter().enumerate() {
        for a in atoms([f]) {
            match owner.get(&a) {
                Some(&j) => {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    parent[ri] = rj;
                }
                None => {
                    owner.insert(a, i);
                }
            }
        }
    }
    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for i in 0..m {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(i);
    }
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    out.sort();
    out
}

/// Bipartitions of `0..k` as (b1, b2) local index lists: smaller `b1` first,
/// then by mask; the last element always stays in `b2`.
fn bipartitions(k: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    if k < 2 {
        return Vec::new();
    }
    let mut masks: Vec<u64> = (1u64..(1 << (k - 1))).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    masks
        .into_iter()
        .map(|mask| {
            let (b1, b2): (Vec<usize>, Vec<usize>) = (0..k).partition(|&i| mask >> i & 1 == 1);
            (b1, b2)
        })
        .collect()
}

/// Splits `block` (parent positions) into independent pieces, recursively.
/// Each split is independent within its parent block, and the parent block is
/// itself one side of an independent split, so the leaves form an independent
/// partition of the whole agenda.
fn refine(agenda: &Agenda, block: Vec<usize>, out: &mut Vec<Vec<usize>>) -> Result<()> {
    let k = block.len();
    if k < 2 {
        out.push(block);
        return Ok(());
    }
    let cap = agenda.limits().bipartition_issues;
    if k > cap {
        return Err(Error::ResourceLimit { what: "issues in a block to bipartition", size: k as u128, cap: cap as u128 });
    }
    let sub = agenda.sub_agenda(&block)?;
    for (l1, l2) in bipartitions(k) {
        if is_independent_partition(&sub, &l1, &l2)? {
            refine(agenda, l1.iter().map(|&i| block[i]).collect(), out)?;
            refine(agenda, l2.iter().map(|&i| block[i]).collect(), out)?;
            return Ok(());
        }
    }
    out.push(block);
    Ok(())
}

/// A certified independent partition obtained by splitting the atom-sharing
/// components (unconstrained agendas only) and then recursively splitting
/// every block that admits an independent bipartition. Uniqueness of a finest
/// partition is not claimed; the returned blocks are certified as a whole.
pub fn find_finest_independent_partition(agenda: &Agenda) -> Result<Decomposition> {
    let syntactic = is_unconstrained(agenda)?;
    let seeds =
        if syntactic { atom_components(agenda) } else { vec![(0..agenda.len()).collect()] };
    let mut blocks = Vec::new();
    for seed in seeds {
        refine(agenda, seed, &mut blocks)?;
    }
    blocks.sort();
    if !is_independent_kway(agenda, &blocks)? {
        return Err(Error::Precondition("refined blocks failed certification".into()));
    }
    Ok(Decomposition { blocks, kind: DecompositionKind::IndependentPartition })
}

/// The atom-sharing components as a syntactic decomposition. Requires an
/// unconstrained agenda.
pub fn syntactic_partition(agenda: &Agenda) -> Result<Decomposition> {
    if !is_unconstrained(agenda)? {
        return Err(Error::Precondition(
            "syntactic independence requires an unconstrained agenda".into(),
        ));
    }
    Ok(Decomposition { blocks: atom_components(agenda), kind: DecompositionKind::Syntactic })
}

/// Every nontrivial two-block cover in search order: smallest overlap first;
/// among equal overlaps, by overlap mask and then by the first block. Each
/// unordered pair appears once (the lowest non-shared issue is in `b1`).
pub fn covering_pairs(m: usize) -> impl Iterator<Item = (Vec<usize>, Vec<usize>)> {
    let full: u64 = if m == 64 { u64::MAX } else { (1 << m) - 1 };
    (0..m.saturating_sub(1)).flat_map(move |o| {
        let mut overlaps: Vec<u64> = (0..=full).filter(|x| x.count_ones() as usize == o).collect();
        overlaps.sort_unstable();
        overlaps.into_iter().flat_map(move |overlap| {
            let rest = full & !overlap;
            let low = rest & rest.wrapping_neg();
            // proper nonempty subsets of `rest` containing its lowest bit
            let mut splits = Vec::new();
            let mut x = rest;
            loop {
                x = (x.wrapping_sub(1)) & rest;
                if x == 0 {
                    break;
                }
                if x & low != 0 {
                    splits.push(x);
                }
            }
            splits.sort_unstable();
            splits.into_iter().map(move |only1| {
                let b1: Vec<usize> = (0..m).filter(|&i| (overlap | only1) >> i & 1 == 1).collect();
                let b2: Vec<usize> = (0..m).filter(|&i| (rest & !only1 | overlap) >> i & 1 == 1).collect();
                (b1, b2)
            })
        })
    })
}

/// Some nontrivial two-block IOD, or `None` when no cover qualifies.
/// Independent partitions come first since they have the smallest overlap.
pub fn find_iod(agenda: &Agenda) -> Result<Option<Decomposition>> {
    let m = agenda.len();
    let cap = agenda.limits().iod_issues;
    if m > cap {
        return Err(Error::ResourceLimit { what: "issues for covering-pair search", size: m as u128, cap: cap as u128 });
    }
    for (b1, b2) in covering_pairs(m) {
        if is_iod(agenda, &b1, &b2)? {
            return Decomposition::certify_iod(agenda, &b1, &b2).map(Some);
        }
    }
    Ok(None)
}

/// Every nontrivial two-block IOD of the agenda.
pub fn all_iods(agenda: &Agenda) -> Result<Vec<Decomposition>> {
    let m = agenda.len();
    let cap = agenda.limits().iod_issues;
    if m > cap {
        return Err(Error::ResourceLimit { what: "issues for covering-pair search", size: m as u128, cap: cap as u128 });
    }
    let mut out = Vec::new();
    for (b1, b2) in covering_pairs(m) {
        if is_iod(agenda, &b1, &b2)? {
            out.push(Decomposition::certify_iod(agenda, &b1, &b2)?);
        }
    }
    Ok(out)
}

/// All unions `J^1 ∪ … ∪ J^k` with `J^i` drawn from `outputs[i]` (sets over
/// `blocks[i]`). Combinations that disagree on a shared position are skipped.
pub fn combine_blockwise(m: usize, blocks: &[Vec<usize>], outputs: &[Outcome]) -> Outcome {
    fn go(
        blocks: &[Vec<usize>],
        outputs: &[Outcome],
        acc: JudgmentSet,
        out: &mut Outcome,
    ) {
        match (blocks.split_first(), outputs.split_first()) {
            (Some((b, bs)), Some((o, os))) => {
                for part in o {
                    if let Some(next) = acc.merged(b, part) {
                        go(bs, os, next, out);
                    }
                }
            }
            _ => {
                out.insert(acc);
            }
        }
    }
    let mut out = Outcome::new();
    go(blocks, outputs, JudgmentSet::empty(m), &mut out);
    out
}

/// The rule applied to each block's restricted profile.
pub fn blockwise_outputs(rule: &RuleId, p: &Profile, d: &Decomposition) -> Result<Vec<Outcome>> {
    d.blocks().iter().map(|b| rule.apply(&p.restrict(b)?)).collect()
}

/// Aggregates block by block over a certified independent partition and
/// returns every cross-block union. For agenda-separable rules this equals
/// the direct output; it only touches each block's own `J_A`.
pub fn aggregate_via_decomposition(rule: &RuleId, p: &Profile, d: &Decomposition) -> Result<Outcome> {
    if !d.is_partition() {
        return Err(Error::Precondition("blockwise aggregation needs an independent partition".into()));
    }
    let outputs = blockwise_outputs(rule, p, d)?;
    Ok(combine_blockwise(p.agenda().len(), d.blocks(), &outputs))
}

/// Same result as [`aggregate_via_decomposition`], but each block's agenda is
/// built from its own formulas, so the parent `J_A` is never consulted.
pub fn aggregate_via_fresh_blocks(rule: &RuleId, p: &Profile, d: &Decomposition) -> Result<Outcome> {
    if !d.is_partition() {
        return Err(Error::Precondition("blockwise aggregation needs an independent partition".into()));
    }
    let parent = p.agenda();
    let mut outputs = Vec::with_capacity(d.blocks().len());
    for b in d.blocks() {
        let issues = b.iter().map(|&i| parent.issues()[i].clone()).collect();
        let sub = Agenda::with_limits(issues, parent.constraint().clone(), *parent.limits())?;
        let members = p.members().iter().map(|j| j.restrict(b)).collect();
        outputs.push(rule.apply(&Profile::new(std::sync::Arc::new(sub), members)?)?);
    }
    Ok(combine_blockwise(parent.len(), d.blocks(), &outputs))
}
