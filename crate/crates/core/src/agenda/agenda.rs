use std::collections::{BTreeSet, HashSet};

use crate::error::{Error, Result};
use crate::limits::{Limits, MAX_ISSUES};
use crate::logic::{self, atoms, evaluate, parse_formula, Formula, Solver};

use super::judgment::{JudgmentSet, Sign};

/// A constrained agenda: the preagenda `φ_1..φ_m` plus the integrity
/// constraint `Γ`.
///
/// Construction validates the agenda and materializes `J_A`, the complete
/// `Γ`-consistent judgment sets, which every consistency question about
/// judgment sets over this agenda is answered against: a partial set is
/// consistent iff some member of `J_A` extends it.
#[derive(Clone, Debug)]
pub struct Agenda {
    issues: Vec<Formula>,
    constraint: Formula,
    limits: Limits,
    complete: Vec<JudgmentSet>,
    masks: Vec<u64>,
}

impl PartialEq for Agenda {
    fn eq(&self, other: &Self) -> bool {
        self.issues == other.issues && self.constraint == other.constraint
    }
}

impl Eq for Agenda {}

impl Agenda {
    pub fn new(issues: Vec<Formula>, constraint: Formula) -> Result<Self> {
        Self::with_limits(issues, constraint, Limits::default())
    }

    /// Parses every issue and the constraint with [`parse_formula`].
    pub fn parse(issues: &[&str], constraint: &str) -> Result<Self> {
        let issues = issues.iter().map(|s| parse_formula(s)).collect::<Result<Vec<_>, _>>()?;
        Self::new(issues, parse_formula(constraint)?)
    }

    pub fn with_limits(issues: Vec<Formula>, constraint: Formula, limits: Limits) -> Result<Self> {
        Self::build(issues, constraint, limits, true)
    }

    /// Skips the check that each issue is neither forced nor excluded by the
    /// constraint. Such an "agenda" has positions whose sign is fixed in every
    /// member of `J_A`; everything else is validated as usual.
    pub fn unscreened(issues: Vec<Formula>, constraint: Formula) -> Result<Self> {
        Self::build(issues, constraint, Limits::default(), false)
    }

    fn build(issues: Vec<Formula>, constraint: Formula, limits: Limits, screen: bool) -> Result<Self> {
        if issues.is_empty() {
            return Err(Error::InvalidAgenda("the preagenda is empty".into()));
        }
        if issues.len() > MAX_ISSUES {
            return Err(Error::InvalidAgenda(format!(
                "{} issues exceed the maximum of {MAX_ISSUES}",
                issues.len()
            )));
        }
        let mut seen = HashSet::new();
        for f in &issues {
            if !seen.insert(f) {
                return Err(Error::InvalidAgenda(format!("duplicate issue `{f}`")));
            }
        }
        let solver = Solver::new(limits.atom_limit);
        let domain = atoms(issues.iter().chain([&constraint]));
        if domain.len() > limits.atom_limit {
            return Err(Error::AtomLimit { atoms: domain.len(), limit: limits.atom_limit });
        }
        if !solver.is_consistent([], &constraint)? {
            return Err(Error::InvalidAgenda("the constraint is inconsistent".into()));
        }
        for f in issues.iter().filter(|_| screen) {
            if logic::is_tautology(f, &constraint, &solver)? {
                return Err(Error::InvalidAgenda(format!("`{f}` is a tautology given the constraint")));
            }
            if logic::is_contradiction(f, &constraint, &solver)? {
                return Err(Error::InvalidAgenda(format!(
                    "`{f}` is a contradiction given the constraint"
                )));
            }
        }

        let models = solver.enumerate_models_over(&domain, [], &constraint)?;
        let mut masks = BTreeSet::new();
        for v in &models {
            let mut mask = 0u64;
            for (k, f) in issues.iter().enumerate() {
                if evaluate(f, v)? {
                    mask |= 1 << k;
                }
            }
            masks.insert(mask);
        }
        Ok(Self::from_parts(issues, constraint, limits, masks))
    }

    fn from_parts(
        issues: Vec<Formula>,
        constraint: Formula,
        limits: Limits,
        masks: impl IntoIterator<Item = u64>,
    ) -> Self {
        let m = issues.len();
        let mut complete: Vec<JudgmentSet> =
            masks.into_iter().map(|mask| JudgmentSet::from_mask(m, mask)).collect();
        complete.sort();
        complete.dedup();
        let masks = complete.iter().map(JudgmentSet::plus_mask).collect();
        Agenda { issues, constraint, limits, complete, masks }
    }

    pub fn issues(&self) -> &[Formula] {
        &self.issues
    }

    pub fn constraint(&self) -> &Formula {
        &self.constraint
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    pub fn solver(&self) -> Solver {
        Solver::new(self.limits.atom_limit)
    }

    /// Number of preagenda entries (issues).
    pub fn len(&self) -> usize {
        self.issues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.issues.is_empty()
    }

    /// `J_A`: all complete `Γ`-consistent judgment sets, in lexicographic sign
    /// order with `+` before `-`.
    pub fn complete_sets(&self) -> &[JudgmentSet] {
        &self.complete
    }

    pub(crate) fn complete_masks(&self) -> &[u64] {
        &self.masks
    }

    /// The formula for one signed issue: `φ_i` or `¬φ_i`.
    pub fn signed_formula(&self, position: usize, sign: Sign) -> Option<Formula> {
        match sign {
            Sign::Plus => Some(self.issues[position].clone()),
            Sign::Minus => Some(Formula::not(self.issues[position].clone())),
            Sign::Absent => None,
        }
    }

    /// The formula view of a judgment set.
    pub fn formulas_of(&self, j: &JudgmentSet) -> Vec<Formula> {
        j.signs()
            .iter()
            .enumerate()
            .filter_map(|(i, s)| self.signed_formula(i, *s))
            .collect()
    }

    pub(crate) fn check_shape(&self, j: &JudgmentSet) -> Result<()> {
        if j.len() != self.len() {
            return Err(Error::AgendaMismatch(j.len(), self.len()));
        }
        Ok(())
    }

    /// Γ-consistency of a possibly partial judgment set.
    pub fn is_consistent(&self, j: &JudgmentSet) -> Result<bool> {
        self.check_shape(j)?;
        let (assigned, plus) = (j.assigned_mask(), j.plus_mask());
        Ok(self.masks.iter().any(|&c| (c ^ plus) & assigned == 0))
    }

    /// Γ-consistency decided directly by the formula-level oracle.
    pub fn is_consistent_by_formulas(&self, j: &JudgmentSet) -> Result<bool> {
        self.check_shape(j)?;
        self.solver().is_consistent(&self.formulas_of(j), &self.constraint)
    }

    /// `J_A` computed the slow way: every one of the `2^m` sign vectors is
    /// tested with the formula-level oracle.
    pub fn complete_sets_by_sign_vectors(&self) -> Result<Vec<JudgmentSet>> {
        let m = self.len();
        if m > 30 {
            return Err(Error::ResourceLimit { what: "sign vectors", size: 1 << m.min(127), cap: 1 << 30 });
        }
        let mut out = Vec::new();
        for mask in 0u64..(1 << m) {
            let j = JudgmentSet::from_mask(m, mask);
            if self.is_consistent_by_formulas(&j)? {
                out.push(j);
            }
        }
        out.sort();
        Ok(out)
    }

    /// Sub-agenda over the sorted, deduplicated `block` positions. It keeps the
    /// parent constraint, and its `J_A` is the projection of the parent's.
    pub fn sub_agenda(&self, block: &[usize]) -> Result<Agenda> {
        let block = normalize_block(block, self.len())?;
        let issues = block.iter().map(|&i| self.issues[i].clone()).collect();
        let masks = self.masks.iter().map(|&c| {
            block.iter().enumerate().fold(0u64, |acc, (k, &i)| acc | (c >> i & 1) << k)
        });
        Ok(Self::from_parts(issues, self.constraint.clone(), self.limits, masks))
    }

    /// All complete consistent judgment sets extending `s`.
    pub fn extensions(&self, s: &JudgmentSet) -> Result<Vec<JudgmentSet>> {
        self.check_shape(s)?;
        let (assigned, plus) = (s.assigned_mask(), s.plus_mask());
        let out: Vec<JudgmentSet> = self
            .masks
            .iter()
            .zip(&self.complete)
            .filter(|(c, _)| (**c ^ plus) & assigned == 0)
            .map(|(_, j)| j.clone())
            .collect();
        if out.is_empty() {
            return Err(Error::Inconsistent);
        }
        Ok(out)
    }

    /// Positions of `s` on which each member of `J_A` agrees with it. A subset
    /// of `s` is consistent iff it lies inside one of these.
    fn agreement_sets(&self, s: &JudgmentSet) -> Vec<u64> {
        let (assigned, plus) = (s.assigned_mask(), s.plus_mask());
        let mut sets: Vec<u64> = self.masks.iter().map(|&c| assigned & !(c ^ plus)).collect();
        sets.sort_unstable();
        sets.dedup();
        sets
    }

    /// The ⊆-maximal Γ-consistent subsets of the assigned part of `s`.
    pub fn maximal_consistent_subsets(&self, s: &JudgmentSet) -> Result<Vec<JudgmentSet>> {
        self.check_shape(s)?;
        let sets = self.agreement_sets(s);
        let maximal = sets
            .iter()
            .filter(|&&a| !sets.iter().any(|&b| b != a && a & b == a))
            .map(|&a| JudgmentSet::from_masks(self.len(), a, s.plus_mask()));
        let mut out: Vec<_> = maximal.collect();
        out.sort();
        Ok(out)
    }

    /// The maximum-cardinality Γ-consistent subsets of the assigned part of `s`.
    pub fn maxcard_consistent_subsets(&self, s: &JudgmentSet) -> Result<Vec<JudgmentSet>> {
        self.check_shape(s)?;
        let sets = self.agreement_sets(s);
        let best = sets.iter().map(|a| a.count_ones()).max().unwrap_or(0);
        let mut out: Vec<_> = sets
            .iter()
            .filter(|a| a.count_ones() == best)
            .map(|&a| JudgmentSet::from_masks(self.len(), a, s.plus_mask()))
            .collect();
        out.sort();
        Ok(out)
    }
}

/// Sorts and deduplicates a block, rejecting empty and out-of-range blocks.
pub fn normalize_block(block: &[usize], m: usize) -> Result<Vec<usize>> {
    if block.is_empty() {
        return Err(Error::InvalidBlock("empty block".into()));
    }
    if let Some(&bad) = block.iter().find(|&&i| i >= m) {
        return Err(Error::InvalidBlock(format!("index {bad} out of range for {m} issues")));
    }
    let mut block = block.to_vec();
    block.sort_unstable();
    block.dedup();
    Ok(block)
}

/// The preference agenda over `m` alternatives: issues `P_i_j` (`x_i` above
/// `x_j`) for `i < j`, constrained by transitivity over every ordered triple.
pub fn make_preference_agenda(m: usize) -> Result<Agenda> {
    if m < 2 {
        return Err(Error::InvalidAgenda("a preference agenda needs at least 2 alternatives".into()));
    }
    let above = |i: usize, j: usize| -> Formula {
        if i < j {
            Formula::Atom(format!("P_{i}_{j}"))
        } else {
            Formula::not(Formula::Atom(format!("P_{j}_{i}")))
        }
    };
    let issues = (1..=m).flat_map(|i| (i + 1..=m).map(move |j| (i, j))).map(|(i, j)| above(i, j));
    let mut clauses = Vec::new();
    for i in 1..=m {
        for j in 1..=m {
            for k in 1..=m {
                if i != j && j != k && i != k {
                    clauses.push(Formula::implies(
                        Formula::and(above(i, j), above(j, k)),
                        above(i, k),
                    ));
                }
            }
        }
    }
    Agenda::new(issues.collect(), Formula::conjunction(clauses))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agenda::js;

    fn f1() -> Agenda {
        Agenda::parse(&["p", "q", "p & q", "t"], "true").unwrap()
    }

    #[test]
    fn figure_one_block_has_four_complete_sets() {
        let a = Agenda::parse(&["p", "q", "p & q"], "true").unwrap();
        assert_eq!(a.complete_sets(), [js("+++"), js("+--"), js("-+-"), js("---")]);
        assert_eq!(a.complete_sets_by_sign_vectors().unwrap(), a.complete_sets());
    }

    #[test]
    fn constraint_forces_sign() {
        // p is a tautology given Γ = p: rejected by the screened constructor
        let err = Agenda::parse(&["p"], "p").unwrap_err();
        assert!(matches!(err, Error::InvalidAgenda(_)));
        let a = Agenda::unscreened(vec![Formula::Atom("p".into())], Formula::Atom("p".into())).unwrap();
        assert_eq!(a.complete_sets(), [js("+")]);
    }

    #[test]
    fn rejects_bad_agendas() {
        assert!(Agenda::parse(&["p", "p"], "true").is_err());
        assert!(Agenda::parse(&["p | ~p"], "true").is_err());
        assert!(Agenda::parse(&["p & ~p"], "true").is_err());
        assert!(Agenda::parse(&["p"], "false").is_err());
        assert!(Agenda::parse(&[], "true").is_err());
    }

    #[test]
    fn preference_agenda_sizes() {
        let a2 = make_preference_agenda(2).unwrap();
        assert_eq!((a2.len(), a2.complete_sets().len()), (1, 2));
        let a3 = make_preference_agenda(3).unwrap();
        assert_eq!((a3.len(), a3.complete_sets().len()), (3, 6));
        // the two cyclic vectors: P_1_2, P_2_3, ~P_1_3 and its mirror
        assert!(!a3.complete_sets().contains(&js("+-+")));
        assert!(!a3.complete_sets().contains(&js("-+-")));
        let a4 = make_preference_agenda(4).unwrap();
        assert_eq!((a4.len(), a4.complete_sets().len()), (6, 24));
        assert!(make_preference_agenda(1).is_err());
    }

    #[test]
    fn ext_cases() {
        let a = f1();
        assert_eq!(a.extensions(&js("?+-+")).unwrap(), [js("-+-+")]);
        assert_eq!(a.extensions(&JudgmentSet::empty(4)).unwrap(), a.complete_sets());
        assert_eq!(a.extensions(&js("++++")).unwrap(), [js("++++")]);
        assert!(matches!(a.extensions(&js("+++?")).map(|v| v.len()), Ok(2)));
        assert!(matches!(a.extensions(&js("++-?")), Err(Error::Inconsistent)));
    }

    #[test]
    fn maximal_subsets_of_figure_one_majority() {
        let a = f1();
        let m = js("++-+");
        let got = a.maximal_consistent_subsets(&m).unwrap();
        let mut want = vec![js("?+-+"), js("+?-+"), js("++?+")];
        want.sort();
        assert_eq!(got, want);
        assert_eq!(a.maxcard_consistent_subsets(&m).unwrap(), want);
        let consistent = js("+--?");
        assert_eq!(a.maximal_consistent_subsets(&consistent).unwrap(), [consistent.clone()]);
        assert_eq!(a.maxcard_consistent_subsets(&consistent).unwrap(), [consistent]);
    }

    #[test]
    fn maximal_subsets_of_figure_two_left_block() {
        let a = Agenda::parse(&["p", "p -> q", "p -> r", "q", "r"], "true").unwrap();
        let m = js("+++--");
        let mut want =
            vec![js("+++??"), js("++??-"), js("+?+-?"), js("+??--"), js("?++--")];
        want.sort();
        assert_eq!(a.maximal_consistent_subsets(&m).unwrap(), want);
        assert_eq!(a.maxcard_consistent_subsets(&m).unwrap(), [js("?++--")]);
    }

    #[test]
    fn sub_agenda_matches_fresh_agenda() {
        let a = Agenda::parse(&["p", "p -> q", "p -> r", "q", "r", "s", "s -> q", "s -> r"], "true")
            .unwrap();
        let sub = a.sub_agenda(&[7, 3, 4, 5, 6]).unwrap();
        let fresh = Agenda::parse(&["q", "r", "s", "s -> q", "s -> r"], "true").unwrap();
        assert_eq!(sub, fresh);
        assert_eq!(sub.complete_sets(), fresh.complete_sets());
        assert!(a.sub_agenda(&[]).is_err());
        assert!(a.sub_agenda(&[8]).is_err());
    }

    #[test]
    fn partial_consistency_agrees_with_formula_oracle() {
        let a = make_preference_agenda(3).unwrap();
        for s in ["++?", "+?-", "?-+", "+-+", "???"] {
            let j = js(s);
            assert_eq!(a.is_consistent(&j).unwrap(), a.is_consistent_by_formulas(&j).unwrap(), "{s}");
        }
    }
}
