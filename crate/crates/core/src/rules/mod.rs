//! The aggregation rules. Each maps a profile to a non-empty set of complete
//! consistent judgment sets, returned canonically sorted.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::agenda::{JudgmentSet, Profile};
use crate::error::{Error, Result};

mod condorcet;
mod full_h;
mod ranked;
mod scoring;
mod tiebreak;

pub use condorcet::{rule_mc, rule_mcc};
pub use full_h::{nearest_majority_consistent, rule_full_h, rule_full_h_exhaustive, NearestProfiles};
pub use ranked::{compatible_order_count, rule_ra, rule_ra_by_orders, support_blocks};
pub use scoring::{
    med_by_distance, med_by_support, rule_med, rule_rev, rule_rmax, rule_scoring, score_med,
    score_rev, FnScore, MedianScore, ReversalScore, Score, ScoringFunction,
};
pub use tiebreak::{apply_tiebreak, TieBreaker};

/// A rule's output: a set of complete judgment sets.
pub type Outcome = BTreeSet<JudgmentSet>;

#[derive(Clone)]
pub enum RuleId {
    /// Maximal Condorcet.
    Mc,
    /// Maxcard Condorcet.
    Mcc,
    /// Ranked agenda.
    Ra,
    /// Minimax Hamming distance.
    Rmax,
    /// Median.
    Med,
    /// Reversal scoring.
    Rev,
    FullH,
    Scoring(Arc<dyn ScoringFunction>),
}

impl RuleId {
    pub const NAMED: [RuleId; 7] =
        [RuleId::Mc, RuleId::Mcc, RuleId::Ra, RuleId::Rmax, RuleId::Med, RuleId::Rev, RuleId::FullH];

    /// Rules known to be agenda separable.
    pub const AGENDA_SEPARABLE: [RuleId; 6] =
        [RuleId::Mc, RuleId::Mcc, RuleId::Ra, RuleId::Med, RuleId::Rev, RuleId::FullH];

    pub fn name(&self) -> &str {
        match self {
            RuleId::Mc => "mc",
            RuleId::Mcc => "mcc",
            RuleId::Ra => "ra",
            RuleId::Rmax => "rmax",
            RuleId::Med => "med",
            RuleId::Rev => "rev",
            RuleId::FullH => "full_h",
            RuleId::Scoring(s) => s.name(),
        }
    }

    /// Whether the rule is known to satisfy agenda separability. Custom
    /// scoring rules report `false` (unknown).
    pub fn is_agenda_separable(&self) -> bool {
        matches!(
            self,
            RuleId::Mc | RuleId::Mcc | RuleId::Ra | RuleId::Med | RuleId::Rev | RuleId::FullH
        )
    }

    pub fn apply(&self, p: &Profile) -> Result<Outcome> {
        match self {
            RuleId::Mc => rule_mc(p),
            RuleId::Mcc => rule_mcc(p),
            RuleId::Ra => rule_ra(p),
            RuleId::Rmax => rule_rmax(p),
            RuleId::Med => rule_med(p),
            RuleId::Rev => rule_rev(p),
            RuleId::FullH => rule_full_h(p),
            RuleId::Scoring(s) => rule_scoring(p, s.as_ref()),
        }
    }

    /// The rule composed with a tie-breaking priority.
    pub fn apply_resolute(&self, p: &Profile, theta: &TieBreaker) -> Result<JudgmentSet> {
        apply_tiebreak(&self.apply(p)?, theta)
    }
}

impl fmt::Debug for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl PartialEq for RuleId {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (RuleId::Scoring(a), RuleId::Scoring(b)) => Arc::ptr_eq(a, b),
            (a, b) => std::mem::discriminant(a) == std::mem::discriminant(b),
        }
    }
}

impl FromStr for RuleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "mc" => RuleId::Mc,
            "mcc" => RuleId::Mcc,
            "ra" => RuleId::Ra,
            "rmax" | "r_max" | "dhmax" => RuleId::Rmax,
            "med" | "median" => RuleId::Med,
            "rev" | "r_rev" => RuleId::Rev,
            "full_h" | "fullh" => RuleId::FullH,
            "s_med" => RuleId::Scoring(Arc::new(MedianScore)),
            "s_rev" => RuleId::Scoring(Arc::new(ReversalScore)),
            other => {
                return Err(Error::Precondition(format!(
                    "unknown rule `{other}` (expected mc, mcc, ra, rmax, med, rev, full_h)"
                )))
            }
        })
    }
}
