use crate::agenda::Profile;
use crate::error::Result;

use super::Outcome;

/// MC: the completions of every ⊆-maximal consistent subset of `m(P)`.
pub fn rule_mc(p: &Profile) -> Result<Outcome> {
    let agenda = p.agenda();
    let mut out = Outcome::new();
    for s in agenda.maximal_consistent_subsets(&p.majority_set())? {
        out.extend(agenda.extensions(&s)?);
    }
    Ok(out)
}

/// MCC: the completions of every maximum-cardinality consistent subset of `m(P)`.
pub fn rule_mcc(p: &Profile) -> Result<Outcome> {
    let agenda = p.agenda();
    let mut out = Outcome::new();
    for s in agenda.maxcard_consistent_subsets(&p.majority_set())? {
        out.extend(agenda.extensions(&s)?);
    }
    Ok(out)
}
