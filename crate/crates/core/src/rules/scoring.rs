use std::fmt;

use num_rational::Ratio;

use crate::agenda::{hamming, Agenda, JudgmentSet, Profile, Sign};
use crate::error::Result;

use super::Outcome;

/// Exact non-negative score.
pub type Score = Ratio<u64>;

/// `s(J_i, φ)`: how much an individual judgment set supports a signed issue.
pub trait ScoringFunction: Send + Sync {
    fn name(&self) -> &str;

    /// Score of the signed issue `(position, sign)` for the complete set `j`
    /// over `agenda`.
    fn score(&self, agenda: &Agenda, j: &JudgmentSet, position: usize, sign: Sign) -> Score;
}

impl fmt::Debug for dyn ScoringFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ScoringFunction({})", self.name())
    }
}

/// Membership indicator; turns the scoring rule into the median rule.
#[derive(Clone, Copy, Debug, Default)]
pub struct MedianScore;

/// Entrenchment: the fewest judgment reversals needed to reject the issue.
#[derive(Clone, Copy, Debug, Default)]
pub struct ReversalScore;

pub fn score_med(j: &JudgmentSet, position: usize, sign: Sign) -> u64 {
    u64::from(j.sign(position) == sign)
}

/// Minimum Hamming distance from `j` to a member of `J_A` containing the
/// opposite judgment on `position`; 0 when `j` already rejects `sign`.
///
/// A position the constraint forces (possible only for unscreened agendas)
/// cannot be reversed; it scores `m + 1`, more than any reachable distance.
pub fn score_rev(agenda: &Agenda, j: &JudgmentSet, position: usize, sign: Sign) -> u64 {
    if j.sign(position) != sign {
        return 0;
    }
    agenda
        .complete_sets()
        .iter()
        .filter(|other| other.sign(position) == sign.negate())
        .map(|other| hamming(j, other).expect("same agenda") as u64)
        .min()
        .unwrap_or(agenda.len() as u64 + 1)
}

impl ScoringFunction for MedianScore {
    fn name(&self) -> &str {
        "s_med"
    }

    fn score(&self, _agenda: &Agenda, j: &JudgmentSet, position: usize, sign: Sign) -> Score {
        Score::from_integer(score_med(j, position, sign))
    }
}

impl ScoringFunction for ReversalScore {
    fn name(&self) -> &str {
        "s_rev"
    }

    fn score(&self, agenda: &Agenda, j: &JudgmentSet, position: usize, sign: Sign) -> Score {
        Score::from_integer(score_rev(agenda, j, position, sign))
    }
}

/// Any closure `(agenda, J, position, sign) -> Score` is a scoring function.
pub struct FnScore<F> {
    name: String,
    f: F,
}

impl<F> FnScore<F>
where
    F: Fn(&Agenda, &JudgmentSet, usize, Sign) -> Score + Send + Sync,
{
    pub fn new(name: impl Into<String>, f: F) -> Self {
        FnScore { name: name.into(), f }
    }
}

impl<F> ScoringFunction for FnScore<F>
where
    F: Fn(&Agenda, &JudgmentSet, usize, Sign) -> Score + Send + Sync,
{
    fn name(&self) -> &str {
        &self.name
    }

    fn score(&self, agenda: &Agenda, j: &JudgmentSet, position: usize, sign: Sign) -> Score {
        (self.f)(agenda, j, position, sign)
    }
}

/// `R_s`: the members of `J_A` maximizing `Σ_i Σ_{φ∈J} s(J_i, φ)`.
pub fn rule_scoring(p: &Profile, s: &dyn ScoringFunction) -> Result<Outcome> {
    let agenda = p.agenda();
    let m = agenda.len();
    // weights[k] = (total score of +φ_k, total score of -φ_k) over the profile
    let mut weights = vec![(Score::from_integer(0), Score::from_integer(0)); m];
    for member in p.members() {
        for (k, w) in weights.iter_mut().enumerate() {
            w.0 += s.score(agenda, member, k, Sign::Plus);
            w.1 += s.score(agenda, member, k, Sign::Minus);
        }
    }
    let total = |j: &JudgmentSet| -> Score {
        j.signs()
            .iter()
            .zip(&weights)
            .map(|(sign, w)| if *sign == Sign::Plus { w.0 } else { w.1 })
            .sum()
    };
    Ok(argbest(agenda.complete_sets(), total, |a, b| a > b))
}

/// Members of `candidates` whose key is best under `better`, ties kept.
pub(crate) fn argbest<K: PartialEq + Clone>(
    candidates: &[JudgmentSet],
    key: impl Fn(&JudgmentSet) -> K,
    better: impl Fn(&K, &K) -> bool,
) -> Outcome {
    let mut best: Option<K> = None;
    let mut out = Outcome::new();
    for j in candidates {
        let k = key(j);
        match &best {
            Some(b) if better(b, &k) => {}
            Some(b) if *b == k => {
                out.insert(j.clone());
            }
            _ => {
                best = Some(k);
                out.clear();
                out.insert(j.clone());
            }
        }
    }
    out
}

/// MED by maximizing total majority support `Σ_{φ∈J} N(P, φ)`.
pub fn med_by_support(p: &Profile) -> Outcome {
    let table = p.support();
    argbest(p.agenda().complete_sets(), |j| table.total(j), |a, b| a > b)
}

/// MED by minimizing summed Hamming distance to the profile.
pub fn med_by_distance(p: &Profile) -> Outcome {
    let dist = |j: &JudgmentSet| -> usize {
        p.members().iter().map(|m| hamming(m, j).expect("same agenda")).sum()
    };
    argbest(p.agenda().complete_sets(), dist, |a, b| a < b)
}

/// The median rule. Both characterizations are computed and must agree.
pub fn rule_med(p: &Profile) -> Result<Outcome> {
    let by_support = med_by_support(p);
    debug_assert_eq!(by_support, med_by_distance(p));
    Ok(by_support)
}

pub fn rule_rev(p: &Profile) -> Result<Outcome> {
    rule_scoring(p, &ReversalScore)
}

/// `R^{d_H,max}`: members of `J_A` minimizing the largest Hamming distance to
/// a profile member.
pub fn rule_rmax(p: &Profile) -> Result<Outcome> {
    let worst = |j: &JudgmentSet| -> usize {
        p.members().iter().map(|m| hamming(m, j).expect("same agenda")).max().unwrap_or(0)
    };
    Ok(argbest(p.agenda().complete_sets(), worst, |a, b| a < b))
}
