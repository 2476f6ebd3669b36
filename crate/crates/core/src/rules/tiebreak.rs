use std::cmp::Ordering;

use crate::agenda::{JudgmentSet, Sign};
use crate::error::{Error, Result};

/// A strict priority over complete judgment sets, used to make an irresolute
/// rule resolute.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TieBreaker {
    /// Compare sign vectors position by position (in `order`, or preagenda
    /// order when `None`); the first difference decides, and the set holding
    /// `prefer` there wins.
    ///
    /// With preagenda order this priority is agenda separable: for blockwise
    /// sets over an independent partition, the first position where two
    /// unions differ belongs to one block and is the first difference inside
    /// that block too, so blockwise preferences carry over to unions.
    Lexicographic { order: Option<Vec<usize>>, prefer: Sign },
    /// Listed sets first, in list order; everything else after them in the
    /// default lexicographic order.
    Priority(Vec<JudgmentSet>),
}

impl Default for TieBreaker {
    fn default() -> Self {
        TieBreaker::Lexicographic { order: None, prefer: Sign::Plus }
    }
}

impl TieBreaker {
    /// `Greater` when `a` has priority over `b`.
    pub fn compare(&self, a: &JudgmentSet, b: &JudgmentSet) -> Ordering {
        match self {
            TieBreaker::Lexicographic { order, prefer } => {
                let rank = |s: Sign| -> u8 {
                    if s == *prefer {
                        2
                    } else if s == Sign::Absent {
                        0
                    } else {
                        1
                    }
                };
                let cmp_at = |k: usize| rank(a.sign(k)).cmp(&rank(b.sign(k)));
                match order {
                    Some(order) => order.iter().map(|&k| cmp_at(k)).find(|o| o.is_ne()),
                    None => (0..a.len().min(b.len())).map(cmp_at).find(|o| o.is_ne()),
                }
                .unwrap_or(Ordering::Equal)
            }
            TieBreaker::Priority(list) => {
                let pos = |j: &JudgmentSet| list.iter().position(|x| x == j);
                match (pos(a), pos(b)) {
                    (Some(x), Some(y)) => y.cmp(&x),
                    (Some(_), None) => Ordering::Greater,
                    (None, Some(_)) => Ordering::Less,
                    (None, None) => TieBreaker::default().compare(a, b),
                }
            }
        }
    }

    /// The highest-priority member of `outputs`.
    pub fn select<'a>(&self, outputs: impl IntoIterator<Item = &'a JudgmentSet>) -> Result<JudgmentSet> {
        outputs
            .into_iter()
            .max_by(|a, b| self.compare(a, b))
            .cloned()
            .ok_or(Error::EmptyInput("tie-breaking needs at least one candidate"))
    }
}

pub fn apply_tiebreak<'a>(
    outputs: impl IntoIterator<Item = &'a JudgmentSet>,
    theta: &TieBreaker,
) -> Result<JudgmentSet> {
    theta.select(outputs)
}
