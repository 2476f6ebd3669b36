use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// The judgment on one preagenda entry: accept `φ`, accept `¬φ`, or no judgment.
///
/// Ordering puts `Plus` before `Minus`, which is the canonical output order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
    Absent,
}

impl Sign {
    pub fn negate(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
            Sign::Absent => Sign::Absent,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
            Sign::Absent => '?',
        }
    }

    pub fn from_symbol(c: char) -> Option<Sign> {
        match c {
            '+' => Some(Sign::Plus),
            '-' => Some(Sign::Minus),
            '?' | '0' | '.' => Some(Sign::Absent),
            _ => None,
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut buf = [0u8; 4];
        s.serialize_str(self.symbol().encode_utf8(&mut buf))
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let mut chars = s.chars();
        match (chars.next().and_then(Sign::from_symbol), chars.next()) {
            (Some(sign), None) => Ok(sign),
            _ => Err(serde::de::Error::custom(format!("expected \"+\" or \"-\", got {s:?}"))),
        }
    }
}

/// A judgment set as a sign vector over the preagenda positions.
///
/// Complete sets have no `Absent` position. The formula view (`φ_i` for
/// `Plus`, `¬φ_i` for `Minus`) is produced by [`crate::Agenda::formulas_of`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct JudgmentSet {
    signs: Vec<Sign>,
}

impl JudgmentSet {
    pub fn new(signs: Vec<Sign>) -> Self {
        JudgmentSet { signs }
    }

    /// The set with no judgments over `m` positions.
    pub fn empty(m: usize) -> Self {
        JudgmentSet { signs: vec![Sign::Absent; m] }
    }

    pub(crate) fn from_mask(m: usize, plus: u64) -> Self {
        JudgmentSet {
            signs: (0..m)
                .map(|k| if plus >> k & 1 == 1 { Sign::Plus } else { Sign::Minus })
                .collect(),
        }
    }

    pub(crate) fn from_masks(m: usize, assigned: u64, plus: u64) -> Self {
        JudgmentSet {
            signs: (0..m)
                .map(|k| match (assigned >> k & 1, plus >> k & 1) {
                    (0, _) => Sign::Absent,
                    (_, 1) => Sign::Plus,
                    _ => Sign::Minus,
                })
                .collect(),
        }
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn sign(&self, position: usize) -> Sign {
        self.signs[position]
    }

    pub fn is_complete(&self) -> bool {
        self.signs.iter().all(|s| *s != Sign::Absent)
    }

    /// Number of signed issues in the set.
    pub fn cardinality(&self) -> usize {
        self.signs.iter().filter(|s| **s != Sign::Absent).count()
    }

    pub fn assigned_positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.signs.iter().enumerate().filter(|(_, s)| **s != Sign::Absent).map(|(i, _)| i)
    }

    pub(crate) fn assigned_mask(&self) -> u64 {
        self.signs
            .iter()
            .enumerate()
            .filter(|(_, s)| **s != Sign::Absent)
            .fold(0, |m, (i, _)| m | 1 << i)
    }

    pub(crate) fn plus_mask(&self) -> u64 {
        self.signs
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == Sign::Plus)
            .fold(0, |m, (i, _)| m | 1 << i)
    }

    /// `self ⊆ other` as sets of signed issues.
    pub fn is_subset_of(&self, other: &JudgmentSet) -> bool {
        self.len() == other.len()
            && self.signs.iter().zip(&other.signs).all(|(a, b)| *a == Sign::Absent || a == b)
    }

    /// Restriction to `block` (positions taken in the given order).
    pub fn restrict(&self, block: &[usize]) -> JudgmentSet {
        JudgmentSet { signs: block.iter().map(|&i| self.signs[i]).collect() }
    }

    /// Writes the signs of `part` (a set over `block`) into a copy of `self`.
    /// Fails if a position is already assigned the opposite sign.
    pub fn merged(&self, block: &[usize], part: &JudgmentSet) -> Option<JudgmentSet> {
        let mut out = self.clone();
        for (&pos, &s) in block.iter().zip(&part.signs) {
            match (out.signs[pos], s) {
                (_, Sign::Absent) => {}
                (Sign::Absent, s) => out.signs[pos] = s,
                (a, b) if a == b => {}
                _ => return None,
            }
        }
        Some(out)
    }
}

impl fmt::Display for JudgmentSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, s) in self.signs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", s.symbol())?;
        }
        f.write_str(")")
    }
}

/// Parses compact sign strings such as `"+-+"` or `"(+,-,+)"`.
impl FromStr for JudgmentSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .filter(|c| !matches!(c, '(' | ')' | ',' | ' '))
            .map(|c| {
                Sign::from_symbol(c)
                    .ok_or_else(|| Error::InvalidJudgmentSet(format!("unexpected `{c}` in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(JudgmentSet::new)
    }
}

/// Shorthand used throughout the tests: `js("+-+")`.
pub fn js(s: &str) -> JudgmentSet {
    s.parse().expect("valid sign string")
}

/// Number of positions where two complete judgment sets differ.
pub fn hamming(a: &JudgmentSet, b: &JudgmentSet) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::AgendaMismatch(a.len(), b.len()));
    }
    if !a.is_complete() || !b.is_complete() {
        return Err(Error::InvalidJudgmentSet("hamming distance needs complete sets".into()));
    }
    Ok(a.signs.iter().zip(&b.signs).filter(|(x, y)| x != y).count())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let j = js("+-?");
        assert_eq!(j.signs(), [Sign::Plus, Sign::Minus, Sign::Absent]);
        assert_eq!(j.to_string(), "(+,-,?)");
        assert_eq!(js("(+,-,?)"), j);
        assert!("+x".parse::<JudgmentSet>().is_err());
    }

    #[test]
    fn figure_one_distances() {
        let (j1, j2, j3) = (js("++++"), js("+--+"), js("-+--"));
        assert_eq!(hamming(&j1, &j1).unwrap(), 0);
        assert_eq!(hamming(&j1, &j2).unwrap(), 2);
        assert_eq!(hamming(&j1, &j3).unwrap(), 3);
    }

    #[test]
    fn hamming_rejects_mismatch() {
        assert!(matches!(hamming(&js("++"), &js("+++")), Err(Error::AgendaMismatch(2, 3))));
        assert!(hamming(&js("+?"), &js("++")).is_err());
    }

    #[test]
    fn subset_restrict_merge() {
        let partial = js("?-+");
        assert!(partial.is_subset_of(&js("+-+")));
        assert!(!partial.is_subset_of(&js("++-")));
        assert_eq!(js("+-+-").restrict(&[1, 3]), js("--"));
        let base = js("??+?");
        assert_eq!(base.merged(&[0, 2], &js("++")), Some(js("+?+?")));
        assert_eq!(base.merged(&[2], &js("-")), None);
    }

    #[test]
    fn masks_round_trip() {
        let j = js("+-?+");
        assert_eq!(JudgmentSet::from_masks(4, j.assigned_mask(), j.plus_mask()), j);
        assert_eq!(JudgmentSet::from_mask(3, 0b101), js("+-+"));
    }

    #[test]
    fn serde_as_sign_list() {
        let j = js("+-");
        assert_eq!(serde_json::to_string(&j).unwrap(), r#"["+","-"]"#);
        let back: JudgmentSet = serde_json::from_str(r#"["+","-"]"#).unwrap();
        assert_eq!(back, j);
        assert!(serde_json::from_str::<JudgmentSet>(r#"["x"]"#).is_err());
    }
}
