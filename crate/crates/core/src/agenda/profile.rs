use std::sync::Arc;

use crate::error::{Error, Result};

use super::agenda::Agenda;
use super::judgment::{hamming, JudgmentSet, Sign};

/// An ordered tuple of complete Γ-consistent judgment sets over one agenda.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profile {
    agenda: Arc<Agenda>,
    members: Vec<JudgmentSet>,
}

/// `N(P, φ)` for every signed issue.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportTable {
    n: usize,
    plus: Vec<usize>,
}

impl SupportTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.plus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.plus.is_empty()
    }

    pub fn count(&self, position: usize, sign: Sign) -> usize {
        match sign {
            Sign::Plus => self.plus[position],
            Sign::Minus => self.n - self.plus[position],
            Sign::Absent => 0,
        }
    }

    /// Sum of the supports of the signed issues in `j`.
    pub fn total(&self, j: &JudgmentSet) -> usize {
        j.signs().iter().enumerate().map(|(i, s)| self.count(i, *s)).sum()
    }
}

impl Profile {
    pub fn new(agenda: Arc<Agenda>, members: Vec<JudgmentSet>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidProfile("a profile needs at least one member".into()));
        }
        for (i, j) in members.iter().enumerate() {
            agenda.check_shape(j)?;
            if !j.is_complete() {
                return Err(Error::InvalidProfile(format!("member {i} {j} is not complete")));
            }
            if !agenda.is_consistent(j)? {
                return Err(Error::InvalidProfile(format!("member {i} {j} violates the constraint")));
            }
        }
        Ok(Profile { agenda, members })
    }

    pub fn agenda(&self) -> &Arc<Agenda> {
        &self.agenda
    }

    pub fn members(&self) -> &[JudgmentSet] {
        &self.members
    }

    pub fn n(&self) -> usize {
        self.members.len()
    }

    pub fn support(&self) -> SupportTable {
        let mut plus = vec![0; self.agenda.len()];
        for j in &self.members {
            for (k, s) in j.signs().iter().enumerate() {
                if *s == Sign::Plus {
                    plus[k] += 1;
                }
            }
        }
        SupportTable { n: self.n(), plus }
    }

    /// `m(P)`: signed issues with strict-majority support. A position with
    /// support exactly `n/2` is absent.
    pub fn majority_set(&self) -> JudgmentSet {
        let table = self.support();
        let n = self.n();
        JudgmentSet::new(
            (0..self.agenda.len())
                .map(|k| {
                    let plus = table.count(k, Sign::Plus);
                    if 2 * plus > n {
                        Sign::Plus
                    } else if 2 * (n - plus) > n {
                        Sign::Minus
                    } else {
                        Sign::Absent
                    }
                })
                .collect(),
        )
    }

    pub fn is_majority_consistent(&self) -> bool {
        self.agenda.is_consistent(&self.majority_set()).expect("shape checked on construction")
    }

    /// `P↓block`, over the sub-agenda of the sorted block positions.
    pub fn restrict(&self, block: &[usize]) -> Result<Profile> {
        let sub = Arc::new(self.agenda.sub_agenda(block)?);
        let block = super::normalize_block(block, self.agenda.len())?;
        let members = self.members.iter().map(|j| j.restrict(&block)).collect();
        Ok(Profile { agenda: sub, members })
    }

    /// Same agenda, members reordered by `order` (a permutation of `0..n`).
    pub fn permuted(&self, order: &[usize]) -> Profile {
        Profile {
            agenda: self.agenda.clone(),
            members: order.iter().map(|&i| self.members[i].clone()).collect(),
        }
    }

    /// `D_H(P, Q)`: sum of member-wise Hamming distances.
    pub fn distance(&self, other: &Profile) -> Result<usize> {
        if self.n() != other.n() {
            return Err(Error::SizeMismatch(self.n(), other.n()));
        }
        if self.agenda != other.agenda {
            return Err(Error::AgendaMismatch(self.agenda.len(), other.agenda.len()));
        }
        self.members.iter().zip(&other.members).map(|(a, b)| hamming(a, b)).sum()
    }
}
