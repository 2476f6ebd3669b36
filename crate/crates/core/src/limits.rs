use serde::{Deserialize, Serialize};

use crate::logic::DEFAULT_ATOM_LIMIT;

/// Size bounds for the exponential searches. Exceeding one yields
/// [`crate::Error::AtomLimit`] or [`crate::Error::ResourceLimit`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Limits {
    /// Maximum number of distinct atoms in an agenda plus its constraint.
    pub atom_limit: usize,
    /// Maximum number of search nodes the Full_H profile search may expand.
    pub full_h_states: u64,
    /// Maximum preagenda size for bipartition search (2^(m-1) candidates).
    pub bipartition_issues: usize,
    /// Maximum preagenda size for covering-pair search (3^m candidates).
    pub iod_issues: usize,
    /// Cap on the number of compatible orders the RA permutation oracle visits.
    pub ra_orders: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            atom_limit: DEFAULT_ATOM_LIMIT,
            full_h_states: 10_000_000,
            bipartition_issues: 16,
            iod_issues: 16,
            ra_orders: 1_000_000,
        }
    }
}

/// Hard bound from the bitmask representation of judgment sets.
pub const MAX_ISSUES: usize = 64;
