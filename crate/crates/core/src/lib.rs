//! Exact judgment aggregation over propositional agendas.
//!
//! The crate covers seven aggregation rules (maximal and maxcard Condorcet,
//! ranked agenda, minimax Hamming, scoring rules with the median and
//! reversal scores, and Full_H), detection of independent partitions and
//! independent overlapping decompositions of an agenda, and instance-level
//! checks of agenda separability and overlapping agenda separability.
//!
//! Everything is computed exactly by enumeration; the size bounds live in
//! [`Limits`].

pub mod agenda;
pub mod decomposition;
pub mod document;
pub mod fixtures;
mod error;
mod limits;
pub mod logic;
pub mod rules;
pub mod separability;

pub use agenda::{hamming, make_preference_agenda, Agenda, JudgmentSet, Profile, Sign, SupportTable};
pub use error::{Error, Result};
pub use limits::{Limits, MAX_ISSUES};
pub use logic::{parse_formula, Formula};
