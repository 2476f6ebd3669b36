//! Agendas, judgment sets and profiles, with the majority, restriction,
//! extension and consistent-subset machinery the rules are built from.

#[allow(clippy::module_inception)]
mod agenda;
mod judgment;
mod profile;

pub use agenda::{make_preference_agenda, normalize_block, Agenda};
pub use judgment::{hamming, js, JudgmentSet, Sign};
pub use profile::{Profile, SupportTable};
