use thiserror::Error;

use crate::logic::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid atom name `{0}`")]
    InvalidAtom(String),
    #[error("atom `{0}` has no value in the valuation")]
    MissingAtom(String),
    #[error("{atoms} atoms exceed the configured limit of {limit}")]
    AtomLimit { atoms: usize, limit: usize },
    #[error("{what}: {size} exceeds the configured cap of {cap}")]
    ResourceLimit { what: &'static str, size: u128, cap: u128 },
    #[error("invalid agenda: {0}")]
    InvalidAgenda(String),
    #[error("invalid judgment set: {0}")]
    InvalidJudgmentSet(String),
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("invalid block: {0}")]
    InvalidBlock(String),
    #[error("judgment sets range over different agendas ({0} vs {1} issues)")]
    AgendaMismatch(usize, usize),
    #[error("profiles have different sizes ({0} vs {1})")]
    SizeMismatch(usize, usize),
    #[error("judgment set is inconsistent with the constraint")]
    Inconsistent,
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid document: {0}")]
    Document(String),
}

impl Error {
    /// Errors caused by exceeding a configured size bound rather than by bad input.
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::AtomLimit { .. } | Error::ResourceLimit { .. })
    }
}
