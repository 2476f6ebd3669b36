//! Propositional formulas, parsing and printing, and the consistency oracle
//! every other module goes through.

mod formula;
mod parser;
mod solver;

pub use formula::{atoms, evaluate, is_valid_atom_name, Formula, Valuation};
pub use parser::{parse_formula, ParseError};
pub use solver::{enumerate_models, is_consistent, Solver, DEFAULT_ATOM_LIMIT};

/// True iff `f` holds in every model of `gamma` (i.e. `{~f}` is
/// `gamma`-inconsistent).
pub fn is_tautology(f: &Formula, gamma: &Formula, solver: &Solver) -> crate::Result<bool> {
    Ok(!solver.is_consistent([&Formula::not(f.clone())], gamma)?)
}

/// True iff `f` holds in no model of `gamma`.
pub fn is_contradiction(f: &Formula, gamma: &Formula, solver: &Solver) -> crate::Result<bool> {
    Ok(!solver.is_consistent([f], gamma)?)
}
