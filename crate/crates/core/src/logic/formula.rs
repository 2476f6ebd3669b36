use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

/// A propositional formula over named atoms.
///
/// Equality is structural: `p & q` and `q & p` are different formulas. Issue
/// identity inside an agenda relies on this.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

pub(crate) const KEYWORDS: [&str; 2] = ["true", "false"];

pub fn is_valid_atom_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && !KEYWORDS.contains(&name)
}

impl Formula {
    /// Builds an atom, rejecting names outside `[A-Za-z][A-Za-z0-9_]*` and the
    /// reserved words `true`/`false`.
    pub fn atom(name: impl Into<String>) -> Result<Formula> {
        let name = name.into();
        if is_valid_atom_name(&name) {
            Ok(Formula::Atom(name))
        } else {
            Err(Error::InvalidAtom(name))
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Formula, r: Formula) -> Formula {
        Formula::Implies(Box::new(l), Box::new(r))
    }

    pub fn iff(l: Formula, r: Formula) -> Formula {
        Formula::Iff(Box::new(l), Box::new(r))
    }

    /// Conjunction of all formulas; `True` when empty.
    pub fn conjunction(fs: impl IntoIterator<Item = Formula>) -> Formula {
        let mut iter = fs.into_iter();
        match iter.next() {
            None => Formula::True,
            Some(first) => iter.fold(first, Formula::and),
        }
    }

    pub fn is_true_constant(&self) -> bool {
        matches!(self, Formula::True)
    }

    fn collect_atoms<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => {
                out.insert(a);
            }
            Formula::Not(f) => f.collect_atoms(out),
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Implies(l, r)
            | Formula::Iff(l, r) => {
                l.collect_atoms(out);
                r.collect_atoms(out);
            }
        }
    }

    /// Binding strength used by the printer and the parser (higher binds tighter).
    pub(crate) fn precedence(&self) -> u8 {
        match self {
            Formula::Iff(..) => 1,
            Formula::Implies(..) => 2,
            Formula::Or(..) => 3,
            Formula::And(..) => 4,
            Formula::Not(..) => 5,
            Formula::True | Formula::False | Formula::Atom(_) => 6,
        }
    }
}

/// Union of the atom names occurring in `fs`.
pub fn atoms<'a>(fs: impl IntoIterator<Item = &'a Formula>) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for f in fs {
        f.collect_atoms(&mut out);
    }
    out.into_iter().map(str::to_owned).collect()
}

/// Truth assignment to atom names.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Valuation(pub BTreeMap<String, bool>);

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, atom: &str) -> Option<bool> {
        self.0.get(atom).copied()
    }

    pub fn set(&mut self, atom: impl Into<String>, value: bool) {
        self.0.insert(atom.into(), value);
    }
}

impl<S: Into<String>> FromIterator<(S, bool)> for Valuation {
    fn from_iter<I: IntoIterator<Item = (S, bool)>>(iter: I) -> Self {
        Valuation(iter.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }
}

/// Classical truth value of `f` under `v`.
pub fn evaluate(f: &Formula, v: &Valuation) -> Result<bool> {
    Ok(match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(a) => v.get(a).ok_or_else(|| Error::MissingAtom(a.clone()))?,
        Formula::Not(g) => !evaluate(g, v)?,
        Formula::And(l, r) => evaluate(l, v)? & evaluate(r, v)?,
        Formula::Or(l, r) => evaluate(l, v)? | evaluate(r, v)?,
        Formula::Implies(l, r) => !evaluate(l, v)? | evaluate(r, v)?,
        Formula::Iff(l, r) => evaluate(l, v)? == evaluate(r, v)?,
    })
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(f: &mut fmt::Formatter<'_>, node: &Formula, needs_parens: bool) -> fmt::Result {
            if needs_parens {
                write!(f, "({node})")
            } else {
                write!(f, "{node}")
            }
        }

        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Atom(a) => f.write_str(a),
            Formula::Not(g) => {
                f.write_str("~")?;
                child(f, g, g.precedence() < 5)
            }
            Formula::And(l, r) | Formula::Or(l, r) => {
                // left-associative: a same-level right operand needs parentheses
                let prec = self.precedence();
                let op = if matches!(self, Formula::And(..)) { " & " } else { " | " };
                child(f, l, l.precedence() < prec)?;
                f.write_str(op)?;
                child(f, r, r.precedence() <= prec)
            }
            Formula::Implies(l, r) | Formula::Iff(l, r) => {
                // right-associative: a same-level left operand needs parentheses
                let prec = self.precedence();
                let op = if matches!(self, Formula::Implies(..)) { " -> " } else { " <-> " };
                child(f, l, l.precedence() <= prec)?;
                f.write_str(op)?;
                child(f, r, r.precedence() < prec)
            }
        }
    }
}
