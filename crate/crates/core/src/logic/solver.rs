use std::collections::{BTreeMap, BTreeSet};

use super::formula::{atoms, Formula, Valuation};
use crate::error::{Error, Result};

pub const DEFAULT_ATOM_LIMIT: usize = 24;

/// Formula compiled against a fixed atom ordering.
#[derive(Debug)]
enum Node {
    Const(bool),
    Var(usize),
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Implies(Box<Node>, Box<Node>),
    Iff(Box<Node>, Box<Node>),
}

impl Node {
    fn compile(f: &Formula, index: &BTreeMap<&str, usize>) -> Node {
        let bin = |l: &Formula, r: &Formula| {
            (Box::new(Node::compile(l, index)), Box::new(Node::compile(r, index)))
        };
        match f {
            Formula::True => Node::Const(true),
            Formula::False => Node::Const(false),
            Formula::Atom(a) => Node::Var(index[a.as_str()]),
            Formula::Not(g) => Node::Not(Box::new(Node::compile(g, index))),
            Formula::And(l, r) => {
                let (l, r) = bin(l, r);
                Node::And(l, r)
            }
            Formula::Or(l, r) => {
                let (l, r) = bin(l, r);
                Node::Or(l, r)
            }
            Formula::Implies(l, r) => {
                let (l, r) = bin(l, r);
                Node::Implies(l, r)
            }
            Formula::Iff(l, r) => {
                let (l, r) = bin(l, r);
                Node::Iff(l, r)
            }
        }
    }

    /// Kleene three-valued evaluation; `None` means undetermined so far.
    fn eval(&self, assignment: &[Option<bool>]) -> Option<bool> {
        match self {
            Node::Const(b) => Some(*b),
            Node::Var(i) => assignment[*i],
            Node::Not(g) => g.eval(assignment).map(|b| !b),
            Node::And(l, r) => match (l.eval(assignment), r.eval(assignment)) {
                (Some(false), _) | (_, Some(false)) => Some(false),
                (Some(true), Some(true)) => Some(true),
                _ => None,
            },
            Node::Or(l, r) => match (l.eval(assignment), r.eval(assignment)) {
                (Some(true), _) | (_, Some(true)) => Some(true),
                (Some(false), Some(false)) => Some(false),
                _ => None,
            },
            Node::Implies(l, r) => match (l.eval(assignment), r.eval(assignment)) {
                (Some(false), _) | (_, Some(true)) => Some(true),
                (Some(true), Some(false)) => Some(false),
                _ => None,
            },
            Node::Iff(l, r) => match (l.eval(assignment), r.eval(assignment)) {
                (Some(a), Some(b)) => Some(a == b),
                _ => None,
            },
        }
    }
}

/// Exhaustive model search over the atoms of a formula set, with pruning as
/// soon as any formula is decided false under the partial assignment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Solver {
    pub atom_limit: usize,
}

impl Default for Solver {
    fn default() -> Self {
        Solver { atom_limit: DEFAULT_ATOM_LIMIT }
    }
}

struct Search {
    names: Vec<String>,
    nodes: Vec<Node>,
    assignment: Vec<Option<bool>>,
}

enum Status {
    Falsified,
    Satisfied,
    Open,
}

impl Search {
    fn status(&self) -> Status {
        let mut open = false;
        for n in &self.nodes {
            match n.eval(&self.assignment) {
                Some(false) => return Status::Falsified,
                None => open = true,
                Some(true) => {}
            }
        }
        if open {
            Status::Open
        } else {
            Status::Satisfied
        }
    }

    fn exists(&mut self, depth: usize) -> bool {
        match self.status() {
            Status::Falsified => false,
            Status::Satisfied => true,
            Status::Open => {
                for value in [true, false] {
                    self.assignment[depth] = Some(value);
                    if self.exists(depth + 1) {
                        self.assignment[depth] = None;
                        return true;
                    }
                }
                self.assignment[depth] = None;
                false
            }
        }
    }

    fn collect(&mut self, depth: usize, out: &mut Vec<Valuation>) {
        match self.status() {
            Status::Falsified => {}
            Status::Satisfied => self.expand(depth, out),
            Status::Open => {
                // false first so valuations come out in ascending order
                for value in [false, true] {
                    self.assignment[depth] = Some(value);
                    self.collect(depth + 1, out);
                }
                self.assignment[depth] = None;
            }
        }
    }

    /// Every completion of the current partial assignment is a model.
    fn expand(&mut self, depth: usize, out: &mut Vec<Valuation>) {
        if depth == self.names.len() {
            out.push(Valuation(
                self.names
                    .iter()
                    .zip(&self.assignment)
                    .map(|(n, v)| (n.clone(), v.expect("complete assignment")))
                    .collect(),
            ));
            return;
        }
        for value in [false, true] {
            self.assignment[depth] = Some(value);
            self.expand(depth + 1, out);
        }
        self.assignment[depth] = None;
    }
}

impl Solver {
    pub fn new(atom_limit: usize) -> Self {
        Solver { atom_limit }
    }

    fn prepare<'a>(
        &self,
        domain: &BTreeSet<String>,
        fs: impl IntoIterator<Item = &'a Formula>,
        gamma: &'a Formula,
    ) -> Result<Search> {
        let all: Vec<&Formula> = fs.into_iter().chain(std::iter::once(gamma)).collect();
        let mut names = atoms(all.iter().copied());
        names.extend(domain.iter().cloned());
        let names: Vec<String> = names.into_iter().collect();
        if names.len() > self.atom_limit {
            return Err(Error::AtomLimit { atoms: names.len(), limit: self.atom_limit });
        }
        let index: BTreeMap<&str, usize> =
            names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let nodes = all.iter().map(|f| Node::compile(f, &index)).collect();
        let assignment = vec![None; names.len()];
        Ok(Search { names, nodes, assignment })
    }

    /// True iff some valuation satisfies every member of `fs` together with `gamma`.
    pub fn is_consistent<'a>(
        &self,
        fs: impl IntoIterator<Item = &'a Formula>,
        gamma: &'a Formula,
    ) -> Result<bool> {
        let mut search = self.prepare(&BTreeSet::new(), fs, gamma)?;
        Ok(search.exists(0))
    }

    /// All models of `fs ∪ {gamma}` over exactly their atoms, ordered
    /// lexicographically by atom name with `false < true`.
    pub fn enumerate_models<'a>(
        &self,
        fs: impl IntoIterator<Item = &'a Formula>,
        gamma: &'a Formula,
    ) -> Result<Vec<Valuation>> {
        self.enumerate_models_over(&BTreeSet::new(), fs, gamma)
    }

    /// Like [`Solver::enumerate_models`], with the valuation domain widened to
    /// include `domain` (atoms that constrain nothing double the model count).
    pub fn enumerate_models_over<'a>(
        &self,
        domain: &BTreeSet<String>,
        fs: impl IntoIterator<Item = &'a Formula>,
        gamma: &'a Formula,
    ) -> Result<Vec<Valuation>> {
        let mut search = self.prepare(domain, fs, gamma)?;
        let mut out = Vec::new();
        search.collect(0, &mut out);
        Ok(out)
    }
}

/// [`Solver::is_consistent`] with the default atom limit.
pub fn is_consistent<'a>(
    fs: impl IntoIterator<Item = &'a Formula>,
    gamma: &'a Formula,
) -> Result<bool> {
    Solver::default().is_consistent(fs, gamma)
}

/// [`Solver::enumerate_models`] with the default atom limit.
pub fn enumerate_models<'a>(
    fs: impl IntoIterator<Item = &'a Formula>,
    gamma: &'a Formula,
) -> Result<Vec<Valuation>> {
    Solver::default().enumerate_models(fs, gamma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{evaluate, parse_formula};

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    /// Plain truth-table sweep, independent of the backtracking search.
    fn truth_table(fs: &[Formula], gamma: &Formula) -> Vec<Valuation> {
        let mut all: Vec<Formula> = fs.to_vec();
        all.push(gamma.clone());
        let names: Vec<String> = atoms(&all).into_iter().collect();
        let mut out = Vec::new();
        for bits in 0u32..(1 << names.len()) {
            // most significant bit = first atom, so the sweep is lexicographic
            let v: Valuation = names
                .iter()
                .enumerate()
                .map(|(i, n)| (n.clone(), bits >> (names.len() - 1 - i) & 1 == 1))
                .collect();
            if all.iter().all(|f| evaluate(f, &v).unwrap()) {
                out.push(v);
            }
        }
        out
    }

    #[test]
    fn consistency_cases() {
        assert!(!is_consistent(&[p("p"), p("p -> q"), p("~q")], &Formula::True).unwrap());
        assert!(is_consistent(&[p("p"), p("~p | t")], &Formula::True).unwrap());
        assert!(!is_consistent(&[p("~p")], &p("p")).unwrap());
        assert!(is_consistent(&[], &Formula::True).unwrap());
        assert!(!is_consistent(&[], &Formula::False).unwrap());
    }

    #[test]
    fn p_and_not_p_or_t_matches_truth_table() {
        let fs = [p("p"), p("~p | t")];
        let tt = truth_table(&fs, &Formula::True);
        // only p=T,t=T survives
        assert_eq!(tt.len(), 1);
        assert_eq!(enumerate_models(&fs, &Formula::True).unwrap(), tt);
    }

    #[test]
    fn model_enumeration_cases() {
        let models = enumerate_models(&[p("p | q")], &Formula::True).unwrap();
        assert_eq!(models, truth_table(&[p("p | q")], &Formula::True));
        assert_eq!(models.len(), 3);
        assert!(enumerate_models(&[Formula::False], &Formula::True).unwrap().is_empty());
        assert_eq!(enumerate_models(&[], &p("p | ~p")).unwrap().len(), 2);
        let domain: BTreeSet<String> = ["p".to_string()].into();
        assert_eq!(Solver::default().enumerate_models_over(&domain, [], &Formula::True).unwrap().len(), 2);
    }

    #[test]
    fn atom_limit_enforced() {
        let big = Formula::conjunction((0..5).map(|i| Formula::Atom(format!("a{i}"))));
        let solver = Solver::new(4);
        assert!(matches!(
            solver.is_consistent([&big], &Formula::True),
            Err(Error::AtomLimit { atoms: 5, limit: 4 })
        ));
        assert!(matches!(solver.enumerate_models([&big], &Formula::True), Err(Error::AtomLimit { .. })));
        assert!(Solver::new(5).is_consistent([&big], &Formula::True).unwrap());
    }
}
