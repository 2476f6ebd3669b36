//! Small worked instances used by tests, the property suite, and the CLI.

use std::sync::Arc;

use crate::agenda::{js, make_preference_agenda, Agenda, Profile};

fn profile(issues: &[&str], rows: &[&str]) -> Profile {
    let a = Arc::new(Agenda::parse(issues, "true").expect("fixture agenda"));
    Profile::new(a, rows.iter().map(|r| js(r)).collect()).expect("fixture profile")
}

/// `(p, q, p∧q, t)`: three judges, the minimax counterexample.
pub fn f1() -> Profile {
    profile(&["p", "q", "p & q", "t"], &["++++", "+--+", "-+--"])
}

pub const F1_BLOCKS: [&[usize]; 2] = [&[0, 1, 2], &[3]];

/// Eight issues over `p, q, r, s`; the two blocks share `q` and `r`.
pub fn f2() -> Profile {
    profile(
        &["p", "p -> q", "p -> r", "q", "r", "s", "s -> q", "s -> r"],
        &["++++++++", "-++---++", "+----+--"],
    )
}

pub const F2_BLOCKS: [&[usize]; 2] = [&[0, 1, 2, 3, 4], &[3, 4, 5, 6, 7]];

/// `(x, x↔y)`: independent although both issues mention `x`.
pub fn f3() -> Agenda {
    Agenda::parse(&["x", "x <-> y"], "true").expect("fixture agenda")
}

pub const F3_BLOCKS: [&[usize]; 2] = [&[0], &[1]];

/// `(a, b)` with the profile `⟨{a,b}, {¬a,¬b}⟩`.
pub fn f4() -> Profile {
    profile(&["a", "b"], &["++", "--"])
}

pub const F4_BLOCKS: [&[usize]; 2] = [&[0], &[1]];

/// `(p, ¬p∨t, p↔q)` with overlapping blocks `{p, ¬p∨t}` and `{¬p∨t, p↔q}`.
pub fn overlapping() -> Agenda {
    Agenda::parse(&["p", "~p | t", "p <-> q"], "true").expect("fixture agenda")
}

pub const OVERLAPPING_BLOCKS: [&[usize]; 2] = [&[0, 1], &[1, 2]];

/// The preference agenda over three alternatives.
pub fn pref3() -> Agenda {
    make_preference_agenda(3).expect("fixture agenda")
}

pub fn blocks(b: &[&[usize]]) -> Vec<Vec<usize>> {
    b.iter().map(|x| x.to_vec()).collect()
}
