//! Directed partial coverage between Büchi automata.
//!
//! The behaviour of an automaton is sampled by its almost-simple accepting
//! paths (no state more than twice). A path of `A1` is matched against the
//! walks of `A2` with the same number of edges; edges are compared by the
//! share of the `A2` literals that the `A1` edge also requires.

mod candidates;
mod completeness;

pub use candidates::{generate_candidates, CandidateOptions};
pub use completeness::{completeness_loop, CompletenessInput, CoverageReport, Decision, Round};

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::automaton::{AcceptanceMode, BuchiAutomaton, Label, Literal};
use crate::error::{Error, Result};
use crate::scalar::{lcm, CoverageScalar};

pub const DEFAULT_MAX_PATHS: usize = 100_000;

/// Edge indices of a path from an initial state.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AlmostSimplePath {
    pub edges: Vec<usize>,
}

impl AlmostSimplePath {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// The visited states, starting with the initial one.
    pub fn states(&self, a: &BuchiAutomaton) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.edges.len() + 1);
        if let Some(&first) = self.edges.first() {
            out.push(a.edges[first].src);
        }
        out.extend(self.edges.iter().map(|&k| a.edges[k].dst));
        out
    }
}

fn distinct(label: &Label) -> BTreeSet<&Literal> {
    label.literals().iter().collect()
}

/// Score of `a1` against `a2` as `(p, q)`: `None` when some literal of one
/// contradicts the other, `(1, 1)` when `a2` is empty, else `|a1 ∩ a2| / |a2|`.
fn edge_score(a1: &Label, a2: &Label) -> Option<(u128, u128)> {
    let s1 = distinct(a1);
    let s2 = distinct(a2);
    if s1.iter().any(|l| s2.iter().any(|m| l.is_negation_of(m))) {
        return None;
    }
    if s2.is_empty() {
        return Some((1, 1));
    }
    Some((s1.intersection(&s2).count() as u128, s2.len() as u128))
}

/// Directed partial coverage of edge label `a1` by edge label `a2`.
pub fn edge_coverage<S: CoverageScalar>(a1: &Label, a2: &Label) -> S {
    match edge_score(a1, a2) {
        None => S::zero(),
        Some((p, q)) => S::ratio(p, q),
    }
}

/// Integer edge scores in units of `1/unit`, with zero scores marked
/// incompatible.
struct ScoreTable {
    unit: u128,
    /// `scores[e1][e2]`
    scores: Vec<Vec<Option<u128>>>,
}

impl ScoreTable {
    fn new(a1: &BuchiAutomaton, a2: &BuchiAutomaton) -> Self {
        let unit = a2
            .edges
            .iter()
            .map(|e| distinct(&e.label).len().max(1) as u128)
            .fold(1, lcm);
        let scores = a1
            .edges
            .iter()
            .map(|e1| {
                a2.edges
                    .iter()
                    .map(|e2| match edge_score(&e1.label, &e2.label) {
                        Some((p, q)) if p > 0 => Some(p * (unit / q)),
                        _ => None,
                    })
                    .collect()
            })
            .collect();
        ScoreTable { unit, scores }
    }
}

/// Best total score reaching each state of `a2` after one more step.
fn step(a2: &BuchiAutomaton, table: &ScoreTable, e1: usize, dp: &[Option<u128>]) -> Vec<Option<u128>> {
    let mut next = vec![None; a2.states];
    for (k, e2) in a2.edges.iter().enumerate() {
        let (Some(base), Some(s)) = (dp[e2.src], table.scores[e1][k]) else {
            continue;
        };
        let total = base + s;
        if next[e2.dst].is_none_or(|cur| total > cur) {
            next[e2.dst] = Some(total);
        }
    }
    next
}

fn start(a2: &BuchiAutomaton) -> Vec<Option<u128>> {
    let mut dp = vec![None; a2.states];
    for &i in &a2.initial {
        dp[i] = Some(0);
    }
    dp
}

fn ends_accepting(a: &BuchiAutomaton, state_acc: &[bool], edge_acc: &[bool], edge: usize) -> bool {
    match a.acceptance {
        AcceptanceMode::StateBased => state_acc[a.edges[edge].dst],
        AcceptanceMode::TransitionBased => edge_acc[edge],
    }
}

/// Depth-first enumeration of almost-simple accepting paths. `visit` is
/// called with each accepting path and the per-step states of the DFS.
fn walk_paths<T>(
    a: &BuchiAutomaton,
    max_paths: usize,
    init: impl Fn() -> T,
    extend: impl Fn(&T, usize) -> T,
    mut visit: impl FnMut(&[usize], &T),
) -> Result<usize> {
    let out = a.out_edges();
    let state_acc = a.state_flags();
    let edge_acc = a.edge_flags();
    let mut count = vec![0u8; a.states];
    let mut found = 0usize;
    let mut roots: Vec<usize> = a.initial.clone();
    roots.dedup();
    for root in roots {
        count[root] += 1;
        let mut path: Vec<usize> = Vec::new();
        let mut stack: Vec<(usize, usize, T)> = vec![(root, 0, init())];
        while let Some(top) = stack.last_mut() {
            let (s, i) = (top.0, top.1);
            if i < out[s].len() {
                top.1 += 1;
                let e = out[s][i];
                let d = a.edges[e].dst;
                if count[d] >= 2 {
                    continue;
                }
                count[d] += 1;
                path.push(e);
                let data = extend(&top.2, e);
                if ends_accepting(a, &state_acc, &edge_acc, e) {
                    found += 1;
                    if found > max_paths {
                        return Err(Error::PathLimit { limit: max_paths });
                    }
                    visit(&path, &data);
                }
                stack.push((d, 0, data));
            } else {
                stack.pop();
                count[s] -= 1;
                if !stack.is_empty() {
                    path.pop();
                }
            }
        }
    }
    Ok(found)
}

/// All almost-simple paths from an initial state that end in an accepting
/// state (or, for transition-based automata, with an accepting edge).
pub fn enumerate_paths(a: &BuchiAutomaton, max_paths: usize) -> Result<Vec<AlmostSimplePath>> {
    let mut paths = Vec::new();
    walk_paths(
        a,
        max_paths,
        || (),
        |_, _| (),
        |p, _| paths.push(AlmostSimplePath { edges: p.to_vec() }),
    )?;
    Ok(paths)
}

/// Best coverage of `path` (a path of `a1`) by any walk of `a2` with the
/// same number of edges from an initial state. Walks through an edge pair
/// scoring zero are discarded; with no remaining walk the result is zero.
pub fn path_coverage<S: CoverageScalar>(a1: &BuchiAutomaton, path: &AlmostSimplePath, a2: &BuchiAutomaton) -> S {
    if path.is_empty() {
        return S::zero();
    }
    let table = ScoreTable::new(a1, a2);
    let mut dp = start(a2);
    for &e in &path.edges {
        dp = step(a2, &table, e, &dp);
    }
    finish(&dp, table.unit, path.len())
}

fn finish<S: CoverageScalar>(dp: &[Option<u128>], unit: u128, len: usize) -> S {
    match dp.iter().flatten().max() {
        Some(&best) => S::ratio(best, unit * len as u128),
        None => S::zero(),
    }
}

/// Coverage of `a1` by `a2` with the number of accepting paths of `a1`.
#[derive(Clone, Debug, PartialEq)]
pub struct AutomatonCoverage<S> {
    pub value: S,
    pub paths: usize,
    pub diagnostic: Option<String>,
}

/// Mean path coverage over the almost-simple accepting paths of `a1`. An
/// `a1` without such paths has nothing to cover and scores one.
pub fn automaton_coverage<S: CoverageScalar>(
    a1: &BuchiAutomaton,
    a2: &BuchiAutomaton,
    max_paths: usize,
) -> Result<AutomatonCoverage<S>> {
    let table = ScoreTable::new(a1, a2);
    let mut total = S::zero();
    let m = walk_paths(
        a1,
        max_paths,
        || start(a2),
        |dp, e| step(a2, &table, e, dp),
        |p, dp| total = total.clone() + finish::<S>(dp, table.unit, p.len()),
    )?;
    if m == 0 {
        return Ok(AutomatonCoverage {
            value: S::one(),
            paths: 0,
            diagnostic: Some(
                "the covered automaton has no almost-simple accepting path; coverage is vacuously 1"
                    .to_string(),
            ),
        });
    }
    Ok(AutomatonCoverage {
        value: total / S::ratio(m as u128, 1),
        paths: m,
        diagnostic: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::Edge;
    use num_rational::BigRational;

    fn l(text: &str) -> Label {
        Label::parse(text).unwrap()
    }

    fn q(n: u128, d: u128) -> BigRational {
        BigRational::ratio(n, d)
    }

    #[test]
    fn edge_scores() {
        assert_eq!(edge_coverage::<BigRational>(&l("a"), &l("a d")), q(1, 2));
        assert_eq!(edge_coverage::<BigRational>(&l("!a b"), &l("!c b")), q(1, 2));
        assert_eq!(edge_coverage::<BigRational>(&l("p"), &l("!p")), q(0, 1));
        assert_eq!(edge_coverage::<BigRational>(&l("c a"), &l("c")), q(1, 1));
        assert_eq!(edge_coverage::<BigRational>(&l("a d"), &l("a")), q(1, 1));
        assert_eq!(edge_coverage::<BigRational>(&l("a"), &l("")), q(1, 1));
    }

    #[test]
    fn self_loop_is_traversed_once() {
        let a = BuchiAutomaton {
            states: 1,
            initial: vec![0],
            edges: vec![Edge {
                src: 0,
                dst: 0,
                label: l("p"),
            }],
            accepting_states: vec![0],
            accepting_edges: vec![],
            acceptance: AcceptanceMode::StateBased,
            ap: vec!["p".into()],
        };
        let paths = enumerate_paths(&a, 10).unwrap();
        assert_eq!(paths, vec![AlmostSimplePath { edges: vec![0] }]);
    }

    #[test]
    fn path_limit() {
        let a = BuchiAutomaton {
            states: 1,
            initial: vec![0],
            edges: (0..3)
                .map(|_| Edge {
                    src: 0,
                    dst: 0,
                    label: l(""),
                })
                .collect(),
            accepting_states: vec![0],
            accepting_edges: vec![],
            acceptance: AcceptanceMode::StateBased,
            ap: vec![],
        };
        assert_eq!(enumerate_paths(&a, 3).unwrap().len(), 3);
        assert!(matches!(enumerate_paths(&a, 2), Err(Error::PathLimit { limit: 2 })));
    }
}
