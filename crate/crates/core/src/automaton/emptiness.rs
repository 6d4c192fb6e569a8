use serde::{Deserialize, Serialize};

use super::{AcceptanceMode, BuchiAutomaton, Label, Tableau, Translator};
use crate::error::Result;
use crate::formula::Formula;

/// An accepting run `stem · cycle^ω` given as edge indices. The stem starts
/// at an initial state and ends where the cycle starts and ends.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lasso {
    pub stem: Vec<usize>,
    pub cycle: Vec<usize>,
}

impl Lasso {
    /// Projects the run onto edge labels.
    pub fn word(&self, a: &BuchiAutomaton) -> LassoWord {
        LassoWord {
            stem: self.stem.iter().map(|&k| a.edges[k].label.clone()).collect(),
            cycle: self.cycle.iter().map(|&k| a.edges[k].label.clone()).collect(),
        }
    }

    /// Checks that this is a well-formed accepting run of `a`.
    pub fn is_accepting_run_of(&self, a: &BuchiAutomaton) -> bool {
        if self.cycle.is_empty() || self.stem.iter().chain(&self.cycle).any(|&k| k >= a.edges.len()) {
            return false;
        }
        let start = match self.stem.first().or(self.cycle.first()) {
            Some(&k) => a.edges[k].src,
            None => return false,
        };
        if !a.initial.contains(&start) {
            return false;
        }
        let path: Vec<usize> = self.stem.iter().chain(&self.cycle).copied().collect();
        if path.windows(2).any(|w| a.edges[w[0]].dst != a.edges[w[1]].src) {
            return false;
        }
        let first = a.edges[self.cycle[0]].src;
        if a.edges[*self.cycle.last().unwrap()].dst != first {
            return false;
        }
        match a.acceptance {
            AcceptanceMode::StateBased => {
                let acc = a.state_flags();
                self.cycle.iter().any(|&k| acc[a.edges[k].src])
            }
            AcceptanceMode::TransitionBased => {
                let acc = a.edge_flags();
                self.cycle.iter().any(|&k| acc[k])
            }
        }
    }
}

/// A lasso projected onto labels: each position lists the literals that hold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LassoWord {
    pub stem: Vec<Label>,
    pub cycle: Vec<Label>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SatResult {
    pub satisfiable: bool,
    pub witness: Option<LassoWord>,
}

/// Successor graph for nested DFS. In transition-based mode every accepting
/// edge is split by a virtual accepting node.
struct SearchGraph {
    succ: Vec<Vec<(Option<usize>, usize)>>,
    accepting: Vec<bool>,
}

impl SearchGraph {
    fn new(a: &BuchiAutomaton) -> Self {
        let mut succ = vec![Vec::new(); a.states];
        let mut accepting;
        match a.acceptance {
            AcceptanceMode::StateBased => {
                accepting = a.state_flags();
                for (k, e) in a.edges.iter().enumerate() {
                    succ[e.src].push((Some(k), e.dst));
                }
            }
            AcceptanceMode::TransitionBased => {
                accepting = vec![false; a.states];
                let acc = a.edge_flags();
                for (k, e) in a.edges.iter().enumerate() {
                    if acc[k] {
                        let mid = succ.len();
                        succ.push(vec![(None, e.dst)]);
                        accepting.push(true);
                        succ[e.src].push((Some(k), mid));
                    } else {
                        succ[e.src].push((Some(k), e.dst));
                    }
                }
            }
        }
        SearchGraph { succ, accepting }
    }
}

/// Finds an accepting lasso with a nested depth-first search.
pub fn accepting_lasso(a: &BuchiAutomaton) -> Option<Lasso> {
    let g = SearchGraph::new(a);
    let n = g.succ.len();
    let mut outer_seen = vec![false; n];
    let mut inner_seen = vec![false; n];

    for &init in &a.initial {
        if outer_seen[init] {
            continue;
        }
        outer_seen[init] = true;
        let mut stack: Vec<(usize, usize, Option<usize>)> = vec![(init, 0, None)];
        while let Some(top) = stack.last_mut() {
            let (v, i) = (top.0, top.1);
            if i < g.succ[v].len() {
                top.1 += 1;
                let (e, t) = g.succ[v][i];
                if !outer_seen[t] {
                    outer_seen[t] = true;
                    stack.push((t, 0, e));
                }
                continue;
            }
            if g.accepting[v] {
                if let Some(cycle) = inner_search(&g, v, &mut inner_seen) {
                    let stem = stack.iter().filter_map(|f| f.2).collect();
                    return Some(Lasso { stem, cycle });
                }
            }
            stack.pop();
        }
    }
    None
}

fn inner_search(g: &SearchGraph, seed: usize, seen: &mut [bool]) -> Option<Vec<usize>> {
    let mut stack: Vec<(usize, usize, Option<usize>)> = vec![(seed, 0, None)];
    while let Some(top) = stack.last_mut() {
        let (v, i) = (top.0, top.1);
        if i >= g.succ[v].len() {
            stack.pop();
            continue;
        }
        top.1 += 1;
        let (e, t) = g.succ[v][i];
        if t == seed {
            let mut cycle: Vec<usize> = stack.iter().filter_map(|f| f.2).collect();
            cycle.extend(e);
            return Some(cycle);
        }
        if !seen[t] {
            seen[t] = true;
            stack.push((t, 0, e));
        }
    }
    None
}

pub fn is_empty(a: &BuchiAutomaton) -> bool {
    accepting_lasso(a).is_none()
}

/// Satisfiability of a conjunction with the built-in translator.
pub fn check_sat(conjuncts: &[Formula]) -> Result<SatResult> {
    check_sat_with(conjuncts, &Tableau::default())
}

pub fn check_sat_with(conjuncts: &[Formula], translator: &dyn Translator) -> Result<SatResult> {
    let f = Formula::conjunction(conjuncts.iter().cloned());
    let a = translator.translate(&f)?;
    Ok(match accepting_lasso(&a) {
        Some(lasso) => SatResult {
            satisfiable: true,
            witness: Some(lasso.word(&a)),
        },
        None => SatResult {
            satisfiable: false,
            witness: None,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::Edge;

    fn edge(src: usize, dst: usize, label: &str) -> Edge {
        Edge {
            src,
            dst,
            label: Label::parse(label).unwrap(),
        }
    }

    fn two_state(acceptance: AcceptanceMode) -> BuchiAutomaton {
        BuchiAutomaton {
            states: 3,
            initial: vec![0],
            edges: vec![edge(0, 1, "a"), edge(1, 1, "b"), edge(1, 2, "c"), edge(2, 2, "")],
            accepting_states: vec![],
            accepting_edges: vec![],
            acceptance,
            ap: vec!["a".into(), "b".into(), "c".into()],
        }
    }

    #[test]
    fn state_based_lasso() {
        let mut a = two_state(AcceptanceMode::StateBased);
        assert!(accepting_lasso(&a).is_none());
        a.accepting_states = vec![1];
        let l = accepting_lasso(&a).unwrap();
        assert_eq!(l, Lasso { stem: vec![0], cycle: vec![1] });
        assert!(l.is_accepting_run_of(&a));
        a.accepting_states = vec![2];
        let l = accepting_lasso(&a).unwrap();
        assert!(l.is_accepting_run_of(&a));
        assert_eq!(l.cycle, vec![3]);
    }

    #[test]
    fn transition_based_lasso() {
        let mut a = two_state(AcceptanceMode::TransitionBased);
        a.accepting_edges = vec![2];
        assert!(accepting_lasso(&a).is_none());
        a.accepting_edges = vec![1];
        let l = accepting_lasso(&a).unwrap();
        assert!(l.is_accepting_run_of(&a));
        assert_eq!(l.cycle, vec![1]);
    }

    #[test]
    fn witness_word() {
        let r = check_sat(&[crate::formula::parse_formula("a & X G !a").unwrap()]).unwrap();
        assert!(r.satisfiable);
        let w = r.witness.unwrap();
        assert!(!w.cycle.is_empty());
    }
}
