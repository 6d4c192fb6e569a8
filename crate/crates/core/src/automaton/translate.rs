//! Tableau translation from LTL to a state-based Büchi automaton.
//!
//! Each tableau state is a set of NNF obligations. Expanding a state yields
//! covers: consistent literal sets together with the obligations for the
//! next position. The resulting generalized automaton carries one acceptance
//! set per `U` subformula and is degeneralized with a level counter.

use std::collections::{BTreeSet, HashMap, VecDeque};

use super::graph::trim;
use super::{AcceptanceMode, BuchiAutomaton, Edge, Label, Literal, Translator};
use crate::error::{Error, Result};
use crate::formula::{simplify, to_nnf, Formula};

pub const DEFAULT_MAX_STATES: usize = 200_000;

/// The built-in translator.
#[derive(Clone, Debug)]
pub struct Tableau {
    pub max_states: usize,
}

impl Default for Tableau {
    fn default() -> Self {
        Tableau {
            max_states: DEFAULT_MAX_STATES,
        }
    }
}

impl Translator for Tableau {
    fn translate(&self, f: &Formula) -> Result<BuchiAutomaton> {
        build(f, self.max_states)
    }
}

/// Translates with the built-in tableau and the default state limit.
pub fn translate(f: &Formula) -> Result<BuchiAutomaton> {
    build(f, DEFAULT_MAX_STATES)
}

type NodeId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Node {
    True,
    False,
    Lit(usize, bool),
    And(NodeId, NodeId),
    Or(NodeId, NodeId),
    Next(NodeId),
    Until(NodeId, NodeId),
    Release(NodeId, NodeId),
}

struct Nodes {
    nodes: Vec<Node>,
    index: HashMap<Node, NodeId>,
    atoms: Vec<String>,
}

impl Nodes {
    fn add(&mut self, n: Node) -> NodeId {
        if let Some(&id) = self.index.get(&n) {
            return id;
        }
        let id = self.nodes.len();
        self.nodes.push(n.clone());
        self.index.insert(n, id);
        id
    }

    fn atom(&self, name: &str) -> usize {
        self.atoms
            .binary_search_by(|a| a.as_str().cmp(name))
            .expect("atom collected from formula")
    }

    /// `f` must be in negation normal form.
    fn intern(&mut self, f: &Formula) -> NodeId {
        let node = match f {
            Formula::True => Node::True,
            Formula::False => Node::False,
            Formula::Atom(a) => Node::Lit(self.atom(a), true),
            Formula::Not(inner) => match &**inner {
                Formula::Atom(a) => Node::Lit(self.atom(a), false),
                other => unreachable!("not in negation normal form: !{other}"),
            },
            Formula::And(l, r) => Node::And(self.intern(l), self.intern(r)),
            Formula::Or(l, r) => Node::Or(self.intern(l), self.intern(r)),
            Formula::Next(c) => Node::Next(self.intern(c)),
            Formula::Until(l, r) => Node::Until(self.intern(l), self.intern(r)),
            Formula::Release(l, r) => Node::Release(self.intern(l), self.intern(r)),
            Formula::Eventually(c) => {
                let t = self.add(Node::True);
                Node::Until(t, self.intern(c))
            }
            Formula::Globally(c) => {
                let f = self.add(Node::False);
                Node::Release(f, self.intern(c))
            }
            Formula::Implies(..) | Formula::Iff(..) => {
                unreachable!("not in negation normal form: {f}")
            }
        };
        self.add(node)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Cover {
    lits: BTreeSet<(usize, bool)>,
    next: BTreeSet<NodeId>,
    /// Indices of the `U` subformulas this step satisfies.
    acc: BTreeSet<usize>,
}

impl Cover {
    fn dominates(&self, other: &Cover) -> bool {
        self.lits.is_subset(&other.lits)
            && self.next.is_subset(&other.next)
            && self.acc.is_superset(&other.acc)
    }
}

struct Partial {
    todo: Vec<NodeId>,
    old: BTreeSet<NodeId>,
    lits: BTreeSet<(usize, bool)>,
    next: BTreeSet<NodeId>,
}

fn expand(nodes: &Nodes, untils: &[(NodeId, NodeId)], state: &BTreeSet<NodeId>) -> Vec<Cover> {
    let mut covers = Vec::new();
    let mut stack = vec![Partial {
        todo: state.iter().rev().copied().collect(),
        old: BTreeSet::new(),
        lits: BTreeSet::new(),
        next: BTreeSet::new(),
    }];
    'partials: while let Some(mut p) = stack.pop() {
        while let Some(f) = p.todo.pop() {
            if !p.old.insert(f) {
                continue;
            }
            match nodes.nodes[f] {
                Node::True => {}
                Node::False => continue 'partials,
                Node::Lit(a, pos) => {
                    if p.lits.contains(&(a, !pos)) {
                        continue 'partials;
                    }
                    p.lits.insert((a, pos));
                }
                Node::And(l, r) => {
                    p.todo.push(r);
                    p.todo.push(l);
                }
                Node::Or(l, r) => {
                    let mut alt = Partial {
                        todo: p.todo.clone(),
                        old: p.old.clone(),
                        lits: p.lits.clone(),
                        next: p.next.clone(),
                    };
                    alt.todo.push(r);
                    stack.push(alt);
                    p.todo.push(l);
                }
                Node::Next(c) => {
                    p.next.insert(c);
                }
                Node::Until(l, r) => {
                    let mut alt = Partial {
                        todo: p.todo.clone(),
                        old: p.old.clone(),
                        lits: p.lits.clone(),
                        next: p.next.clone(),
                    };
                    alt.todo.push(l);
                    alt.next.insert(f);
                    stack.push(alt);
                    p.todo.push(r);
                }
                Node::Release(l, r) => {
                    let mut alt = Partial {
                        todo: p.todo.clone(),
                        old: p.old.clone(),
                        lits: p.lits.clone(),
                        next: p.next.clone(),
                    };
                    alt.todo.push(r);
                    alt.next.insert(f);
                    stack.push(alt);
                    p.todo.push(l);
                    p.todo.push(r);
                }
            }
        }
        let acc = untils
            .iter()
            .enumerate()
            .filter(|(_, &(u, r))| !p.old.contains(&u) || p.old.contains(&r))
            .map(|(i, _)| i)
            .collect();
        covers.push(Cover {
            lits: p.lits,
            next: p.next,
            acc,
        });
    }
    covers.sort();
    covers.dedup();
    let mut kept: Vec<Cover> = Vec::new();
    for (i, c) in covers.iter().enumerate() {
        let dominated = covers
            .iter()
            .enumerate()
            .any(|(j, d)| j != i && d.dominates(c) && (!c.dominates(d) || j < i));
        if !dominated {
            kept.push(c.clone());
        }
    }
    kept
}

struct GenEdge {
    src: usize,
    dst: usize,
    lits: BTreeSet<(usize, bool)>,
    acc: BTreeSet<usize>,
}

fn build(f: &Formula, max_states: usize) -> Result<BuchiAutomaton> {
    let f = simplify(&to_nnf(&simplify(f)));
    let atoms: Vec<String> = f.atoms().into_iter().collect();
    let mut nodes = Nodes {
        nodes: Vec::new(),
        index: HashMap::new(),
        atoms: atoms.clone(),
    };
    let root = nodes.intern(&f);
    let untils: Vec<(NodeId, NodeId)> = nodes
        .nodes
        .iter()
        .enumerate()
        .filter_map(|(id, n)| match n {
            Node::Until(_, r) => Some((id, *r)),
            _ => None,
        })
        .collect();

    // Generalized automaton over obligation sets.
    let mut states: Vec<BTreeSet<NodeId>> = vec![BTreeSet::from([root])];
    let mut ids: HashMap<BTreeSet<NodeId>, usize> = HashMap::from([(states[0].clone(), 0)]);
    let mut gen_edges = Vec::new();
    let mut cursor = 0;
    while cursor < states.len() {
        let covers = expand(&nodes, &untils, &states[cursor]);
        for c in covers {
            let dst = match ids.get(&c.next) {
                Some(&d) => d,
                None => {
                    if states.len() >= max_states {
                        return Err(Error::StateLimit { limit: max_states });
                    }
                    let d = states.len();
                    states.push(c.next.clone());
                    ids.insert(c.next.clone(), d);
                    d
                }
            };
            gen_edges.push(GenEdge {
                src: cursor,
                dst,
                lits: c.lits,
                acc: c.acc,
            });
        }
        cursor += 1;
    }

    let mut gen_out = vec![Vec::new(); states.len()];
    for (k, e) in gen_edges.iter().enumerate() {
        gen_out[e.src].push(k);
    }

    // Degeneralize: state (q, level), accepting at level k.
    let k = untils.len();
    let mut ba_ids: HashMap<(usize, usize), usize> = HashMap::from([((0, 0), 0)]);
    let mut ba_states = vec![(0usize, 0usize)];
    let mut queue = VecDeque::from([0usize]);
    let mut edges = Vec::new();
    while let Some(s) = queue.pop_front() {
        let (q, level) = ba_states[s];
        for &ge in &gen_out[q] {
            let t = &gen_edges[ge];
            let mut j = if level == k { 0 } else { level };
            while j < k && t.acc.contains(&j) {
                j += 1;
            }
            let key = (t.dst, j);
            let dst = match ba_ids.get(&key) {
                Some(&d) => d,
                None => {
                    if ba_states.len() >= max_states {
                        return Err(Error::StateLimit { limit: max_states });
                    }
                    let d = ba_states.len();
                    ba_states.push(key);
                    ba_ids.insert(key, d);
                    queue.push_back(d);
                    d
                }
            };
            let label = Label::from_iter(t.lits.iter().map(|&(a, pos)| Literal {
                atom: atoms[a].clone(),
                positive: pos,
            }));
            edges.push(Edge { src: s, dst, label });
        }
    }
    let accepting_states = (0..ba_states.len())
        .filter(|&s| ba_states[s].1 == k)
        .collect();
    let raw = BuchiAutomaton {
        states: ba_states.len(),
        initial: vec![0],
        edges,
        accepting_states,
        accepting_edges: Vec::new(),
        acceptance: AcceptanceMode::StateBased,
        ap: atoms,
    };
    Ok(reduce(trim(&raw)))
}

/// Drops parallel edges subsumed by a weaker label and merges states with
/// identical acceptance and outgoing edges, until nothing changes.
fn reduce(mut a: BuchiAutomaton) -> BuchiAutomaton {
    loop {
        a = drop_subsumed_edges(a);
        let acc = a.state_flags();
        let out = a.out_edges();
        let mut sig_owner: HashMap<(bool, Vec<(Label, usize)>), usize> = HashMap::new();
        let mut rep: Vec<usize> = (0..a.states).collect();
        let mut merged = false;
        for s in 0..a.states {
            let mut sig: Vec<(Label, usize)> = out[s]
                .iter()
                .map(|&k| {
                    let e = &a.edges[k];
                    // Self-loops are compared as loops, not by state number.
                    let d = if e.dst == s { usize::MAX } else { e.dst };
                    (e.label.clone(), d)
                })
                .collect();
            sig.sort();
            match sig_owner.get(&(acc[s], sig.clone())) {
                Some(&owner) => {
                    rep[s] = owner;
                    merged = true;
                }
                None => {
                    sig_owner.insert((acc[s], sig), s);
                }
            }
        }
        if merged {
            a = quotient(&a, &rep);
            continue;
        }
        match simulation_reduce(&a) {
            Some(smaller) => a = trim(&smaller),
            None => return a,
        }
    }
}

/// Above this size the quadratic simulation is not attempted.
const SIMULATION_LIMIT: usize = 600;

/// `l` requires every literal of `weaker`.
fn label_implies(l: &Label, weaker: &Label) -> bool {
    weaker.literals().iter().all(|x| l.contains(x))
}

/// `sim[q][r]` holds when `r` directly simulates `q`.
fn direct_simulation(a: &BuchiAutomaton) -> Vec<Vec<bool>> {
    let acc = a.state_flags();
    let out = a.out_edges();
    let n = a.states;
    let mut sim: Vec<Vec<bool>> = (0..n).map(|q| (0..n).map(|r| !acc[q] || acc[r]).collect()).collect();
    let mut changed = true;
    while changed {
        changed = false;
        for q in 0..n {
            for r in 0..n {
                if q == r || !sim[q][r] {
                    continue;
                }
                let ok = out[q].iter().all(|&i| {
                    let ei = &a.edges[i];
                    out[r].iter().any(|&j| {
                        let ej = &a.edges[j];
                        sim[ei.dst][ej.dst] && label_implies(&ei.label, &ej.label)
                    })
                });
                if !ok {
                    sim[q][r] = false;
                    changed = true;
                }
            }
        }
    }
    sim
}

/// Merges simulation-equivalent states, then drops edges and initial
/// states dominated by another one. `None` if nothing changes.
fn simulation_reduce(a: &BuchiAutomaton) -> Option<BuchiAutomaton> {
    if a.states > SIMULATION_LIMIT || a.acceptance != AcceptanceMode::StateBased {
        return None;
    }
    let sim = direct_simulation(a);
    let rep: Vec<usize> = (0..a.states)
        .map(|s| (0..=s).find(|&t| sim[s][t] && sim[t][s]).unwrap_or(s))
        .collect();
    if rep.iter().enumerate().any(|(s, &r)| r != s) {
        return Some(quotient(a, &rep));
    }
    let edge_dominates = |j: usize, i: usize| {
        let (ei, ej) = (&a.edges[i], &a.edges[j]);
        ei.src == ej.src && sim[ei.dst][ej.dst] && label_implies(&ei.label, &ej.label)
    };
    let out = a.out_edges();
    let mut keep = vec![true; a.edges.len()];
    for ks in &out {
        for &i in ks {
            keep[i] = !ks
                .iter()
                .any(|&j| j != i && edge_dominates(j, i) && (!edge_dominates(i, j) || j < i));
        }
    }
    let initial: Vec<usize> = a
        .initial
        .iter()
        .copied()
        .filter(|&i| {
            !a.initial
                .iter()
                .any(|&j| j != i && sim[i][j] && (!sim[j][i] || j < i))
        })
        .collect();
    if keep.iter().all(|&k| k) && initial.len() == a.initial.len() {
        return None;
    }
    let edges = a
        .edges
        .iter()
        .zip(&keep)
        .filter(|(_, &k)| k)
        .map(|(e, _)| e.clone())
        .collect();
    Some(BuchiAutomaton {
        edges,
        initial,
        ..a.clone()
    })
}

fn drop_subsumed_edges(a: BuchiAutomaton) -> BuchiAutomaton {
    let mut keep = vec![true; a.edges.len()];
    let out = a.out_edges();
    for ks in &out {
        for &i in ks {
            for &j in ks {
                if i == j || !keep[j] {
                    continue;
                }
                let (ei, ej) = (&a.edges[i], &a.edges[j]);
                if ei.dst != ej.dst {
                    continue;
                }
                let subsumed = ej.label.literals().iter().all(|l| ei.label.contains(l));
                if subsumed && (ei.label != ej.label || j < i) {
                    keep[i] = false;
                    break;
                }
            }
        }
    }
    if keep.iter().all(|&k| k) {
        return a;
    }
    let edges = a
        .edges
        .iter()
        .zip(&keep)
        .filter(|(_, &k)| k)
        .map(|(e, _)| e.clone())
        .collect();
    BuchiAutomaton { edges, ..a }
}

fn quotient(a: &BuchiAutomaton, rep: &[usize]) -> BuchiAutomaton {
    let mut map = vec![usize::MAX; a.states];
    let mut n = 0;
    for s in 0..a.states {
        if rep[s] == s {
            map[s] = n;
            n += 1;
        }
    }
    let class = |s: usize| map[rep[s]];
    let mut seen = BTreeSet::new();
    let mut edges = Vec::new();
    for e in &a.edges {
        let edge = Edge {
            src: class(e.src),
            dst: class(e.dst),
            label: e.label.clone(),
        };
        if seen.insert((edge.src, edge.dst, edge.label.clone())) {
            edges.push(edge);
        }
    }
    let mut initial: Vec<usize> = a.initial.iter().map(|&s| class(s)).collect();
    initial.sort();
    initial.dedup();
    let mut accepting_states: Vec<usize> = a.accepting_states.iter().map(|&s| class(s)).collect();
    accepting_states.sort();
    accepting_states.dedup();
    BuchiAutomaton {
        states: n,
        initial,
        edges,
        accepting_states,
        accepting_edges: Vec::new(),
        acceptance: a.acceptance,
        ap: a.ap.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::is_empty;
    use crate::formula::parse_formula;

    fn ba(text: &str) -> BuchiAutomaton {
        translate(&parse_formula(text).unwrap()).unwrap()
    }

    #[test]
    fn unsatisfiable_formulas_have_no_edges() {
        for text in ["a & !a", "F (a & G !a)", "G a & F !a", "false", "G (a U b) & F G !b"] {
            let a = ba(text);
            assert!(a.edges.is_empty(), "{text}: {a:?}");
            assert!(is_empty(&a), "{text}");
        }
    }

    #[test]
    fn satisfiable_formulas_are_nonempty() {
        for text in ["a", "G F a & G F !a", "a U b", "F G a", "true", "X X !a"] {
            let a = ba(text);
            assert!(a.validate().is_ok());
            assert!(!is_empty(&a), "{text}");
        }
    }

    #[test]
    fn translation_is_deterministic() {
        let f = parse_formula("G (a -> F b) & F G !c").unwrap();
        assert_eq!(translate(&f).unwrap(), translate(&f).unwrap());
    }

    #[test]
    fn state_limit_is_reported() {
        let f = parse_formula("G F a & G F b & G F c").unwrap();
        let err = Tableau { max_states: 2 }.translate(&f).unwrap_err();
        assert!(matches!(err, Error::StateLimit { limit: 2 }));
    }

    #[test]
    fn globally_atom_is_one_state() {
        let a = ba("G a");
        assert_eq!(a.states, 1);
        assert_eq!(a.edges.len(), 1);
        assert_eq!(a.accepting_states, vec![0]);
    }
}
