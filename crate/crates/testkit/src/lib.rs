//! Independent oracles and generators for tests.

use std::collections::BTreeSet;

use rand::Rng;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use reqsane::automaton::{AcceptanceMode, BuchiAutomaton, Edge, Label, LassoWord, Literal};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use reqsane::automaton::check_sat;
use reqsane::formula::{Formula, QuantifiedFormula, Quantifier};
use reqsane::sanity::{CheckRecord, Verdict};

/// An ultimately periodic word `stem · cycle^ω`; each letter is the set of
/// atoms that hold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word {
    pub stem: Vec<BTreeSet<String>>,
    pub cycle: Vec<BTreeSet<String>>,
}

impl Word {
    pub fn new(stem: &[&[&str]], cycle: &[&[&str]]) -> Self {
        let conv = |ls: &[&[&str]]| -> Vec<BTreeSet<String>> {
            ls.iter()
                .map(|l| l.iter().map(|s| s.to_string()).collect())
                .collect()
        };
        assert!(!cycle.is_empty());
        Word {
            stem: conv(stem),
            cycle: conv(cycle),
        }
    }

    /// Reads a witness, letting every unconstrained atom be false.
    pub fn from_lasso_word(w: &LassoWord) -> Self {
        let conv = |labels: &[reqsane::automaton::Label]| -> Vec<BTreeSet<String>> {
            labels
                .iter()
                .map(|l| {
                    l.literals()
                        .iter()
                        .filter(|lit| lit.positive)
                        .map(|lit| lit.atom.clone())
                        .collect()
                })
                .collect()
        };
        Word {
            stem: conv(&w.stem),
            cycle: conv(&w.cycle),
        }
    }

    fn len(&self) -> usize {
        self.stem.len() + self.cycle.len()
    }

    fn letter(&self, i: usize) -> &BTreeSet<String> {
        if i < self.stem.len() {
            &self.stem[i]
        } else {
            &self.cycle[i - self.stem.len()]
        }
    }

    fn succ(&self, i: usize) -> usize {
        if i + 1 < self.len() {
            i + 1
        } else {
            self.stem.len()
        }
    }
}

/// Truth of `f` at every position of the lasso. `U` is computed as a least
/// fixpoint and `R` as a greatest fixpoint over the successor map.
fn eval_all(f: &Formula, w: &Word) -> Vec<bool> {
    let n = w.len();
    let fix = |init: bool, step: &dyn Fn(usize, &[bool]) -> bool| -> Vec<bool> {
        let mut v = vec![init; n];
        loop {
            let next: Vec<bool> = (0..n).map(|i| step(i, &v)).collect();
            if next == v {
                return v;
            }
            v = next;
        }
    };
    match f {
        Formula::True => vec![true; n],
        Formula::False => vec![false; n],
        Formula::Atom(a) => (0..n).map(|i| w.letter(i).contains(a)).collect(),
        Formula::Not(c) => eval_all(c, w).into_iter().map(|b| !b).collect(),
        Formula::And(l, r) => zip(eval_all(l, w), eval_all(r, w), |a, b| a && b),
        Formula::Or(l, r) => zip(eval_all(l, w), eval_all(r, w), |a, b| a || b),
        Formula::Implies(l, r) => zip(eval_all(l, w), eval_all(r, w), |a, b| !a || b),
        Formula::Iff(l, r) => zip(eval_all(l, w), eval_all(r, w), |a, b| a == b),
        Formula::Next(c) => {
            let v = eval_all(c, w);
            (0..n).map(|i| v[w.succ(i)]).collect()
        }
        Formula::Until(l, r) => {
            let (lv, rv) = (eval_all(l, w), eval_all(r, w));
            fix(false, &|i, v| rv[i] || (lv[i] && v[w.succ(i)]))
        }
        Formula::Release(l, r) => {
            let (lv, rv) = (eval_all(l, w), eval_all(r, w));
            fix(true, &|i, v| rv[i] && (lv[i] || v[w.succ(i)]))
        }
        Formula::Eventually(c) => {
            let v = eval_all(c, w);
            fix(false, &|i, acc| v[i] || acc[w.succ(i)])
        }
        Formula::Globally(c) => {
            let v = eval_all(c, w);
            fix(true, &|i, acc| v[i] && acc[w.succ(i)])
        }
    }
}

fn zip(a: Vec<bool>, b: Vec<bool>, op: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.into_iter().zip(b).map(|(x, y)| op(x, y)).collect()
}

/// Whether the word satisfies `f` at position 0.
pub fn holds(f: &Formula, w: &Word) -> bool {
    eval_all(f, w)[0]
}

/// Whether the automaton accepts the word, by searching the product of
/// automaton states and word positions for a reachable accepting cycle.
pub fn accepts(a: &BuchiAutomaton, w: &Word) -> bool {
    let n = w.len();
    let node = |q: usize, i: usize| q * n + i;
    let total = a.states * n;
    let mut succ: Vec<Vec<(usize, usize)>> = vec![Vec::new(); total];
    for (k, e) in a.edges.iter().enumerate() {
        for i in 0..n {
            let letter: Vec<&str> = w.letter(i).iter().map(|s| s.as_str()).collect();
            if e.label.admits(&letter) {
                succ[node(e.src, i)].push((k, node(e.dst, w.succ(i))));
            }
        }
    }
    let reach_from = |start: usize| -> Vec<bool> {
        let mut seen = vec![false; total];
        let mut work = vec![start];
        seen[start] = true;
        while let Some(v) = work.pop() {
            for &(_, t) in &succ[v] {
                if !seen[t] {
                    seen[t] = true;
                    work.push(t);
                }
            }
        }
        seen
    };
    let mut reachable = vec![false; total];
    for &q in &a.initial {
        for (v, r) in reach_from(node(q, 0)).into_iter().enumerate() {
            reachable[v] |= r;
        }
    }
    let state_acc: BTreeSet<usize> = a.accepting_states.iter().copied().collect();
    let edge_acc: BTreeSet<usize> = a.accepting_edges.iter().copied().collect();
    for v in 0..total {
        if !reachable[v] {
            continue;
        }
        for &(k, t) in &succ[v] {
            let accepting = match a.acceptance {
                AcceptanceMode::StateBased => state_acc.contains(&(v / n)),
                AcceptanceMode::TransitionBased => edge_acc.contains(&k),
            };
            if accepting && reach_from(t)[v] {
                return true;
            }
        }
    }
    false
}

/// Every lasso over `atoms` with stem length at most `max_stem` and cycle
/// length between 1 and `max_cycle`.
pub fn all_words(atoms: &[String], max_stem: usize, max_cycle: usize) -> Vec<Word> {
    let letters: Vec<BTreeSet<String>> = (0u32..1 << atoms.len())
        .map(|m| {
            atoms
                .iter()
                .enumerate()
                .filter(|(i, _)| m >> i & 1 == 1)
                .map(|(_, a)| a.clone())
                .collect()
        })
        .collect();
    let sequences = |len: usize| -> Vec<Vec<BTreeSet<String>>> {
        let mut out = vec![Vec::new()];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|s| {
                    letters.iter().map(move |l| {
                        let mut t = s.clone();
                        t.push(l.clone());
                        t
                    })
                })
                .collect();
        }
        out
    };
    let mut words = Vec::new();
    for stem_len in 0..=max_stem {
        for cycle_len in 1..=max_cycle {
            for stem in sequences(stem_len) {
                for cycle in sequences(cycle_len) {
                    words.push(Word {
                        stem: stem.clone(),
                        cycle,
                    });
                }
            }
        }
    }
    words
}

pub fn atoms(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// A random formula over `atoms` with operator nesting at most `depth`.
pub fn random_formula<R: Rng>(rng: &mut R, atoms: &[String], depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.2) {
        return match rng.gen_range(0..10) {
            0 => Formula::True,
            1 => Formula::False,
            _ => Formula::atom(atoms[rng.gen_range(0..atoms.len())].clone()),
        };
    }
    let sub = |rng: &mut R| random_formula(rng, atoms, depth - 1);
    match rng.gen_range(0..12) {
        0 => Formula::not(sub(rng)),
        1 => Formula::and(sub(rng), sub(rng)),
        2 => Formula::or(sub(rng), sub(rng)),
        3 => Formula::implies(sub(rng), sub(rng)),
        4 => Formula::iff(sub(rng), sub(rng)),
        5 => Formula::next(sub(rng)),
        6 => Formula::until(sub(rng), sub(rng)),
        7 => Formula::release(sub(rng), sub(rng)),
        8 | 9 => Formula::eventually(sub(rng)),
        _ => Formula::globally(sub(rng)),
    }
}

pub fn random_word<R: Rng>(rng: &mut R, atoms: &[String], max_stem: usize, max_cycle: usize) -> Word {
    let letter = |rng: &mut R| -> BTreeSet<String> {
        atoms.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect()
    };
    let stem_len = rng.gen_range(0..=max_stem);
    let cycle_len = rng.gen_range(1..=max_cycle.max(1));
    Word {
        stem: (0..stem_len).map(|_| letter(rng)).collect(),
        cycle: (0..cycle_len).map(|_| letter(rng)).collect(),
    }
}

/// Every subset of `0..n` as a sorted index list, in increasing bitmask order.
pub fn all_subsets(n: usize) -> Vec<Vec<usize>> {
    (0u64..(1 << n))
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
        .collect()
}

/// Minimal inconsistent subsets by exhaustive enumeration, given a
/// consistency oracle over index sets.
pub fn brute_force_minimal_inconsistent(
    n: usize,
    mut consistent: impl FnMut(&[usize]) -> bool,
) -> Vec<Vec<usize>> {
    let subsets = all_subsets(n);
    let incon: Vec<&Vec<usize>> = subsets.iter().filter(|s| !consistent(s)).collect();
    let mut minimal: Vec<Vec<usize>> = incon
        .iter()
        .filter(|s| {
            !incon
                .iter()
                .any(|t| t.len() < s.len() && t.iter().all(|x| s.contains(x)))
        })
        .map(|s| (*s).clone())
        .collect();
    minimal.sort();
    minimal
}

/// A random automaton over `atoms` with random labels and acceptance.
pub fn random_automaton<R: Rng>(
    rng: &mut R,
    atoms: &[String],
    max_states: usize,
    acceptance: AcceptanceMode,
) -> BuchiAutomaton {
    let states = rng.gen_range(1..=max_states);
    let mut edges = Vec::new();
    for src in 0..states {
        for _ in 0..rng.gen_range(0..=2) {
            let dst = rng.gen_range(0..states);
            let lits: Vec<Literal> = atoms
                .iter()
                .filter_map(|a| match rng.gen_range(0..3) {
                    0 => Some(Literal::pos(a.as_str())),
                    1 => Some(Literal::neg(a.as_str())),
                    _ => None,
                })
                .collect();
            edges.push(Edge {
                src,
                dst,
                label: Label::new(lits),
            });
        }
    }
    let accepting_states = (0..states).filter(|_| rng.gen_bool(0.4)).collect();
    let accepting_edges = (0..edges.len()).filter(|_| rng.gen_bool(0.4)).collect();
    let (accepting_states, accepting_edges) = match acceptance {
        AcceptanceMode::StateBased => (accepting_states, Vec::new()),
        AcceptanceMode::TransitionBased => (Vec::new(), accepting_edges),
    };
    BuchiAutomaton {
        states,
        initial: vec![0],
        edges,
        accepting_states,
        accepting_edges,
        acceptance,
        ap: atoms.to_vec(),
    }
}

/// Almost-simple accepting paths by extending every edge sequence from an
/// initial state while no state occurs three times.
pub fn brute_force_paths(a: &BuchiAutomaton) -> BTreeSet<Vec<usize>> {
    fn go(a: &BuchiAutomaton, path: &mut Vec<usize>, visits: &mut Vec<usize>, out: &mut BTreeSet<Vec<usize>>) {
        let here = path.last().map_or(0, |&e| a.edges[e].dst);
        for (k, e) in a.edges.iter().enumerate() {
            if e.src != here || visits[e.dst] == 2 {
                continue;
            }
            path.push(k);
            visits[e.dst] += 1;
            let accepting = match a.acceptance {
                AcceptanceMode::StateBased => a.accepting_states.contains(&e.dst),
                AcceptanceMode::TransitionBased => a.accepting_edges.contains(&k),
            };
            if accepting {
                out.insert(path.clone());
            }
            go(a, path, visits, out);
            visits[e.dst] -= 1;
            path.pop();
        }
    }
    assert_eq!(a.initial, vec![0], "oracle supports a single initial state 0");
    let mut out = BTreeSet::new();
    let mut visits = vec![0; a.states];
    visits[0] = 1;
    go(a, &mut Vec::new(), &mut visits, &mut out);
    out
}

/// Edge coverage straight from the definition over literal sets.
pub fn edge_coverage_oracle(a1: &Label, a2: &Label) -> BigRational {
    let s1: BTreeSet<(String, bool)> = a1.literals().iter().map(|l| (l.atom.clone(), l.positive)).collect();
    let s2: BTreeSet<(String, bool)> = a2.literals().iter().map(|l| (l.atom.clone(), l.positive)).collect();
    if s1.iter().any(|(x, p)| s2.contains(&(x.clone(), !p))) {
        return BigRational::zero();
    }
    if s2.is_empty() {
        return BigRational::one();
    }
    let common = s1.intersection(&s2).count();
    BigRational::new(BigInt::from(common), BigInt::from(s2.len()))
}

/// Path coverage by scoring every walk of `a2` with as many edges as
/// `path`. Walks containing a zero-scored edge pair do not count.
pub fn path_coverage_oracle(a1: &BuchiAutomaton, path: &[usize], a2: &BuchiAutomaton) -> BigRational {
    let mut walks: Vec<(usize, Vec<usize>)> = a2.initial.iter().map(|&s| (s, Vec::new())).collect();
    for _ in 0..path.len() {
        walks = walks
            .into_iter()
            .flat_map(|(s, w)| {
                a2.edges
                    .iter()
                    .enumerate()
                    .filter(move |(_, e)| e.src == s)
                    .map(move |(k, e)| {
                        let mut w = w.clone();
                        w.push(k);
                        (e.dst, w)
                    })
            })
            .collect();
    }
    let n = BigRational::from_integer(BigInt::from(path.len()));
    walks
        .iter()
        .filter_map(|(_, w)| {
            let scores: Vec<BigRational> = path
                .iter()
                .zip(w)
                .map(|(&e1, &e2)| edge_coverage_oracle(&a1.edges[e1].label, &a2.edges[e2].label))
                .collect();
            if scores.iter().any(|x| x.is_zero()) {
                return None;
            }
            Some(scores.into_iter().fold(BigRational::zero(), |x, y| x + y) / n.clone())
        })
        .max()
        .unwrap_or_else(BigRational::zero)
}

/// Consistency of a quantified set by definition: every existential must be
/// jointly satisfiable with all universal formulas.
pub fn consistent_by_definition(gamma: &[QuantifiedFormula], set: &[usize]) -> bool {
    let sat = |fs: &[Formula]| check_sat(fs).unwrap().satisfiable;
    let univ: Vec<Formula> = set
        .iter()
        .filter(|&&i| gamma[i].is_universal())
        .map(|&i| gamma[i].body.clone())
        .collect();
    let exist: Vec<&Formula> = set
        .iter()
        .filter(|&&i| gamma[i].is_existential())
        .map(|&i| &gamma[i].body)
        .collect();
    if exist.is_empty() {
        return sat(&univ);
    }
    exist.into_iter().all(|e| {
        let mut fs = univ.clone();
        fs.push(e.clone());
        sat(&fs)
    })
}

/// Minimal consistent witnesses by exhaustive enumeration.
pub fn brute_force_redundancies(gamma: &[QuantifiedFormula]) -> Vec<(usize, Vec<usize>)> {
    let n = gamma.len();
    let mut out = Vec::new();
    for k in 0..n {
        let neg = reqsane::formula::negate_quantified(&gamma[k]);
        let mut ext = gamma.to_vec();
        ext.push(neg);
        let implies = |s: &[usize]| {
            let mut with = s.to_vec();
            with.push(n);
            !consistent_by_definition(&ext, &with)
        };
        let others: Vec<Vec<usize>> = all_subsets(n)
            .into_iter()
            .filter(|s| !s.contains(&k))
            .collect();
        let impliers: Vec<&Vec<usize>> = others.iter().filter(|s| implies(s)).collect();
        for s in &impliers {
            let minimal = !impliers
                .iter()
                .any(|t| t.len() < s.len() && t.iter().all(|x| s.contains(x)));
            if minimal && (s.is_empty() || consistent_by_definition(gamma, s)) {
                out.push((k, (*s).clone()));
            }
        }
    }
    out.sort();
    out
}

/// `n` random quantified formulas over `a` and `b` with nesting at most 2.
pub fn random_gamma(seed: u64, n: usize, existential_rate: f64) -> Vec<QuantifiedFormula> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ap = atoms(&["a", "b"]);
    (0..n)
        .map(|_| {
            let body = random_formula(&mut rng, &ap, 2);
            let quantifier = if rng.gen_bool(existential_rate) {
                Quantifier::Existential
            } else {
                Quantifier::Universal
            };
            QuantifiedFormula { quantifier, body }
        })
        .collect()
}

/// Checks dispatched although an earlier completed check already decided
/// them, and sets checked twice.
pub fn pruning_violations(records: &[&CheckRecord]) -> Vec<String> {
    let sub = |a: &[usize], b: &[usize]| a.iter().all(|x| b.contains(x));
    let mut out = Vec::new();
    for (i, r) in records.iter().enumerate() {
        for earlier in &records[..r.completed_before] {
            match earlier.verdict {
                Verdict::Inconsistent if sub(&earlier.set, &r.set) => {
                    out.push(format!("check {i} {:?} on superset of {:?}", r.set, earlier.set))
                }
                Verdict::Consistent if sub(&r.set, &earlier.set) => {
                    out.push(format!("check {i} {:?} on subset of {:?}", r.set, earlier.set))
                }
                _ => {}
            }
        }
    }
    let mut seen = BTreeSet::new();
    for r in records {
        if !seen.insert(r.set.clone()) {
            out.push(format!("{:?} checked twice", r.set));
        }
    }
    out
}
