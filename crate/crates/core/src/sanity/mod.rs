//! Consistency and redundancy analysis of quantified requirement sets.
//!
//! A set containing at most one existential formula is consistent iff the
//! conjunction of its bodies is satisfiable, and every minimal inconsistent
//! set has at most one existential member. Both searches therefore only
//! visit such candidate sets and strip the quantifiers before checking.

mod lattice;

pub use lattice::{CheckRecord, Verdict};

use serde::{Deserialize, Serialize};

use crate::automaton::{check_sat_with, Tableau, Translator};
use crate::error::Result;
use crate::formula::{negate_quantified, Formula, QuantifiedFormula};
use lattice::{Lattice, Set};

/// `target` is implied by the consistent set `witness`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Redundancy {
    pub target: usize,
    pub witness: Vec<usize>,
}

/// A set whose check hit a resource limit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Undecided {
    pub set: Vec<usize>,
    pub target: Option<usize>,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SanityReport {
    pub minimal_inconsistent: Vec<Vec<usize>>,
    pub redundancies: Vec<Redundancy>,
    pub undecided: Vec<Undecided>,
    pub checks_performed: usize,
    pub checks_possible: usize,
    #[serde(skip)]
    pub checks: Vec<CheckRecord>,
}

/// Every nonempty subset with at most one existential formula: all subsets
/// of the universal part, and each of them extended by one existential.
pub fn candidate_subsets(gamma: &[QuantifiedFormula]) -> impl Iterator<Item = Vec<usize>> {
    let universal: Vec<usize> = (0..gamma.len()).filter(|&i| gamma[i].is_universal()).collect();
    let existential: Vec<usize> = (0..gamma.len()).filter(|&i| gamma[i].is_existential()).collect();
    assert!(universal.len() < 64, "too many universal formulas to enumerate");
    (0u64..1 << universal.len()).flat_map(move |mask| {
        let base: Vec<usize> = universal
            .iter()
            .enumerate()
            .filter(|(b, _)| mask >> b & 1 == 1)
            .map(|(_, &i)| i)
            .collect();
        let mut out = Vec::new();
        if !base.is_empty() {
            out.push(base.clone());
        }
        for &e in &existential {
            let mut s = base.clone();
            let pos = s.binary_search(&e).unwrap_err();
            s.insert(pos, e);
            out.push(s);
        }
        out
    })
}

fn count_candidates(universal: usize, existential: usize, include_empty: bool) -> usize {
    let base = 1usize.checked_shl(universal as u32).unwrap_or(usize::MAX);
    let own = if include_empty { base } else { base - 1 };
    own.saturating_add(existential.saturating_mul(base))
}

fn existential_count(gamma: &[QuantifiedFormula], set: &[usize]) -> usize {
    set.iter().filter(|&&i| gamma[i].is_existential()).count()
}

/// Maximal candidates among `allowed`: the universal part plus one
/// existential, or the universal part alone if there is none.
fn maximal_candidates(gamma: &[QuantifiedFormula], allowed: &[usize]) -> Vec<Set> {
    let univ: Vec<usize> = allowed.iter().copied().filter(|&i| gamma[i].is_universal()).collect();
    let exist: Vec<usize> = allowed.iter().copied().filter(|&i| gamma[i].is_existential()).collect();
    if exist.is_empty() {
        return vec![univ];
    }
    exist
        .into_iter()
        .map(|e| {
            let mut s = univ.clone();
            let pos = s.binary_search(&e).unwrap_err();
            s.insert(pos, e);
            s
        })
        .collect()
}

fn bodies(gamma: &[QuantifiedFormula], set: &[usize]) -> Vec<Formula> {
    set.iter().map(|&i| gamma[i].body.clone()).collect()
}

pub fn find_min_inconsistent(gamma: &[QuantifiedFormula], jobs: usize) -> Result<SanityReport> {
    find_min_inconsistent_with(gamma, jobs, &Tableau::default())
}

pub fn find_min_inconsistent_with(
    gamma: &[QuantifiedFormula],
    jobs: usize,
    translator: &dyn Translator,
) -> Result<SanityReport> {
    let n = gamma.len();
    let all: Vec<usize> = (0..n).collect();
    let is_candidate = |s: &[usize]| !s.is_empty() && existential_count(gamma, s) <= 1;
    let check = |s: &[usize]| -> Result<bool> {
        Ok(check_sat_with(&bodies(gamma, s), translator)?.satisfiable)
    };
    let down_roots: Vec<Set> = maximal_candidates(gamma, &all)
        .into_iter()
        .filter(|s| !s.is_empty())
        .collect();
    let out = Lattice {
        n,
        is_candidate: &is_candidate,
        up_roots: (0..n).map(|i| vec![i]).collect(),
        down_roots,
        check: &check,
        jobs,
    }
    .run()?;
    let universal = gamma.iter().filter(|q| q.is_universal()).count();
    Ok(SanityReport {
        minimal_inconsistent: out.minimal_inconsistent,
        redundancies: Vec::new(),
        undecided: out
            .undecided
            .into_iter()
            .map(|(set, reason)| Undecided {
                set,
                target: None,
                reason,
            })
            .collect(),
        checks_performed: out.log.len(),
        checks_possible: count_candidates(universal, n - universal, false),
        checks: out
            .log
            .into_iter()
            .map(|(set, verdict, completed_before)| CheckRecord {
                set,
                target: None,
                verdict,
                completed_before,
                witness_check: false,
            })
            .collect(),
    })
}

pub fn find_redundancies(gamma: &[QuantifiedFormula], jobs: usize) -> Result<SanityReport> {
    find_redundancies_with(gamma, jobs, &Tableau::default())
}

/// For every formula, the minimal consistent sets of other formulas that
/// imply it. A witness `Φ` implies `φ` iff `Φ ∪ {¬φ}` is inconsistent, so
/// each target gets its own lattice search over `Φ`.
pub fn find_redundancies_with(
    gamma: &[QuantifiedFormula],
    jobs: usize,
    translator: &dyn Translator,
) -> Result<SanityReport> {
    let mut report = SanityReport::default();
    for (k, target) in gamma.iter().enumerate() {
        let negated = negate_quantified(target).body;
        // With a universal target the negation is existential, so the
        // witness may only draw on universal formulas.
        let allowed: Vec<usize> = (0..gamma.len())
            .filter(|&i| i != k && (target.is_existential() || gamma[i].is_universal()))
            .collect();
        let to_global = |local: &[usize]| -> Set { local.iter().map(|&j| allowed[j]).collect() };
        let is_candidate = |s: &[usize]| existential_count(gamma, &to_global(s)) <= 1;
        let check = |s: &[usize]| -> Result<bool> {
            let mut fs = bodies(gamma, &to_global(s));
            fs.push(negated.clone());
            Ok(check_sat_with(&fs, translator)?.satisfiable)
        };
        let down_roots: Vec<Set> = maximal_candidates(gamma, &allowed)
            .into_iter()
            .map(|s| s.iter().map(|g| allowed.binary_search(g).unwrap()).collect())
            .collect();
        let out = Lattice {
            n: allowed.len(),
            is_candidate: &is_candidate,
            up_roots: vec![Vec::new()],
            down_roots,
            check: &check,
            jobs,
        }
        .run()?;

        for (set, verdict, completed_before) in out.log {
            report.checks.push(CheckRecord {
                set: to_global(&set),
                target: Some(k),
                verdict,
                completed_before,
                witness_check: false,
            });
        }
        for (set, reason) in out.undecided {
            report.undecided.push(Undecided {
                set: to_global(&set),
                target: Some(k),
                reason,
            });
        }
        for local in out.minimal_inconsistent {
            let witness = to_global(&local);
            let consistent = if witness.is_empty() {
                true
            } else {
                let v = check_sat_with(&bodies(gamma, &witness), translator);
                let verdict = match &v {
                    Ok(r) if r.satisfiable => Verdict::Consistent,
                    Ok(_) => Verdict::Inconsistent,
                    Err(e) if e.is_capacity() => Verdict::Undecided,
                    Err(_) => return v.map(|_| report),
                };
                report.checks.push(CheckRecord {
                    set: witness.clone(),
                    target: Some(k),
                    verdict,
                    completed_before: 0,
                    witness_check: true,
                });
                if let Err(e) = v {
                    report.undecided.push(Undecided {
                        set: witness.clone(),
                        target: Some(k),
                        reason: e.to_string(),
                    });
                }
                verdict == Verdict::Consistent
            };
            if consistent {
                report.redundancies.push(Redundancy { target: k, witness });
            }
        }
        let univ = allowed.iter().filter(|&&i| gamma[i].is_universal()).count();
        report.checks_possible = report
            .checks_possible
            .saturating_add(count_candidates(univ, allowed.len() - univ, true));
    }
    report.checks_performed = report.checks.len();
    report.redundancies.sort();
    Ok(report)
}
