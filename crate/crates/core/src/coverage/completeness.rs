use rayon::prelude::*;

use super::{automaton_coverage, AutomatonCoverage};
use crate::automaton::{BuchiAutomaton, Translator};
use crate::error::Result;
use crate::formula::{render_formula, simplify, Formula};
use crate::scalar::CoverageScalar;

pub struct CompletenessInput<'a> {
    pub assumptions: &'a [Formula],
    pub required: &'a [Formula],
    pub forbidden: &'a [Formula],
    pub candidates: Vec<Formula>,
    pub rounds: usize,
    pub max_paths: usize,
    pub jobs: usize,
    pub translator: &'a dyn Translator,
}

/// The candidate chosen in one round.
#[derive(Clone, Debug, PartialEq)]
pub struct Round<S> {
    pub selected: Formula,
    pub coverage: S,
    pub evaluated: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoverageReport<S> {
    /// Coverage of the assumptions by the description before any candidate.
    pub baseline: S,
    /// Number of almost-simple accepting paths of the assumption automaton.
    pub baseline_paths: usize,
    pub rounds: Vec<Round<S>>,
    pub diagnostics: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    Continue,
    Stop,
}

/// `∧required ∨ ∨forbidden`, where no required formulas contribute `false`.
fn description(required: &[Formula], forbidden: &[Formula]) -> Formula {
    let req = if required.is_empty() {
        Formula::False
    } else {
        Formula::conjunction(required.iter().cloned())
    };
    Formula::disjunction(std::iter::once(req).chain(forbidden.iter().cloned()))
}

fn cover<S: CoverageScalar>(
    base: &BuchiAutomaton,
    f: &Formula,
    input: &CompletenessInput,
) -> Result<AutomatonCoverage<S>> {
    let a = input.translator.translate(&simplify(f))?;
    automaton_coverage(base, &a, input.max_paths)
}

/// Greedy completion of the description. Each round adds, by disjunction,
/// the candidate that maximises the coverage of the assumption automaton;
/// equal coverage goes to the candidate with the smallest rendered text.
/// `on_round` sees every selection and may stop the loop.
pub fn completeness_loop<S: CoverageScalar>(
    input: &CompletenessInput,
    mut on_round: impl FnMut(&Round<S>) -> Decision,
) -> Result<CoverageReport<S>> {
    let base = input
        .translator
        .translate(&simplify(&Formula::conjunction(input.assumptions.iter().cloned())))?;
    let mut desc = description(input.required, input.forbidden);
    let start: AutomatonCoverage<S> = cover(&base, &desc, input)?;
    let mut report = CoverageReport {
        baseline: start.value,
        baseline_paths: start.paths,
        rounds: Vec::new(),
        diagnostics: start.diagnostic.into_iter().collect(),
    };
    let pool_threads = rayon::ThreadPoolBuilder::new()
        .num_threads(input.jobs.max(1))
        .build()
        .expect("thread pool");
    let mut pool = input.candidates.clone();
    for _ in 0..input.rounds {
        if pool.is_empty() {
            break;
        }
        let results: Vec<Result<AutomatonCoverage<S>>> = pool_threads.install(|| {
            pool.par_iter()
                .map(|c| cover(&base, &Formula::or(desc.clone(), c.clone()), input))
                .collect()
        });
        let mut best: Option<(usize, S, String)> = None;
        let mut skipped = Vec::new();
        for (i, r) in results.into_iter().enumerate() {
            let value = match r {
                Ok(c) => c.value,
                Err(e) if e.is_capacity() => {
                    report
                        .diagnostics
                        .push(format!("candidate '{}' skipped: {e}", render_formula(&pool[i])));
                    skipped.push(i);
                    continue;
                }
                Err(e) => return Err(e),
            };
            let text = render_formula(&pool[i]);
            let better = match &best {
                None => true,
                Some((_, v, t)) => value > *v || (value == *v && text < *t),
            };
            if better {
                best = Some((i, value, text));
            }
        }
        let evaluated = pool.len() - skipped.len();
        let Some((i, value, _)) = best else {
            break;
        };
        let selected = pool[i].clone();
        pool = pool
            .into_iter()
            .enumerate()
            .filter(|(k, _)| *k != i && !skipped.contains(k))
            .map(|(_, c)| c)
            .collect();
        desc = Formula::or(desc, selected.clone());
        let round = Round {
            selected,
            coverage: value,
            evaluated,
        };
        let decision = on_round(&round);
        report.rounds.push(round);
        if decision == Decision::Stop {
            break;
        }
    }
    Ok(report)
}
