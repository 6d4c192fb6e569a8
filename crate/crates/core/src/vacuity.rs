//! Vacuity witnesses and their injection as existential requirements.
//!
//! Replacing a pure-polarity atom occurrence by the constant that makes it
//! irrelevant (`false` for positive, `true` for negative occurrences) gives
//! a formula whose models satisfy the original vacuously. Requiring the
//! negation of each witness on some path rules such systems out.

use serde::{Deserialize, Serialize};

use crate::automaton::{Tableau, Translator};
use crate::error::Result;
use crate::formula::{
    atom_occurrences, simplify, to_nnf, Formula, Polarity, QuantifiedFormula, Requirement,
};
use crate::sanity::find_redundancies_with;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witnesses {
    pub formulas: Vec<Formula>,
    /// Non-fatal notes: skipped mixed occurrences, vacuously valid inputs.
    pub diagnostics: Vec<String>,
}

/// Witnesses with diagnostics, one per pure-polarity atom occurrence,
/// dropping those equal to `f`, to `false`, to `true` or to an earlier one.
pub fn witnesses_with_diagnostics(f: &Formula) -> Witnesses {
    let original = simplify(f);
    let mut out = Witnesses::default();
    for occ in atom_occurrences(f) {
        let constant = match occ.polarity {
            Polarity::Positive => Formula::False,
            Polarity::Negative => Formula::True,
            Polarity::Mixed => {
                out.diagnostics
                    .push(format!("occurrence of '{}' has mixed polarity, skipped", occ.atom));
                continue;
            }
        };
        let replaced = f.replace_at(&occ.path, constant).expect("occurrence path is valid");
        let w = simplify(&replaced);
        if w == Formula::True {
            out.diagnostics.push(format!(
                "replacing '{}' makes the formula valid: it holds vacuously on every system",
                occ.atom
            ));
            continue;
        }
        if w == Formula::False || w == original || *f == w || out.formulas.contains(&w) {
            continue;
        }
        out.formulas.push(w);
    }
    out
}

pub fn witnesses(f: &Formula) -> Vec<Formula> {
    witnesses_with_diagnostics(f).formulas
}

/// The existential requirement ruling out a witness.
pub fn negated_witness(w: &Formula) -> QuantifiedFormula {
    QuantifiedFormula::existential(simplify(&to_nnf(&Formula::not(w.clone()))))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessSet {
    pub source: Requirement,
    pub witnesses: Vec<Formula>,
    /// New existential requirements contributed by this source.
    pub injected: Vec<Requirement>,
    pub diagnostics: Vec<String>,
}

/// An injected requirement removed because another existential implies it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dropped {
    pub requirement: Requirement,
    pub implied_by: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Augmented {
    pub requirements: Vec<Requirement>,
    pub witness_sets: Vec<WitnessSet>,
    pub dropped: Vec<Dropped>,
}

pub fn augment(reqs: &[Requirement], jobs: usize) -> Result<Augmented> {
    augment_with(reqs, jobs, &Tableau::default())
}

/// Appends the negated witnesses of every universal requirement as
/// existential requirements `<id>.w1`, `<id>.w2`, … and then drops each
/// injected requirement implied by another existential one, in order.
pub fn augment_with(reqs: &[Requirement], jobs: usize, translator: &dyn Translator) -> Result<Augmented> {
    let mut known: Vec<QuantifiedFormula> = reqs.iter().map(|r| r.formula.clone()).collect();
    let mut witness_sets = Vec::new();
    let mut injected: Vec<Requirement> = Vec::new();
    for r in reqs.iter().filter(|r| r.formula.is_universal()) {
        let ws = witnesses_with_diagnostics(&r.formula.body);
        let mut mine = Vec::new();
        for w in &ws.formulas {
            let q = negated_witness(w);
            if known.contains(&q) {
                continue;
            }
            known.push(q.clone());
            let mut id = format!("{}.w{}", r.id, mine.len() + 1);
            while reqs.iter().chain(&injected).any(|x| x.id == id) {
                id.push('_');
            }
            let text = q.to_string();
            let req = Requirement {
                id,
                category: r.category,
                formula: q,
                source_text: text,
            };
            mine.push(req.clone());
            injected.push(req);
        }
        witness_sets.push(WitnessSet {
            source: r.clone(),
            witnesses: ws.formulas,
            injected: mine,
            diagnostics: ws.diagnostics,
        });
    }

    // Implication among existentials: original ones first, then injected.
    let existing: Vec<&Requirement> = reqs.iter().filter(|r| r.formula.is_existential()).collect();
    let pool: Vec<QuantifiedFormula> = existing
        .iter()
        .map(|r| r.formula.clone())
        .chain(injected.iter().map(|r| r.formula.clone()))
        .collect();
    let redundancies = find_redundancies_with(&pool, jobs, translator)?.redundancies;
    let offset = existing.len();
    let mut dropped_flags = vec![false; pool.len()];
    let mut dropped = Vec::new();
    for t in offset..pool.len() {
        let by = redundancies
            .iter()
            .filter(|r| r.target == t)
            .find_map(|r| match r.witness.as_slice() {
                [s] if !dropped_flags[*s] => Some(*s),
                _ => None,
            });
        if let Some(s) = by {
            dropped_flags[t] = true;
            let implied_by = if s < offset {
                existing[s].id.clone()
            } else {
                injected[s - offset].id.clone()
            };
            dropped.push(Dropped {
                requirement: injected[t - offset].clone(),
                implied_by,
            });
        }
    }
    for ws in &mut witness_sets {
        ws.injected.retain(|r| !dropped.iter().any(|d| d.requirement.id == r.id));
    }
    let requirements = reqs
        .iter()
        .cloned()
        .chain(
            injected
                .into_iter()
                .enumerate()
                .filter(|(i, _)| !dropped_flags[offset + i])
                .map(|(_, r)| r),
        )
        .collect();
    Ok(Augmented {
        requirements,
        witness_sets,
        dropped,
    })
}
