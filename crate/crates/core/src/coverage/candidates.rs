use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::automaton::{check_sat_with, Translator};
use crate::error::Result;
use crate::formula::{render_formula, Formula};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateOptions {
    pub count: usize,
    pub depth: usize,
    pub seed: u64,
}

impl Default for CandidateOptions {
    fn default() -> Self {
        CandidateOptions {
            count: 300,
            depth: 3,
            seed: 0,
        }
    }
}

fn literals(aps: &[String]) -> Vec<(usize, Formula)> {
    aps.iter()
        .enumerate()
        .flat_map(|(i, p)| [(i, Formula::atom(p.clone())), (i, Formula::not(Formula::atom(p.clone())))])
        .collect()
}

/// Simple pattern instances over literals, shallowest first.
fn templates(aps: &[String]) -> Vec<Formula> {
    use Formula as F;
    let lits = literals(aps);
    let pairs: Vec<(&Formula, &Formula)> = lits
        .iter()
        .flat_map(|(i, a)| lits.iter().filter(move |(j, _)| j != i).map(move |(_, b)| (a, b)))
        .collect();
    let unordered: Vec<(&Formula, &Formula)> = lits
        .iter()
        .flat_map(|(i, a)| lits.iter().filter(move |(j, _)| j > i).map(move |(_, b)| (a, b)))
        .collect();
    let mut out = Vec::new();
    for (_, l) in &lits {
        out.push(F::globally(l.clone()));
        out.push(F::eventually(l.clone()));
    }
    for (_, l) in &lits {
        out.push(F::next(l.clone()));
    }
    for (a, b) in &pairs {
        out.push(F::until((*a).clone(), (*b).clone()));
    }
    for (a, b) in &unordered {
        out.push(F::eventually(F::and((*a).clone(), (*b).clone())));
        out.push(F::globally(F::or((*a).clone(), (*b).clone())));
    }
    for (_, l) in &lits {
        out.push(F::globally(F::eventually(l.clone())));
        out.push(F::eventually(F::globally(l.clone())));
    }
    for (a, b) in &pairs {
        out.push(F::eventually(F::until((*a).clone(), (*b).clone())));
    }
    for (a, b) in &pairs {
        out.push(F::globally(F::implies((*a).clone(), F::eventually((*b).clone()))));
        out.push(F::globally(F::implies((*a).clone(), F::next((*b).clone()))));
    }
    for (i, a) in &lits {
        for (j, b) in lits.iter().filter(|(j, _)| j != i) {
            for (_, c) in lits.iter().filter(|(k, _)| k != i && k > j) {
                out.push(F::eventually(F::until(a.clone(), F::or(b.clone(), c.clone()))));
            }
        }
    }
    out
}

fn random_formula(rng: &mut ChaCha8Rng, aps: &[String], depth: usize) -> Formula {
    let lits = literals(aps);
    let lit = |rng: &mut ChaCha8Rng| lits[rng.gen_range(0..lits.len())].1.clone();
    if depth == 0 || rng.gen_bool(0.25) {
        return lit(rng);
    }
    let sub = |rng: &mut ChaCha8Rng| random_formula(rng, aps, depth - 1);
    match rng.gen_range(0..8) {
        0 => Formula::globally(sub(rng)),
        1 => Formula::eventually(sub(rng)),
        2 => Formula::next(sub(rng)),
        3 => Formula::and(sub(rng), sub(rng)),
        4 => Formula::or(sub(rng), sub(rng)),
        5 => Formula::implies(sub(rng), sub(rng)),
        _ => Formula::until(sub(rng), sub(rng)),
    }
}

/// Simple candidate requirements over `aps`: pattern instances first, then
/// seeded random formulas. Every candidate is satisfiable, not valid, at
/// most `depth` deep and syntactically distinct from the others.
pub fn generate_candidates(
    aps: &[String],
    options: &CandidateOptions,
    translator: &dyn Translator,
) -> Result<Vec<Formula>> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    if aps.is_empty() {
        return Ok(out);
    }
    let mut accept = |f: Formula, out: &mut Vec<Formula>| -> Result<()> {
        if f.nesting_depth() > options.depth || !seen.insert(render_formula(&f)) {
            return Ok(());
        }
        if !check_sat_with(std::slice::from_ref(&f), translator)?.satisfiable {
            return Ok(());
        }
        if !check_sat_with(&[Formula::not(f.clone())], translator)?.satisfiable {
            return Ok(());
        }
        out.push(f);
        Ok(())
    };
    for f in templates(aps) {
        if out.len() >= options.count {
            return Ok(out);
        }
        accept(f, &mut out)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut attempts = 0;
    while out.len() < options.count && attempts < options.count * 20 {
        attempts += 1;
        let f = random_formula(&mut rng, aps, options.depth);
        accept(f, &mut out)?;
    }
    Ok(out)
}
