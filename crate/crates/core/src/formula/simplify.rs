use super::Formula;

/// Language-preserving Boolean and temporal simplification.
///
/// Applies constant propagation through every operator, removes double
/// negation, collapses `F F`, `G G`, `F G F` and `G F G`, and flattens
/// conjunctions/disjunctions to drop duplicate and complementary members.
pub fn simplify(f: &Formula) -> Formula {
    let mut cur = step(f);
    loop {
        let next = step(&cur);
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

fn step(f: &Formula) -> Formula {
    use Formula::*;
    match f {
        True | False | Atom(_) => f.clone(),
        Not(c) => match step(c) {
            True => False,
            False => True,
            Not(inner) => *inner,
            other => Formula::not(other),
        },
        And(..) => junction(f, true),
        Or(..) => junction(f, false),
        Implies(l, r) => match (step(l), step(r)) {
            (True, r) => r,
            (False, _) | (_, True) => True,
            (l, False) => step(&Formula::not(l)),
            (l, r) if l == r => True,
            (l, r) => Formula::implies(l, r),
        },
        Iff(l, r) => match (step(l), step(r)) {
            (True, x) | (x, True) => x,
            (False, x) | (x, False) => step(&Formula::not(x)),
            (l, r) if l == r => True,
            (l, r) => Formula::iff(l, r),
        },
        Next(c) => match step(c) {
            True => True,
            False => False,
            c => Formula::next(c),
        },
        Until(l, r) => match (step(l), step(r)) {
            (_, True) => True,
            (_, False) => False,
            (False, r) => r,
            (True, r) => Formula::eventually(r),
            (l, r) if l == r => r,
            (l, r) => Formula::until(l, r),
        },
        Release(l, r) => match (step(l), step(r)) {
            (_, True) => True,
            (_, False) => False,
            (True, r) => r,
            (False, r) => Formula::globally(r),
            (l, r) if l == r => r,
            (l, r) => Formula::release(l, r),
        },
        Eventually(c) => match step(c) {
            True => True,
            False => False,
            Eventually(inner) => Eventually(inner),
            Globally(inner) if matches!(*inner, Eventually(_)) => Globally(inner),
            c => Formula::eventually(c),
        },
        Globally(c) => match step(c) {
            True => True,
            False => False,
            Globally(inner) => Globally(inner),
            Eventually(inner) if matches!(*inner, Globally(_)) => Eventually(inner),
            c => Formula::globally(c),
        },
    }
}

fn flatten<'a>(f: &'a Formula, conj: bool, out: &mut Vec<&'a Formula>) {
    match f {
        Formula::And(l, r) if conj => {
            flatten(l, conj, out);
            flatten(r, conj, out);
        }
        Formula::Or(l, r) if !conj => {
            flatten(l, conj, out);
            flatten(r, conj, out);
        }
        _ => out.push(f),
    }
}

fn is_complement(a: &Formula, b: &Formula) -> bool {
    matches!(a, Formula::Not(inner) if **inner == *b) || matches!(b, Formula::Not(inner) if **inner == *a)
}

/// Simplifies a conjunction (`conj`) or disjunction as a flat list.
fn junction(f: &Formula, conj: bool) -> Formula {
    let (unit, zero) = if conj {
        (Formula::True, Formula::False)
    } else {
        (Formula::False, Formula::True)
    };
    let mut members = Vec::new();
    flatten(f, conj, &mut members);

    let mut kept: Vec<Formula> = Vec::new();
    for m in members {
        let m = step(m);
        if m == zero {
            return zero;
        }
        if m == unit {
            continue;
        }
        // A simplified member may itself be a junction of the same kind.
        let mut parts = Vec::new();
        flatten(&m, conj, &mut parts);
        for p in parts {
            if kept.iter().any(|k| is_complement(k, p)) {
                return zero;
            }
            if !kept.contains(p) {
                kept.push(p.clone());
            }
        }
    }
    let build = if conj { Formula::and } else { Formula::or };
    kept.into_iter().reduce(build).unwrap_or(unit)
}
