use super::Formula;

/// Negation normal form: `->` and `<->` are expanded and negations are
/// pushed down to atoms using the De Morgan and temporal dualities
/// (`!X f = X !f`, `!(f U g) = !f R !g`, `!F f = G !f`).
pub fn to_nnf(f: &Formula) -> Formula {
    positive(f)
}

fn positive(f: &Formula) -> Formula {
    use Formula::*;
    match f {
        True | False | Atom(_) => f.clone(),
        Not(inner) => negative(inner),
        And(l, r) => Formula::and(positive(l), positive(r)),
        Or(l, r) => Formula::or(positive(l), positive(r)),
        Implies(l, r) => Formula::or(negative(l), positive(r)),
        Iff(l, r) => Formula::or(
            Formula::and(positive(l), positive(r)),
            Formula::and(negative(l), negative(r)),
        ),
        Next(inner) => Formula::next(positive(inner)),
        Until(l, r) => Formula::until(positive(l), positive(r)),
        Release(l, r) => Formula::release(positive(l), positive(r)),
        Eventually(inner) => Formula::eventually(positive(inner)),
        Globally(inner) => Formula::globally(positive(inner)),
    }
}

/// NNF of `!f`.
fn negative(f: &Formula) -> Formula {
    use Formula::*;
    match f {
        True => False,
        False => True,
        Atom(_) => Formula::not(f.clone()),
        Not(inner) => positive(inner),
        And(l, r) => Formula::or(negative(l), negative(r)),
        Or(l, r) => Formula::and(negative(l), negative(r)),
        Implies(l, r) => Formula::and(positive(l), negative(r)),
        Iff(l, r) => Formula::or(
            Formula::and(positive(l), negative(r)),
            Formula::and(negative(l), positive(r)),
        ),
        Next(inner) => Formula::next(negative(inner)),
        Until(l, r) => Formula::release(negative(l), negative(r)),
        Release(l, r) => Formula::until(negative(l), negative(r)),
        Eventually(inner) => Formula::globally(negative(inner)),
        Globally(inner) => Formula::eventually(negative(inner)),
    }
}
