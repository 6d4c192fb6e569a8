use serde::{Deserialize, Serialize};

use super::Formula;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Positive,
    Negative,
    Mixed,
}

impl Polarity {
    fn flip(self) -> Self {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
            Polarity::Mixed => Polarity::Mixed,
        }
    }
}

/// One atom leaf of a formula.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomOccurrence {
    /// Child indices from the root down to the leaf.
    pub path: Vec<usize>,
    pub atom: String,
    pub polarity: Polarity,
}

/// Every atom leaf in left-to-right order with its polarity: negations and
/// implication antecedents flip it, both sides of `<->` make it mixed.
pub fn atom_occurrences(f: &Formula) -> Vec<AtomOccurrence> {
    let mut out = Vec::new();
    let mut path = Vec::new();
    walk(f, Polarity::Positive, &mut path, &mut out);
    out
}

fn walk(f: &Formula, pol: Polarity, path: &mut Vec<usize>, out: &mut Vec<AtomOccurrence>) {
    if let Formula::Atom(name) = f {
        out.push(AtomOccurrence {
            path: path.clone(),
            atom: name.clone(),
            polarity: pol,
        });
        return;
    }
    for (i, child) in f.children().into_iter().enumerate() {
        let child_pol = match f {
            Formula::Not(_) => pol.flip(),
            Formula::Implies(..) if i == 0 => pol.flip(),
            Formula::Iff(..) => Polarity::Mixed,
            _ => pol,
        };
        path.push(i);
        walk(child, child_pol, path, out);
        path.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_formula;
    use super::*;

    fn pols(text: &str) -> Vec<(String, Polarity)> {
        atom_occurrences(&parse_formula(text).unwrap())
            .into_iter()
            .map(|o| (o.atom, o.polarity))
            .collect()
    }

    #[test]
    fn antecedent_is_negative() {
        assert_eq!(
            pols("G (req -> F resp)"),
            vec![
                ("req".into(), Polarity::Negative),
                ("resp".into(), Polarity::Positive)
            ]
        );
        let occ = atom_occurrences(&parse_formula("G (req -> F resp)").unwrap());
        assert_eq!(occ[0].path, vec![0, 0]);
        assert_eq!(occ[1].path, vec![0, 1, 0]);
    }

    #[test]
    fn iff_is_mixed() {
        assert_eq!(
            pols("p <-> q"),
            vec![("p".into(), Polarity::Mixed), ("q".into(), Polarity::Mixed)]
        );
        assert_eq!(pols("!(p <-> q)")[0].1, Polarity::Mixed);
    }

    #[test]
    fn negation_flips() {
        assert_eq!(pols("G !a"), vec![("a".into(), Polarity::Negative)]);
        assert_eq!(pols("!(a -> !b)")[1].1, Polarity::Positive);
        assert_eq!(pols("!(a -> !b)")[0].1, Polarity::Positive);
    }
}
