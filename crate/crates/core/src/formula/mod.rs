//! LTL abstract syntax, the surface parser and printer, negation normal form,
//! Boolean simplification and polarity analysis of atom occurrences.

mod nnf;
mod parser;
mod polarity;
mod render;
mod simplify;

pub use nnf::to_nnf;
pub use parser::{parse, parse_formula, ParseError};
pub use polarity::{atom_occurrences, AtomOccurrence, Polarity};
pub use render::{render, render_formula};
pub use simplify::simplify;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

/// An LTL formula.
///
/// `Release` is not part of the minimal `{!, &, X, U}` core but is needed to
/// push negations through `U` when building negation normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Formula {
    True,
    False,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Release(Box<Formula>, Box<Formula>),
    Eventually(Box<Formula>),
    Globally(Box<Formula>),
}

#[allow(clippy::should_implement_trait)]
impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Self {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Self {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Formula, r: Formula) -> Self {
        Formula::Implies(Box::new(l), Box::new(r))
    }

    pub fn iff(l: Formula, r: Formula) -> Self {
        Formula::Iff(Box::new(l), Box::new(r))
    }

    pub fn next(f: Formula) -> Self {
        Formula::Next(Box::new(f))
    }

    pub fn until(l: Formula, r: Formula) -> Self {
        Formula::Until(Box::new(l), Box::new(r))
    }

    pub fn release(l: Formula, r: Formula) -> Self {
        Formula::Release(Box::new(l), Box::new(r))
    }

    pub fn eventually(f: Formula) -> Self {
        Formula::Eventually(Box::new(f))
    }

    pub fn globally(f: Formula) -> Self {
        Formula::Globally(Box::new(f))
    }

    /// Left-nested conjunction; the empty conjunction is `true`.
    pub fn conjunction<I: IntoIterator<Item = Formula>>(parts: I) -> Self {
        parts
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::True)
    }

    /// Left-nested disjunction; the empty disjunction is `false`.
    pub fn disjunction<I: IntoIterator<Item = Formula>>(parts: I) -> Self {
        parts
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::False)
    }

    /// Immediate subformulas, left to right.
    pub fn children(&self) -> Vec<&Formula> {
        use Formula::*;
        match self {
            True | False | Atom(_) => vec![],
            Not(f) | Next(f) | Eventually(f) | Globally(f) => vec![f],
            And(l, r) | Or(l, r) | Implies(l, r) | Iff(l, r) | Until(l, r) | Release(l, r) => {
                vec![l, r]
            }
        }
    }

    fn children_mut(&mut self) -> Vec<&mut Formula> {
        use Formula::*;
        match self {
            True | False | Atom(_) => vec![],
            Not(f) | Next(f) | Eventually(f) | Globally(f) => vec![f],
            And(l, r) | Or(l, r) | Implies(l, r) | Iff(l, r) | Until(l, r) | Release(l, r) => {
                vec![l, r]
            }
        }
    }

    /// The subformula at `path` (child indices from the root).
    pub fn subformula(&self, path: &[usize]) -> Option<&Formula> {
        let mut cur = self;
        for &i in path {
            cur = *cur.children().get(i)?;
        }
        Some(cur)
    }

    /// Returns a copy with the subformula at `path` replaced.
    pub fn replace_at(&self, path: &[usize], with: Formula) -> Option<Formula> {
        let mut out = self.clone();
        let mut cur = &mut out;
        for &i in path {
            cur = cur.children_mut().into_iter().nth(i)?;
        }
        *cur = with;
        Some(out)
    }

    /// Atom names occurring in the formula, sorted.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        if let Formula::Atom(name) = self {
            out.insert(name.clone());
        }
        for c in self.children() {
            c.collect_atoms(out);
        }
    }

    /// Operator nesting depth. Atoms, constants and negated atoms have depth 0.
    pub fn nesting_depth(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => 0,
            Formula::Not(inner) if matches!(**inner, Formula::Atom(_)) => 0,
            _ => 1 + self.children().iter().map(|c| c.nesting_depth()).max().unwrap_or(0),
        }
    }

    /// Number of nodes in the syntax tree.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// True if negations occur only directly above atoms and no
    /// `->`/`<->` remain.
    pub fn is_nnf(&self) -> bool {
        match self {
            Formula::Not(inner) => matches!(**inner, Formula::Atom(_)),
            Formula::Implies(..) | Formula::Iff(..) => false,
            _ => self.children().iter().all(|c| c.is_nnf()),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_formula(self))
    }
}

/// Path quantifier of a requirement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Quantifier {
    Universal,
    Existential,
}

impl Quantifier {
    pub fn flip(self) -> Self {
        match self {
            Quantifier::Universal => Quantifier::Existential,
            Quantifier::Existential => Quantifier::Universal,
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            Quantifier::Universal => "forall",
            Quantifier::Existential => "exists",
        }
    }
}

/// A formula with a single top-level path quantifier.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuantifiedFormula {
    pub quantifier: Quantifier,
    pub body: Formula,
}

impl QuantifiedFormula {
    pub fn universal(body: Formula) -> Self {
        QuantifiedFormula {
            quantifier: Quantifier::Universal,
            body,
        }
    }

    pub fn existential(body: Formula) -> Self {
        QuantifiedFormula {
            quantifier: Quantifier::Existential,
            body,
        }
    }

    pub fn is_existential(&self) -> bool {
        self.quantifier == Quantifier::Existential
    }

    pub fn is_universal(&self) -> bool {
        self.quantifier == Quantifier::Universal
    }
}

impl fmt::Display for QuantifiedFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}

/// `!forall f == exists !f` and vice versa; the negated body is put in NNF.
pub fn negate_quantified(q: &QuantifiedFormula) -> QuantifiedFormula {
    QuantifiedFormula {
        quantifier: q.quantifier.flip(),
        body: to_nnf(&Formula::not(q.body.clone())),
    }
}

/// Requirement category.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    Assumption,
    Required,
    Forbidden,
    Plain,
}

impl Category {
    /// Section tag used in requirement files.
    pub fn section(self) -> &'static str {
        match self {
            Category::Assumption => "assumptions",
            Category::Required => "required",
            Category::Forbidden => "forbidden",
            Category::Plain => "plain",
        }
    }

    pub fn from_section(tag: &str) -> Option<Self> {
        match tag {
            "assumptions" => Some(Category::Assumption),
            "required" => Some(Category::Required),
            "forbidden" => Some(Category::Forbidden),
            "plain" => Some(Category::Plain),
            _ => None,
        }
    }
}

/// An identified, categorised requirement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Requirement {
    pub id: String,
    pub category: Category,
    pub formula: QuantifiedFormula,
    pub source_text: String,
}

impl Requirement {
    /// Parses `text` and keeps it as the source text.
    pub fn parse(id: impl Into<String>, category: Category, text: &str) -> Result<Self, ParseError> {
        Ok(Requirement {
            id: id.into(),
            category,
            formula: parse(text)?,
            source_text: text.trim().to_string(),
        })
    }
}
