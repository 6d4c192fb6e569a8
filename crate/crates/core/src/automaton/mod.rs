//! Büchi automata with literal-labelled edges: data model, LTL translation,
//! emptiness checking, a neutral text format and an external-translator hook.

mod emptiness;
mod external;
mod format;
pub(crate) mod graph;
mod translate;

pub use emptiness::{accepting_lasso, check_sat, check_sat_with, is_empty, Lasso, LassoWord, SatResult};
pub use external::ExternalTranslator;
pub use format::{export_automaton, import_automaton, FormatError};
pub use translate::{translate, Tableau, DEFAULT_MAX_STATES};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::formula::Formula;

/// A possibly negated atomic proposition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Literal {
    pub atom: String,
    pub positive: bool,
}

impl Literal {
    pub fn pos(atom: impl Into<String>) -> Self {
        Literal {
            atom: atom.into(),
            positive: true,
        }
    }

    pub fn neg(atom: impl Into<String>) -> Self {
        Literal {
            atom: atom.into(),
            positive: false,
        }
    }

    pub fn negated(&self) -> Self {
        Literal {
            atom: self.atom.clone(),
            positive: !self.positive,
        }
    }

    pub fn is_negation_of(&self, other: &Literal) -> bool {
        self.atom == other.atom && self.positive != other.positive
    }

    /// Parses `name` or `!name`.
    pub fn parse(token: &str) -> Option<Self> {
        let (positive, name) = match token.strip_prefix('!') {
            Some(rest) => (false, rest),
            None => (true, token),
        };
        let mut chars = name.chars();
        let first = chars.next()?;
        if !(first.is_ascii_alphabetic() || first == '_')
            || !chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        {
            return None;
        }
        Some(Literal {
            atom: name.to_string(),
            positive,
        })
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            f.write_str(&self.atom)
        } else {
            write!(f, "!{}", self.atom)
        }
    }
}

/// The set of literals on an edge: a partial valuation. The empty label
/// allows every letter.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Label(Vec<Literal>);

impl FromIterator<Literal> for Label {
    fn from_iter<I: IntoIterator<Item = Literal>>(lits: I) -> Self {
        let mut v: Vec<Literal> = lits.into_iter().collect();
        v.sort();
        v.dedup();
        Label(v)
    }
}

impl Label {
    pub fn new(literals: Vec<Literal>) -> Self {
        Label(literals)
    }

    /// Shorthand for tests and hand-built automata: `"a !b"`.
    pub fn parse(text: &str) -> Option<Self> {
        text.split_whitespace()
            .map(Literal::parse)
            .collect::<Option<Vec<_>>>()
            .map(Label)
    }

    pub fn literals(&self) -> &[Literal] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, lit: &Literal) -> bool {
        self.0.contains(lit)
    }

    pub fn is_contradictory(&self) -> bool {
        self.0
            .iter()
            .enumerate()
            .any(|(i, l)| self.0[i + 1..].iter().any(|m| l.is_negation_of(m)))
    }

    /// True if the letter `true_atoms` (the atoms that hold) satisfies every literal.
    pub fn admits<S: AsRef<str>>(&self, true_atoms: &[S]) -> bool {
        self.0
            .iter()
            .all(|l| true_atoms.iter().any(|a| a.as_ref() == l.atom) == l.positive)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub label: Label,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AcceptanceMode {
    StateBased,
    TransitionBased,
}

/// A Büchi automaton whose edges carry literal sets.
///
/// With [`AcceptanceMode::StateBased`] a run is accepting if it visits an
/// accepting state infinitely often; with `TransitionBased` it must take an
/// accepting edge infinitely often.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuchiAutomaton {
    pub states: usize,
    pub initial: Vec<usize>,
    pub edges: Vec<Edge>,
    pub accepting_states: Vec<usize>,
    pub accepting_edges: Vec<usize>,
    pub acceptance: AcceptanceMode,
    pub ap: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ValidationError {
    #[error("the set of initial states is empty")]
    NoInitialState,
    #[error("state {0} is out of range")]
    StateOutOfRange(usize),
    #[error("edge {0} is out of range")]
    EdgeOutOfRange(usize),
    #[error("edge {0} has a contradictory label")]
    ContradictoryLabel(usize),
    #[error("edge {edge} uses atom '{atom}' which is not declared in ap")]
    UndeclaredAtom { edge: usize, atom: String },
    #[error("{0} acceptance must not list accepting {1}")]
    MixedAcceptance(&'static str, &'static str),
}

impl BuchiAutomaton {
    /// Checks the structural invariants.
    pub fn validate(&self) -> std::result::Result<(), ValidationError> {
        if self.initial.is_empty() {
            return Err(ValidationError::NoInitialState);
        }
        for &s in self.initial.iter().chain(&self.accepting_states) {
            if s >= self.states {
                return Err(ValidationError::StateOutOfRange(s));
            }
        }
        for &e in &self.accepting_edges {
            if e >= self.edges.len() {
                return Err(ValidationError::EdgeOutOfRange(e));
            }
        }
        match self.acceptance {
            AcceptanceMode::StateBased if !self.accepting_edges.is_empty() => {
                return Err(ValidationError::MixedAcceptance("state-based", "edges"))
            }
            AcceptanceMode::TransitionBased if !self.accepting_states.is_empty() => {
                return Err(ValidationError::MixedAcceptance("transition-based", "states"))
            }
            _ => {}
        }
        for (k, e) in self.edges.iter().enumerate() {
            if e.src >= self.states {
                return Err(ValidationError::StateOutOfRange(e.src));
            }
            if e.dst >= self.states {
                return Err(ValidationError::StateOutOfRange(e.dst));
            }
            if e.label.is_contradictory() {
                return Err(ValidationError::ContradictoryLabel(k));
            }
            if let Some(l) = e.label.literals().iter().find(|l| !self.ap.contains(&l.atom)) {
                return Err(ValidationError::UndeclaredAtom {
                    edge: k,
                    atom: l.atom.clone(),
                });
            }
        }
        Ok(())
    }

    /// Outgoing edge indices per state, in edge order.
    pub fn out_edges(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.states];
        for (k, e) in self.edges.iter().enumerate() {
            out[e.src].push(k);
        }
        out
    }

    pub fn state_flags(&self) -> Vec<bool> {
        let mut flags = vec![false; self.states];
        for &s in &self.accepting_states {
            flags[s] = true;
        }
        flags
    }

    pub fn edge_flags(&self) -> Vec<bool> {
        let mut flags = vec![false; self.edges.len()];
        for &e in &self.accepting_edges {
            flags[e] = true;
        }
        flags
    }
}

/// Anything that turns a quantifier-free formula into an equivalent
/// Büchi automaton.
pub trait Translator: Send + Sync {
    fn translate(&self, f: &Formula) -> Result<BuchiAutomaton>;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_contradiction() {
        assert!(Label::parse("a !a").unwrap().is_contradictory());
        assert!(!Label::parse("a !b c").unwrap().is_contradictory());
        assert!(Label::parse("a !").is_none());
        assert!(Label::parse("1a").is_none());
    }

    #[test]
    fn label_admits_letters() {
        let l = Label::parse("a !b").unwrap();
        assert!(l.admits(&["a"]));
        assert!(l.admits(&["a", "c"]));
        assert!(!l.admits(&["a", "b"]));
        assert!(Label::default().admits::<&str>(&[]));
    }

    #[test]
    fn validation_catches_bad_automata() {
        let mut a = BuchiAutomaton {
            states: 2,
            initial: vec![0],
            edges: vec![Edge {
                src: 0,
                dst: 1,
                label: Label::parse("a").unwrap(),
            }],
            accepting_states: vec![1],
            accepting_edges: vec![],
            acceptance: AcceptanceMode::StateBased,
            ap: vec!["a".into()],
        };
        assert_eq!(a.validate(), Ok(()));
        a.edges[0].dst = 2;
        assert_eq!(a.validate(), Err(ValidationError::StateOutOfRange(2)));
        a.edges[0].dst = 1;
        a.accepting_edges.push(0);
        assert!(matches!(a.validate(), Err(ValidationError::MixedAcceptance(..))));
        a.accepting_edges.clear();
        a.ap.clear();
        assert!(matches!(a.validate(), Err(ValidationError::UndeclaredAtom { .. })));
        a.initial.clear();
        assert_eq!(a.validate(), Err(ValidationError::NoInitialState));
    }
}
