//! Neutral line-oriented automaton format.
//!
//! ```text
//! ba v1
//! acceptance: state
//! states: 3
//! initial: 0
//! accepting-states: 2
//! ap: a b
//! edge 0: 0 1 a !b
//! edge 1: 1 2 b
//! edge 2: 2 2
//! ```
//!
//! `acceptance: transition` pairs with an `accepting-edges:` line instead.
//! Edges are numbered consecutively from 0; an edge with no literals
//! accepts every letter. `#` starts a comment.

use std::fmt::Write;

use super::{AcceptanceMode, BuchiAutomaton, Edge, Label, Literal, ValidationError};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unexpected end of input, expected {0}")]
    Truncated(&'static str),
    #[error("{0}")]
    Invalid(#[from] ValidationError),
}

/// Canonical text form. Importing it yields an identical automaton.
pub fn export_automaton(a: &BuchiAutomaton) -> String {
    let mut out = String::from("ba v1\n");
    let list = |items: &[usize]| -> String { items.iter().map(|i| format!(" {i}")).collect() };
    match a.acceptance {
        AcceptanceMode::StateBased => {
            out.push_str("acceptance: state\n");
        }
        AcceptanceMode::TransitionBased => {
            out.push_str("acceptance: transition\n");
        }
    }
    let _ = writeln!(out, "states: {}", a.states);
    let _ = writeln!(out, "initial:{}", list(&a.initial));
    match a.acceptance {
        AcceptanceMode::StateBased => {
            let _ = writeln!(out, "accepting-states:{}", list(&a.accepting_states));
        }
        AcceptanceMode::TransitionBased => {
            let _ = writeln!(out, "accepting-edges:{}", list(&a.accepting_edges));
        }
    }
    let ap: String = a.ap.iter().map(|p| format!(" {p}")).collect();
    let _ = writeln!(out, "ap:{ap}");
    for (k, e) in a.edges.iter().enumerate() {
        let _ = write!(out, "edge {k}: {} {}", e.src, e.dst);
        for l in e.label.literals() {
            let _ = write!(out, " {l}");
        }
        out.push('\n');
    }
    out
}

struct Lines<'a> {
    inner: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let it: Box<dyn Iterator<Item = (usize, &'a str)>> = Box::new(
            text.lines()
                .enumerate()
                .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
                .filter(|(_, l)| !l.is_empty()),
        );
        Lines {
            inner: it.peekable(),
        }
    }

    fn next(&mut self, expected: &'static str) -> Result<(usize, &'a str), FormatError> {
        self.inner.next().ok_or(FormatError::Truncated(expected))
    }

    /// Reads `key: values` and returns the values.
    fn field(&mut self, key: &'static str) -> Result<(usize, &'a str), FormatError> {
        let (line, text) = self.next(key)?;
        match text.split_once(':') {
            Some((k, rest)) if k.trim() == key => Ok((line, rest.trim())),
            _ => Err(syntax(line, format!("expected `{key}:`"))),
        }
    }
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        message: message.into(),
    }
}

fn numbers(line: usize, text: &str) -> Result<Vec<usize>, FormatError> {
    text.split_whitespace()
        .map(|t| t.parse().map_err(|_| syntax(line, format!("expected a number, found `{t}`"))))
        .collect()
}

pub fn import_automaton(text: &str) -> Result<BuchiAutomaton, FormatError> {
    let mut lines = Lines::new(text);
    let (line, header) = lines.next("header `ba v1`")?;
    if header.split_whitespace().collect::<Vec<_>>() != ["ba", "v1"] {
        return Err(syntax(line, "expected header `ba v1`"));
    }
    let (line, mode) = lines.field("acceptance")?;
    let acceptance = match mode {
        "state" => AcceptanceMode::StateBased,
        "transition" => AcceptanceMode::TransitionBased,
        other => {
            return Err(syntax(
                line,
                format!("acceptance must be `state` or `transition`, found `{other}`"),
            ))
        }
    };
    let (line, count) = lines.field("states")?;
    let states = match numbers(line, count)?.as_slice() {
        [n] => *n,
        _ => return Err(syntax(line, "expected one state count")),
    };
    let (line, init) = lines.field("initial")?;
    let initial = numbers(line, init)?;
    let acc_key = match acceptance {
        AcceptanceMode::StateBased => "accepting-states",
        AcceptanceMode::TransitionBased => "accepting-edges",
    };
    let (line, acc) = lines.field(acc_key)?;
    let acc = numbers(line, acc)?;
    let (line, ap_text) = lines.field("ap")?;
    let mut ap = Vec::new();
    for name in ap_text.split_whitespace() {
        match Literal::parse(name) {
            Some(l) if l.positive => ap.push(name.to_string()),
            _ => return Err(syntax(line, format!("invalid proposition `{name}`"))),
        }
    }

    let mut edges = Vec::new();
    for (line, text) in lines.inner.by_ref() {
        let rest = text
            .strip_prefix("edge")
            .ok_or_else(|| syntax(line, "expected `edge <k>: <src> <dst> <literals>`"))?;
        let (idx, body) = rest
            .split_once(':')
            .ok_or_else(|| syntax(line, "expected `:` after the edge number"))?;
        let idx: usize = idx
            .trim()
            .parse()
            .map_err(|_| syntax(line, "expected an edge number"))?;
        if idx != edges.len() {
            return Err(syntax(
                line,
                format!("edge {idx} out of sequence, expected edge {}", edges.len()),
            ));
        }
        let mut parts = body.split_whitespace();
        let mut endpoint = |what: &str| -> Result<usize, FormatError> {
            parts
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| syntax(line, format!("expected the {what} state")))
        };
        let src = endpoint("source")?;
        let dst = endpoint("target")?;
        let mut literals = Vec::new();
        for t in parts {
            literals.push(Literal::parse(t).ok_or_else(|| syntax(line, format!("invalid literal `{t}`")))?);
        }
        edges.push(Edge {
            src,
            dst,
            label: Label::new(literals),
        });
    }

    let (accepting_states, accepting_edges) = match acceptance {
        AcceptanceMode::StateBased => (acc, Vec::new()),
        AcceptanceMode::TransitionBased => (Vec::new(), acc),
    };
    let a = BuchiAutomaton {
        states,
        initial,
        edges,
        accepting_states,
        accepting_edges,
        acceptance,
        ap,
    };
    a.validate()?;
    Ok(a)
}
