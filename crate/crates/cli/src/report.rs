//! Report structures shared by the text and JSON outputs.

use std::fmt::Write;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RequirementRef {
    pub id: String,
    pub formula: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UndecidedSet {
    pub set: Vec<String>,
    pub target: Option<String>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckGroup {
    pub section: String,
    pub requirements: Vec<RequirementRef>,
    pub minimal_inconsistent: Vec<Vec<String>>,
    pub undecided: Vec<UndecidedSet>,
    /// Depends on worker scheduling, so only reported on request.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checks_performed: Option<usize>,
    pub checks_possible: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RedundancyEntry {
    pub target: String,
    pub witness: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RedundancyGroup {
    pub section: String,
    pub requirements: Vec<RequirementRef>,
    pub redundancies: Vec<RedundancyEntry>,
    pub undecided: Vec<UndecidedSet>,
    /// Depends on worker scheduling, so only reported on request.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checks_performed: Option<usize>,
    pub checks_possible: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessGroup {
    pub source: String,
    pub witnesses: Vec<String>,
    pub injected: Vec<RequirementRef>,
    pub diagnostics: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DroppedEntry {
    pub id: String,
    pub formula: String,
    pub implied_by: String,
}

/// An exact coverage value with its rounded percentage.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverageValue {
    pub exact: String,
    pub percent: f64,
}

impl From<&BigRational> for CoverageValue {
    fn from(q: &BigRational) -> Self {
        CoverageValue {
            exact: q.to_string(),
            percent: (q.to_f64().unwrap_or(f64::NAN) * 1000.0).round() / 10.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RoundEntry {
    pub round: usize,
    pub formula: String,
    pub coverage: CoverageValue,
    pub evaluated: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Report {
    Check {
        file: String,
        groups: Vec<CheckGroup>,
        findings: bool,
    },
    Redundancy {
        file: String,
        groups: Vec<RedundancyGroup>,
        findings: bool,
    },
    Vacuity {
        file: String,
        witness_sets: Vec<WitnessGroup>,
        dropped: Vec<DroppedEntry>,
        document: String,
        findings: bool,
    },
    Coverage {
        file: String,
        baseline: CoverageValue,
        baseline_paths: usize,
        candidates: usize,
        rounds: Vec<RoundEntry>,
        diagnostics: Vec<String>,
    },
    Suggest {
        file: String,
        baseline: CoverageValue,
        baseline_paths: usize,
        candidates: usize,
        rounds: Vec<RoundEntry>,
        diagnostics: Vec<String>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorReport {
    pub command: String,
    pub error: String,
}

fn braces(ids: &[String]) -> String {
    format!("{{{}}}", ids.join(", "))
}

fn formula_of<'a>(reqs: &'a [RequirementRef], id: &str) -> &'a str {
    reqs.iter().find(|r| r.id == id).map_or("", |r| r.formula.as_str())
}

fn undecided_text(out: &mut String, undecided: &[UndecidedSet]) {
    for u in undecided {
        let target = u.target.as_ref().map(|t| format!(" (target {t})")).unwrap_or_default();
        let _ = writeln!(out, "  undecided {}{target}: {}", braces(&u.set), u.reason);
    }
}

fn checks_text(out: &mut String, performed: Option<usize>, possible: usize) {
    let _ = match performed {
        Some(n) => writeln!(out, "  {n} of {possible} candidate sets checked"),
        None => writeln!(out, "  {possible} candidate sets"),
    };
}

impl Report {
    pub fn findings(&self) -> bool {
        match self {
            Report::Check { findings, .. } | Report::Redundancy { findings, .. } | Report::Vacuity { findings, .. } => {
                *findings
            }
            Report::Coverage { .. } | Report::Suggest { .. } => false,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialise")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match self {
            Report::Check { file, groups, .. } => {
                let _ = writeln!(out, "consistency of {file}");
                for g in groups {
                    if g.minimal_inconsistent.is_empty() {
                        let _ = writeln!(out, "[{}] consistent", g.section);
                    } else {
                        let _ = writeln!(
                            out,
                            "[{}] {} minimal inconsistent subset(s)",
                            g.section,
                            g.minimal_inconsistent.len()
                        );
                    }
                    for set in &g.minimal_inconsistent {
                        let _ = writeln!(out, "  {}", braces(set));
                        for id in set {
                            let _ = writeln!(out, "    {id}: {}", formula_of(&g.requirements, id));
                        }
                    }
                    undecided_text(&mut out, &g.undecided);
                    checks_text(&mut out, g.checks_performed, g.checks_possible);
                }
            }
            Report::Redundancy { file, groups, .. } => {
                let _ = writeln!(out, "redundancy of {file}");
                for g in groups {
                    if g.redundancies.is_empty() {
                        let _ = writeln!(out, "[{}] no redundancy", g.section);
                    } else {
                        let _ = writeln!(out, "[{}] {} redundancy(ies)", g.section, g.redundancies.len());
                    }
                    for r in &g.redundancies {
                        let _ = writeln!(out, "  {} ⇒ {}", braces(&r.witness), r.target);
                        let _ = writeln!(out, "    {}: {}", r.target, formula_of(&g.requirements, &r.target));
                    }
                    undecided_text(&mut out, &g.undecided);
                    checks_text(&mut out, g.checks_performed, g.checks_possible);
                }
            }
            Report::Vacuity { document, .. } => out.push_str(document),
            Report::Coverage {
                file,
                baseline,
                baseline_paths,
                rounds,
                candidates,
                diagnostics,
            }
            | Report::Suggest {
                file,
                baseline,
                baseline_paths,
                rounds,
                candidates,
                diagnostics,
            } => {
                let _ = writeln!(out, "coverage of the assumptions in {file}");
                let _ = writeln!(
                    out,
                    "baseline: {}% ({}) over {} path(s)",
                    baseline.percent, baseline.exact, baseline_paths
                );
                if matches!(self, Report::Suggest { .. }) {
                    let _ = writeln!(out, "candidates: {candidates}");
                }
                for r in rounds {
                    let _ = writeln!(
                        out,
                        "round {}: {}  {}% ({})",
                        r.round, r.formula, r.coverage.percent, r.coverage.exact
                    );
                }
                for d in diagnostics {
                    let _ = writeln!(out, "note: {d}");
                }
            }
        }
        out
    }
}
