use std::collections::BTreeSet;
use std::io::{BufRead, Write};
use std::path::Path;

use num_rational::BigRational;

use reqsane::automaton::{export_automaton, Translator};
use reqsane::coverage::{
    completeness_loop, generate_candidates, CandidateOptions, CompletenessInput, CoverageReport, Decision, Round,
};
use reqsane::formula::{parse, parse_formula, render_formula, Category, Formula, Requirement};
use reqsane::sanity::{find_min_inconsistent_with, find_redundancies_with, SanityReport};
use reqsane::vacuity::augment_with;

use crate::document::RequirementDocument;
use crate::report::{
    CheckGroup, CoverageValue, DroppedEntry, RedundancyEntry, RedundancyGroup, Report, RequirementRef,
    RoundEntry, UndecidedSet, WitnessGroup,
};
use crate::{CliError, Command, Outcome, OutputFormat, RunConfig};

const SECTIONS: [Category; 4] = [
    Category::Assumption,
    Category::Required,
    Category::Forbidden,
    Category::Plain,
];

const AUGMENTED_HEADER: &str = "augmented with vacuity witnesses";

pub(crate) fn dispatch(
    command: &Command,
    config: &RunConfig,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<Outcome, CliError> {
    let (report, incomplete) = match command {
        Command::Check { file } => cmd_check(&RequirementDocument::load(file)?, config)?,
        Command::Redundancy { file } => cmd_redundancy(&RequirementDocument::load(file)?, config)?,
        Command::Vacuity { file } => {
            let (report, doc) = cmd_vacuity(&RequirementDocument::load(file)?, config)?;
            if let Some(path) = &config.output {
                write_file(path, &doc.write())?;
                if config.output_format == OutputFormat::Text {
                    let _ = writeln!(err, "wrote {}", path.display());
                }
            }
            (report, false)
        }
        Command::Coverage { file } => (cmd_coverage(&RequirementDocument::load(file)?, config)?, false),
        Command::Suggest { file } => {
            let doc = RequirementDocument::load(file)?;
            let (report, doc) = cmd_suggest(&doc, config, input, err)?;
            if let Some(path) = &config.output {
                write_file(path, &doc.write())?;
            }
            (report, false)
        }
        Command::Translate { formula } => {
            let text = match formula {
                Some(t) => t.clone(),
                None => {
                    let mut s = String::new();
                    input
                        .read_to_string(&mut s)
                        .map_err(|e| CliError::Usage(format!("reading stdin: {e}")))?;
                    s
                }
            };
            let f = parse_formula(&text).map_err(|e| CliError::Usage(format!("formula: {e}")))?;
            let a = config.translator().translate(&f)?;
            let _ = write!(out, "{}", export_automaton(&a));
            return Ok(Outcome::default());
        }
    };
    let findings = report.findings();
    let text = match config.output_format {
        OutputFormat::Text => match (&report, &config.output) {
            // The document went to a file; keep stdout for the summary.
            (Report::Vacuity { witness_sets, .. }, Some(_)) => {
                let n: usize = witness_sets.iter().map(|w| w.injected.len()).sum();
                format!("{n} requirement(s) added\n")
            }
            _ => report.to_text(),
        },
        OutputFormat::Json => report.to_json() + "\n",
    };
    let _ = out.write_all(text.as_bytes());
    Ok(Outcome { findings, incomplete })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

fn file_name(doc: &RequirementDocument) -> String {
    doc.source
        .as_ref()
        .map_or_else(|| "<input>".to_string(), |p| p.display().to_string())
}

fn refs(reqs: &[&Requirement]) -> Vec<RequirementRef> {
    reqs.iter()
        .map(|r| RequirementRef {
            id: r.id.clone(),
            formula: r.formula.to_string(),
        })
        .collect()
}

fn ids(reqs: &[&Requirement], set: &[usize]) -> Vec<String> {
    set.iter().map(|&i| reqs[i].id.clone()).collect()
}

fn undecided(reqs: &[&Requirement], r: &SanityReport) -> Vec<UndecidedSet> {
    r.undecided
        .iter()
        .map(|u| UndecidedSet {
            set: ids(reqs, &u.set),
            target: u.target.map(|t| reqs[t].id.clone()),
            reason: u.reason.clone(),
        })
        .collect()
}

/// Non-empty sections in file order of categories.
fn sections(doc: &RequirementDocument) -> Vec<(Category, Vec<&Requirement>)> {
    SECTIONS
        .iter()
        .map(|&c| (c, doc.section(c)))
        .filter(|(_, reqs)| !reqs.is_empty())
        .collect()
}

/// Minimal inconsistent subsets of every section. The second value is set
/// when some check hit a resource limit.
pub fn cmd_check(doc: &RequirementDocument, config: &RunConfig) -> Result<(Report, bool), CliError> {
    let translator = config.translator();
    let mut groups = Vec::new();
    let mut incomplete = false;
    for (category, reqs) in sections(doc) {
        let gamma: Vec<_> = reqs.iter().map(|r| r.formula.clone()).collect();
        let r = find_min_inconsistent_with(&gamma, config.jobs, translator.as_ref())?;
        incomplete |= !r.undecided.is_empty();
        groups.push(CheckGroup {
            section: category.section().to_string(),
            requirements: refs(&reqs),
            minimal_inconsistent: r.minimal_inconsistent.iter().map(|s| ids(&reqs, s)).collect(),
            undecided: undecided(&reqs, &r),
            checks_performed: config.stats.then_some(r.checks_performed),
            checks_possible: r.checks_possible,
        });
    }
    let findings = groups.iter().any(|g| !g.minimal_inconsistent.is_empty());
    Ok((
        Report::Check {
            file: file_name(doc),
            groups,
            findings,
        },
        incomplete,
    ))
}

/// Minimal redundancy witnesses within every section.
pub fn cmd_redundancy(doc: &RequirementDocument, config: &RunConfig) -> Result<(Report, bool), CliError> {
    let translator = config.translator();
    let mut groups = Vec::new();
    let mut incomplete = false;
    for (category, reqs) in sections(doc) {
        let gamma: Vec<_> = reqs.iter().map(|r| r.formula.clone()).collect();
        let r = find_redundancies_with(&gamma, config.jobs, translator.as_ref())?;
        incomplete |= !r.undecided.is_empty();
        groups.push(RedundancyGroup {
            section: category.section().to_string(),
            requirements: refs(&reqs),
            redundancies: r
                .redundancies
                .iter()
                .map(|x| RedundancyEntry {
                    target: reqs[x.target].id.clone(),
                    witness: ids(&reqs, &x.witness),
                })
                .collect(),
            undecided: undecided(&reqs, &r),
            checks_performed: config.stats.then_some(r.checks_performed),
            checks_possible: r.checks_possible,
        });
    }
    let findings = groups.iter().any(|g| !g.redundancies.is_empty());
    Ok((
        Report::Redundancy {
            file: file_name(doc),
            groups,
            findings,
        },
        incomplete,
    ))
}

/// The document extended by the surviving vacuity requirements, each after
/// a comment naming its witness.
pub fn cmd_vacuity(
    doc: &RequirementDocument,
    config: &RunConfig,
) -> Result<(Report, RequirementDocument), CliError> {
    let translator = config.translator();
    let aug = augment_with(doc.requirements(), config.jobs, translator.as_ref())?;
    let mut out = doc.clone();
    if !out.first_line().is_some_and(|l| l == format!("# {AUGMENTED_HEADER}")) {
        out.prepend_comment(AUGMENTED_HEADER);
    }
    let mut groups = Vec::new();
    for ws in &aug.witness_sets {
        for (w, req) in ws.witnesses.iter().zip(witness_injections(ws)) {
            if let Some(req) = req {
                out.append(
                    req.clone(),
                    &[format!("vacuity witness of {}: {}", ws.source.id, render_formula(w))],
                );
            }
        }
        groups.push(WitnessGroup {
            source: ws.source.id.clone(),
            witnesses: ws.witnesses.iter().map(render_formula).collect(),
            injected: refs(&ws.injected.iter().collect::<Vec<_>>()),
            diagnostics: ws.diagnostics.clone(),
        });
    }
    let dropped = aug
        .dropped
        .iter()
        .map(|d| DroppedEntry {
            id: d.requirement.id.clone(),
            formula: d.requirement.formula.to_string(),
            implied_by: d.implied_by.clone(),
        })
        .collect();
    let findings = groups.iter().any(|g| !g.injected.is_empty());
    let report = Report::Vacuity {
        file: file_name(doc),
        witness_sets: groups,
        dropped,
        document: out.write(),
        findings,
    };
    Ok((report, out))
}

/// Pairs every witness with the requirement injected for it, if any survived.
fn witness_injections(ws: &reqsane::vacuity::WitnessSet) -> Vec<Option<&Requirement>> {
    ws.witnesses
        .iter()
        .map(|w| {
            let q = reqsane::vacuity::negated_witness(w);
            ws.injected.iter().find(|r| r.formula == q)
        })
        .collect()
}

fn bodies(doc: &RequirementDocument, c: Category) -> Vec<Formula> {
    doc.section(c).iter().map(|r| r.formula.body.clone()).collect()
}

fn load_candidates(path: &Path) -> Result<Vec<Formula>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let f = parse(t).map_err(|e| CliError::Usage(format!("{}:{}:{}: {}", path.display(), n + 1, e.column, e.kind)))?;
        if !out.contains(&f.body) {
            out.push(f.body);
        }
    }
    Ok(out)
}

fn candidate_pool(
    doc: &RequirementDocument,
    config: &RunConfig,
    translator: &dyn Translator,
) -> Result<Vec<Formula>, CliError> {
    if let Some(path) = &config.candidates {
        return load_candidates(path);
    }
    let aps: BTreeSet<String> = doc
        .requirements()
        .iter()
        .filter(|r| r.category != Category::Plain)
        .flat_map(|r| r.formula.body.atoms())
        .collect();
    let opts = CandidateOptions {
        count: config.candidate_count,
        depth: config.depth,
        seed: config.seed,
    };
    Ok(generate_candidates(&aps.into_iter().collect::<Vec<_>>(), &opts, translator)?)
}

fn coverage_report(
    doc: &RequirementDocument,
    report: &CoverageReport<BigRational>,
    candidates: usize,
    suggest: bool,
) -> Report {
    let rounds = report
        .rounds
        .iter()
        .enumerate()
        .map(|(i, r)| RoundEntry {
            round: i + 1,
            formula: render_formula(&r.selected),
            coverage: CoverageValue::from(&r.coverage),
            evaluated: r.evaluated,
        })
        .collect();
    let file = file_name(doc);
    let baseline = CoverageValue::from(&report.baseline);
    let diagnostics = report.diagnostics.clone();
    if suggest {
        Report::Suggest {
            file,
            baseline,
            baseline_paths: report.baseline_paths,
            candidates,
            rounds,
            diagnostics,
        }
    } else {
        Report::Coverage {
            file,
            baseline,
            baseline_paths: report.baseline_paths,
            candidates,
            rounds,
            diagnostics,
        }
    }
}

fn run_loop(
    doc: &RequirementDocument,
    config: &RunConfig,
    candidates: Vec<Formula>,
    translator: &dyn Translator,
    on_round: impl FnMut(&Round<BigRational>) -> Decision,
) -> Result<CoverageReport<BigRational>, CliError> {
    let assumptions = bodies(doc, Category::Assumption);
    if assumptions.is_empty() {
        return Err(CliError::Usage("the document has no [assumptions] section".to_string()));
    }
    let input = CompletenessInput {
        assumptions: &assumptions,
        required: &bodies(doc, Category::Required),
        forbidden: &bodies(doc, Category::Forbidden),
        candidates,
        rounds: config.rounds,
        max_paths: config.max_paths,
        jobs: config.jobs,
        translator,
    };
    Ok(completeness_loop(&input, on_round)?)
}

/// Coverage of the assumptions without suggestions.
pub fn cmd_coverage(doc: &RequirementDocument, config: &RunConfig) -> Result<Report, CliError> {
    let translator = config.translator();
    let r = run_loop(doc, &RunConfig { rounds: 0, ..config.clone() }, Vec::new(), translator.as_ref(), |_| {
        Decision::Continue
    })?;
    Ok(coverage_report(doc, &r, 0, false))
}

/// Runs the suggestion rounds. In interactive mode every round is shown on
/// `prompt` and a line from `input` decides whether to go on. The returned
/// document has the selected formulas appended to its required section.
pub fn cmd_suggest(
    doc: &RequirementDocument,
    config: &RunConfig,
    input: &mut dyn BufRead,
    prompt: &mut dyn Write,
) -> Result<(Report, RequirementDocument), CliError> {
    let translator = config.translator();
    let candidates = candidate_pool(doc, config, translator.as_ref())?;
    let count = candidates.len();
    let mut round_no = 0;
    let r = run_loop(doc, config, candidates, translator.as_ref(), |round| {
        round_no += 1;
        if !config.interactive {
            return Decision::Continue;
        }
        let cov = CoverageValue::from(&round.coverage);
        let _ = writeln!(
            prompt,
            "round {round_no}: {}  {}% ({})",
            render_formula(&round.selected),
            cov.percent,
            cov.exact
        );
        let _ = write!(prompt, "[a]ccept and continue, [s]top: ");
        let _ = prompt.flush();
        let mut line = String::new();
        match input.read_line(&mut line) {
            Ok(0) | Err(_) => Decision::Stop,
            Ok(_) => match line.trim() {
                "s" | "stop" | "q" => Decision::Stop,
                _ => Decision::Continue,
            },
        }
    })?;
    let mut out = doc.clone();
    for (i, round) in r.rounds.iter().enumerate() {
        let mut id = format!("S{}", i + 1);
        while out.get(&id).is_some() {
            id.push('_');
        }
        let req = Requirement {
            id,
            category: Category::Required,
            formula: reqsane::formula::QuantifiedFormula::universal(round.selected.clone()),
            source_text: render_formula(&round.selected),
        };
        let cov = CoverageValue::from(&round.coverage);
        out.append(req, &[format!("suggested in round {}, coverage {}%", i + 1, cov.percent)]);
    }
    Ok((coverage_report(doc, &r, count, true), out))
}
