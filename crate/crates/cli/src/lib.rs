//! Command-line front end: requirement files in, sanity reports out.

pub mod document;
pub mod report;

mod commands;

use std::io::{BufRead, Write};
use std::path::PathBuf;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};

use reqsane::automaton::{ExternalTranslator, Tableau, Translator, DEFAULT_MAX_STATES};
use reqsane::coverage::DEFAULT_MAX_PATHS;

pub use document::{DocumentError, RequirementDocument};
pub use report::Report;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Document(#[from] DocumentError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Analysis(#[from] reqsane::Error),
    #[error("{0}")]
    Usage(String),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub jobs: usize,
    pub output_format: OutputFormat,
    pub seed: u64,
    pub rounds: usize,
    pub interactive: bool,
    pub candidates: Option<PathBuf>,
    pub candidate_count: usize,
    pub depth: usize,
    pub translator_command: Option<String>,
    pub translator_timeout: Duration,
    pub max_states: usize,
    pub max_paths: usize,
    pub output: Option<PathBuf>,
    pub stats: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            jobs: default_jobs(),
            output_format: OutputFormat::Text,
            seed: 0,
            rounds: 3,
            interactive: false,
            candidates: None,
            candidate_count: 300,
            depth: 3,
            translator_command: None,
            translator_timeout: Duration::from_secs(60),
            max_states: DEFAULT_MAX_STATES,
            max_paths: DEFAULT_MAX_PATHS,
            output: None,
            stats: false,
        }
    }
}

impl RunConfig {
    pub fn translator(&self) -> Box<dyn Translator> {
        match &self.translator_command {
            Some(cmd) => Box::new(ExternalTranslator {
                command: cmd.clone(),
                timeout: self.translator_timeout,
            }),
            None => Box::new(Tableau {
                max_states: self.max_states,
            }),
        }
    }
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Parser, Debug)]
#[command(name = "reqsane", version, about = "Sanity checking of LTL requirement sets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Worker threads [default: available parallelism]
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Seed for random candidate generation
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Suggestion rounds
    #[arg(long, global = true, default_value_t = 3)]
    pub rounds: usize,
    /// Ask after every suggestion round whether to go on
    #[arg(long, global = true)]
    pub interactive: bool,
    /// Candidate pool, one formula per line
    #[arg(long, global = true, value_name = "FILE")]
    pub candidates: Option<PathBuf>,
    /// Number of generated candidates when no pool is given
    #[arg(long, global = true, default_value_t = 300)]
    pub candidate_count: usize,
    /// Maximal nesting depth of generated candidates
    #[arg(long, global = true, default_value_t = 3)]
    pub depth: usize,
    /// Shell command translating a formula on stdin to an automaton on stdout
    #[arg(long, global = true, value_name = "CMD")]
    pub translator: Option<String>,
    /// Seconds before an external translator is killed
    #[arg(long, global = true, default_value_t = 60)]
    pub translator_timeout: u64,
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_STATES)]
    pub max_states: usize,
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_PATHS)]
    pub max_paths: usize,
    /// Write the resulting requirement file here
    #[arg(long, short, global = true, value_name = "FILE")]
    pub output: Option<PathBuf>,
    /// Report how many candidate sets were actually checked
    #[arg(long, global = true)]
    pub stats: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List all minimal inconsistent subsets of every section
    Check { file: PathBuf },
    /// List every requirement implied by a consistent subset of the others
    Redundancy { file: PathBuf },
    /// Add vacuity-excluding existential requirements
    Vacuity { file: PathBuf },
    /// Coverage of the assumptions by the required and forbidden behaviour
    Coverage { file: PathBuf },
    /// Suggest requirements that improve coverage
    Suggest { file: PathBuf },
    /// Print the automaton of a formula in the neutral format
    #[command(hide = true)]
    Translate { formula: Option<String> },
}

impl Cli {
    pub fn config(&self) -> RunConfig {
        RunConfig {
            jobs: self.jobs.map_or_else(default_jobs, |j| j as usize),
            output_format: self.format,
            seed: self.seed,
            rounds: self.rounds,
            interactive: self.interactive,
            candidates: self.candidates.clone(),
            candidate_count: self.candidate_count,
            depth: self.depth,
            translator_command: self.translator.clone(),
            translator_timeout: Duration::from_secs(self.translator_timeout),
            max_states: self.max_states,
            max_paths: self.max_paths,
            output: self.output.clone(),
            stats: self.stats,
        }
    }
}

/// What a command found, deciding the exit code.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub findings: bool,
    /// Some check hit a resource limit.
    pub incomplete: bool,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        if self.incomplete {
            2
        } else if self.findings {
            1
        } else {
            0
        }
    }
}

/// Runs the command line `args` (program name first). Returns the exit code.
pub fn run<I, T>(args: I, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return 2;
            }
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    let config = cli.config();
    let name = command_name(&cli.command);
    match commands::dispatch(&cli.command, &config, input, out, err) {
        Ok(outcome) => outcome.exit_code(),
        Err(e) => {
            match config.output_format {
                OutputFormat::Text => {
                    let _ = writeln!(err, "error: {e}");
                }
                OutputFormat::Json => {
                    let r = report::ErrorReport {
                        command: name.to_string(),
                        error: e.to_string(),
                    };
                    let _ = writeln!(out, "{}", serde_json::to_string_pretty(&r).expect("serialisable"));
                }
            }
            2
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Check { .. } => "check",
        Command::Redundancy { .. } => "redundancy",
        Command::Vacuity { .. } => "vacuity",
        Command::Coverage { .. } => "coverage",
        Command::Suggest { .. } => "suggest",
        Command::Translate { .. } => "translate",
    }
}

pub use commands::{cmd_check, cmd_coverage, cmd_redundancy, cmd_suggest, cmd_vacuity};
