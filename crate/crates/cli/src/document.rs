//! Line-oriented requirement files.
//!
//! ```text
//! # comment
//! [assumptions]
//! A1: forall G (a <-> b)
//! [required]
//! R1: exists F l
//! ```
//!
//! Entries before the first section header are plain requirements. The
//! original text is kept line by line, so writing an unmodified document
//! reproduces the input byte for byte.

use std::collections::HashSet;
use std::fmt;
use std::path::{Path, PathBuf};

use reqsane::formula::{Category, Requirement};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct DocumentError {
    pub path: Option<PathBuf>,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for DocumentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(p) = &self.path {
            write!(f, "{}:", p.display())?;
        }
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Line {
    Other(String),
    Section(String, Category),
    Entry(String, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RequirementDocument {
    lines: Vec<Line>,
    requirements: Vec<Requirement>,
    pub source: Option<PathBuf>,
    pub diagnostics: Vec<String>,
}

fn valid_id(id: &str) -> bool {
    !id.is_empty()
        && id
            .chars()
            .all(|c| c.is_alphanumeric() || matches!(c, '_' | '.' | '-' | '\''))
}

impl RequirementDocument {
    pub fn parse(text: &str, source: Option<&Path>) -> Result<Self, DocumentError> {
        let err = |line: usize, column: usize, message: String| DocumentError {
            path: source.map(Path::to_path_buf),
            line,
            column,
            message,
        };
        let mut doc = RequirementDocument {
            lines: Vec::new(),
            requirements: Vec::new(),
            source: source.map(Path::to_path_buf),
            diagnostics: Vec::new(),
        };
        let mut category = Category::Plain;
        let mut ids = HashSet::new();
        for (n, raw) in text.split('\n').enumerate() {
            let line_no = n + 1;
            let content = raw.trim_end_matches('\r');
            let trimmed = content.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                doc.lines.push(Line::Other(raw.to_string()));
                continue;
            }
            if let Some(tag) = trimmed.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
                category = Category::from_section(tag.trim())
                    .ok_or_else(|| err(line_no, 1, format!("unknown section '[{tag}]'")))?;
                doc.lines.push(Line::Section(raw.to_string(), category));
                continue;
            }
            let Some((id, formula)) = content.split_once(':') else {
                return Err(err(line_no, 1, "expected 'id: formula'".to_string()));
            };
            let id = id.trim();
            if !valid_id(id) {
                return Err(err(line_no, 1, format!("invalid requirement id '{id}'")));
            }
            if !ids.insert(id.to_string()) {
                return Err(err(line_no, 1, format!("duplicate requirement id '{id}'")));
            }
            let offset = content.len() - content[content.find(':').unwrap() + 1..].trim_start().len();
            let req = Requirement::parse(id, category, formula).map_err(|e| {
                let column = if e.line == 1 { offset + e.column } else { e.column };
                err(line_no, column, e.kind.to_string())
            })?;
            doc.lines.push(Line::Entry(raw.to_string(), doc.requirements.len()));
            doc.requirements.push(req);
        }
        Ok(doc)
    }

    pub fn load(path: &Path) -> Result<Self, crate::CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| crate::CliError::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        Ok(Self::parse(&text, Some(path))?)
    }

    pub fn write(&self) -> String {
        let parts: Vec<&str> = self
            .lines
            .iter()
            .map(|l| match l {
                Line::Other(s) | Line::Section(s, _) | Line::Entry(s, _) => s.as_str(),
            })
            .collect();
        parts.join("\n")
    }

    pub fn requirements(&self) -> &[Requirement] {
        &self.requirements
    }

    pub fn section(&self, category: Category) -> Vec<&Requirement> {
        self.requirements.iter().filter(|r| r.category == category).collect()
    }

    pub fn get(&self, id: &str) -> Option<&Requirement> {
        self.requirements.iter().find(|r| r.id == id)
    }

    /// Adds `req` after the last line of its section, preceded by the
    /// given comment lines. A missing section is appended at the end.
    pub fn append(&mut self, req: Requirement, comments: &[String]) {
        let mut new_lines: Vec<Line> = comments.iter().map(|c| Line::Other(format!("# {c}"))).collect();
        new_lines.push(Line::Entry(
            format!("{}: {}", req.id, req.formula),
            self.requirements.len(),
        ));
        let category = req.category;
        self.requirements.push(req);

        // End of the last block belonging to the category.
        let mut current = Category::Plain;
        let mut last_in_section = None;
        for (i, l) in self.lines.iter().enumerate() {
            match l {
                Line::Section(_, c) => {
                    current = *c;
                    if current == category {
                        last_in_section = Some(i);
                    }
                }
                Line::Entry(..) if current == category => last_in_section = Some(i),
                _ => {}
            }
        }
        let ends_with_newline = matches!(self.lines.last(), Some(Line::Other(s)) if s.is_empty());
        let at = match last_in_section {
            Some(i) => i + 1,
            None => {
                let mut at = self.lines.len();
                if ends_with_newline {
                    at -= 1;
                }
                let section = format!("[{}]", category.section());
                self.lines.insert(at, Line::Section(section, category));
                at + 1
            }
        };
        self.lines.splice(at..at, new_lines);
        if !matches!(self.lines.last(), Some(Line::Other(s)) if s.is_empty()) {
            self.lines.push(Line::Other(String::new()));
        }
    }

    /// Inserts a comment as the very first line.
    pub fn prepend_comment(&mut self, comment: &str) {
        self.lines.insert(0, Line::Other(format!("# {comment}")));
    }

    pub fn first_line(&self) -> Option<&str> {
        self.lines.first().map(|l| match l {
            Line::Other(s) | Line::Section(s, _) | Line::Entry(s, _) => s.as_str(),
        })
    }
}
