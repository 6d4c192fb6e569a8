use std::io::{Read, Write};
use std::process::{Command, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use super::{import_automaton, BuchiAutomaton, Translator};
use crate::error::{Error, Result};
use crate::formula::{render_formula, Formula};

/// Runs a shell command that reads a formula on stdin and writes an
/// automaton in the neutral text format on stdout.
#[derive(Clone, Debug)]
pub struct ExternalTranslator {
    pub command: String,
    pub timeout: Duration,
}

impl ExternalTranslator {
    pub fn new(command: impl Into<String>) -> Self {
        ExternalTranslator {
            command: command.into(),
            timeout: Duration::from_secs(60),
        }
    }
}

impl Translator for ExternalTranslator {
    fn translate(&self, f: &Formula) -> Result<BuchiAutomaton> {
        let mut child = Command::new("sh")
            .arg("-c")
            .arg(&self.command)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()?;

        let input = format!("{}\n", render_formula(f));
        let mut stdin = child.stdin.take().expect("piped stdin");
        let writer = thread::spawn(move || {
            let _ = stdin.write_all(input.as_bytes());
        });
        let mut stdout = child.stdout.take().expect("piped stdout");
        let reader = thread::spawn(move || {
            let mut s = String::new();
            let _ = stdout.read_to_string(&mut s);
            s
        });
        let mut stderr = child.stderr.take().expect("piped stderr");
        let err_reader = thread::spawn(move || {
            let mut s = String::new();
            let _ = stderr.read_to_string(&mut s);
            s
        });

        let started = Instant::now();
        let status = loop {
            if let Some(status) = child.try_wait()? {
                break status;
            }
            if started.elapsed() >= self.timeout {
                let _ = child.kill();
                let _ = child.wait();
                return Err(Error::ExternalTimeout {
                    command: self.command.clone(),
                    timeout: self.timeout,
                });
            }
            thread::sleep(Duration::from_millis(5));
        };
        let _ = writer.join();
        let out = reader.join().unwrap_or_default();
        let err = err_reader.join().unwrap_or_default();
        if !status.success() {
            return Err(Error::ExternalTool {
                command: self.command.clone(),
                status: status.to_string(),
                stderr: err.trim().to_string(),
            });
        }
        Ok(import_automaton(&out)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{export_automaton, translate};
    use crate::formula::parse_formula;

    #[test]
    fn failing_command_reports_stderr() {
        let t = ExternalTranslator::new("echo broken >&2; exit 3");
        let err = t.translate(&Formula::True).unwrap_err();
        match err {
            Error::ExternalTool { stderr, .. } => assert_eq!(stderr, "broken"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn timeout_kills_the_command() {
        let mut t = ExternalTranslator::new("sleep 5");
        t.timeout = Duration::from_millis(100);
        assert!(matches!(
            t.translate(&Formula::True),
            Err(Error::ExternalTimeout { .. })
        ));
    }

    #[test]
    fn echoed_automaton_is_imported() {
        let f = parse_formula("G (a -> F b)").unwrap();
        let expected = translate(&f).unwrap();
        let dir = std::env::temp_dir().join(format!("reqsane-ext-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let file = dir.join("a.ba");
        std::fs::write(&file, export_automaton(&expected)).unwrap();
        let t = ExternalTranslator::new(format!("cat >/dev/null; cat '{}'", file.display()));
        assert_eq!(t.translate(&f).unwrap(), expected);
        let _ = std::fs::remove_dir_all(&dir);
    }

    #[test]
    fn malformed_output_is_a_format_error() {
        let t = ExternalTranslator::new("cat >/dev/null; echo nonsense");
        assert!(matches!(t.translate(&Formula::True), Err(Error::Format(_))));
    }
}
