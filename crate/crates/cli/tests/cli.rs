use std::io::Cursor;
use std::path::PathBuf;
use std::process::Command;

use reqsane_cli::{run, RequirementDocument};
use serde_json::Value;

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn schema() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schema/report.schema.json")
}

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn reqsane_with_input(args: &[&str], stdin: &str) -> Output {
    let mut input = Cursor::new(stdin.as_bytes().to_vec());
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("reqsane").chain(args.iter().copied());
    let code = run(argv, &mut input, &mut out, &mut err);
    Output {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn reqsane(args: &[&str]) -> Output {
    reqsane_with_input(args, "")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let o = reqsane(&full);
    let v = serde_json::from_str(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", o.stdout));
    (o.code, v)
}

fn validate(report: &Value) {
    let script = "import json,sys,jsonschema\n\
                  s=json.load(open(sys.argv[1]))\n\
                  jsonschema.validate(json.load(sys.stdin), s, cls=jsonschema.Draft202012Validator)";
    let mut child = Command::new("python3")
        .args(["-c", script])
        .arg(schema())
        .stdin(std::process::Stdio::piped())
        .stderr(std::process::Stdio::piped())
        .spawn()
        .expect("python3 available");
    use std::io::Write;
    child
        .stdin
        .take()
        .unwrap()
        .write_all(report.to_string().as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success(), "{}\n{report:#}", String::from_utf8_lossy(&out.stderr));
}

fn sets(v: &Value, key: &str) -> Vec<Vec<String>> {
    let mut out: Vec<Vec<String>> = v["groups"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|g| g[key].as_array().unwrap().clone())
        .map(|s| {
            let mut ids: Vec<String> = s.as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect();
            ids.sort();
            ids
        })
        .collect();
    out.sort();
    out
}

#[test]
fn exit_codes() {
    assert_eq!(reqsane(&["check", &fixture("heating.req")]).code, 1);
    assert_eq!(reqsane(&["check", &fixture("consistent.req")]).code, 0);
    assert_eq!(reqsane(&["redundancy", &fixture("consistent.req")]).code, 0);
    assert_eq!(reqsane(&["redundancy", &fixture("tautology.req")]).code, 1);
    let nested = reqsane(&["check", &fixture("nested.req")]);
    assert_eq!(nested.code, 2);
    assert!(nested.stderr.contains("nested.req:2:"), "{}", nested.stderr);
    assert_eq!(reqsane(&["suggest", &fixture("two-signal.req")]).code, 2);
    assert_eq!(reqsane(&["check", "/nonexistent.req"]).code, 2);
    assert_eq!(reqsane(&["check"]).code, 2);
    assert_eq!(reqsane(&["--jobs", "0", "check", &fixture("heating.req")]).code, 2);
}

#[test]
fn reports_match_the_schema() {
    for args in [
        vec!["check", "heating.req"],
        vec!["check", "triple.req"],
        vec!["redundancy", "tautology.req"],
        vec!["redundancy", "consistent.req"],
        vec!["vacuity", "two-signal.req"],
        vec!["coverage", "aeroplane-sane.req"],
        vec!["check", "nested.req"],
    ] {
        let file = fixture(args[1]);
        let (_, v) = json(&[args[0], &file]);
        validate(&v);
        assert_eq!(v["command"], args[0]);
    }
    let (_, v) = json(&["--stats", "check", &fixture("heating.req")]);
    validate(&v);
    assert_eq!(v["groups"][0]["checks_performed"], 9);
    let (_, v) = json(&["suggest", &fixture("request-response.req"), "--rounds", "0"]);
    validate(&v);
    assert_eq!(v["command"], "suggest");
    assert!(v["error"].as_str().unwrap().contains("assumptions"));
}

#[test]
fn text_and_json_agree() {
    let file = fixture("heating.req");
    let text = reqsane(&["check", &file]).stdout;
    let (_, v) = json(&["check", &file]);
    let found = sets(&v, "minimal_inconsistent");
    assert_eq!(found.len(), 3);
    for set in found {
        assert!(text.contains(&format!("{{{}}}", set.join(", "))), "{set:?} missing in\n{text}");
    }
    assert!(text.contains("3 minimal inconsistent subset(s)"));

    let file = fixture("tautology.req");
    let text = reqsane(&["redundancy", &file]).stdout;
    let (_, v) = json(&["redundancy", &file]);
    let entry = &v["groups"][0]["redundancies"][0];
    assert_eq!(entry["target"], "T");
    assert!(text.contains("{} ⇒ T"), "{text}");
}

#[test]
fn fixtures_round_trip_exactly() {
    for entry in std::fs::read_dir(fixture("")).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "req") && !path.ends_with("nested.req") {
            let text = std::fs::read_to_string(&path).unwrap();
            let doc = RequirementDocument::parse(&text, Some(&path)).unwrap();
            assert_eq!(doc.write(), text, "{}", path.display());
        }
    }
}

#[test]
fn vacuity_of_existentials_only_adds_the_header() {
    let file = fixture("existential.req");
    let o = reqsane(&["vacuity", &file]);
    assert_eq!(o.code, 0);
    let original = std::fs::read_to_string(&file).unwrap();
    assert_eq!(o.stdout, format!("# augmented with vacuity witnesses\n{original}"));
}

#[test]
fn vacuity_output_is_stable_under_reapplication() {
    let dir = tempfile::tempdir().unwrap();
    let once = dir.path().join("once.req");
    let twice = dir.path().join("twice.req");
    let o = reqsane(&["vacuity", &fixture("two-signal.req"), "-o", once.to_str().unwrap()]);
    assert_eq!(o.code, 1);
    let first = std::fs::read_to_string(&once).unwrap();
    assert!(first.contains("# vacuity witness of s1"), "{first}");
    assert!(!first.contains("exists F a\n"), "{first}");
    let o = reqsane(&["vacuity", once.to_str().unwrap(), "-o", twice.to_str().unwrap()]);
    assert_eq!(o.code, 0);
    assert_eq!(std::fs::read_to_string(&twice).unwrap(), first);
}

#[test]
fn interactive_stop_keeps_one_round() {
    let file = fixture("aeroplane-sane.req");
    let pool = fixture("aeroplane-candidates.txt");
    let o = reqsane_with_input(
        &["suggest", &file, "--candidates", &pool, "--interactive", "--format", "json"],
        "s\n",
    );
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v: Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(v["rounds"].as_array().unwrap().len(), 1);
    assert!(o.stderr.contains("[a]ccept and continue, [s]top"));

    let o = reqsane_with_input(&["suggest", &file, "--candidates", &pool, "--interactive"], "a\n");
    assert_eq!(o.stdout.matches("round ").count(), 2, "{}", o.stdout);
}

#[test]
fn zero_rounds_report_the_baseline() {
    let file = fixture("aeroplane-sane.req");
    let pool = fixture("aeroplane-candidates.txt");
    let (code, v) = json(&["suggest", &file, "--candidates", &pool, "--rounds", "0"]);
    assert_eq!(code, 0);
    assert!(v["rounds"].as_array().unwrap().is_empty());
    let (_, c) = json(&["coverage", &file]);
    assert_eq!(v["baseline"], c["baseline"]);
    assert_eq!(v["candidates"], 8);
}

#[test]
fn suggestions_are_appended_to_the_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.req");
    let file = fixture("aeroplane-sane.req");
    let pool = fixture("aeroplane-candidates.txt");
    let o = reqsane(&[
        "suggest",
        &file,
        "--candidates",
        &pool,
        "--rounds",
        "2",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let written = std::fs::read_to_string(&out).unwrap();
    let doc = RequirementDocument::parse(&written, None).unwrap();
    assert!(doc.get("S1").is_some() && doc.get("S2").is_some(), "{written}");
    assert!(written.contains("# suggested in round 1, coverage"));
    let original = std::fs::read_to_string(&file).unwrap();
    assert_eq!(doc.requirements().len(), RequirementDocument::parse(&original, None).unwrap().requirements().len() + 2);
}

#[test]
fn reports_do_not_depend_on_jobs() {
    for (cmd, file) in [
        ("check", "heating.req"),
        ("check", "aeroplane.req"),
        ("redundancy", "aeroplane.req"),
        ("vacuity", "two-signal.req"),
        ("coverage", "aeroplane-sane.req"),
    ] {
        let file = fixture(file);
        let one = reqsane(&[cmd, &file, "--jobs", "1", "--format", "json"]);
        let eight = reqsane(&[cmd, &file, "--jobs", "8", "--format", "json"]);
        assert_eq!(one.stdout, eight.stdout, "{cmd} {file}");
        assert_eq!(one.code, eight.code);
    }
}

#[test]
fn external_translator_matches_the_builtin_one() {
    let bin = env!("CARGO_BIN_EXE_reqsane");
    let translator = format!("{bin} translate");
    for (cmd, file) in [("check", "heating.req"), ("vacuity", "two-signal.req")] {
        let file = fixture(file);
        let builtin = reqsane(&[cmd, &file, "--format", "json"]);
        let external = reqsane(&[cmd, &file, "--format", "json", "--translator", &translator]);
        assert_eq!(builtin.stdout, external.stdout, "{cmd}: {}", external.stderr);
    }
    let broken = reqsane(&["check", &fixture("heating.req"), "--translator", "false"]);
    assert_eq!(broken.code, 2);
}

#[test]
fn binary_runs_end_to_end() {
    let out = Command::new(env!("CARGO_BIN_EXE_reqsane"))
        .args(["check", &fixture("triple.req")])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("{s1, s2, s3}"));
    let out = Command::new(env!("CARGO_BIN_EXE_reqsane"))
        .args(["translate", "G F p"])
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ba v1"));
}
