use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use reqsane::automaton::{import_automaton, translate, AcceptanceMode, Label, Tableau};
use reqsane::coverage::{
    automaton_coverage, completeness_loop, edge_coverage, enumerate_paths, generate_candidates, path_coverage,
    AlmostSimplePath, CandidateOptions, DEFAULT_MAX_PATHS, CompletenessInput, Decision,
};
use reqsane::formula::{parse_formula, Formula};
use reqsane::{ExactCoverage, FloatCoverage};
use reqsane_testkit::{
    atoms, brute_force_paths, edge_coverage_oracle, path_coverage_oracle, random_automaton,
};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn a_a() -> reqsane::automaton::BuchiAutomaton {
    // a b c d e = 0 1 2 3 4
    import_automaton(
        "ba v1
acceptance: state
states: 5
initial: 0
accepting-states: 4
ap:
edge 0: 0 1
edge 1: 1 2
edge 2: 2 3
edge 3: 3 1
edge 4: 3 4
edge 5: 4 4
",
    )
    .unwrap()
}

fn a_b() -> reqsane::automaton::BuchiAutomaton {
    // f g h i
    import_automaton(
        "ba v1
acceptance: state
states: 4
initial: 0
accepting-states: 3
ap: a b c
edge 0: 0 1 a
edge 1: 1 2 a b
edge 2: 1 2 !a b
edge 3: 2 3 c a
edge 4: 3 3 a
",
    )
    .unwrap()
}

fn a_c() -> reqsane::automaton::BuchiAutomaton {
    // j k l m
    import_automaton(
        "ba v1
acceptance: state
states: 4
initial: 0
accepting-states: 3
ap: a b c d
edge 0: 0 1 a d
edge 1: 1 2 !c b
edge 2: 2 3 c
edge 3: 3 3 a
",
    )
    .unwrap()
}

fn numbered(paths: &[AlmostSimplePath]) -> Vec<String> {
    let mut out: Vec<String> = paths
        .iter()
        .map(|p| p.edges.iter().map(|e| (e + 1).to_string()).collect())
        .collect();
    out.sort();
    out
}

#[test]
fn two_visit_paths_of_the_looping_automaton() {
    let paths = enumerate_paths(&a_a(), 100).unwrap();
    assert_eq!(numbered(&paths), vec!["1234235", "12342356", "1235", "12356"]);
    assert_eq!(enumerate_paths(&a_b(), 100).unwrap().len(), 4);
}

#[test]
fn coverage_of_the_example_automata() {
    let pi = AlmostSimplePath { edges: vec![0, 2, 3, 4] };
    assert_eq!(path_coverage::<ExactCoverage>(&a_b(), &pi, &a_c()), q(3, 4));
    let total = automaton_coverage::<ExactCoverage>(&a_b(), &a_c(), 100).unwrap();
    assert_eq!(total.value, q(17, 24));
    assert_eq!(total.paths, 4);
    let approx = automaton_coverage::<FloatCoverage>(&a_b(), &a_c(), 100).unwrap();
    assert!((approx.value - 17.0 / 24.0).abs() < 1e-12);
}

#[test]
fn unreachable_acceptance_has_no_paths() {
    let a = import_automaton(
        "ba v1\nacceptance: state\nstates: 3\ninitial: 0\naccepting-states: 2\nap: p\nedge 0: 0 1 p\nedge 1: 1 0 !p\n",
    )
    .unwrap();
    assert!(enumerate_paths(&a, 100).unwrap().is_empty());
    let c = automaton_coverage::<ExactCoverage>(&a, &a_c(), 100).unwrap();
    assert!(c.value.is_one());
    assert!(c.diagnostic.is_some());
}

#[test]
fn contradicting_start_scores_zero() {
    let a1 = import_automaton("ba v1\nacceptance: state\nstates: 1\ninitial: 0\naccepting-states: 0\nap: p\nedge 0: 0 0 p\n").unwrap();
    let a2 = import_automaton("ba v1\nacceptance: state\nstates: 1\ninitial: 0\naccepting-states: 0\nap: p\nedge 0: 0 0 !p\n").unwrap();
    let pi = AlmostSimplePath { edges: vec![0] };
    assert!(path_coverage::<ExactCoverage>(&a1, &pi, &a2).is_zero());
}

#[test]
fn edge_coverage_is_asymmetric() {
    let a = Label::parse("a").unwrap();
    let ad = Label::parse("a d").unwrap();
    assert_eq!(edge_coverage::<ExactCoverage>(&a, &ad), q(1, 2));
    assert_eq!(edge_coverage::<ExactCoverage>(&ad, &a), q(1, 1));
}

#[test]
fn transition_based_paths_end_on_accepting_edges() {
    let a = import_automaton(
        "ba v1\nacceptance: transition\nstates: 2\ninitial: 0\naccepting-edges: 1\nap: p\nedge 0: 0 1 p\nedge 1: 1 1 !p\nedge 2: 1 0\n",
    )
    .unwrap();
    let paths = enumerate_paths(&a, 100).unwrap();
    assert!(paths.iter().all(|p| *p.edges.last().unwrap() == 1));
    assert_eq!(paths.len(), brute_force_paths(&a).len());
}

fn f(text: &str) -> Formula {
    parse_formula(text).unwrap()
}

fn fs(texts: &[&str]) -> Vec<Formula> {
    texts.iter().map(|t| f(t)).collect()
}

#[test]
fn zero_rounds_give_baseline_only() {
    let t = Tableau::default();
    let a = fs(&["G (p -> F q)"]);
    let input = CompletenessInput {
        assumptions: &a,
        required: &fs(&["G p"]),
        forbidden: &[],
        candidates: fs(&["F q"]),
        rounds: 0,
        max_paths: 10_000,
        jobs: 2,
        translator: &t,
    };
    let r = completeness_loop::<ExactCoverage>(&input, |_| Decision::Continue).unwrap();
    assert!(r.rounds.is_empty());
    assert!(r.baseline_paths > 0);
}

#[test]
fn stop_after_first_round() {
    let t = Tableau::default();
    let a = fs(&["G (p -> X q)", "F p"]);
    let input = CompletenessInput {
        assumptions: &a,
        required: &fs(&["G !q"]),
        forbidden: &[],
        candidates: fs(&["G q", "F p", "G (p -> X q)"]),
        rounds: 3,
        max_paths: 10_000,
        jobs: 2,
        translator: &t,
    };
    let r = completeness_loop::<ExactCoverage>(&input, |_| Decision::Stop).unwrap();
    assert_eq!(r.rounds.len(), 1);
}

#[test]
fn candidate_outside_assumptions_changes_nothing() {
    let t = Tableau::default();
    let a = fs(&["G p"]);
    let required = fs(&["G (p -> q)"]);
    let input = CompletenessInput {
        assumptions: &a,
        required: &required,
        forbidden: &[],
        candidates: fs(&["G !p"]),
        rounds: 1,
        max_paths: 10_000,
        jobs: 1,
        translator: &t,
    };
    let r = completeness_loop::<ExactCoverage>(&input, |_| Decision::Continue).unwrap();
    assert_eq!(r.rounds[0].coverage, r.baseline);
}

#[test]
fn rounds_never_decrease_and_are_jobs_invariant() {
    let t = Tableau::default();
    let a = fs(&["G (p -> F q)", "F p", "G (q -> X !q)"]);
    let required = fs(&["G (p -> X q)"]);
    let forbidden = fs(&["F G q"]);
    let candidates = generate_candidates(
        &atoms(&["p", "q"]),
        &CandidateOptions {
            count: 40,
            depth: 2,
            seed: 3,
        },
        &t,
    )
    .unwrap();
    let run = |jobs| {
        let input = CompletenessInput {
            assumptions: &a,
            required: &required,
            forbidden: &forbidden,
            candidates: candidates.clone(),
            rounds: 4,
            max_paths: DEFAULT_MAX_PATHS,
            jobs,
            translator: &t,
        };
        completeness_loop::<ExactCoverage>(&input, |_| Decision::Continue).unwrap()
    };
    let r = run(1);
    let mut prev = r.baseline.clone();
    for round in &r.rounds {
        assert!(round.coverage >= prev);
        prev = round.coverage.clone();
    }
    assert_eq!(r, run(8));
}

#[test]
fn self_coverage_of_translated_automata() {
    for text in ["G (p -> F q)", "p U q", "G F p & F G !q", "X (p | q)"] {
        let a = translate(&f(text)).unwrap();
        let c = automaton_coverage::<ExactCoverage>(&a, &a, 100_000).unwrap();
        assert!(c.paths > 0, "{text}");
        assert!(c.value.is_one(), "{text}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn path_enumeration_matches_brute_force(seed in any::<u64>(), transition in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mode = if transition { AcceptanceMode::TransitionBased } else { AcceptanceMode::StateBased };
        let a = random_automaton(&mut rng, &atoms(&["a", "b"]), 6, mode);
        let ours: std::collections::BTreeSet<Vec<usize>> =
            enumerate_paths(&a, 1_000_000).unwrap().into_iter().map(|p| p.edges).collect();
        prop_assert_eq!(ours, brute_force_paths(&a));
    }

    #[test]
    fn path_coverage_matches_brute_force(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ap = atoms(&["a", "b", "c"]);
        let a1 = random_automaton(&mut rng, &ap, 5, AcceptanceMode::StateBased);
        let a2 = random_automaton(&mut rng, &ap, 6, AcceptanceMode::StateBased);
        let paths = enumerate_paths(&a1, 1_000_000).unwrap();
        let mut sum = BigRational::zero();
        for p in paths.iter().take(30) {
            let ours = path_coverage::<ExactCoverage>(&a1, p, &a2);
            prop_assert_eq!(&ours, &path_coverage_oracle(&a1, &p.edges, &a2));
            sum += ours;
        }
        if !paths.is_empty() && paths.len() <= 30 {
            let fused = automaton_coverage::<ExactCoverage>(&a1, &a2, 1_000_000).unwrap();
            prop_assert_eq!(fused.value, sum / BigRational::from_integer(paths.len().into()));
            prop_assert_eq!(fused.paths, paths.len());
        }
    }

    #[test]
    fn edge_coverage_matches_definition(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_automaton(&mut rng, &atoms(&["a", "b", "c"]), 3, AcceptanceMode::StateBased);
        for e1 in &a.edges {
            for e2 in &a.edges {
                let ours = edge_coverage::<ExactCoverage>(&e1.label, &e2.label);
                prop_assert!(ours >= BigRational::zero() && ours <= BigRational::one());
                prop_assert_eq!(ours, edge_coverage_oracle(&e1.label, &e2.label));
            }
        }
    }
}
