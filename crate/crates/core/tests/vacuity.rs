use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use reqsane::automaton::check_sat;
use reqsane::formula::{parse_formula, Category, Formula, Requirement};
use reqsane::vacuity::{augment, witnesses};
use reqsane_testkit::{atoms, random_formula};

fn req(id: &str, text: &str) -> Requirement {
    Requirement::parse(id, Category::Plain, text).unwrap()
}

fn texts(reqs: &[Requirement]) -> Vec<String> {
    reqs.iter().map(|r| r.formula.to_string()).collect()
}

#[test]
fn two_signal_augmentation() {
    let reqs = [req("s1", "forall G (a -> X a)"), req("s2", "forall G (a -> X !a)")];
    let out = augment(&reqs, 2).unwrap();
    assert_eq!(
        texts(&out.requirements),
        vec![
            "forall G (a -> X a)",
            "forall G (a -> X !a)",
            "exists F X !a",
            "exists F X a",
        ]
    );
    assert_eq!(out.dropped.len(), 1);
    assert_eq!(out.dropped[0].requirement.formula.to_string(), "exists F a");
    assert_eq!(out.dropped[0].implied_by, "s2.w1");
}

#[test]
fn augmentation_is_idempotent() {
    let reqs = [
        req("s1", "forall G (a -> X a)"),
        req("s2", "forall G (a -> X !a)"),
        req("rr", "forall G (req -> F resp)"),
    ];
    let once = augment(&reqs, 1).unwrap().requirements;
    let twice = augment(&once, 4).unwrap().requirements;
    assert_eq!(once, twice);
}

#[test]
fn existential_only_input_is_unchanged() {
    let reqs = [req("e1", "exists F p"), req("e2", "exists G (p -> X q)")];
    let out = augment(&reqs, 1).unwrap();
    assert_eq!(out.requirements, reqs.to_vec());
}

fn implies(w: &Formula, f: &Formula) -> bool {
    !check_sat(&[w.clone(), Formula::not(f.clone())]).unwrap().satisfiable
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// A witness forces the requirement: `w ∧ ¬f` has no model.
    #[test]
    fn witnesses_imply_their_formula(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_formula(&mut rng, &atoms(&["a", "b", "c"]), 3);
        for w in witnesses(&f) {
            prop_assert!(implies(&w, &f), "{} does not imply {}", w, f);
            prop_assert!(w != Formula::False && w != Formula::True);
        }
    }
}

#[test]
fn request_response_witnesses() {
    let f = parse_formula("G (req -> F resp)").unwrap();
    let ws = witnesses(&f);
    assert_eq!(ws.len(), 2);
    assert!(ws.contains(&parse_formula("G !req").unwrap()));
    assert!(ws.contains(&parse_formula("G F resp").unwrap()));
}
