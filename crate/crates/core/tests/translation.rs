use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use reqsane::automaton::{
    accepting_lasso, check_sat, export_automaton, import_automaton, translate, Translator, Tableau,
};
use reqsane::formula::{parse_formula, render_formula, simplify, to_nnf, Formula};
use reqsane_testkit::{accepts, atoms, holds, random_formula, random_word, Word};

fn formula_and_words(seed: u64, depth: usize) -> (Formula, Vec<Word>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ap = atoms(&["a", "b", "c"]);
    let f = random_formula(&mut rng, &ap, depth);
    let words = (0..24).map(|_| random_word(&mut rng, &ap, 3, 3)).collect();
    (f, words)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn automaton_agrees_with_lasso_semantics(seed in any::<u64>()) {
        let (f, words) = formula_and_words(seed, 4);
        let a = translate(&f).unwrap();
        prop_assert!(a.validate().is_ok());
        for w in &words {
            prop_assert_eq!(accepts(&a, w), holds(&f, w), "{} on {:?}", render_formula(&f), w);
        }
    }

    #[test]
    fn witnesses_satisfy_the_formula(seed in any::<u64>()) {
        let (f, words) = formula_and_words(seed, 4);
        let a = translate(&f).unwrap();
        match accepting_lasso(&a) {
            Some(lasso) => {
                prop_assert!(lasso.is_accepting_run_of(&a));
                let w = Word::from_lasso_word(&lasso.word(&a));
                prop_assert!(holds(&f, &w), "{} witness {:?}", render_formula(&f), w);
            }
            None => {
                for w in &words {
                    prop_assert!(!holds(&f, w), "{} claimed empty but holds on {:?}", render_formula(&f), w);
                }
            }
        }
    }

    #[test]
    fn rewriting_preserves_semantics(seed in any::<u64>()) {
        let (f, words) = formula_and_words(seed, 4);
        let n = to_nnf(&f);
        let s = simplify(&f);
        prop_assert!(n.is_nnf());
        for w in &words {
            prop_assert_eq!(holds(&n, w), holds(&f, w));
            prop_assert_eq!(holds(&s, w), holds(&f, w));
        }
    }

    #[test]
    fn rendering_round_trips(seed in any::<u64>()) {
        let (f, _) = formula_and_words(seed, 5);
        prop_assert_eq!(parse_formula(&render_formula(&f)).unwrap(), f);
    }

    #[test]
    fn neutral_format_round_trips(seed in any::<u64>()) {
        let (f, _) = formula_and_words(seed, 3);
        let a = translate(&f).unwrap();
        let text = export_automaton(&a);
        let b = import_automaton(&text).unwrap();
        prop_assert_eq!(&b, &a);
        prop_assert_eq!(export_automaton(&b), text);
    }

    #[test]
    fn translation_is_deterministic(seed in any::<u64>()) {
        let (f, _) = formula_and_words(seed, 4);
        prop_assert_eq!(translate(&f).unwrap(), Tableau::default().translate(&f).unwrap());
    }
}

#[test]
fn known_unsatisfiable_conjunctions() {
    let cases: &[&[&str]] = &[
        &["G a", "F !a"],
        &["F (a & G !a)"],
        &["G (a -> X b)", "G (b -> X !a)", "G F a", "G !b"],
        &["G (a U b)", "F G !b"],
    ];
    for case in cases {
        let fs: Vec<Formula> = case.iter().map(|t| parse_formula(t).unwrap()).collect();
        assert!(!check_sat(&fs).unwrap().satisfiable, "{case:?}");
    }
}

#[test]
fn known_satisfiable_conjunctions() {
    let cases: &[&[&str]] = &[
        &["G F a", "G F !a"],
        &["a U b", "G !a"],
        &["G (a -> X b)", "F a"],
    ];
    for case in cases {
        let fs: Vec<Formula> = case.iter().map(|t| parse_formula(t).unwrap()).collect();
        let r = check_sat(&fs).unwrap();
        assert!(r.satisfiable, "{case:?}");
        let w = Word::from_lasso_word(r.witness.as_ref().unwrap());
        assert!(fs.iter().all(|f| holds(f, &w)), "{case:?}");
    }
}
