use std::collections::BTreeSet;

use lds_core::kernel::{rat, MultiPoly};
use lds_core::logic::{
    ltl_eval_lasso, model_check, muller_accepts_lasso, prefix_independent, Ltl, MullerAutomaton,
    Verdict,
};
use lds_core::orbit::{ConstructiblePredicate, LassoWord, Lds, Letter};
use lds_core::Budget;
use proptest::prelude::*;

const ATOMS: [&str; 2] = ["p", "q"];

fn formula() -> impl Strategy<Value = Ltl> {
    let leaf = prop_oneof![
        Just(Ltl::atom("p")),
        Just(Ltl::atom("q")),
        Just(Ltl::True),
        Just(Ltl::False),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        let b = |f: Ltl| Box::new(f);
        prop_oneof![
            inner.clone().prop_map(move |f| Ltl::Not(b(f))),
            inner.clone().prop_map(move |f| Ltl::Next(b(f))),
            inner.clone().prop_map(move |f| Ltl::Eventually(b(f))),
            inner.clone().prop_map(move |f| Ltl::Always(b(f))),
            (inner.clone(), inner.clone()).prop_map(move |(f, g)| Ltl::And(b(f), b(g))),
            (inner.clone(), inner.clone()).prop_map(move |(f, g)| Ltl::Or(b(f), b(g))),
            (inner.clone(), inner.clone()).prop_map(move |(f, g)| Ltl::Implies(b(f), b(g))),
            (inner.clone(), inner).prop_map(move |(f, g)| Ltl::Until(b(f), b(g))),
        ]
    })
}

fn letter_word() -> impl Strategy<Value = LassoWord<Letter>> {
    let letter = prop::collection::btree_set(0usize..2, 0..=2);
    (
        prop::collection::vec(letter.clone(), 0..5),
        prop::collection::vec(letter, 1..5),
    )
        .prop_map(|(stem, cycle)| {
            LassoWord::new(ATOMS.iter().map(|s| s.to_string()).collect(), stem, cycle).unwrap()
        })
}

/// Direct recursive semantics: from position `i`, every position the word can
/// still reach lies in `[i, max(i, stem) + cycle)`.
fn oracle(f: &Ltl, w: &LassoWord<Letter>, i: usize) -> bool {
    let window = || i..i.max(w.stem.len()) + w.cycle.len();
    match f {
        Ltl::True => true,
        Ltl::False => false,
        Ltl::Atom(a) => w
            .letter(i)
            .contains(&ATOMS.iter().position(|x| x == a).unwrap()),
        Ltl::Not(a) => !oracle(a, w, i),
        Ltl::And(a, b) => oracle(a, w, i) && oracle(b, w, i),
        Ltl::Or(a, b) => oracle(a, w, i) || oracle(b, w, i),
        Ltl::Implies(a, b) => !oracle(a, w, i) || oracle(b, w, i),
        Ltl::Next(a) => oracle(a, w, i + 1),
        Ltl::Eventually(a) => window().any(|j| oracle(a, w, j)),
        Ltl::Always(a) => window().all(|j| oracle(a, w, j)),
        Ltl::Until(a, b) => window().any(|j| oracle(b, w, j) && (i..j).all(|k| oracle(a, w, k))),
    }
}

fn automaton() -> impl Strategy<Value = MullerAutomaton> {
    (1usize..=4).prop_flat_map(|n| {
        (
            prop::collection::vec(prop::collection::vec(0..n, 2), n),
            prop::collection::vec(prop::collection::btree_set(0..n, 1..=n), 0..4),
        )
            .prop_map(move |(delta, table)| {
                MullerAutomaton::new(
                    (0..n).map(|q| format!("q{q}")).collect(),
                    0,
                    vec!["a".into(), "b".into()],
                    delta,
                    table.into_iter().collect(),
                )
                .unwrap()
            })
    })
}

fn symbol_word() -> impl Strategy<Value = LassoWord<String>> {
    let sym = prop::sample::select(vec!["a".to_string(), "b".to_string()]);
    (
        prop::collection::vec(sym.clone(), 0..6),
        prop::collection::vec(sym, 1..6),
    )
        .prop_map(|(stem, cycle)| {
            LassoWord::new(vec!["a".into(), "b".into()], stem, cycle).unwrap()
        })
}

fn simulate_inf_set(a: &MullerAutomaton, w: &LassoWord<String>) -> BTreeSet<usize> {
    let idx = |s: &String| a.alphabet().iter().position(|x| x == s).unwrap();
    let mut q = w.stem.iter().fold(a.initial(), |q, s| a.step(q, idx(s)));
    let span = a.states().len() * w.cycle.len();
    for i in 0..span {
        q = a.step(q, idx(&w.cycle[i % w.cycle.len()]));
    }
    let mut seen = BTreeSet::new();
    for i in span..2 * span {
        q = a.step(q, idx(&w.cycle[i % w.cycle.len()]));
        seen.insert(q);
    }
    seen
}

fn with_prefix(u: &[String], w: &LassoWord<String>) -> LassoWord<String> {
    let mut stem = u.to_vec();
    stem.extend(w.stem.iter().cloned());
    LassoWord::new(w.alphabet.clone(), stem, w.cycle.clone()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn lasso_evaluation_matches_oracle(f in formula(), w in letter_word()) {
        prop_assert_eq!(ltl_eval_lasso(&f, &w).unwrap(), oracle(&f, &w, 0));
    }

    #[test]
    fn evaluation_ignores_presentation(f in formula(), w in letter_word()) {
        let v = ltl_eval_lasso(&f, &w).unwrap();
        prop_assert_eq!(ltl_eval_lasso(&f, &w.unrolled()).unwrap(), v);
        prop_assert_eq!(ltl_eval_lasso(&f, &w.rotated()).unwrap(), v);
        prop_assert_eq!(ltl_eval_lasso(&f, &w.normalized()).unwrap(), v);
    }

    #[test]
    fn formula_text_round_trip(f in formula()) {
        let back: Ltl = f.to_string().parse().unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn acceptance_matches_simulation(a in automaton(), w in symbol_word()) {
        let inf = simulate_inf_set(&a, &w);
        prop_assert_eq!(a.inf_set(&w).unwrap(), inf.clone());
        prop_assert_eq!(muller_accepts_lasso(&a, &w).unwrap(), a.is_accepting_set(&inf));
    }

    #[test]
    fn prefix_independence_is_sound(
        a in automaton(),
        w in symbol_word(),
        u in prop::collection::vec(prop::sample::select(vec!["a".to_string(), "b".to_string()]), 0..6),
    ) {
        let r = prefix_independent(&a, 12).unwrap();
        if r.independent {
            prop_assert_eq!(
                muller_accepts_lasso(&a, &with_prefix(&u, &w)).unwrap(),
                muller_accepts_lasso(&a, &w).unwrap()
            );
        } else {
            let w = r.counterexample.unwrap();
            let q = a.states().iter().position(|s| Some(s) == r.state.as_ref()).unwrap();
            prop_assert_ne!(
                muller_accepts_lasso(&a.with_initial(q), &w).unwrap(),
                muller_accepts_lasso(&a, &w).unwrap()
            );
        }
    }
}

fn rotation() -> Lds {
    Lds::from_i64(&[&[0, -1], &[1, 0]], &[1, 0])
}

fn on_axis() -> ConstructiblePredicate {
    ConstructiblePredicate::equation("P", MultiPoly::var(2, 0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn unused_predicates_do_not_change_verdicts(
        c in prop::collection::vec(-2i64..=2, 3),
        text in prop::sample::select(vec!["G F P", "F G P", "P U !P", "X P", "G (P -> X !P)", "F G !P"]),
    ) {
        let phi: Ltl = text.parse().unwrap();
        let base = model_check(&rotation(), &[on_axis()], &phi, &Budget::default()).unwrap();
        let extra = ConstructiblePredicate::equation(
            "Unused",
            MultiPoly::affine(&[rat(c[0]), rat(c[1])], &rat(c[2])),
        );
        let more = model_check(&rotation(), &[on_axis(), extra], &phi, &Budget::default()).unwrap();
        prop_assert_eq!(base.verdict, more.verdict);
    }
}

#[test]
fn rotation_verdicts() {
    let check = |s: &str| {
        model_check(
            &rotation(),
            &[on_axis()],
            &s.parse().unwrap(),
            &Budget::default(),
        )
        .unwrap()
        .verdict
    };
    assert_eq!(check("G F P"), Verdict::Holds);
    assert_eq!(check("F G P"), Verdict::Fails);
}
