use obsgame::gen::{self, FormulaShape, Fragment};
use obsgame::logic::eval::all_observations;
use obsgame::logic::nnf::is_nnf_shape;
use obsgame::logic::{
    check_validity_small, classify, eval, goal_type_of, parse_formula, to_nnf, to_nnf_expanded,
    Formula, Observation, PlayerId, Signature, TypeSet,
};
use obsgame::Budget;
use proptest::prelude::*;

fn sig2() -> Signature {
    Signature::one_var_each(2)
}

fn p(text: &str, sig: &Signature) -> Formula {
    parse_formula(text, sig).unwrap()
}

// Reference semantics: every modality scans all valuations.
fn naive(sig: &Signature, v: u64, obs: &Observation, phi: &Formula) -> bool {
    use Formula::*;
    let knows = |i: PlayerId, a: &Formula, want: bool| {
        let m = obs.mask(i);
        (0..sig.num_valuations())
            .filter(|w| w & m == v & m)
            .all(|w| naive(sig, w, obs, a) == want)
    };
    match phi {
        Top => true,
        Bottom => false,
        Atom(x) => v & x.bit() != 0,
        Not(a) => !naive(sig, v, obs, a),
        And(a, b) => naive(sig, v, obs, a) && naive(sig, v, obs, b),
        Or(a, b) => naive(sig, v, obs, a) || naive(sig, v, obs, b),
        Implies(a, b) => !naive(sig, v, obs, a) || naive(sig, v, obs, b),
        Iff(a, b) => naive(sig, v, obs, a) == naive(sig, v, obs, b),
        K(i, a) => knows(*i, a, true),
        KHat(i, a) => !knows(*i, a, false),
        Kw(i, a) => knows(*i, a, true) || knows(*i, a, false),
    }
}

#[test]
fn parse_examples() {
    let sig = sig2();
    let (p1, p2) = (sig.lookup("p1").unwrap(), sig.lookup("p2").unwrap());
    let (one, two) = (PlayerId(1), PlayerId(2));
    assert_eq!(
        p("K1 p2 & K2 p1", &sig),
        Formula::and(
            Formula::k(one, Formula::atom(p2)),
            Formula::k(two, Formula::atom(p1))
        )
    );
    assert_eq!(
        p("Kw1 p2 <-> Kw2 p1", &sig),
        Formula::iff(
            Formula::kw(one, Formula::atom(p2)),
            Formula::kw(two, Formula::atom(p1))
        )
    );
    let err = parse_formula("K1 (p2 &", &sig).unwrap_err();
    assert_eq!(err.offset(), 8);
    assert!(parse_formula("K1 zz", &sig).is_err());
    assert!(parse_formula("K3 p1", &sig).is_err());
}

#[test]
fn precedence_and_associativity() {
    let sig = sig2();
    assert_eq!(p("p1 -> p2 -> p1", &sig), p("p1 -> (p2 -> p1)", &sig));
    assert_eq!(p("p1 <-> p2 <-> p1", &sig), p("p1 <-> (p2 <-> p1)", &sig));
    assert_eq!(p("!p1 & p2 | p1", &sig), p("((!p1) & p2) | p1", &sig));
    assert_eq!(p("K1 p1 & p2", &sig), p("(K1 p1) & p2", &sig));
    assert_eq!(
        p("p1 | p2 -> p1 <-> p2", &sig),
        p("((p1 | p2) -> p1) <-> p2", &sig)
    );
}

#[test]
fn nnf_examples() {
    let sig = sig2();
    assert_eq!(to_nnf(&p("!(K1 p2 | p1)", &sig)), p("Kh1 !p2 & !p1", &sig));
    assert_eq!(to_nnf(&p("!!K1 p2", &sig)), p("K1 p2", &sig));
    assert_eq!(to_nnf(&p("!Kw1 p2", &sig)), p("!Kw1 p2", &sig));
}

#[test]
fn classify_examples() {
    let sig = sig2();
    let r = classify(&p("Kw1 p2 <-> Kw2 p1", &sig), PlayerId(1), &sig);
    assert!(r.is_kw && !r.is_boolean);
    let r = classify(&p("p1 & !p2", &sig), PlayerId(1), &sig);
    assert!(r.is_boolean && r.is_positive);
    let r = classify(&p("K1 (p2 & Kh2 !p1)", &sig), PlayerId(1), &sig);
    assert_eq!(r.self_positive_for, Some(PlayerId(1)));
    assert!(!r.is_positive && r.is_guarded);
    assert!(!classify(&p("K2 p1", &sig), PlayerId(1), &sig).is_guarded);
}

#[test]
fn goal_type_examples() {
    let sig = sig2();
    let ty = |t: &str, i: u16| goal_type_of(&p(t, &sig), PlayerId(i), &sig);
    assert_eq!(
        ty("Kw1 p2 <-> Kw2 p1", 1),
        TypeSet::from_members(&["+", "-", "c+", "c-"]).unwrap()
    );
    assert_eq!(ty("K1 p2", 1), TypeSet::from_members(&["+"]).unwrap());
    let ex8 = obsgame::io::parse_game(include_str!("../examples/ex8.json"))
        .unwrap()
        .observation()
        .unwrap();
    assert_eq!(ex8.goal_type(PlayerId(1)).len(), 3);
}

#[test]
fn eval_examples() {
    let sig = sig2();
    let v = 0b11;
    let hide = Observation::initial(&sig);
    assert!(eval(&sig, v, &hide, &p("K1 p1", &sig)));
    let all = Observation::new(vec![0b11, 0b11]);
    assert!(eval(&sig, v, &all, &p("K1 p2 & K2 p1", &sig)));
    assert!(!eval(&sig, v, &hide, &p("K1 p2 & K2 p1", &sig)));
    let sig3 = Signature::one_var_each(3);
    for obs in all_observations(&sig3) {
        for w in 0..8 {
            assert!(eval(&sig3, w, &obs, &p("Kw1 Kw2 p3", &sig3)));
        }
    }
}

#[test]
fn own_variables() {
    // Kw_i p_i is valid; K_i p_i only reflects the fact.
    let sig = Signature::one_var_each(3);
    let b = Budget::unlimited();
    for i in 1..=3 {
        let valid = |t: String| check_validity_small(&p(&t, &sig), &sig, &b).unwrap();
        assert!(valid(format!("Kw{i} p{i}")));
        assert!(valid(format!("K{i} p{i} <-> p{i}")));
        assert!(!valid(format!("K{i} p{i}")));
    }
}

#[test]
fn validity_examples() {
    let sig = sig2();
    let b = Budget::unlimited();
    assert!(check_validity_small(
        &p("(Kw1 p2 & !Kw2 p1) <-> K1 (Kw1 p2 & !Kw2 p1)", &sig),
        &sig,
        &b
    )
    .unwrap());
    assert!(!check_validity_small(&p("p1", &sig), &sig, &b).unwrap());
    assert!(check_validity_small(&p("p1", &sig), &sig, &Budget::new(3)).is_err());
}

fn small_sig() -> impl Strategy<Value = Signature> {
    (1usize..=3, 0usize..=3, any::<u64>()).prop_map(|(n, k, seed)| {
        gen::signature(&mut gen::rng(seed), &gen::Shape::new(n..=n, k..=k))
    })
}

fn formula_in(fragment: Fragment) -> impl Strategy<Value = (Signature, Formula)> {
    (small_sig(), any::<u64>()).prop_map(move |(sig, seed)| {
        let f = gen::formula(&mut gen::rng(seed), &sig, &FormulaShape::new(fragment, 5));
        (sig, f)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn eval_matches_reference((sig, phi) in formula_in(Fragment::Epistemic)) {
        for obs in all_observations(&sig).take(64) {
            for v in 0..sig.num_valuations() {
                prop_assert_eq!(eval(&sig, v, &obs, &phi), naive(&sig, v, &obs, &phi));
            }
        }
    }

    #[test]
    fn nnf_preserves_truth((sig, phi) in formula_in(Fragment::Epistemic)) {
        let n = to_nnf(&phi);
        let e = to_nnf_expanded(&phi);
        prop_assert!(is_nnf_shape(&n));
        prop_assert!(classify(&e, PlayerId(1), &sig).is_nnf);
        for obs in all_observations(&sig).take(64) {
            for v in 0..sig.num_valuations() {
                let want = naive(&sig, v, &obs, &phi);
                prop_assert_eq!(naive(&sig, v, &obs, &n), want);
                prop_assert_eq!(naive(&sig, v, &obs, &e), want);
            }
        }
    }

    #[test]
    fn desugar_preserves_truth((sig, phi) in formula_in(Fragment::Epistemic)) {
        let d = phi.desugar();
        for obs in all_observations(&sig).take(32) {
            for v in 0..sig.num_valuations() {
                prop_assert_eq!(naive(&sig, v, &obs, &d), naive(&sig, v, &obs, &phi));
            }
        }
    }

    #[test]
    fn print_parse_fixpoint((sig, phi) in formula_in(Fragment::Epistemic)) {
        let text = phi.to_text(&sig);
        let again = parse_formula(&text, &sig).unwrap();
        prop_assert_eq!(again.to_text(&sig), text);
        prop_assert_eq!(again, phi);
    }

    #[test]
    fn kw_truth_ignores_valuation((sig, phi) in formula_in(Fragment::Kw)) {
        for obs in all_observations(&sig).take(64) {
            let first = naive(&sig, 0, &obs, &phi);
            for v in 1..sig.num_valuations() {
                prop_assert_eq!(naive(&sig, v, &obs, &phi), first);
            }
        }
    }

    #[test]
    fn kw_formulas_are_known((sig, phi) in formula_in(Fragment::Kw), who in 0usize..3) {
        let i = PlayerId::from_idx(who % sig.n());
        let claim = Formula::iff(phi.clone(), Formula::k(i, phi));
        prop_assert!(check_validity_small(&claim, &sig, &Budget::unlimited()).unwrap());
    }

    #[test]
    fn positive_goals_have_no_minus((sig, phi) in formula_in(Fragment::Positive)) {
        for i in sig.players() {
            let t = goal_type_of(&phi, i, &sig);
            prop_assert!(!t.minus && !t.cminus);
            prop_assert!(classify(&phi, i, &sig).is_positive);
        }
    }

    #[test]
    fn positive_implies_nnf((sig, phi) in formula_in(Fragment::Epistemic)) {
        let r = classify(&phi, PlayerId(1), &sig);
        prop_assert!(!r.is_positive || r.is_nnf);
        prop_assert!(!r.is_boolean || phi.is_modal_free());
    }
}
