use obsgame::game::{
    lift_global, OutcomeRelation, Strategy, StrategyProfile, UniformProfile, UniformStrategy,
    VarSet,
};
use obsgame::gen::{self, Fragment, GoalShape, Shape};
use obsgame::io::parse_game;
use obsgame::logic::{PlayerId, Signature};
use obsgame::solver::{self, Mode, SearchResult};
use obsgame::{Budget, Error, ObservationGame};
use proptest::prelude::{any, prop_assert, prop_assert_eq, proptest, ProptestConfig};

const P1: PlayerId = PlayerId(1);
const P2: PlayerId = PlayerId(2);
const RELS: [OutcomeRelation; 4] = [
    OutcomeRelation::Pess,
    OutcomeRelation::Opt,
    OutcomeRelation::Real,
    OutcomeRelation::Max,
];

fn load(text: &str) -> ObservationGame {
    parse_game(text).unwrap().observation().unwrap()
}

fn corpus(name: &str) -> ObservationGame {
    load(
        &std::fs::read_to_string(format!("{}/examples/{name}", env!("CARGO_MANIFEST_DIR")))
            .unwrap(),
    )
}

fn all_top(n: usize) -> ObservationGame {
    ObservationGame::new(Signature::one_var_each(n), vec![obsgame::Formula::Top; n]).unwrap()
}

fn vs(sig: &Signature, names: &[&str]) -> VarSet {
    VarSet::from_names(sig, names).unwrap()
}

fn unlimited() -> Budget {
    Budget::unlimited()
}

#[test]
fn pointed_examples() {
    let g = corpus("tony_maria.json");
    let sig = g.sig();
    let both = vs(sig, &["p1", "p2"]);
    assert!(
        solver::pointed_ne_verify(&g, both, &StrategyProfile::reveal_all(sig))
            .unwrap()
            .is_ne
    );
    let s = StrategyProfile::new(
        sig,
        vec![Strategy::hide(sig, P1), Strategy::reveal_all(sig, P2)],
    )
    .unwrap();
    assert!(
        solver::pointed_ne_verify(&g, vs(sig, &["p1"]), &s)
            .unwrap()
            .is_ne
    );
    // Both hiding is the other (losing) pointed equilibrium.
    assert!(
        solver::pointed_ne_verify(&g, both, &StrategyProfile::hide_all(sig))
            .unwrap()
            .is_ne
    );
    let t = all_top(2);
    let mut r = gen::rng(2);
    for _ in 0..10 {
        let s = gen::profile(&mut r, t.sig());
        assert!(solver::pointed_ne_verify(&t, VarSet(1), &s).unwrap().is_ne);
    }
}

#[test]
fn pennies_verification() {
    let g = corpus("pennies.json");
    let sig = g.sig();
    let switch = obsgame::selftest::switch_profile(sig);
    for rel in [OutcomeRelation::Pess, OutcomeRelation::Opt] {
        assert!(solver::ne_verify(&g, rel, &switch).unwrap().is_ne);
    }
    let all = lift_global(sig, &StrategyProfile::reveal_all(sig));
    let r = solver::ne_verify(&g, OutcomeRelation::Max, &all).unwrap();
    let d = r.witness.expect("refuted profiles carry a witness");
    assert_eq!(d.player, P2);
    assert!(solver::check_deviation(&g, OutcomeRelation::Max, &all, &d).unwrap());
    // The four globally uniform profiles.
    let opts = |i| [Strategy::hide(sig, i), Strategy::reveal_all(sig, i)];
    for a in opts(P1) {
        for c in opts(P2) {
            let u = lift_global(sig, &StrategyProfile::new(sig, vec![a.clone(), c]).unwrap());
            for rel in [OutcomeRelation::Pess, OutcomeRelation::Opt] {
                assert!(!solver::ne_verify(&g, rel, &u).unwrap().is_ne);
            }
        }
    }
}

#[test]
fn tony_maria_pessimist_all() {
    let g = corpus("tony_maria.json");
    let all = solver::enumerate_ne(&g, OutcomeRelation::Pess, 100, &unlimited()).unwrap();
    assert_eq!(all.len(), 16);
    assert!(solver::ne_exists(&g, OutcomeRelation::Pess, &unlimited())
        .unwrap()
        .found());
}

#[test]
fn maximal_emptiness_examples() {
    for name in ["pennies.json", "ex8.json", "ex9.json"] {
        let g = corpus(name);
        let r = solver::max_ne_exists(&g, &unlimited()).unwrap();
        assert_eq!(r.result, SearchResult::Empty, "{name}");
    }
    let t = all_top(3);
    assert!(solver::max_ne_exists(&t, &unlimited()).unwrap().found());
    let mut r = gen::rng(9);
    let u = gen::uniform_profile(&mut r, t.sig());
    assert!(solver::max_ne_verify_pointwise(&t, &u).unwrap().is_ne);
}

#[test]
fn budget_is_reported() {
    let g = corpus("ex8.json");
    let err = solver::max_ne_exists_with(
        &g,
        solver::MaxSearchOptions { kw_shortcut: false },
        &Budget::new(3),
    )
    .unwrap_err();
    assert!(matches!(err, Error::Budget(_)));
    let err = solver::ne_exists(&g, OutcomeRelation::Pess, &Budget::new(3)).unwrap_err();
    assert!(matches!(err, Error::Budget(_)));
}

#[test]
fn reduction_shape_for_eight_players() {
    let g = corpus("eightplayer.json");
    let r = solver::kw_relevant_reduction(&g).unwrap();
    for (k, sp) in r.iter().enumerate().skip(1).take(6) {
        assert_eq!(sp.len(), 2, "player {}", k + 1);
        assert_eq!(sp.allowed(PlayerId(8)), VarSet(1 << k));
    }
    assert_eq!(r[0].len(), 4);
    assert_eq!(r[0].allowed(PlayerId(3)), VarSet(1));
    assert_eq!(r[0].allowed(PlayerId(4)), VarSet(1));
    assert_eq!(r[7].len(), 1);
    // Every Kw atom mentioned: nothing to cut.
    let full = load(
        r#"{"players": 2, "variables": {"1": ["p1"], "2": ["p2"]}, "goals": {"1": "Kw2 p1", "2": "Kw1 p2"}}"#,
    );
    let r = solver::kw_relevant_reduction(&full).unwrap();
    assert_eq!(r[0].len(), full.strategies(P1).len());
    assert_eq!(r[1].len(), full.strategies(P2).len());
}

#[test]
fn type2_examples() {
    let b = unlimited();
    let g = load(
        r#"{"players": 3, "variables": {"1": ["p1"], "2": ["p2"], "3": ["p3"]},
            "goals": {"1": "K1 p2", "2": "K2 p3", "3": "K3 p1"}}"#,
    );
    // No goal has c+, so every player takes the hide branch. Revealing is
    // equally dominant here and is also an equilibrium.
    let u = solver::construct_type2_max_ne(&g, &b).unwrap();
    assert_eq!(u, lift_global(g.sig(), &StrategyProfile::hide_all(g.sig())));
    assert!(solver::max_ne_verify_pointwise(&g, &u).unwrap().is_ne);
    let all = lift_global(g.sig(), &StrategyProfile::reveal_all(g.sig()));
    assert!(solver::max_ne_verify_pointwise(&g, &all).unwrap().is_ne);
    let g = load(
        r#"{"players": 2, "variables": {"1": ["p1"], "2": ["p2"]},
            "goals": {"1": "K1 !p2", "2": "K2 (!p1 | p2)"}}"#,
    );
    let u = solver::construct_type2_max_ne(&g, &b).unwrap();
    assert!(solver::max_ne_verify_pointwise(&g, &u).unwrap().is_ne);
    let unguarded =
        load(r#"{"players": 2, "variables": {"1": ["p1"], "2": ["p2"]}, "goals": {"1": "p2"}}"#);
    assert!(matches!(
        solver::construct_type2_max_ne(&unguarded, &b),
        Err(Error::Precondition { .. })
    ));
}

#[test]
fn algorithm_preconditions() {
    let b = unlimited();
    let pennies = corpus("pennies.json");
    assert!(matches!(
        solver::algorithm1(&pennies, Mode::Pess, &b),
        Err(Error::Precondition { .. })
    ));
    assert!(matches!(
        solver::algorithm2(&pennies, &b),
        Err(Error::Precondition { .. })
    ));
    let tm = corpus("tony_maria.json");
    assert!(solver::two_player_kw_pess_ne(&tm, &b).is_err());
    assert!(solver::two_player_kw_pess_ne(&corpus("eightplayer.json"), &b).is_err());
}

#[test]
fn algorithm1_on_positive_guarded_goals() {
    let b = unlimited();
    let mut r = gen::rng(21);
    let shape = Shape::new(2..=3, 1..=4).per_player(2);
    for _ in 0..20 {
        let g = gen::observation_game(
            &mut r,
            &shape,
            &GoalShape::new(Fragment::Positive, 3).guarded(),
        );
        for (mode, rel) in [
            (Mode::Pess, OutcomeRelation::Pess),
            (Mode::Opt, OutcomeRelation::Opt),
        ] {
            let u = solver::algorithm1(&g, mode, &b).unwrap();
            assert!(
                solver::ne_verify(&g, rel, &u).unwrap().is_ne,
                "{:?}",
                g.goal_texts()
            );
        }
    }
}

#[test]
fn two_player_examples() {
    let b = unlimited();
    let g = corpus("pennies.json");
    let u = solver::two_player_kw_pess_ne(&g, &b).unwrap();
    assert!(
        solver::ne_verify(&g, OutcomeRelation::Pess, &u)
            .unwrap()
            .is_ne
    );
    let t = load(r#"{"players": 2, "variables": {"1": ["p1"], "2": ["p2", "q2"]}}"#);
    let u = solver::two_player_kw_pess_ne(&t, &b).unwrap();
    assert!(
        solver::ne_verify(&t, OutcomeRelation::Pess, &u)
            .unwrap()
            .is_ne
    );
}

#[test]
fn algorithm2_on_boolean_embeddings() {
    let b = unlimited();
    let mut r = gen::rng(33);
    let shape = Shape::new(2..=3, 1..=3);
    let mut tried = 0;
    while tried < 10 {
        let bg = gen::boolean_game(&mut r, &shape, &GoalShape::new(Fragment::Boolean, 3));
        let g = obsgame::translate::bool_to_kw(&bg, obsgame::translate::Variant::Next);
        if g.players().any(|i| g.goal_type(i).len() > 3)
            || !obsgame::translate::bool_ne_exists(&bg, &b).unwrap()
        {
            continue;
        }
        tried += 1;
        let u = solver::algorithm2(&g, &b).unwrap();
        assert!(u.is_globally_uniform());
        assert!(solver::max_ne_verify_pointwise(&g, &u).unwrap().is_ne);
    }
}

#[test]
fn deterministic_witnesses() {
    let b = unlimited();
    let g = corpus("pennies.json");
    let a = solver::ne_exists(&g, OutcomeRelation::Pess, &b).unwrap();
    let c = solver::ne_exists(&g, OutcomeRelation::Pess, &b).unwrap();
    assert_eq!(a, c);
    let mut r = gen::rng(5);
    for _ in 0..10 {
        let g = gen::observation_game(
            &mut r,
            &Shape::new(2..=3, 1..=3),
            &GoalShape::new(Fragment::Epistemic, 3),
        );
        assert_eq!(
            solver::max_ne_exists(&g, &b).unwrap(),
            solver::max_ne_exists(&g, &b).unwrap()
        );
    }
}

fn small_game(seed: u64, fragment: Fragment) -> (ObservationGame, UniformProfile) {
    let mut r = gen::rng(seed);
    let shape = Shape::new(2..=2, 1..=3).per_player(2);
    let g = gen::observation_game(&mut r, &shape, &GoalShape::new(fragment, 3));
    let u = gen::uniform_profile(&mut r, g.sig());
    (g, u)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn verifiers_agree(seed in any::<u64>()) {
        let (g, u) = small_game(seed, Fragment::Epistemic);
        let b = unlimited();
        for rel in RELS {
            let fast = solver::ne_verify(&g, rel, &u).unwrap();
            let slow = solver::ne_verify_exhaustive(&g, rel, &u, &b).unwrap();
            prop_assert_eq!(fast.is_ne, slow.is_ne);
            if let Some(d) = &fast.witness {
                prop_assert!(solver::check_deviation(&g, rel, &u, d).unwrap());
            }
        }
        let pointwise = (0..g.sig().num_valuations()).all(|v| solver::pointed_ne_verify(&g, VarSet(v), &u.at(VarSet(v))).unwrap().is_ne);
        prop_assert_eq!(solver::max_ne_verify_pointwise(&g, &u).unwrap().is_ne, pointwise);
    }

    #[test]
    fn maximal_is_strongest(seed in any::<u64>()) {
        let (g, _) = small_game(seed, Fragment::Epistemic);
        let b = unlimited();
        if let Some(u) = solver::max_ne_exists(&g, &b).unwrap().witness() {
            for rel in RELS {
                prop_assert!(solver::ne_verify(&g, rel, u).unwrap().is_ne);
            }
        }
    }

    #[test]
    fn kw_global_closure(seed in any::<u64>()) {
        let (g, _) = small_game(seed, Fragment::Kw);
        let b = unlimited();
        let r = solver::max_ne_exists_with(&g, solver::MaxSearchOptions { kw_shortcut: false }, &b).unwrap();
        if let Some(u) = r.witness() {
            for v in 0..g.sig().num_valuations() {
                let lifted = lift_global(g.sig(), &u.at(VarSet(v)));
                prop_assert!(solver::max_ne_verify_pointwise(&g, &lifted).unwrap().is_ne);
            }
        }
        prop_assert_eq!(r.found(), solver::max_ne_exists(&g, &b).unwrap().found());
        prop_assert_eq!(r.found(), solver::global_max_ne_exists(&g, &b).unwrap().found());
    }

    #[test]
    fn reduction_preserves_outcomes(seed in any::<u64>()) {
        let (g, u) = small_game(seed, Fragment::Kw);
        let r = solver::kw_relevant_reduction(&g).unwrap();
        for v in 0..g.sig().num_valuations() {
            let s = u.at(VarSet(v));
            let projected: Vec<Strategy> = s.strategies().iter().zip(&r).map(|(si, sp)| sp.project(si)).collect();
            let t = StrategyProfile::new(g.sig(), projected).unwrap();
            for i in g.players() {
                prop_assert_eq!(g.outcome(VarSet(v), &s, i), g.outcome(VarSet(v), &t, i));
            }
        }
    }

    #[test]
    fn search_matches_enumeration(seed in any::<u64>()) {
        let (g, _) = small_game(seed, Fragment::Epistemic);
        let b = unlimited();
        for rel in [OutcomeRelation::Pess, OutcomeRelation::Opt, OutcomeRelation::Real] {
            let first = solver::ne_exists(&g, rel, &b).unwrap();
            let listed = solver::enumerate_ne(&g, rel, 1, &b).unwrap();
            prop_assert_eq!(first.witness().cloned(), listed.first().cloned());
        }
    }

    #[test]
    fn two_player_kw_always_found(seed in any::<u64>()) {
        let (g, _) = small_game(seed, Fragment::Kw);
        let b = unlimited();
        let u = solver::two_player_kw_pess_ne(&g, &b).unwrap();
        prop_assert!(solver::ne_verify(&g, OutcomeRelation::Pess, &u).unwrap().is_ne);
    }

    #[test]
    fn positive_all_reveal_dominant(seed in any::<u64>()) {
        let (g, _) = small_game(seed, Fragment::Positive);
        let b = unlimited();
        for i in g.players() {
            let all = UniformStrategy::global(g.sig(), Strategy::reveal_all(g.sig(), i));
            for rel in RELS {
                prop_assert!(obsgame::game::is_dominant(&g, rel, &all, &b).unwrap());
            }
        }
    }
}
