//! Worked examples whose published conclusions do not survive exhaustive
//! checking. Each is decided twice: by a hand-rolled evaluator written
//! against the goal text and by the library.

use obsgame::game::{OutcomeRelation, VarSet};
use obsgame::io::{parse_game, profile_from_file, ProfileFile};
use obsgame::logic::PlayerId;
use obsgame::solver::{self, Mode};
use obsgame::{Budget, ObservationGame};

fn load(text: &str) -> ObservationGame {
    parse_game(text).unwrap().observation().unwrap()
}

fn profile(g: &ObservationGame, json: &str) -> obsgame::UniformProfile {
    let file: ProfileFile = serde_json::from_str(json).unwrap();
    profile_from_file(g.sig(), &file).unwrap()
}

// Tony/Maria. A uniform strategy is (reveal when own atom false, reveal
// when own atom true). Knowledge only comes from the other's reveal.
fn tm_win(p1: bool, p2: bool, s1: [bool; 2], s2: [bool; 2]) -> bool {
    let r1 = s1[p1 as usize];
    let r2 = s2[p2 as usize];
    let k1 = |val: bool| r2 && p2 == val;
    let k2 = |val: bool| r1 && p1 == val;
    match (p1, p2) {
        (true, true) => k1(true) && k2(true),
        (true, false) => k1(false) && !k2(true),
        (false, true) => !k1(true) && !k2(false),
        (false, false) => !k1(false) && k2(false),
    }
}

fn strategies2() -> [[bool; 2]; 4] {
    [[false, false], [false, true], [true, false], [true, true]]
}

fn tm_count(rel: OutcomeRelation) -> usize {
    // Information set of a player: the two valuations agreeing on its atom.
    let info = |own: bool, i: usize, s1: [bool; 2], s2: [bool; 2]| -> [bool; 2] {
        [false, true].map(|other| {
            let (p1, p2) = if i == 0 { (own, other) } else { (other, own) };
            tm_win(p1, p2, s1, s2)
        })
    };
    let better = |a: [bool; 2], b: [bool; 2]| -> bool {
        let (a0, a1, b0, b1) = (a[0] as u8, a[1] as u8, b[0] as u8, b[1] as u8);
        match rel {
            OutcomeRelation::Opt => a0.max(a1) > b0.max(b1),
            OutcomeRelation::Pess => a0.min(a1) > b0.min(b1),
            OutcomeRelation::Real => a0 + a1 > b0 + b1,
            OutcomeRelation::Max => a0 > b0 || a1 > b1,
        }
    };
    let mut count = 0;
    for s1 in strategies2() {
        for s2 in strategies2() {
            let stable = [false, true].into_iter().all(|own| {
                strategies2().into_iter().all(|t| {
                    !better(info(own, 0, t, s2), info(own, 0, s1, s2))
                        && !better(info(own, 1, s1, t), info(own, 1, s1, s2))
                })
            });
            count += stable as usize;
        }
    }
    count
}

#[test]
fn tony_maria_equilibrium_counts() {
    let g = load(include_str!("../examples/tony_maria.json"));
    let b = Budget::unlimited();
    for (rel, expected) in [
        (OutcomeRelation::Pess, 16),
        (OutcomeRelation::Opt, 6),
        (OutcomeRelation::Real, 6),
        (OutcomeRelation::Max, 2),
    ] {
        assert_eq!(tm_count(rel), expected, "{rel} by hand");
        assert_eq!(
            solver::enumerate_ne(&g, rel, 64, &b).unwrap().len(),
            expected,
            "{rel} by search"
        );
    }
}

#[test]
fn tony_maria_maximal_witness() {
    // Player 1 always reveals; player 2 reveals exactly when p2 holds.
    let g = load(include_str!("../examples/tony_maria.json"));
    let u = profile(
        &g,
        r#"{"1": [{"observes": {"p1": false}, "reveal": {"2": ["p1"]}},
                  {"observes": {"p1": true}, "reveal": {"2": ["p1"]}}],
            "2": [{"observes": {"p2": true}, "reveal": {"1": ["p2"]}}]}"#,
    );
    assert!(solver::max_ne_verify_pointwise(&g, &u).unwrap().is_ne);
    for v in 0..4u64 {
        let p1 = v & 1 != 0;
        let p2 = v & 2 != 0;
        let s = u.at(VarSet(v));
        assert!(solver::pointed_ne_verify(&g, VarSet(v), &s).unwrap().is_ne);
        // Hand check: no unilateral flip at this valuation improves.
        let (s1, s2) = ([true, true], [false, true]);
        let now = tm_win(p1, p2, s1, s2);
        let flip1 = tm_win(p1, p2, [!s1[0], !s1[1]], s2);
        let flip2 = tm_win(p1, p2, s1, [!s2[0], !s2[1]]);
        assert!(now || (!flip1 && !flip2), "valuation {v}");
    }
}

// Eight-player Kw game. Only reveals from 1 to {3,4} and from 2..=7 to 8
// matter.
struct Ex7 {
    // Player 1 per value of p1: (to 3, to 4).
    one: [(bool, bool); 2],
    // Players 2..=7 per value of their atom: reveal to 8.
    to8: [[bool; 2]; 6],
}

impl Ex7 {
    fn win(&self, i: usize, v: u8) -> bool {
        let bit = |k: usize| (v >> (k - 1)) & 1 == 1;
        let (k3, k4) = self.one[bit(1) as usize];
        let e = |j: usize| self.to8[j - 2][bit(j) as usize];
        let a = k3 && k4;
        let b = k3 && !k4;
        let c = !k3 && k4;
        let d = !k3 && !k4;
        let iff = |cond: bool, x: bool| if cond { x } else { !x };
        match i {
            1 => {
                (e(2) && d)
                    || (e(3) && a)
                    || (e(4) && b)
                    || (e(5) && c)
                    || (e(6) && b)
                    || (e(7) && a)
            }
            2 => iff(c || a, e(2)),
            3 => iff(b || d, e(3)) && !((a || d) && e(2) && e(3)),
            4 => iff(d || c, e(4)) && !((b || c) && e(5) && e(4)),
            5 => iff(a || b, e(5)) && !((a || c) && e(7) && e(5)),
            6 => iff(a || d, e(6)) && !((a || b) && (e(3) || e(7)) && e(6)),
            7 => iff(b || c, e(7)),
            _ => true,
        }
    }

    // Pessimist value of player i on the class where p_i = own.
    fn pess(&self, i: usize, own: bool) -> bool {
        (0..128u8)
            .filter(|v| ((v >> (i - 1)) & 1 == 1) == own)
            .all(|v| self.win(i, v))
    }

    fn deviations(&self, i: usize) -> Vec<Ex7> {
        let mut out = Vec::new();
        if i == 1 {
            for m in 0..16u8 {
                let bits = |k: u8| (m >> k) & 1 == 1;
                out.push(Ex7 {
                    one: [(bits(0), bits(1)), (bits(2), bits(3))],
                    to8: self.to8,
                });
            }
        } else {
            for m in 0..4u8 {
                let mut to8 = self.to8;
                to8[i - 2] = [m & 1 == 1, m & 2 == 2];
                out.push(Ex7 { one: self.one, to8 });
            }
        }
        out
    }

    fn is_pess_ne(&self) -> bool {
        (1..=7).all(|i| {
            [false, true].into_iter().all(|own| {
                let now = self.pess(i, own);
                self.deviations(i).iter().all(|t| now || !t.pess(i, own))
            })
        })
    }
}

#[test]
fn eight_player_game_has_a_pessimist_equilibrium() {
    // Player 1 plays D when p1 is false and A when it is true; player 3
    // reveals p3 to 8 exactly when p3 holds; everyone else hides.
    let mut to8 = [[false; 2]; 6];
    to8[1] = [false, true];
    let hand = Ex7 {
        one: [(false, false), (true, true)],
        to8,
    };
    assert!(hand.is_pess_ne());

    let g = load(include_str!("../examples/eightplayer.json"));
    let u = profile(
        &g,
        r#"{"1": [{"observes": {"p1": true}, "reveal": {"3": ["p1"], "4": ["p1"]}}],
            "3": [{"observes": {"p3": true}, "reveal": {"8": ["p3"]}}]}"#,
    );
    assert!(
        solver::ne_verify(&g, OutcomeRelation::Pess, &u)
            .unwrap()
            .is_ne
    );
}

#[test]
fn eight_player_globally_uniform_one_is_never_stable() {
    // The part of the published argument that does hold: with player 1
    // globally uniform, no profile of the others is a pessimist equilibrium.
    for one in [(true, true), (true, false), (false, true), (false, false)] {
        for m in 0..1u32 << 12 {
            let mut to8 = [[false; 2]; 6];
            for (j, slot) in to8.iter_mut().enumerate() {
                *slot = [m >> (2 * j) & 1 == 1, m >> (2 * j + 1) & 1 == 1];
            }
            assert!(!Ex7 {
                one: [one, one],
                to8
            }
            .is_pess_ne());
        }
    }
}

#[test]
fn nested_possibility_breaks_the_reveal_rule() {
    // Goal of 2 holds on the p2-false class iff 2 hides p2 there, yet the
    // polarity rules classify it as c+ only and algorithm 1 reveals.
    let g = load(
        r#"{"players": 2, "variables": {"1": ["p1"], "2": ["p2"]},
            "goals": {"1": "K1 !p2", "2": "K2 Kh1 Kh1 (p1 | p2)"}}"#,
    );
    let t = g.goal_type(PlayerId(2));
    assert!(t.cplus && !t.cminus);
    assert_eq!(g.classify(PlayerId(2)).self_positive_for, Some(PlayerId(2)));

    let b = Budget::unlimited();
    let u = solver::algorithm1(&g, Mode::Pess, &b).unwrap();
    assert!(
        !solver::ne_verify(&g, OutcomeRelation::Pess, &u)
            .unwrap()
            .is_ne
    );
    // Existence itself is not in doubt.
    assert!(solver::ne_exists(&g, OutcomeRelation::Pess, &b)
        .unwrap()
        .found());

    // Hand evaluation of player 2 on the p2-false class: 1 sees p1, so 1
    // doubts p2 only when 2 hides; the outer K_2 ranges over p1.
    let goal2_false_class = |reveal: bool| [false, true].iter().all(|&p1| p1 || !reveal);
    assert!(!goal2_false_class(true));
    assert!(goal2_false_class(false));
}
