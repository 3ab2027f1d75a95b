//! Seeded random instances.
//!
//! Distributions: player count and variable count are uniform over their
//! ranges and each variable gets a uniformly chosen owner. Formula trees
//! stop at each node with probability `leaf_prob` (so depth is geometric,
//! truncated at `max_depth`), and the connective at an inner node is
//! drawn uniformly from those its fragment allows. Type-bounded games are
//! drawn by rejection sampling per goal.

use std::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::game::{
    ObservationGame, Strategy, StrategyProfile, UniformProfile, UniformStrategy, VarSet,
};
use crate::logic::{Formula, PlayerId, Signature, VarId};
use crate::translate::BooleanGame;

pub type GenRng = ChaCha8Rng;

pub fn rng(seed: u64) -> GenRng {
    ChaCha8Rng::seed_from_u64(seed)
}

const LETTERS: [&str; 6] = ["p", "q", "r", "s", "t", "u"];

/// Signature size ranges. `per_player` caps how many variables one
/// player may own.
#[derive(Debug, Clone)]
pub struct Shape {
    pub players: RangeInclusive<usize>,
    pub vars: RangeInclusive<usize>,
    pub per_player: usize,
}

impl Shape {
    pub fn new(players: RangeInclusive<usize>, vars: RangeInclusive<usize>) -> Self {
        Shape {
            players,
            vars,
            per_player: LETTERS.len(),
        }
    }

    pub fn per_player(mut self, cap: usize) -> Self {
        self.per_player = cap.min(LETTERS.len());
        self
    }
}

/// Variables of player `i` are named `p<i>`, `q<i>`, ... in order.
pub fn signature(rng: &mut GenRng, shape: &Shape) -> Signature {
    let n = rng.gen_range(shape.players.clone());
    let cap = n * shape.per_player;
    let k = rng.gen_range(shape.vars.clone()).min(cap);
    let mut counts = vec![0usize; n];
    for _ in 0..k {
        let open: Vec<usize> = (0..n).filter(|&i| counts[i] < shape.per_player).collect();
        counts[*open.choose(rng).expect("capacity checked")] += 1;
    }
    let owned: Vec<Vec<String>> = counts
        .iter()
        .enumerate()
        .map(|(i, &c)| (0..c).map(|x| format!("{}{}", LETTERS[x], i + 1)).collect())
        .collect();
    Signature::new(n, &owned).expect("generated names are valid")
}

/// Which grammar a random formula is drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fragment {
    Boolean,
    /// Boolean combinations of `Kw_j p` with `j` not the owner of `p`.
    Kw,
    /// The full goal language.
    Epistemic,
    /// Literals under `&`, `|` and `K`.
    Positive,
    /// Literals under `&`, `|`, `K` and `Kh_k` with `k` not the player.
    SelfPositive(PlayerId),
}

#[derive(Debug, Clone, Copy)]
pub struct FormulaShape {
    pub fragment: Fragment,
    pub max_depth: usize,
    pub leaf_prob: f64,
}

impl FormulaShape {
    pub fn new(fragment: Fragment, max_depth: usize) -> Self {
        FormulaShape {
            fragment,
            max_depth,
            leaf_prob: 0.35,
        }
    }
}

#[derive(Clone, Copy)]
enum Op {
    Not,
    And,
    Or,
    Implies,
    Iff,
    K,
    KHat,
    Kw,
}

fn ops(f: Fragment) -> &'static [Op] {
    use Op::*;
    match f {
        Fragment::Boolean | Fragment::Kw => &[Not, And, Or, Implies, Iff],
        Fragment::Epistemic => &[Not, And, Or, Implies, Iff, K, KHat, Kw],
        Fragment::Positive => &[And, Or, K],
        Fragment::SelfPositive(_) => &[And, Or, K, KHat],
    }
}

fn constant(rng: &mut GenRng) -> Formula {
    if rng.gen_bool(0.5) {
        Formula::Top
    } else {
        Formula::Bottom
    }
}

fn leaf(rng: &mut GenRng, sig: &Signature, f: Fragment) -> Formula {
    let vars: Vec<VarId> = sig.vars().collect();
    match f {
        Fragment::Kw => {
            let pairs: Vec<(PlayerId, VarId)> = vars
                .iter()
                .flat_map(|&v| {
                    sig.players()
                        .filter(move |&j| j != sig.owner(v))
                        .map(move |j| (j, v))
                })
                .collect();
            match pairs.choose(rng) {
                Some(&(j, v)) if !rng.gen_bool(0.05) => Formula::kw_atom(j, v),
                _ => constant(rng),
            }
        }
        Fragment::Boolean | Fragment::Epistemic => match vars.choose(rng) {
            Some(&v) if !rng.gen_bool(0.05) => Formula::atom(v),
            _ => constant(rng),
        },
        Fragment::Positive | Fragment::SelfPositive(_) => match vars.choose(rng) {
            Some(&v) if rng.gen_bool(0.5) => Formula::atom(v),
            Some(&v) => Formula::not(Formula::atom(v)),
            None => constant(rng),
        },
    }
}

fn agent(rng: &mut GenRng, sig: &Signature) -> PlayerId {
    PlayerId::from_idx(rng.gen_range(0..sig.n()))
}

fn grow(rng: &mut GenRng, sig: &Signature, shape: &FormulaShape, depth: usize) -> Formula {
    if depth >= shape.max_depth || rng.gen_bool(shape.leaf_prob) {
        return leaf(rng, sig, shape.fragment);
    }
    let op = *ops(shape.fragment)
        .choose(rng)
        .expect("every fragment has connectives");
    let sub = |rng: &mut GenRng| grow(rng, sig, shape, depth + 1);
    match op {
        Op::Not => Formula::not(sub(rng)),
        Op::And => Formula::and(sub(rng), sub(rng)),
        Op::Or => Formula::or(sub(rng), sub(rng)),
        Op::Implies => Formula::implies(sub(rng), sub(rng)),
        Op::Iff => Formula::iff(sub(rng), sub(rng)),
        Op::K => {
            let i = agent(rng, sig);
            Formula::k(i, sub(rng))
        }
        Op::Kw => {
            let i = agent(rng, sig);
            Formula::kw(i, sub(rng))
        }
        Op::KHat => {
            let i = match shape.fragment {
                Fragment::SelfPositive(j) => {
                    let others: Vec<PlayerId> = sig.players().filter(|&k| k != j).collect();
                    match others.choose(rng) {
                        Some(&k) => k,
                        None => return Formula::k(j, sub(rng)),
                    }
                }
                _ => agent(rng, sig),
            };
            Formula::khat(i, sub(rng))
        }
    }
}

pub fn formula(rng: &mut GenRng, sig: &Signature, shape: &FormulaShape) -> Formula {
    grow(rng, sig, shape, 0)
}

/// Goal constraints for [`observation_game`].
#[derive(Debug, Clone, Copy)]
pub struct GoalShape {
    pub fragment: Fragment,
    pub max_depth: usize,
    /// Wrap each goal as `K_i α` for its owner `i`.
    pub guarded: bool,
    /// Reject goals whose type has more members.
    pub max_type: Option<usize>,
    pub leaf_prob: f64,
}

impl GoalShape {
    pub fn new(fragment: Fragment, max_depth: usize) -> Self {
        GoalShape {
            fragment,
            max_depth,
            guarded: false,
            max_type: None,
            leaf_prob: FormulaShape::new(fragment, max_depth).leaf_prob,
        }
    }

    pub fn leaf_prob(mut self, p: f64) -> Self {
        self.leaf_prob = p;
        self
    }

    pub fn guarded(mut self) -> Self {
        self.guarded = true;
        self
    }

    pub fn max_type(mut self, t: usize) -> Self {
        self.max_type = Some(t);
        self
    }
}

/// Self-positive fragments are instantiated per goal owner.
pub fn observation_game(rng: &mut GenRng, shape: &Shape, goals: &GoalShape) -> ObservationGame {
    let sig = signature(rng, shape);
    let mut out = Vec::with_capacity(sig.n());
    for i in sig.players() {
        let fragment = match goals.fragment {
            Fragment::SelfPositive(_) => Fragment::SelfPositive(i),
            f => f,
        };
        let fs = FormulaShape {
            leaf_prob: goals.leaf_prob,
            ..FormulaShape::new(fragment, goals.max_depth)
        };
        loop {
            let body = formula(rng, &sig, &fs);
            let goal = if goals.guarded {
                Formula::k(i, body)
            } else {
                body
            };
            let ok = goals
                .max_type
                .is_none_or(|t| crate::logic::goal_type_of(&goal, i, &sig).len() <= t);
            if ok {
                out.push(goal);
                break;
            }
        }
    }
    ObservationGame::new(sig, out).expect("generated goals are well formed")
}

pub fn boolean_game(rng: &mut GenRng, shape: &Shape, goals: &GoalShape) -> BooleanGame {
    let sig = signature(rng, shape);
    let fs = FormulaShape {
        leaf_prob: goals.leaf_prob,
        ..FormulaShape::new(Fragment::Boolean, goals.max_depth)
    };
    let goals = sig.players().map(|_| formula(rng, &sig, &fs)).collect();
    BooleanGame::new(sig, goals).expect("generated goals are modal free")
}

pub fn valuation(rng: &mut GenRng, sig: &Signature) -> VarSet {
    VarSet(rng.gen::<u64>() & sig.full_mask())
}

pub fn strategy(rng: &mut GenRng, sig: &Signature, i: PlayerId) -> Strategy {
    let own = sig.owned_mask(i);
    let mut s = Strategy::hide(sig, i);
    for j in sig.players().filter(|&j| j != i) {
        s.set_raw(j, rng.gen::<u64>() & own);
    }
    s
}

pub fn profile(rng: &mut GenRng, sig: &Signature) -> StrategyProfile {
    let strategies = sig.players().map(|i| strategy(rng, sig, i)).collect();
    StrategyProfile::new(sig, strategies).expect("generated strategies are valid")
}

pub fn uniform_profile(rng: &mut GenRng, sig: &Signature) -> UniformProfile {
    let strategies = sig
        .players()
        .map(|i| UniformStrategy::from_fn(sig, i, |_| strategy(rng, sig, i)))
        .collect();
    UniformProfile::new(sig, strategies).expect("generated profiles are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_instance() {
        let shape = Shape::new(1..=3, 0..=4);
        let gs = GoalShape::new(Fragment::Epistemic, 4);
        let a = observation_game(&mut rng(7), &shape, &gs);
        let b = observation_game(&mut rng(7), &shape, &gs);
        assert_eq!(a, b);
    }

    #[test]
    fn fragments_are_respected() {
        let mut r = rng(1);
        let shape = Shape::new(2..=3, 1..=4);
        for _ in 0..50 {
            let g = observation_game(&mut r, &shape, &GoalShape::new(Fragment::Kw, 4));
            assert!(g.is_kw());
            let g = observation_game(&mut r, &shape, &GoalShape::new(Fragment::Positive, 4));
            assert!(g.players().all(|i| g.classify(i).is_positive));
            let g = observation_game(
                &mut r,
                &shape,
                &GoalShape::new(Fragment::SelfPositive(PlayerId(1)), 4).guarded(),
            );
            assert!(g.players().all(|i| {
                let c = g.classify(i);
                c.is_guarded && c.self_positive_for == Some(i)
            }));
            let g = observation_game(
                &mut r,
                &shape,
                &GoalShape::new(Fragment::Epistemic, 4).guarded().max_type(2),
            );
            assert!(g.players().all(|i| g.goal_type(i).len() <= 2));
            let b = boolean_game(&mut r, &shape, &GoalShape::new(Fragment::Boolean, 4));
            assert!(b.goals().iter().all(Formula::is_modal_free));
        }
    }

    #[test]
    fn per_player_cap() {
        let mut r = rng(3);
        for _ in 0..50 {
            let sig = signature(&mut r, &Shape::new(2..=2, 4..=4).per_player(2));
            assert!(sig.players().all(|i| sig.owned_mask(i).count_ones() <= 2));
            assert_eq!(sig.num_vars(), 4);
        }
    }
}
