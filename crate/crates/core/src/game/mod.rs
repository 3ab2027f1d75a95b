//! Valuations, strategies, uniform strategies, outcomes and dominance.

pub mod bits;
pub mod outcome;
pub mod strategy;
pub mod uniform;

pub use bits::{bits, deposit, extract, Valuation, VarSet};
pub use outcome::{compare, ExpectedOutcome, OutcomeRelation};
pub use strategy::{
    information_set, obs_equiv, revealed_to, Strategy, StrategyProfile, StrategySpace,
};
pub use uniform::{lift_global, InformationClass, UniformProfile, UniformStrategy};

use crate::budget::Budget;
use crate::error::Error;
use crate::logic::{
    classify, eval, goal_type_of, is_kw_formula, normalize_trivial, parse_formula, Formula,
    FragmentReport, Observation, PlayerId, Signature, TypeSet,
};

/// Players, the partition of the variables, and one goal per player.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObservationGame {
    sig: Signature,
    goals: Vec<Formula>,
}

impl ObservationGame {
    pub fn new(sig: Signature, goals: Vec<Formula>) -> Result<Self, Error> {
        if goals.len() != sig.n() {
            return Err(Error::Signature(format!(
                "{} players but {} goals",
                sig.n(),
                goals.len()
            )));
        }
        if let Some(k) = goals.iter().position(|g| !g.well_formed(&sig)) {
            return Err(Error::Unsupported(format!(
                "goal of player {} mentions a player or variable outside the game",
                k + 1
            )));
        }
        Ok(ObservationGame { sig, goals })
    }

    /// Parses one goal text per player.
    pub fn parse<S: AsRef<str>>(sig: Signature, texts: &[S]) -> Result<Self, Error> {
        let goals = texts
            .iter()
            .enumerate()
            .map(|(k, t)| {
                parse_formula(t.as_ref(), &sig).map_err(|source| Error::Goal {
                    player: PlayerId::from_idx(k),
                    source,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        ObservationGame::new(sig, goals)
    }

    pub fn sig(&self) -> &Signature {
        &self.sig
    }

    pub fn n(&self) -> usize {
        self.sig.n()
    }

    pub fn players(&self) -> impl Iterator<Item = PlayerId> {
        self.sig.players()
    }

    pub fn goal(&self, i: PlayerId) -> &Formula {
        &self.goals[i.idx()]
    }

    pub fn goals(&self) -> &[Formula] {
        &self.goals
    }

    pub fn goal_texts(&self) -> Vec<String> {
        self.goals.iter().map(|g| g.to_text(&self.sig)).collect()
    }

    pub fn classify(&self, i: PlayerId) -> FragmentReport {
        classify(self.goal(i), i, &self.sig)
    }

    /// type(i).
    pub fn goal_type(&self, i: PlayerId) -> TypeSet {
        goal_type_of(self.goal(i), i, &self.sig)
    }

    /// Every goal is a propositional combination of `Kw_j p` atoms.
    pub fn is_kw(&self) -> bool {
        self.goals.iter().all(is_kw_formula)
    }

    /// The same game with every `Kw_i p_i` replaced by `T`.
    pub fn normalized(&self) -> ObservationGame {
        let goals = self
            .goals
            .iter()
            .enumerate()
            .map(|(k, g)| {
                let (f, count) = normalize_trivial(g, &self.sig);
                if count > 0 {
                    log::warn!(
                        "goal of player {}: {count} trivial constituent(s) Kw_i p_i replaced by T",
                        k + 1
                    );
                }
                f
            })
            .collect();
        ObservationGame {
            sig: self.sig.clone(),
            goals,
        }
    }

    /// S_i in enumeration order.
    pub fn strategies(&self, i: PlayerId) -> StrategySpace {
        StrategySpace::full(&self.sig, i)
    }

    /// u_i(v, s).
    pub fn outcome(&self, v: VarSet, s: &StrategyProfile, i: PlayerId) -> bool {
        eval(&self.sig, v.0, &s.observation(), self.goal(i))
    }

    /// Bit `k` set iff player `k + 1` wins at `v` under observations `obs`.
    pub fn winners(&self, v: VarSet, obs: &Observation) -> u64 {
        self.goals
            .iter()
            .enumerate()
            .filter(|(_, g)| eval(&self.sig, v.0, obs, g))
            .fold(0, |m, (k, _)| m | 1 << k)
    }

    /// 𝐮_i(v, 𝐬).
    pub fn expected_outcome(&self, v: VarSet, u: &UniformProfile, i: PlayerId) -> ExpectedOutcome {
        let class = InformationClass::initial(&self.sig, i, v);
        let bits = class
            .members(&self.sig)
            .into_iter()
            .map(|w| self.outcome(w, &u.at(w), i))
            .collect();
        ExpectedOutcome {
            player: i,
            class_key: class.key,
            bits,
        }
    }
}

/// u_i(v, s) as 0 or 1.
pub fn outcome(game: &ObservationGame, v: VarSet, s: &StrategyProfile, i: PlayerId) -> u8 {
    u8::from(game.outcome(v, s, i))
}

pub fn expected_outcome(
    game: &ObservationGame,
    v: VarSet,
    u: &UniformProfile,
    i: PlayerId,
) -> ExpectedOutcome {
    game.expected_outcome(v, u, i)
}

/// A profile of the other players, a deviation, and a valuation at which
/// the deviation strictly beats the candidate dominant strategy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominanceCounterexample {
    pub profile: UniformProfile,
    pub deviation: UniformStrategy,
    pub valuation: VarSet,
}

/// Weak dominance: no profile of the others, deviation and valuation give
/// a strict improvement over `ui`.
pub fn is_dominant(
    game: &ObservationGame,
    rel: OutcomeRelation,
    ui: &UniformStrategy,
    budget: &Budget,
) -> Result<bool, Error> {
    Ok(dominance_counterexample(game, rel, ui, budget)?.is_none())
}

pub fn dominance_counterexample(
    game: &ObservationGame,
    rel: OutcomeRelation,
    ui: &UniformStrategy,
    budget: &Budget,
) -> Result<Option<DominanceCounterexample>, Error> {
    crate::solver::engine::Engine::full(game)?.dominance_counterexample(rel, ui, budget)
}
