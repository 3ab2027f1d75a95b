use crate::budget::Budget;
use crate::error::Error;
use crate::game::{
    compare, ObservationGame, OutcomeRelation, Strategy, StrategyProfile, UniformProfile,
    UniformStrategy, VarSet,
};
use crate::logic::PlayerId;

use super::engine::{Choice, Engine};

/// What a deviating player plays instead.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Replacement {
    Uniform(UniformStrategy),
    Plain(Strategy),
}

/// A profitable deviation: `player` switches to `replacement` and is
/// strictly better off on the information set of `valuation`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Deviation {
    pub player: PlayerId,
    pub valuation: VarSet,
    pub replacement: Replacement,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyResult {
    pub is_ne: bool,
    pub witness: Option<Deviation>,
}

impl VerifyResult {
    fn ok() -> Self {
        VerifyResult {
            is_ne: true,
            witness: None,
        }
    }

    fn refuted(d: Deviation) -> Self {
        VerifyResult {
            is_ne: false,
            witness: Some(d),
        }
    }
}

/// s_X ≽ t_X: every strategy of `s` reveals at least what the matching
/// strategy of `t` reveals.
pub fn profile_succeq(s: &[Strategy], t: &[Strategy]) -> bool {
    s.len() == t.len()
        && s.iter()
            .zip(t)
            .all(|(a, b)| a.owner() == b.owner() && a.covers(b))
}

/// Nash equilibrium of the pointed game G(v).
pub fn pointed_ne_verify(
    game: &ObservationGame,
    v: VarSet,
    s: &StrategyProfile,
) -> Result<VerifyResult, Error> {
    let e = Engine::full(game)?;
    let idx: Vec<u64> = s
        .strategies()
        .iter()
        .zip(&e.spaces)
        .map(|(si, sp)| sp.index_of(si).expect("full space contains every strategy"))
        .collect();
    Ok(match e.pointed_violation(v.0, &idx) {
        None => VerifyResult::ok(),
        Some((i, t)) => VerifyResult::refuted(Deviation {
            player: PlayerId::from_idx(i),
            valuation: v,
            replacement: Replacement::Plain(e.spaces[i].strategy(t)),
        }),
    })
}

fn class_witness(e: &Engine, choice: &Choice, i: usize, c: u64, t: u64) -> Deviation {
    let mut dev = choice[i].clone();
    dev[c as usize] = t;
    Deviation {
        player: PlayerId::from_idx(i),
        valuation: VarSet(crate::game::deposit(c, e.own[i])),
        replacement: Replacement::Uniform(e.uniform_strategy(i, &dev)),
    }
}

pub(crate) fn verify_choice(e: &Engine, choice: &Choice, rel: OutcomeRelation) -> VerifyResult {
    match rel {
        OutcomeRelation::Max => match e.pointwise_violation(choice) {
            None => VerifyResult::ok(),
            Some((w, i, t)) => {
                let c = e.class_of(i, w);
                let mut d = class_witness(e, choice, i, c, t);
                d.valuation = VarSet(w);
                VerifyResult::refuted(d)
            }
        },
        _ => match e.class_deviation(choice, rel) {
            None => VerifyResult::ok(),
            Some((i, c, t)) => VerifyResult::refuted(class_witness(e, choice, i, c, t)),
        },
    }
}

/// Uniform profile equilibrium check under `rel`.
///
/// The expected outcome on a class depends on a deviation only through
/// its value on that class, so deviations are searched class by class.
pub fn ne_verify(
    game: &ObservationGame,
    rel: OutcomeRelation,
    u: &UniformProfile,
) -> Result<VerifyResult, Error> {
    let e = Engine::full(game)?;
    let choice = e.choice_of(u)?;
    Ok(verify_choice(&e, &choice, rel))
}

/// Maximal equilibrium check valuation by valuation: 𝐬(v) must be an
/// equilibrium of every pointed game G(v).
pub fn max_ne_verify_pointwise(
    game: &ObservationGame,
    u: &UniformProfile,
) -> Result<VerifyResult, Error> {
    ne_verify(game, OutcomeRelation::Max, u)
}

/// Reference verifier: enumerates every uniform deviation of every
/// player and compares expected outcomes at every valuation.
pub fn ne_verify_exhaustive(
    game: &ObservationGame,
    rel: OutcomeRelation,
    u: &UniformProfile,
    budget: &Budget,
) -> Result<VerifyResult, Error> {
    let sig = game.sig();
    for i in game.players() {
        let space: Vec<Strategy> = game.strategies(i).iter().collect();
        let classes = u.get(i).num_classes();
        let total = (space.len() as u128).checked_pow(classes as u32);
        let total = total.ok_or(Error::Budget(crate::BudgetExceeded {
            limit: budget.limit(),
        }))?;
        for code in 0..total {
            budget.spend(1)?;
            let mut k = code;
            let mut by_class = vec![space[0].clone(); classes];
            for slot in by_class.iter_mut().rev() {
                *slot = space[(k % space.len() as u128) as usize].clone();
                k /= space.len() as u128;
            }
            let dev = UniformStrategy::from_classes(sig, i, by_class)?;
            let deviated = u.with(dev.clone());
            for v in 0..sig.num_valuations() {
                let v = VarSet(v);
                let a = game.expected_outcome(v, &deviated, i);
                let b = game.expected_outcome(v, u, i);
                if compare(rel, &a, &b)? {
                    return Ok(VerifyResult::refuted(Deviation {
                        player: i,
                        valuation: v,
                        replacement: Replacement::Uniform(dev),
                    }));
                }
            }
        }
    }
    Ok(VerifyResult::ok())
}

/// Checks that a claimed witness really is a profitable deviation.
pub fn check_deviation(
    game: &ObservationGame,
    rel: OutcomeRelation,
    u: &UniformProfile,
    d: &Deviation,
) -> Result<bool, Error> {
    let dev = match &d.replacement {
        Replacement::Uniform(us) => us.clone(),
        Replacement::Plain(s) => {
            let mut us = u.get(d.player).clone();
            let c = us.class_of(d.valuation);
            us.set_class(c, s.clone());
            us
        }
    };
    if dev.owner() != d.player {
        return Ok(false);
    }
    let deviated = u.with(dev);
    let a = game.expected_outcome(d.valuation, &deviated, d.player);
    let b = game.expected_outcome(d.valuation, u, d.player);
    compare(rel, &a, &b)
}
