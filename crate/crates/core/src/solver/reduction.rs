use crate::error::Error;
use crate::game::{ObservationGame, StrategySpace};
use crate::logic::{is_kw_formula, Formula};

/// Per player, the strategy space restricted to revelations that some goal
/// can observe: `p` owned by `i` may be revealed to `j` only if `Kw_j p`
/// occurs in some goal.
///
/// In a knowing-whether game the outcome depends on a profile only through
/// which `Kw_j p` atoms hold, so projecting every strategy onto these
/// spaces preserves every outcome.
pub fn kw_relevant_reduction(game: &ObservationGame) -> Result<Vec<StrategySpace>, Error> {
    let sig = game.sig();
    if let Some(i) = game.players().find(|&i| !is_kw_formula(game.goal(i))) {
        return Err(Error::NotKw(i));
    }
    let n = game.n();
    let mut allowed = vec![vec![0u64; n]; n];
    for g in game.goals() {
        g.visit(&mut |f| {
            if let Formula::Kw(j, a) = f {
                if let Formula::Atom(p) = a.as_ref() {
                    let owner = sig.owner(*p);
                    if owner != *j {
                        allowed[owner.idx()][j.idx()] |= p.bit();
                    }
                }
            }
        });
    }
    Ok(game
        .players()
        .zip(allowed)
        .map(|(i, a)| StrategySpace::restricted(sig, i, a))
        .collect())
}
