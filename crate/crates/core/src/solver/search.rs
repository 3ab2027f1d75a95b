use rayon::prelude::*;

use crate::budget::{Budget, BudgetExceeded};
use crate::error::Error;
use crate::game::{ObservationGame, OutcomeRelation, StrategySpace, UniformProfile};

use super::engine::{Choice, Engine};
use super::reduction::kw_relevant_reduction;

const CHUNK: u64 = 512;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchResult {
    Witness(UniformProfile),
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchReport {
    pub relation: OutcomeRelation,
    pub result: SearchResult,
    /// Candidates examined: uniform profiles for enumeration, search nodes
    /// for the maximal-equilibrium constraint search.
    pub profiles_checked: u64,
}

impl SearchReport {
    pub fn witness(&self) -> Option<&UniformProfile> {
        match &self.result {
            SearchResult::Witness(u) => Some(u),
            SearchResult::Empty => None,
        }
    }

    pub fn found(&self) -> bool {
        self.witness().is_some()
    }
}

fn exceeded(budget: &Budget) -> Error {
    Error::Budget(BudgetExceeded {
        limit: budget.limit(),
    })
}

/// Number of uniform profiles over `spaces`, if it fits in a u128.
pub fn uniform_profile_count(game: &ObservationGame, spaces: &[StrategySpace]) -> Option<u128> {
    let sig = game.sig();
    spaces
        .iter()
        .zip(sig.players())
        .try_fold(1u128, |acc, (sp, p)| {
            let classes = 1u32 << sig.owned_mask(p).count_ones();
            (sp.len() as u128)
                .checked_pow(classes)
                .and_then(|x| acc.checked_mul(x))
        })
}

fn search_uniform(
    e: &Engine,
    rel: OutcomeRelation,
    budget: &Budget,
) -> Result<SearchReport, Error> {
    let radices = e.uniform_radices();
    let total = radices
        .iter()
        .try_fold(1u128, |a, &r| a.checked_mul(r as u128))
        .unwrap_or(u128::MAX)
        .min(u64::MAX as u128) as u64;
    let mut start = 0u64;
    while start < total {
        let len = CHUNK.min(total - start).min(budget.remaining());
        if len == 0 {
            return Err(exceeded(budget));
        }
        budget.spend(len)?;
        let hit = (start..start + len)
            .into_par_iter()
            .find_first(|&k| e.is_ne(&e.decode_uniform(&radices, k as u128), rel));
        if let Some(k) = hit {
            return Ok(SearchReport {
                relation: rel,
                result: SearchResult::Witness(e.to_uniform(&e.decode_uniform(&radices, k as u128))),
                profiles_checked: k + 1,
            });
        }
        start += len;
    }
    Ok(SearchReport {
        relation: rel,
        result: SearchResult::Empty,
        profiles_checked: total,
    })
}

/// First uniform equilibrium in enumeration order, or emptiness.
///
/// Profiles are enumerated with players in order and classes in order
/// within a player, the last class of the last player varying fastest.
pub fn ne_exists(
    game: &ObservationGame,
    rel: OutcomeRelation,
    budget: &Budget,
) -> Result<SearchReport, Error> {
    search_uniform(&Engine::full(game)?, rel, budget)
}

/// As [`ne_exists`], over restricted strategy spaces.
///
/// Sound and complete when the restriction preserves every outcome, as
/// [`kw_relevant_reduction`] does.
pub fn ne_exists_in(
    game: &ObservationGame,
    spaces: Vec<StrategySpace>,
    rel: OutcomeRelation,
    budget: &Budget,
) -> Result<SearchReport, Error> {
    search_uniform(&Engine::with_spaces(game, spaces)?, rel, budget)
}

/// [`ne_exists`] after [`kw_relevant_reduction`].
pub fn ne_exists_reduced(
    game: &ObservationGame,
    rel: OutcomeRelation,
    budget: &Budget,
) -> Result<SearchReport, Error> {
    ne_exists_in(game, kw_relevant_reduction(game)?, rel, budget)
}

/// Every uniform equilibrium, up to `limit` of them.
pub fn enumerate_ne(
    game: &ObservationGame,
    rel: OutcomeRelation,
    limit: usize,
    budget: &Budget,
) -> Result<Vec<UniformProfile>, Error> {
    let e = Engine::full(game)?;
    let radices = e.uniform_radices();
    let total = radices
        .iter()
        .try_fold(1u128, |a, &r| a.checked_mul(r as u128))
        .ok_or_else(|| exceeded(budget))?;
    let mut out = Vec::new();
    for k in 0..total {
        if out.len() >= limit {
            break;
        }
        budget.spend(1)?;
        let c = e.decode_uniform(&radices, k);
        if e.is_ne(&c, rel) {
            out.push(e.to_uniform(&c));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MaxSearchOptions {
    /// For knowing-whether games, decide existence by scanning globally
    /// uniform profiles only.
    pub kw_shortcut: bool,
}

impl Default for MaxSearchOptions {
    fn default() -> Self {
        MaxSearchOptions { kw_shortcut: true }
    }
}

/// Maximal equilibrium existence by constraint search.
pub fn max_ne_exists(game: &ObservationGame, budget: &Budget) -> Result<SearchReport, Error> {
    max_ne_exists_with(game, MaxSearchOptions::default(), budget)
}

/// One variable per (player, initial class) ranging over the player's
/// strategies; valuation `v` constrains the variables of its classes to
/// the pointed equilibria of G(v). Arc consistency runs first, then
/// backtracking assigns valuations in order.
pub fn max_ne_exists_with(
    game: &ObservationGame,
    opts: MaxSearchOptions,
    budget: &Budget,
) -> Result<SearchReport, Error> {
    let e = Engine::full(game)?;
    let rel = OutcomeRelation::Max;
    let tuples = e.tuples().ok_or_else(|| exceeded(budget))?;
    let n = e.n();
    let nv = e.num_valuations();
    let kw = game.is_kw();

    let pointed = |v: u64| -> Result<Vec<u64>, Error> {
        budget.spend(tuples)?;
        let mut idx = vec![0u64; n];
        Ok((0..tuples)
            .filter(|&k| {
                e.tuple(k, &mut idx);
                e.pointed_ne(v, &idx)
            })
            .collect())
    };

    if kw && opts.kw_shortcut {
        let ne0 = pointed(0)?;
        let result = match ne0.first() {
            Some(&k) => {
                let mut idx = vec![0u64; n];
                e.tuple(k, &mut idx);
                SearchResult::Witness(e.to_uniform(&e.global_choice(&idx)))
            }
            None => SearchResult::Empty,
        };
        return Ok(SearchReport {
            relation: rel,
            profiles_checked: ne0.first().map_or(tuples, |&k| k + 1),
            result,
        });
    }

    let mut allowed: Vec<Vec<u64>> = Vec::with_capacity(nv as usize);
    if kw {
        let ne0 = pointed(0)?;
        allowed.resize(nv as usize, ne0);
    } else {
        for v in 0..nv {
            allowed.push(pointed(v)?);
        }
    }

    let mut offset = vec![0usize; n + 1];
    for i in 0..n {
        offset[i + 1] = offset[i] + e.classes(i) as usize;
    }
    let scope = |v: u64, i: usize| offset[i] + e.class_of(i, v) as usize;
    let var_player: Vec<usize> = (0..n)
        .flat_map(|i| std::iter::repeat_n(i, e.classes(i) as usize))
        .collect();
    let mut domain: Vec<Vec<bool>> = var_player
        .iter()
        .map(|&i| vec![true; e.spaces[i].len() as usize])
        .collect();

    // Generalized arc consistency over the valuation constraints.
    let mut idx = vec![0u64; n];
    let mut checked = 0u64;
    loop {
        let mut changed = false;
        for v in 0..nv {
            let list = &mut allowed[v as usize];
            list.retain(|&k| {
                e.tuple(k, &mut idx);
                (0..n).all(|i| domain[scope(v, i)][idx[i] as usize])
            });
            if list.is_empty() {
                return Ok(SearchReport {
                    relation: rel,
                    result: SearchResult::Empty,
                    profiles_checked: checked,
                });
            }
            let mut support: Vec<Vec<bool>> = (0..n)
                .map(|i| vec![false; e.spaces[i].len() as usize])
                .collect();
            for &k in list.iter() {
                e.tuple(k, &mut idx);
                for i in 0..n {
                    support[i][idx[i] as usize] = true;
                }
            }
            for i in 0..n {
                let d = &mut domain[scope(v, i)];
                for (x, s) in d.iter_mut().zip(&support[i]) {
                    if *x && !*s {
                        *x = false;
                        changed = true;
                    }
                }
            }
            checked += 1;
        }
        if !changed {
            break;
        }
    }

    let mut assign: Vec<Option<u64>> = vec![None; var_player.len()];
    let found = backtrack(&e, &allowed, &scope, 0, &mut assign, &mut checked, budget)?;
    let result = if found {
        let choice: Choice = (0..n)
            .map(|i| {
                (offset[i]..offset[i + 1])
                    .map(|x| assign[x].unwrap_or(0))
                    .collect()
            })
            .collect();
        SearchResult::Witness(e.to_uniform(&choice))
    } else {
        SearchResult::Empty
    };
    Ok(SearchReport {
        relation: rel,
        result,
        profiles_checked: checked,
    })
}

fn backtrack(
    e: &Engine,
    allowed: &[Vec<u64>],
    scope: &dyn Fn(u64, usize) -> usize,
    v: u64,
    assign: &mut Vec<Option<u64>>,
    checked: &mut u64,
    budget: &Budget,
) -> Result<bool, Error> {
    if v == e.num_valuations() {
        return Ok(true);
    }
    let n = e.n();
    let mut idx = vec![0u64; n];
    for &k in &allowed[v as usize] {
        budget.spend(1)?;
        *checked += 1;
        e.tuple(k, &mut idx);
        if (0..n).any(|i| matches!(assign[scope(v, i)], Some(x) if x != idx[i])) {
            continue;
        }
        let fresh: Vec<usize> = (0..n)
            .map(|i| scope(v, i))
            .filter(|&x| assign[x].is_none())
            .collect();
        for (i, &t) in idx.iter().enumerate().take(n) {
            let x = scope(v, i);
            if assign[x].is_none() {
                assign[x] = Some(t);
            }
        }
        if backtrack(e, allowed, scope, v + 1, assign, checked, budget)? {
            return Ok(true);
        }
        for x in fresh {
            assign[x] = None;
        }
    }
    Ok(false)
}

/// Maximal equilibrium existence among globally uniform profiles only.
pub fn global_max_ne_exists(
    game: &ObservationGame,
    budget: &Budget,
) -> Result<SearchReport, Error> {
    let e = Engine::full(game)?;
    let tuples = e.tuples().ok_or_else(|| exceeded(budget))?;
    let mut idx = vec![0u64; e.n()];
    for k in 0..tuples {
        budget.spend(1)?;
        e.tuple(k, &mut idx);
        let choice = e.global_choice(&idx);
        if e.pointwise_violation(&choice).is_none() {
            return Ok(SearchReport {
                relation: OutcomeRelation::Max,
                result: SearchResult::Witness(e.to_uniform(&choice)),
                profiles_checked: k + 1,
            });
        }
    }
    Ok(SearchReport {
        relation: OutcomeRelation::Max,
        result: SearchResult::Empty,
        profiles_checked: tuples,
    })
}

/// Globally uniform profiles that are equilibria under `rel`.
pub fn global_ne(
    game: &ObservationGame,
    rel: OutcomeRelation,
    budget: &Budget,
) -> Result<Vec<UniformProfile>, Error> {
    let e = Engine::full(game)?;
    let tuples = e.tuples().ok_or_else(|| exceeded(budget))?;
    let mut idx = vec![0u64; e.n()];
    let mut out = Vec::new();
    for k in 0..tuples {
        budget.spend(1)?;
        e.tuple(k, &mut idx);
        let choice = e.global_choice(&idx);
        if e.is_ne(&choice, rel) {
            out.push(e.to_uniform(&choice));
        }
    }
    Ok(out)
}
