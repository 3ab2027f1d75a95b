//! Constructive equilibrium algorithms driven by goal types.

use crate::budget::Budget;
use crate::error::Error;
use crate::game::{ObservationGame, OutcomeRelation, UniformProfile};
use crate::logic::{PlayerId, TypeSet};

use super::engine::{Choice, Engine};
use super::search::{ne_exists, SearchResult};

/// Decision rule targeted by [`algorithm1`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Pess,
    Opt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Role {
    Hide,
    Reveal,
    Local,
    Plus,
    Minus,
}

fn role_of(t: TypeSet) -> Role {
    match (t.cplus, t.cminus) {
        (false, _) => Role::Hide,
        (true, false) => Role::Reveal,
        (true, true) if t.plus => Role::Plus,
        (true, true) if t.minus => Role::Minus,
        (true, true) => Role::Local,
    }
}

fn roles(
    game: &ObservationGame,
    max_type: usize,
    guarded: bool,
    kw: bool,
) -> Result<Vec<Role>, Error> {
    game.players()
        .map(|i| {
            if guarded && !game.classify(i).is_guarded {
                return Err(Error::Precondition {
                    player: i,
                    reason: "goal is not guarded".into(),
                });
            }
            if kw && !crate::logic::is_kw_formula(game.goal(i)) {
                return Err(Error::NotKw(i));
            }
            let t = game.goal_type(i);
            if t.len() > max_type {
                return Err(Error::Precondition {
                    player: i,
                    reason: format!("type {t} has more than {max_type} members"),
                });
            }
            Ok(role_of(t))
        })
        .collect()
}

fn initial_choice(e: &Engine, roles: &[Role]) -> Choice {
    roles
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let t = match r {
                Role::Reveal | Role::Minus => e.spaces[i].top(),
                _ => 0,
            };
            vec![t; e.classes(i) as usize]
        })
        .collect()
}

fn tuple_count(e: &Engine) -> Result<u64, Error> {
    e.tuples()
        .ok_or_else(|| Error::Unsupported("strategy tuple space exceeds 2^64".into()))
}

/// Player `i` wins at `w` under `idx` for every assignment of the
/// players in `free`.
fn wins_against_all(
    e: &Engine,
    w: u64,
    idx: &mut [u64],
    free: &[usize],
    i: usize,
    budget: &Budget,
) -> Result<bool, Error> {
    for &j in free {
        idx[j] = 0;
    }
    loop {
        budget.spend(1)?;
        if !e.wins(w, idx, i) {
            return Ok(false);
        }
        // Odometer over the free players, last one fastest.
        let mut pos = free.len();
        loop {
            if pos == 0 {
                return Ok(true);
            }
            pos -= 1;
            let j = free[pos];
            idx[j] += 1;
            if idx[j] < e.spaces[j].len() {
                break;
            }
            idx[j] = 0;
        }
    }
}

fn player_set(roles: &[Role], r: Role) -> Vec<usize> {
    roles
        .iter()
        .enumerate()
        .filter(|(_, &x)| x == r)
        .map(|(i, _)| i)
        .collect()
}

fn set_recipient(e: &Engine, choice: &mut Choice, j: usize, c: u64, to: usize, mask: u64) {
    let sp = &e.spaces[j];
    let mut s = sp.strategy(choice[j][c as usize]);
    s.set_raw(PlayerId::from_idx(to), mask);
    choice[j][c as usize] = sp.index_of(&s).expect("revelation stays within the space");
}

/// Winning tuple search for a player whose goal only speaks about its own
/// variables: the first tuple winning on the whole class (pess) or
/// somewhere on it (opt) donates its `i` component.
fn local_choice(e: &Engine, i: usize, c: u64, any: bool, budget: &Budget) -> Result<u64, Error> {
    let tuples = tuple_count(e)?;
    let members: Vec<u64> = e.class_members(i, c).collect();
    let mut idx = vec![0u64; e.n()];
    for k in 0..tuples {
        budget.spend(members.len() as u64)?;
        e.tuple(k, &mut idx);
        let hit = if any {
            members.iter().any(|&w| e.wins(w, &idx, i))
        } else {
            members.iter().all(|&w| e.wins(w, &idx, i))
        };
        if hit {
            return Ok(idx[i]);
        }
    }
    Ok(0)
}

/// Equilibrium construction for guarded goals with at most three type
/// members.
///
/// Players without `c+` hide, players without `c-` reveal everything,
/// players of type `{c+, c-}` pick a winning component when one exists.
/// The remaining players move in a monotone fixpoint: a `{+, c+, c-}`
/// player commits on a class once some strategy wins there against every
/// strategy of the uncommitted `{-, c+, c-}` players, and symmetrically.
/// Uncommitted players finally hide from, respectively reveal to, the
/// uncommitted players of the other group.
///
/// In [`Mode::Opt`] the class quantifier of the winning tests becomes
/// existential.
pub fn algorithm1(
    game: &ObservationGame,
    mode: Mode,
    budget: &Budget,
) -> Result<UniformProfile, Error> {
    let roles = roles(game, 3, true, false)?;
    let e = Engine::full(game)?;
    let n = e.n();
    let any = mode == Mode::Opt;
    let mut choice = initial_choice(&e, &roles);
    for i in player_set(&roles, Role::Local) {
        for c in 0..e.classes(i) {
            choice[i][c as usize] = local_choice(&e, i, c, any, budget)?;
        }
    }

    let plus = player_set(&roles, Role::Plus);
    let minus = player_set(&roles, Role::Minus);
    let nv = e.num_valuations() as usize;
    let mut y = vec![0u64; nv];
    let mut z = vec![0u64; nv];

    // One commitment step for `movers`, whose committed sets are `mine`,
    // against the uncommitted `others` outside `theirs`.
    let step = |choice: &mut Choice,
                mine: &mut Vec<u64>,
                theirs: &[u64],
                movers: &[usize],
                others: &[usize]|
     -> Result<bool, Error> {
        let mut idx = vec![0u64; n];
        for &i in movers {
            for c in 0..e.classes(i) {
                let members: Vec<u64> = e.class_members(i, c).collect();
                if mine[members[0] as usize] >> i & 1 == 1 {
                    continue;
                }
                for t in 0..e.spaces[i].len() {
                    let mut hit = !any;
                    for &w in &members {
                        let free: Vec<usize> = others
                            .iter()
                            .copied()
                            .filter(|&j| theirs[w as usize] >> j & 1 == 0)
                            .collect();
                        e.profile_at(choice, w, &mut idx);
                        idx[i] = t;
                        let ok = wins_against_all(&e, w, &mut idx, &free, i, budget)?;
                        if any && ok {
                            hit = true;
                            break;
                        }
                        if !any && !ok {
                            hit = false;
                            break;
                        }
                    }
                    if hit {
                        choice[i][c as usize] = t;
                        for &w in &members {
                            mine[w as usize] |= 1 << i;
                        }
                        return Ok(true);
                    }
                }
            }
        }
        Ok(false)
    };

    loop {
        let (y0, z0) = (y.clone(), z.clone());
        while step(&mut choice, &mut y, &z, &plus, &minus)? {}
        while step(&mut choice, &mut z, &y, &minus, &plus)? {}
        if y == y0 && z == z0 {
            break;
        }
    }

    for &j in &minus {
        for c in 0..e.classes(j) {
            let members: Vec<u64> = e.class_members(j, c).collect();
            if z[members[0] as usize] >> j & 1 == 1 {
                continue;
            }
            for &i in &plus {
                if members.iter().any(|&w| y[w as usize] >> i & 1 == 0) {
                    set_recipient(&e, &mut choice, j, c, i, 0);
                }
            }
        }
    }
    for &j in &plus {
        for c in 0..e.classes(j) {
            let members: Vec<u64> = e.class_members(j, c).collect();
            if y[members[0] as usize] >> j & 1 == 1 {
                continue;
            }
            for &i in &minus {
                if members.iter().any(|&w| z[w as usize] >> i & 1 == 0) {
                    set_recipient(&e, &mut choice, j, c, i, e.own[j]);
                }
            }
        }
    }
    Ok(e.to_uniform(&choice))
}

/// Maximal equilibrium construction for knowing-whether games with at
/// most three type members; the output is globally uniform.
///
/// Same shape as [`algorithm1`] with commitment sets shared by all
/// valuations and existential valuation tests.
pub fn algorithm2(game: &ObservationGame, budget: &Budget) -> Result<UniformProfile, Error> {
    let roles = roles(game, 3, false, true)?;
    let e = Engine::full(game)?;
    let n = e.n();
    let nv = e.num_valuations();
    let tuples = tuple_count(&e)?;
    let mut choice = initial_choice(&e, &roles);
    let mut idx = vec![0u64; n];
    for i in player_set(&roles, Role::Local) {
        let mut t = 0;
        'found: for k in 0..tuples {
            e.tuple(k, &mut idx);
            for v in 0..nv {
                budget.spend(1)?;
                if e.wins(v, &idx, i) {
                    t = idx[i];
                    break 'found;
                }
            }
        }
        choice[i] = vec![t; e.classes(i) as usize];
    }

    let plus = player_set(&roles, Role::Plus);
    let minus = player_set(&roles, Role::Minus);
    let (mut y, mut z) = (0u64, 0u64);

    let step = |choice: &mut Choice,
                mine: &mut u64,
                theirs: u64,
                movers: &[usize],
                others: &[usize]|
     -> Result<bool, Error> {
        let mut idx = vec![0u64; n];
        let free: Vec<usize> = others
            .iter()
            .copied()
            .filter(|&j| theirs >> j & 1 == 0)
            .collect();
        for &i in movers {
            if *mine >> i & 1 == 1 {
                continue;
            }
            for t in 0..e.spaces[i].len() {
                for v in 0..nv {
                    e.profile_at(choice, v, &mut idx);
                    idx[i] = t;
                    if wins_against_all(&e, v, &mut idx, &free, i, budget)? {
                        choice[i] = vec![t; e.classes(i) as usize];
                        *mine |= 1 << i;
                        return Ok(true);
                    }
                }
            }
        }
        Ok(false)
    };

    loop {
        let (y0, z0) = (y, z);
        while step(&mut choice, &mut y, z, &plus, &minus)? {}
        while step(&mut choice, &mut z, y, &minus, &plus)? {}
        if y == y0 && z == z0 {
            break;
        }
    }

    for &j in minus.iter().filter(|&&j| z >> j & 1 == 0) {
        for &i in plus.iter().filter(|&&i| y >> i & 1 == 0) {
            for c in 0..e.classes(j) {
                set_recipient(&e, &mut choice, j, c, i, 0);
            }
        }
    }
    for &j in plus.iter().filter(|&&j| y >> j & 1 == 0) {
        for &i in minus.iter().filter(|&&i| z >> i & 1 == 0) {
            for c in 0..e.classes(j) {
                set_recipient(&e, &mut choice, j, c, i, e.own[j]);
            }
        }
    }
    Ok(e.to_uniform(&choice))
}

/// Maximal equilibrium for guarded goals with at most two type members.
///
/// Players of type `{c+, c-}` take, class by class, the component of the
/// first tuple that wins at the first valuation of the class; players
/// without `c+` hide; everyone else reveals everything.
pub fn construct_type2_max_ne(
    game: &ObservationGame,
    budget: &Budget,
) -> Result<UniformProfile, Error> {
    let roles = roles(game, 2, true, false)?;
    let e = Engine::full(game)?;
    let tuples = tuple_count(&e)?;
    let mut choice = initial_choice(&e, &roles);
    let mut idx = vec![0u64; e.n()];
    for i in player_set(&roles, Role::Local) {
        for c in 0..e.classes(i) {
            let v = e.class_members(i, c).next().expect("classes are nonempty");
            let mut t = 0;
            for k in 0..tuples {
                budget.spend(1)?;
                e.tuple(k, &mut idx);
                if e.wins(v, &idx, i) {
                    t = idx[i];
                    break;
                }
            }
            choice[i][c as usize] = t;
        }
    }
    Ok(e.to_uniform(&choice))
}

/// Pessimist equilibrium of a two-player knowing-whether game.
///
/// If a player has a strategy winning against everything, it plays that
/// strategy everywhere and the opponent best-responds. Otherwise every
/// strategy of each player has a punishing reply, and each player spreads
/// punishers over its information classes so that every deviation of the
/// opponent is punished somewhere on the opponent's information set. When
/// a player has fewer classes than needed punishers, exhaustive search
/// decides.
pub fn two_player_kw_pess_ne(
    game: &ObservationGame,
    budget: &Budget,
) -> Result<UniformProfile, Error> {
    if game.n() != 2 {
        return Err(Error::Precondition {
            player: PlayerId(1),
            reason: format!("expected 2 players, found {}", game.n()),
        });
    }
    if let Some(i) = game
        .players()
        .find(|&i| !crate::logic::is_kw_formula(game.goal(i)))
    {
        return Err(Error::NotKw(i));
    }
    let e = Engine::full(game)?;
    let len = [e.spaces[0].len(), e.spaces[1].len()];
    let win = |a: u64, b: u64, i: usize| e.wins(0, &[a, b], i);
    let pick = |i: usize, mine: u64, theirs: u64| {
        if i == 0 {
            (mine, theirs)
        } else {
            (theirs, mine)
        }
    };

    for i in 0..2 {
        let o = 1 - i;
        budget.spend(len[0] * len[1])?;
        let guaranteed = (0..len[i]).find(|&t| {
            (0..len[o]).all(|r| {
                let (a, b) = pick(i, t, r);
                win(a, b, i)
            })
        });
        if let Some(t) = guaranteed {
            let reply = (0..len[o])
                .find(|&r| {
                    let (a, b) = pick(i, t, r);
                    win(a, b, o)
                })
                .unwrap_or(0);
            let (a, b) = pick(i, t, reply);
            return Ok(e.to_uniform(&e.global_choice(&[a, b])));
        }
    }

    // Punisher cover: player `o` needs, for every strategy of `i`, a class
    // whose strategy makes `i` lose.
    let mut choice: Choice = vec![Vec::new(), Vec::new()];
    for o in 0..2 {
        let i = 1 - o;
        let mut uncovered: Vec<u64> = (0..len[i]).collect();
        let mut cover = Vec::new();
        while !uncovered.is_empty() {
            budget.spend(len[o] * uncovered.len() as u64)?;
            let beats = |r: u64, t: u64| {
                let (a, b) = pick(i, t, r);
                !win(a, b, i)
            };
            let best = (0..len[o])
                .max_by_key(|&r| {
                    (
                        uncovered.iter().filter(|&&t| beats(r, t)).count(),
                        std::cmp::Reverse(r),
                    )
                })
                .expect("nonempty space");
            uncovered.retain(|&t| !beats(best, t));
            cover.push(best);
        }
        let classes = e.classes(o) as usize;
        if cover.len() > classes {
            log::debug!(
                "punisher cover of size {} exceeds {classes} classes; searching",
                cover.len()
            );
            let report = ne_exists(game, OutcomeRelation::Pess, budget)?;
            return match report.result {
                SearchResult::Witness(u) => Ok(u),
                SearchResult::Empty => {
                    Err(Error::Unsupported("no pessimist equilibrium found".into()))
                }
            };
        }
        choice[o] = (0..classes).map(|c| cover[c % cover.len()]).collect();
    }
    Ok(e.to_uniform(&choice))
}
