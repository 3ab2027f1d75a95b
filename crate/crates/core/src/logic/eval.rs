use std::collections::HashMap;

use super::formula::Formula;
use super::signature::{PlayerId, Signature};
use crate::budget::{Budget, BudgetExceeded};

/// What each player observes after play: the masks P_i(s).
///
/// Truth of a goal depends on the strategy profile only through these masks.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Observation {
    masks: Vec<u64>,
}

impl Observation {
    pub fn new(masks: Vec<u64>) -> Self {
        Observation { masks }
    }

    /// Nobody has revealed anything.
    pub fn initial(sig: &Signature) -> Self {
        Observation {
            masks: sig.players().map(|p| sig.owned_mask(p)).collect(),
        }
    }

    pub fn mask(&self, p: PlayerId) -> u64 {
        self.masks[p.idx()]
    }

    pub fn masks(&self) -> &[u64] {
        &self.masks
    }
}

/// Iterates the subsets of `mask` in increasing numeric order.
pub(crate) fn subsets(mask: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(0u64);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == mask {
            None
        } else {
            Some(cur.wrapping_sub(mask) & mask)
        };
        Some(cur)
    })
}

struct Evaluator<'a> {
    full: u64,
    masks: &'a [u64],
    memo: HashMap<(usize, u64), bool>,
}

impl Evaluator<'_> {
    fn sat(&mut self, phi: &Formula, v: u64) -> bool {
        use Formula::*;
        match phi {
            Top => true,
            Bottom => false,
            Atom(p) => v & p.bit() != 0,
            Not(a) => !self.sat(a, v),
            And(a, b) => self.sat(a, v) && self.sat(b, v),
            Or(a, b) => self.sat(a, v) || self.sat(b, v),
            Implies(a, b) => !self.sat(a, v) || self.sat(b, v),
            Iff(a, b) => self.sat(a, v) == self.sat(b, v),
            K(i, a) => {
                let m = self.masks[i.idx()];
                match a.as_ref() {
                    Atom(p) => m & p.bit() != 0 && v & p.bit() != 0,
                    Not(b) if matches!(b.as_ref(), Atom(_)) => {
                        let Atom(p) = b.as_ref() else { unreachable!() };
                        m & p.bit() != 0 && v & p.bit() == 0
                    }
                    _ => self.quantify(phi, a, m, v, Quant::All),
                }
            }
            KHat(i, a) => {
                let m = self.masks[i.idx()];
                match a.as_ref() {
                    Atom(p) => m & p.bit() == 0 || v & p.bit() != 0,
                    _ => self.quantify(phi, a, m, v, Quant::Some),
                }
            }
            Kw(i, a) => {
                let m = self.masks[i.idx()];
                match a.as_ref() {
                    Atom(p) => m & p.bit() != 0,
                    _ => self.quantify(phi, a, m, v, Quant::Constant),
                }
            }
        }
    }

    fn quantify(&mut self, node: &Formula, body: &Formula, m: u64, v: u64, q: Quant) -> bool {
        let base = v & m;
        let key = (node as *const Formula as usize, base);
        if let Some(&r) = self.memo.get(&key) {
            return r;
        }
        let free = self.full & !m;
        let r = match q {
            Quant::All => subsets(free).all(|sub| self.sat(body, base | sub)),
            Quant::Some => subsets(free).any(|sub| self.sat(body, base | sub)),
            Quant::Constant => {
                let first = self.sat(body, base);
                subsets(free)
                    .skip(1)
                    .all(|sub| self.sat(body, base | sub) == first)
            }
        };
        self.memo.insert(key, r);
        r
    }
}

#[derive(Clone, Copy)]
enum Quant {
    All,
    Some,
    Constant,
}

/// Truth of `phi` at valuation `v` after play with observations `obs`.
///
/// A knowledge modality for player i ranges over the valuations agreeing
/// with `v` on P_i(s); nothing else is enumerated.
pub fn eval(sig: &Signature, v: u64, obs: &Observation, phi: &Formula) -> bool {
    eval_masks(sig.full_mask(), v, obs.masks(), phi)
}

pub(crate) fn eval_masks(full: u64, v: u64, masks: &[u64], phi: &Formula) -> bool {
    let mut e = Evaluator {
        full,
        masks,
        memo: HashMap::new(),
    };
    e.sat(phi, v)
}

/// Truth of `phi` at every valuation, in valuation order.
pub fn eval_everywhere(sig: &Signature, obs: &Observation, phi: &Formula) -> Vec<bool> {
    let mut e = Evaluator {
        full: sig.full_mask(),
        masks: obs.masks(),
        memo: HashMap::new(),
    };
    (0..sig.num_valuations()).map(|v| e.sat(phi, v)).collect()
}

/// Every reachable observation tuple.
///
/// Player j's revelations to i are independent of everything else, so the
/// masks P_i(s) range independently over P_i ∪ X with X ⊆ P \ P_i; this
/// enumerates the image of the whole profile space.
pub fn all_observations(sig: &Signature) -> impl Iterator<Item = Observation> + '_ {
    let full = sig.full_mask();
    let foreign: Vec<u64> = sig.players().map(|p| full & !sig.owned_mask(p)).collect();
    let owned: Vec<u64> = sig.players().map(|p| sig.owned_mask(p)).collect();
    let total_bits: u32 = foreign.iter().map(|m| m.count_ones()).sum();
    (0..(1u128 << total_bits)).map(move |mut code| {
        let masks = foreign
            .iter()
            .zip(&owned)
            .map(|(&f, &o)| {
                let k = f.count_ones();
                let part = (code & ((1u128 << k) - 1)) as u64;
                code >>= k;
                o | crate::game::deposit(part, f)
            })
            .collect();
        Observation::new(masks)
    })
}

/// Number of (valuation, observation) pairs `check_validity_small` visits.
pub fn validity_cost(sig: &Signature) -> u128 {
    let bits = (sig.n() as u32 - 1) * sig.num_vars() as u32 + sig.num_vars() as u32;
    1u128 << bits
}

/// True when `phi` holds at every valuation under every strategy profile.
pub fn check_validity_small(
    phi: &Formula,
    sig: &Signature,
    budget: &Budget,
) -> Result<bool, BudgetExceeded> {
    let cost = validity_cost(sig);
    if cost > u64::MAX as u128 {
        return Err(BudgetExceeded {
            limit: budget.limit(),
        });
    }
    budget.check(cost as u64)?;
    for obs in all_observations(sig) {
        budget.spend(sig.num_valuations())?;
        if !eval_everywhere(sig, &obs, phi).into_iter().all(|b| b) {
            return Ok(false);
        }
    }
    Ok(true)
}
