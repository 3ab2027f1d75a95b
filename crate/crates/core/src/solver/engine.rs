//! Compact profile representation shared by the verifiers and searches.
//!
//! A plain strategy is an index into its owner's [`StrategySpace`]; a
//! uniform strategy is one index per initial information class.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::budget::Budget;
use crate::error::Error;
use crate::game::{
    deposit, extract, DominanceCounterexample, ObservationGame, OutcomeRelation, StrategySpace,
    UniformProfile, UniformStrategy, VarSet,
};
use crate::logic::eval::eval_masks;
use crate::logic::PlayerId;

/// `choice[i][c]`: strategy index of player `i + 1` on class `c`.
pub(crate) type Choice = Vec<Vec<u64>>;

const TABLE_LIMIT: u64 = 1 << 22;
const UNFILLED: u64 = u64::MAX;

/// Lazily filled winner masks keyed by valuation and strategy tuple.
///
/// Knowing-whether games share one row for all valuations.
struct PayoffTable {
    cells: Vec<AtomicU64>,
}

impl PayoffTable {
    fn new(len: u64) -> Self {
        PayoffTable {
            cells: (0..len).map(|_| AtomicU64::new(UNFILLED)).collect(),
        }
    }
}

pub(crate) struct Engine<'g> {
    pub(crate) game: &'g ObservationGame,
    pub(crate) spaces: Vec<StrategySpace>,
    pub(crate) own: Vec<u64>,
    pub(crate) full: u64,
    kw: bool,
    strides: Vec<u64>,
    tuples: Option<u64>,
    table: Option<PayoffTable>,
}

impl<'g> Engine<'g> {
    pub(crate) fn full(game: &'g ObservationGame) -> Result<Self, Error> {
        let spaces = game.players().map(|p| game.strategies(p)).collect();
        Engine::with_spaces(game, spaces)
    }

    pub(crate) fn with_spaces(
        game: &'g ObservationGame,
        spaces: Vec<StrategySpace>,
    ) -> Result<Self, Error> {
        let sig = game.sig();
        if sig.n() > 63 {
            return Err(Error::Unsupported("more than 63 players".into()));
        }
        if let Some(sp) = spaces.iter().find(|sp| sp.bits() >= 63) {
            return Err(Error::Unsupported(format!(
                "strategy space of player {} has 2^{} elements",
                sp.owner(),
                sp.bits()
            )));
        }
        let n = sig.n();
        let mut strides = vec![0u64; n];
        let mut tuples = Some(1u64);
        for i in (0..n).rev() {
            strides[i] = tuples.unwrap_or(0);
            tuples = tuples.and_then(|t| t.checked_mul(spaces[i].len()));
        }
        let kw = game.is_kw();
        let rows = if kw { 1 } else { sig.num_valuations() };
        let table = tuples
            .and_then(|t| t.checked_mul(rows))
            .filter(|&len| len <= TABLE_LIMIT)
            .map(PayoffTable::new);
        Ok(Engine {
            game,
            own: sig.players().map(|p| sig.owned_mask(p)).collect(),
            full: sig.full_mask(),
            spaces,
            kw,
            strides,
            tuples,
            table,
        })
    }

    pub(crate) fn n(&self) -> usize {
        self.own.len()
    }

    pub(crate) fn num_valuations(&self) -> u64 {
        self.full + 1
    }

    /// Number of strategy tuples, if it fits in a u64.
    pub(crate) fn tuples(&self) -> Option<u64> {
        self.tuples
    }

    pub(crate) fn classes(&self, i: usize) -> u64 {
        1u64 << self.own[i].count_ones()
    }

    pub(crate) fn class_of(&self, i: usize, w: u64) -> u64 {
        extract(w, self.own[i])
    }

    /// Members of class `c` of player `i`, in valuation order.
    pub(crate) fn class_members(&self, i: usize, c: u64) -> impl Iterator<Item = u64> {
        let key = deposit(c, self.own[i]);
        let free = self.full & !self.own[i];
        (0..1u64 << free.count_ones()).map(move |r| key | deposit(r, free))
    }

    /// Decodes a tuple index in the same mixed radix as the table.
    pub(crate) fn tuple(&self, mut k: u64, out: &mut [u64]) {
        for i in (0..self.n()).rev() {
            let len = self.spaces[i].len();
            out[i] = k % len;
            k /= len;
        }
    }

    fn compute(&self, v: u64, idx: &[u64], only: Option<usize>) -> u64 {
        let mut masks = self.own.clone();
        for (sp, &k) in self.spaces.iter().zip(idx) {
            sp.apply(k, &mut masks);
        }
        let goals = self.game.goals();
        match only {
            Some(i) => u64::from(eval_masks(self.full, v, &masks, &goals[i])) << i,
            None => goals
                .iter()
                .enumerate()
                .filter(|(_, g)| eval_masks(self.full, v, &masks, g))
                .fold(0, |m, (k, _)| m | 1 << k),
        }
    }

    /// Winner mask at `v` under the strategy tuple `idx`.
    pub(crate) fn winners(&self, v: u64, idx: &[u64]) -> u64 {
        match &self.table {
            Some(t) => {
                let row = if self.kw { 0 } else { v };
                let tuples = self.tuples.unwrap_or(0);
                let pos = row * tuples
                    + idx
                        .iter()
                        .zip(&self.strides)
                        .map(|(a, b)| a * b)
                        .sum::<u64>();
                let cell = &t.cells[pos as usize];
                let got = cell.load(Ordering::Relaxed);
                if got != UNFILLED {
                    return got;
                }
                let m = self.compute(v, idx, None);
                cell.store(m, Ordering::Relaxed);
                m
            }
            None => self.compute(v, idx, None),
        }
    }

    pub(crate) fn wins(&self, v: u64, idx: &[u64], i: usize) -> bool {
        if self.table.is_some() {
            self.winners(v, idx) >> i & 1 == 1
        } else {
            self.compute(v, idx, Some(i)) != 0
        }
    }

    pub(crate) fn profile_at(&self, choice: &Choice, w: u64, out: &mut [u64]) {
        for i in 0..self.n() {
            out[i] = choice[i][self.class_of(i, w) as usize];
        }
    }

    pub(crate) fn global_choice(&self, idx: &[u64]) -> Choice {
        (0..self.n())
            .map(|i| vec![idx[i]; self.classes(i) as usize])
            .collect()
    }

    pub(crate) fn to_uniform(&self, choice: &Choice) -> UniformProfile {
        let sig = self.game.sig();
        let strategies = (0..self.n())
            .map(|i| {
                let sp = &self.spaces[i];
                let by_class = choice[i].iter().map(|&k| sp.strategy(k)).collect();
                UniformStrategy::from_classes(sig, PlayerId::from_idx(i), by_class)
                    .expect("class count matches signature")
            })
            .collect();
        UniformProfile::new(sig, strategies).expect("one strategy per player")
    }

    pub(crate) fn uniform_strategy(&self, i: usize, classes: &[u64]) -> UniformStrategy {
        let sp = &self.spaces[i];
        UniformStrategy::from_classes(
            self.game.sig(),
            PlayerId::from_idx(i),
            classes.iter().map(|&k| sp.strategy(k)).collect(),
        )
        .expect("class count matches signature")
    }

    /// Projects every strategy into the engine's spaces.
    pub(crate) fn choice_of(&self, u: &UniformProfile) -> Result<Choice, Error> {
        if u.strategies().len() != self.n() {
            return Err(Error::InvalidProfile("wrong number of players".into()));
        }
        Ok(u.strategies()
            .iter()
            .enumerate()
            .map(|(i, us)| {
                let sp = &self.spaces[i];
                us.by_class()
                    .iter()
                    .map(|s| {
                        sp.index_of(&sp.project(s))
                            .expect("projection lies in the space")
                    })
                    .collect()
            })
            .collect())
    }

    /// Outcome vector of player `i` on class `c`, with the class played as
    /// `dev` when given.
    pub(crate) fn class_vector(
        &self,
        choice: &Choice,
        i: usize,
        c: u64,
        dev: Option<u64>,
    ) -> Vec<bool> {
        let mut idx = vec![0u64; self.n()];
        self.class_members(i, c)
            .map(|w| {
                self.profile_at(choice, w, &mut idx);
                if let Some(t) = dev {
                    idx[i] = t;
                }
                self.wins(w, &idx, i)
            })
            .collect()
    }

    /// First strategy that, played on class `c`, strictly improves player
    /// `i` under `rel`.
    pub(crate) fn improving_in_class(
        &self,
        choice: &Choice,
        rel: OutcomeRelation,
        i: usize,
        c: u64,
    ) -> Option<u64> {
        let cur = self.class_vector(choice, i, c, None);
        let cur_t = choice[i][c as usize];
        let mut idx = vec![0u64; self.n()];
        let members: Vec<u64> = self.class_members(i, c).collect();
        let mut dev_wins = |t: u64, w: u64| {
            self.profile_at(choice, w, &mut idx);
            idx[i] = t;
            self.wins(w, &idx, i)
        };
        let len = self.spaces[i].len();
        match rel {
            OutcomeRelation::Pess => {
                if cur.iter().all(|&b| b) {
                    return None;
                }
                (0..len).find(|&t| t != cur_t && members.iter().all(|&w| dev_wins(t, w)))
            }
            OutcomeRelation::Opt => {
                if cur.iter().any(|&b| b) {
                    return None;
                }
                (0..len).find(|&t| t != cur_t && members.iter().any(|&w| dev_wins(t, w)))
            }
            OutcomeRelation::Real => {
                let base = cur.iter().filter(|&&b| b).count();
                if base == cur.len() {
                    return None;
                }
                (0..len).find(|&t| {
                    t != cur_t && members.iter().filter(|&&w| dev_wins(t, w)).count() > base
                })
            }
            OutcomeRelation::Max => {
                if cur.iter().all(|&b| b) {
                    return None;
                }
                (0..len).find(|&t| {
                    t != cur_t
                        && members
                            .iter()
                            .zip(&cur)
                            .any(|(&w, &now)| !now && dev_wins(t, w))
                })
            }
        }
    }

    /// First (player, class, strategy) deviation, players then classes in
    /// order.
    pub(crate) fn class_deviation(
        &self,
        choice: &Choice,
        rel: OutcomeRelation,
    ) -> Option<(usize, u64, u64)> {
        (0..self.n()).find_map(|i| {
            (0..self.classes(i)).find_map(|c| {
                self.improving_in_class(choice, rel, i, c)
                    .map(|t| (i, c, t))
            })
        })
    }

    /// First player with a profitable swap in the pointed game at `v`.
    pub(crate) fn pointed_violation(&self, v: u64, idx: &[u64]) -> Option<(usize, u64)> {
        let mut dev = idx.to_vec();
        (0..self.n()).find_map(|i| {
            if self.wins(v, idx, i) {
                return None;
            }
            let found = (0..self.spaces[i].len()).find(|&t| {
                if t == idx[i] {
                    return false;
                }
                dev[i] = t;
                self.wins(v, &dev, i)
            });
            dev[i] = idx[i];
            found.map(|t| (i, t))
        })
    }

    /// First valuation whose pointed game the profile fails, with the
    /// improving player and strategy.
    pub(crate) fn pointwise_violation(&self, choice: &Choice) -> Option<(u64, usize, u64)> {
        let mut idx = vec![0u64; self.n()];
        (0..self.num_valuations()).find_map(|w| {
            self.profile_at(choice, w, &mut idx);
            self.pointed_violation(w, &idx).map(|(i, t)| (w, i, t))
        })
    }

    pub(crate) fn pointed_ne(&self, v: u64, idx: &[u64]) -> bool {
        self.pointed_violation(v, idx).is_none()
    }

    pub(crate) fn is_ne(&self, choice: &Choice, rel: OutcomeRelation) -> bool {
        match rel {
            OutcomeRelation::Max => self.pointwise_violation(choice).is_none(),
            _ => self.class_deviation(choice, rel).is_none(),
        }
    }

    /// Radices of the uniform profile digits: players in order, classes in
    /// order within a player, the last digit least significant.
    pub(crate) fn uniform_radices(&self) -> Vec<u64> {
        (0..self.n())
            .flat_map(|i| std::iter::repeat_n(self.spaces[i].len(), self.classes(i) as usize))
            .collect()
    }

    pub(crate) fn decode_uniform(&self, radices: &[u64], mut k: u128) -> Choice {
        let mut digits = vec![0u64; radices.len()];
        for (d, &r) in digits.iter_mut().zip(radices).rev() {
            *d = (k % r as u128) as u64;
            k /= r as u128;
        }
        let mut out = Vec::with_capacity(self.n());
        let mut pos = 0;
        for i in 0..self.n() {
            let c = self.classes(i) as usize;
            out.push(digits[pos..pos + c].to_vec());
            pos += c;
        }
        out
    }

    pub(crate) fn dominance_counterexample(
        &self,
        rel: OutcomeRelation,
        ui: &UniformStrategy,
        budget: &Budget,
    ) -> Result<Option<DominanceCounterexample>, Error> {
        let i = ui.owner().idx();
        let sp = &self.spaces[i];
        let mine: Vec<u64> = ui
            .by_class()
            .iter()
            .map(|s| {
                sp.index_of(&sp.project(s))
                    .expect("projection lies in the space")
            })
            .collect();
        let radices: Vec<u64> = (0..self.n())
            .filter(|&j| j != i)
            .flat_map(|j| std::iter::repeat_n(self.spaces[j].len(), self.classes(j) as usize))
            .collect();
        let total = radices
            .iter()
            .try_fold(1u128, |a, &r| a.checked_mul(r as u128));
        let total = total.ok_or(Error::Budget(crate::BudgetExceeded {
            limit: budget.limit(),
        }))?;
        for k in 0..total {
            budget.spend(1)?;
            let mut rest = std::collections::VecDeque::from(self.decode_digits(&radices, k));
            let choice: Choice = (0..self.n())
                .map(|j| {
                    if j == i {
                        mine.clone()
                    } else {
                        rest.drain(..self.classes(j) as usize).collect()
                    }
                })
                .collect();
            for c in 0..self.classes(i) {
                if let Some(t) = self.improving_in_class(&choice, rel, i, c) {
                    let mut dev = mine.clone();
                    dev[c as usize] = t;
                    return Ok(Some(DominanceCounterexample {
                        profile: self.to_uniform(&choice),
                        deviation: self.uniform_strategy(i, &dev),
                        valuation: VarSet(deposit(c, self.own[i])),
                    }));
                }
            }
        }
        Ok(None)
    }

    fn decode_digits(&self, radices: &[u64], mut k: u128) -> Vec<u64> {
        let mut digits = vec![0u64; radices.len()];
        for (d, &r) in digits.iter_mut().zip(radices).rev() {
            *d = (k % r as u128) as u64;
            k /= r as u128;
        }
        digits
    }
}
