use crate::error::Error;
use crate::logic::{Observation, PlayerId, Signature};

use super::bits::{deposit, extract, VarSet};

/// What one player reveals to each recipient.
///
/// `reveal[j]` is the subset of the owner's variables shown to player
/// `j + 1`; the owner's own entry always equals its full variable set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Strategy {
    owner: PlayerId,
    reveal: Vec<u64>,
}

impl Strategy {
    /// Reveal nothing to anybody.
    pub fn hide(sig: &Signature, owner: PlayerId) -> Self {
        let mut reveal = vec![0; sig.n()];
        reveal[owner.idx()] = sig.owned_mask(owner);
        Strategy { owner, reveal }
    }

    /// Reveal every own variable to every player.
    pub fn reveal_all(sig: &Signature, owner: PlayerId) -> Self {
        Strategy {
            owner,
            reveal: vec![sig.owned_mask(owner); sig.n()],
        }
    }

    /// Builds a strategy from `(recipient, revealed set)` pairs; unlisted
    /// recipients get nothing.
    pub fn from_pairs(
        sig: &Signature,
        owner: PlayerId,
        pairs: &[(PlayerId, VarSet)],
    ) -> Result<Self, Error> {
        let mut s = Strategy::hide(sig, owner);
        for &(j, set) in pairs {
            s.set(sig, j, set)?;
        }
        Ok(s)
    }

    pub fn owner(&self) -> PlayerId {
        self.owner
    }

    /// s_i(j).
    pub fn revealed(&self, to: PlayerId) -> VarSet {
        VarSet(self.reveal[to.idx()])
    }

    pub fn set(&mut self, sig: &Signature, to: PlayerId, set: VarSet) -> Result<(), Error> {
        if !sig.has_player(to) {
            return Err(Error::UnknownPlayer(to.0 as u64));
        }
        let own = sig.owned_mask(self.owner);
        if set.0 & !own != 0 {
            return Err(Error::InvalidProfile(format!(
                "player {} cannot reveal {} which it does not observe",
                self.owner,
                VarSet(set.0 & !own).display(sig)
            )));
        }
        if to == self.owner {
            if set.0 != own {
                return Err(Error::InvalidProfile(format!(
                    "player {} always observes all its variables",
                    self.owner
                )));
            }
            return Ok(());
        }
        self.reveal[to.idx()] = set.0;
        Ok(())
    }

    pub(crate) fn set_raw(&mut self, to: PlayerId, mask: u64) {
        if to != self.owner {
            self.reveal[to.idx()] = mask;
        }
    }

    /// Pointwise inclusion: `self` reveals at least what `other` reveals.
    pub fn covers(&self, other: &Strategy) -> bool {
        self.reveal
            .iter()
            .zip(&other.reveal)
            .all(|(a, b)| b & !a == 0)
    }
}

/// One strategy per player.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StrategyProfile {
    strategies: Vec<Strategy>,
}

impl StrategyProfile {
    pub fn new(sig: &Signature, strategies: Vec<Strategy>) -> Result<Self, Error> {
        if strategies.len() != sig.n() {
            return Err(Error::InvalidProfile(format!(
                "expected {} strategies, got {}",
                sig.n(),
                strategies.len()
            )));
        }
        for (k, s) in strategies.iter().enumerate() {
            if s.owner.idx() != k {
                return Err(Error::InvalidProfile(format!(
                    "strategy at position {} belongs to player {}",
                    k + 1,
                    s.owner
                )));
            }
        }
        Ok(StrategyProfile { strategies })
    }

    pub(crate) fn from_vec_unchecked(strategies: Vec<Strategy>) -> Self {
        StrategyProfile { strategies }
    }

    /// s^∅: nobody reveals anything.
    pub fn hide_all(sig: &Signature) -> Self {
        StrategyProfile {
            strategies: sig.players().map(|p| Strategy::hide(sig, p)).collect(),
        }
    }

    /// s^∀: everybody reveals everything to everyone.
    pub fn reveal_all(sig: &Signature) -> Self {
        StrategyProfile {
            strategies: sig
                .players()
                .map(|p| Strategy::reveal_all(sig, p))
                .collect(),
        }
    }

    pub fn get(&self, p: PlayerId) -> &Strategy {
        &self.strategies[p.idx()]
    }

    pub fn strategies(&self) -> &[Strategy] {
        &self.strategies
    }

    /// The profile with player `s.owner()` switched to `s`.
    pub fn with(&self, s: Strategy) -> Self {
        let mut out = self.clone();
        let k = s.owner.idx();
        out.strategies[k] = s;
        out
    }

    /// P_i(s).
    pub fn revealed_to(&self, i: PlayerId) -> VarSet {
        VarSet(self.strategies.iter().fold(0, |m, s| m | s.reveal[i.idx()]))
    }

    pub fn observation(&self) -> Observation {
        let n = self.strategies.len();
        Observation::new(
            (0..n)
                .map(|i| self.revealed_to(PlayerId::from_idx(i)).0)
                .collect(),
        )
    }

    /// Variables revealed by somebody to somebody else.
    pub fn revealed_somewhere(&self) -> VarSet {
        let mut m = 0;
        for s in &self.strategies {
            for (j, r) in s.reveal.iter().enumerate() {
                if j != s.owner.idx() {
                    m |= r;
                }
            }
        }
        VarSet(m)
    }
}

/// The strategies a player may choose from, optionally with each
/// recipient restricted to a subset of the player's variables.
///
/// Strategies are indexed in mixed radix over recipients in increasing
/// order, the last recipient least significant; index 0 hides everything.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategySpace {
    owner: PlayerId,
    own: u64,
    allowed: Vec<u64>,
}

impl StrategySpace {
    pub fn full(sig: &Signature, owner: PlayerId) -> Self {
        let own = sig.owned_mask(owner);
        let allowed = sig
            .players()
            .map(|j| if j == owner { 0 } else { own })
            .collect();
        StrategySpace {
            owner,
            own,
            allowed,
        }
    }

    /// `allowed[j]` bounds what may be revealed to player `j + 1`.
    pub fn restricted(sig: &Signature, owner: PlayerId, mut allowed: Vec<u64>) -> Self {
        let own = sig.owned_mask(owner);
        for (j, a) in allowed.iter_mut().enumerate() {
            *a &= own;
            if j == owner.idx() {
                *a = 0;
            }
        }
        StrategySpace {
            owner,
            own,
            allowed,
        }
    }

    pub fn owner(&self) -> PlayerId {
        self.owner
    }

    pub fn allowed(&self, to: PlayerId) -> VarSet {
        VarSet(self.allowed[to.idx()])
    }

    pub fn allowed_masks(&self) -> &[u64] {
        &self.allowed
    }

    pub fn bits(&self) -> u32 {
        self.allowed.iter().map(|a| a.count_ones()).sum()
    }

    /// Number of strategies, saturating at `u64::MAX`.
    pub fn len(&self) -> u64 {
        1u64.checked_shl(self.bits()).unwrap_or(u64::MAX)
    }

    /// ORs the revelations of strategy `index` into `masks`.
    pub(crate) fn apply(&self, mut index: u64, masks: &mut [u64]) {
        for j in (0..self.allowed.len()).rev() {
            let a = self.allowed[j];
            if a == 0 {
                continue;
            }
            let k = a.count_ones();
            masks[j] |= deposit(index & ((1u64 << k) - 1), a);
            index >>= k;
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn strategy(&self, mut index: u64) -> Strategy {
        let n = self.allowed.len();
        let mut reveal = vec![0; n];
        reveal[self.owner.idx()] = self.own;
        for j in (0..n).rev() {
            let a = self.allowed[j];
            if a == 0 {
                continue;
            }
            let k = a.count_ones();
            reveal[j] = deposit(index & ((1u64 << k) - 1), a);
            index >>= k;
        }
        Strategy {
            owner: self.owner,
            reveal,
        }
    }

    /// Index of `s`, if it lies inside the space.
    pub fn index_of(&self, s: &Strategy) -> Option<u64> {
        if s.owner != self.owner {
            return None;
        }
        let mut index = 0u64;
        for (j, &a) in self.allowed.iter().enumerate() {
            if j == self.owner.idx() {
                continue;
            }
            if s.reveal[j] & !a != 0 {
                return None;
            }
            let k = a.count_ones();
            index = (index << k) | extract(s.reveal[j], a);
        }
        Some(index)
    }

    /// Drops revelations outside the space.
    pub fn project(&self, s: &Strategy) -> Strategy {
        let mut out = s.clone();
        for (j, &a) in self.allowed.iter().enumerate() {
            if j != self.owner.idx() {
                out.reveal[j] &= a;
            }
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = Strategy> + '_ {
        (0..self.len()).map(|k| self.strategy(k))
    }

    /// Index of the strategy revealing everything allowed.
    pub fn top(&self) -> u64 {
        self.len() - 1
    }
}

/// P_i(s).
pub fn revealed_to(s: &StrategyProfile, i: PlayerId) -> VarSet {
    s.revealed_to(i)
}

/// v ~_i^s w.
pub fn obs_equiv(s: &StrategyProfile, i: PlayerId, v: VarSet, w: VarSet) -> bool {
    let m = s.revealed_to(i).0;
    v.0 & m == w.0 & m
}

/// [v]_i^s in valuation order.
pub fn information_set(
    sig: &Signature,
    s: &StrategyProfile,
    i: PlayerId,
    v: VarSet,
) -> Vec<VarSet> {
    let m = s.revealed_to(i).0;
    let free = sig.full_mask() & !m;
    crate::logic::eval::subsets(free)
        .map(|sub| VarSet((v.0 & m) | sub))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::VarId;

    #[test]
    fn space_sizes() {
        let s2 = Signature::one_var_each(2);
        assert_eq!(StrategySpace::full(&s2, PlayerId(1)).len(), 2);
        let s8 = Signature::one_var_each(8);
        assert_eq!(StrategySpace::full(&s8, PlayerId(3)).len(), 128);
        let s0 = Signature::new(2, &[Vec::<String>::new(), vec!["p2".into()]]).unwrap();
        assert_eq!(StrategySpace::full(&s0, PlayerId(1)).len(), 1);
    }

    #[test]
    fn index_roundtrip_and_order() {
        let sig = Signature::new(3, &[vec!["p1", "q1"], vec!["p2"], vec![]]).unwrap();
        let sp = StrategySpace::full(&sig, PlayerId(1));
        assert_eq!(sp.len(), 16);
        for k in 0..sp.len() {
            assert_eq!(sp.index_of(&sp.strategy(k)), Some(k));
        }
        assert_eq!(sp.strategy(0), Strategy::hide(&sig, PlayerId(1)));
        assert_eq!(
            sp.strategy(sp.top()),
            Strategy::reveal_all(&sig, PlayerId(1))
        );
        // last recipient least significant
        assert_eq!(sp.strategy(1).revealed(PlayerId(3)), VarSet(0b01));
        assert_eq!(sp.strategy(4).revealed(PlayerId(2)), VarSet(0b01));
    }

    #[test]
    fn revealed_to_examples() {
        let sig = Signature::new(3, &[vec!["p1", "q1"], vec!["p2"], vec!["p3"]]).unwrap();
        let none = StrategyProfile::hide_all(&sig);
        assert_eq!(none.revealed_to(PlayerId(1)), VarSet(0b0011));
        let all = StrategyProfile::reveal_all(&sig);
        assert_eq!(all.revealed_to(PlayerId(2)), VarSet(sig.full_mask()));
        let p1 = VarId(0);
        let q1 = VarId(1);
        let p3 = VarId(3);
        let s1 = Strategy::from_pairs(
            &sig,
            PlayerId(1),
            &[(PlayerId(2), VarSet::EMPTY.with(p1).with(q1))],
        )
        .unwrap();
        let s3 = Strategy::from_pairs(&sig, PlayerId(3), &[(PlayerId(1), VarSet::EMPTY.with(p3))])
            .unwrap();
        let s =
            StrategyProfile::new(&sig, vec![s1, Strategy::hide(&sig, PlayerId(2)), s3]).unwrap();
        assert_eq!(s.revealed_to(PlayerId(1)), VarSet(0b1011));
    }

    #[test]
    fn equivalence_and_information_sets() {
        let sig = Signature::one_var_each(2);
        let none = StrategyProfile::hide_all(&sig);
        let (p1p2, p1) = (VarSet(0b11), VarSet(0b01));
        assert!(obs_equiv(&none, PlayerId(1), p1p2, p1));
        assert_eq!(
            information_set(&sig, &none, PlayerId(1), p1p2),
            vec![p1, p1p2]
        );
        let mut s2 = Strategy::hide(&sig, PlayerId(2));
        s2.set(&sig, PlayerId(1), VarSet(0b10)).unwrap();
        let s = none.with(s2);
        assert!(!obs_equiv(&s, PlayerId(1), p1p2, p1));
        let all = StrategyProfile::reveal_all(&sig);
        assert_eq!(information_set(&sig, &all, PlayerId(2), p1), vec![p1]);
    }

    #[test]
    fn cannot_reveal_foreign_variables() {
        let sig = Signature::one_var_each(2);
        let mut s = Strategy::hide(&sig, PlayerId(1));
        assert!(s.set(&sig, PlayerId(2), VarSet(0b10)).is_err());
        assert!(s.set(&sig, PlayerId(1), VarSet(0)).is_err());
    }
}
