use crate::error::Error;
use crate::logic::{PlayerId, Signature};

use super::bits::{deposit, extract, VarSet};
use super::strategy::{Strategy, StrategyProfile};

/// A ~_i class of the initial relation, or of the relation after play
/// when `domain` is P_i(s).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InformationClass {
    pub player: PlayerId,
    /// Variables the player observes.
    pub domain: VarSet,
    /// Their values, as a subset of `domain`.
    pub key: VarSet,
}

impl InformationClass {
    /// The initial class of `v` for player `i`.
    pub fn initial(sig: &Signature, i: PlayerId, v: VarSet) -> Self {
        let domain = VarSet(sig.owned_mask(i));
        InformationClass {
            player: i,
            domain,
            key: v & domain,
        }
    }

    /// The class of `v` after play of `s`.
    pub fn after(s: &StrategyProfile, i: PlayerId, v: VarSet) -> Self {
        let domain = s.revealed_to(i);
        InformationClass {
            player: i,
            domain,
            key: v & domain,
        }
    }

    pub fn contains(&self, w: VarSet) -> bool {
        w & self.domain == self.key
    }

    /// Members in valuation order.
    pub fn members(&self, sig: &Signature) -> Vec<VarSet> {
        let free = sig.full_mask() & !self.domain.0;
        let n = 1u64 << free.count_ones();
        (0..n)
            .map(|r| VarSet(self.key.0 | deposit(r, free)))
            .collect()
    }

    /// Position of the class among the player's initial classes.
    pub fn index(&self) -> u64 {
        extract(self.key.0, self.domain.0)
    }
}

/// A map from a player's initial information classes to strategies.
///
/// Class `c` is the class whose key is `deposit(c, P_i)`; uniformity
/// holds by construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UniformStrategy {
    owner: PlayerId,
    own: u64,
    by_class: Vec<Strategy>,
}

impl UniformStrategy {
    pub fn global(sig: &Signature, s: Strategy) -> Self {
        let own = sig.owned_mask(s.owner());
        let classes = 1usize << own.count_ones();
        UniformStrategy {
            owner: s.owner(),
            own,
            by_class: vec![s; classes],
        }
    }

    /// `f` receives each class key in class order.
    pub fn from_fn(
        sig: &Signature,
        owner: PlayerId,
        mut f: impl FnMut(VarSet) -> Strategy,
    ) -> Self {
        let own = sig.owned_mask(owner);
        let classes = 1u64 << own.count_ones();
        let by_class = (0..classes).map(|c| f(VarSet(deposit(c, own)))).collect();
        UniformStrategy {
            owner,
            own,
            by_class,
        }
    }

    pub fn from_classes(
        sig: &Signature,
        owner: PlayerId,
        by_class: Vec<Strategy>,
    ) -> Result<Self, Error> {
        let own = sig.owned_mask(owner);
        if by_class.len() != 1usize << own.count_ones() {
            return Err(Error::InvalidProfile(format!(
                "player {owner} has {} information classes, got {} strategies",
                1usize << own.count_ones(),
                by_class.len()
            )));
        }
        if by_class.iter().any(|s| s.owner() != owner) {
            return Err(Error::InvalidProfile(format!(
                "strategy not owned by player {owner}"
            )));
        }
        Ok(UniformStrategy {
            owner,
            own,
            by_class,
        })
    }

    pub fn owner(&self) -> PlayerId {
        self.owner
    }

    pub fn num_classes(&self) -> usize {
        self.by_class.len()
    }

    pub fn class_of(&self, v: VarSet) -> usize {
        extract(v.0, self.own) as usize
    }

    /// 𝐬_i(v).
    pub fn at(&self, v: VarSet) -> &Strategy {
        &self.by_class[self.class_of(v)]
    }

    pub fn by_class(&self) -> &[Strategy] {
        &self.by_class
    }

    pub fn class_key(&self, c: usize) -> VarSet {
        VarSet(deposit(c as u64, self.own))
    }

    pub fn set_class(&mut self, c: usize, s: Strategy) {
        assert_eq!(s.owner(), self.owner);
        self.by_class[c] = s;
    }

    pub fn is_global(&self) -> bool {
        self.by_class.windows(2).all(|w| w[0] == w[1])
    }
}

/// One uniform strategy per player.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UniformProfile {
    strategies: Vec<UniformStrategy>,
}

impl UniformProfile {
    pub fn new(sig: &Signature, strategies: Vec<UniformStrategy>) -> Result<Self, Error> {
        if strategies.len() != sig.n() {
            return Err(Error::InvalidProfile(format!(
                "expected {} uniform strategies, got {}",
                sig.n(),
                strategies.len()
            )));
        }
        for (k, s) in strategies.iter().enumerate() {
            if s.owner.idx() != k {
                return Err(Error::InvalidProfile(format!(
                    "uniform strategy at position {} belongs to player {}",
                    k + 1,
                    s.owner
                )));
            }
        }
        Ok(UniformProfile { strategies })
    }

    /// ṡ: play `s` everywhere.
    pub fn lift_global(sig: &Signature, s: &StrategyProfile) -> Self {
        UniformProfile {
            strategies: s
                .strategies()
                .iter()
                .map(|si| UniformStrategy::global(sig, si.clone()))
                .collect(),
        }
    }

    /// 𝐬(v).
    pub fn at(&self, v: VarSet) -> StrategyProfile {
        StrategyProfile::from_vec_unchecked(
            self.strategies.iter().map(|u| u.at(v).clone()).collect(),
        )
    }

    pub fn get(&self, i: PlayerId) -> &UniformStrategy {
        &self.strategies[i.idx()]
    }

    pub fn strategies(&self) -> &[UniformStrategy] {
        &self.strategies
    }

    /// The profile with player `u.owner()` switched to `u`.
    pub fn with(&self, u: UniformStrategy) -> Self {
        let mut out = self.clone();
        let k = u.owner.idx();
        out.strategies[k] = u;
        out
    }

    pub fn is_globally_uniform(&self) -> bool {
        self.strategies.iter().all(UniformStrategy::is_global)
    }
}

/// ṡ for a plain profile.
pub fn lift_global(sig: &Signature, s: &StrategyProfile) -> UniformProfile {
    UniformProfile::lift_global(sig, s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lift_is_constant() {
        let sig = Signature::new(2, &[vec!["p1", "q1"], vec!["p2"]]).unwrap();
        let s = StrategyProfile::reveal_all(&sig);
        let u = lift_global(&sig, &s);
        assert!(u.is_globally_uniform());
        for v in 0..sig.num_valuations() {
            assert_eq!(u.at(VarSet(v)), s);
        }
    }

    #[test]
    fn class_lookup_uses_own_variables() {
        let sig = Signature::new(2, &[vec!["p1"], vec!["p2", "q2"]]).unwrap();
        let p2 = PlayerId(2);
        let hide = Strategy::hide(&sig, p2);
        let all = Strategy::reveal_all(&sig, p2);
        let u = UniformStrategy::from_fn(&sig, p2, |k| {
            if k.0 == 0b110 {
                all.clone()
            } else {
                hide.clone()
            }
        });
        assert_eq!(u.num_classes(), 4);
        assert_eq!(u.at(VarSet(0b111)), &all);
        assert_eq!(u.at(VarSet(0b011)), &hide);
        assert!(!u.is_global());
    }

    #[test]
    fn class_members_sorted() {
        let sig = Signature::one_var_each(2);
        let c = InformationClass::initial(&sig, PlayerId(1), VarSet(0b11));
        assert_eq!(c.members(&sig), vec![VarSet(0b01), VarSet(0b11)]);
        assert_eq!(c.index(), 1);
    }
}
