use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::logic::PlayerId;

use super::bits::VarSet;

/// How a player compares expected outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutcomeRelation {
    Opt,
    Pess,
    Real,
    Max,
}

impl OutcomeRelation {
    pub const ALL: [OutcomeRelation; 4] = [
        OutcomeRelation::Pess,
        OutcomeRelation::Opt,
        OutcomeRelation::Real,
        OutcomeRelation::Max,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OutcomeRelation::Opt => "opt",
            OutcomeRelation::Pess => "pess",
            OutcomeRelation::Real => "real",
            OutcomeRelation::Max => "max",
        }
    }

    /// Strict preference `a > b` on outcome vectors of equal length.
    pub(crate) fn prefers(self, a: &[bool], b: &[bool]) -> bool {
        match self {
            OutcomeRelation::Opt => a.iter().any(|&x| x) && !b.iter().any(|&x| x),
            OutcomeRelation::Pess => a.iter().all(|&x| x) && !b.iter().all(|&x| x),
            OutcomeRelation::Real => {
                a.iter().filter(|&&x| x).count() > b.iter().filter(|&&x| x).count()
            }
            OutcomeRelation::Max => a.iter().zip(b).any(|(&x, &y)| x && !y),
        }
    }
}

impl fmt::Display for OutcomeRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OutcomeRelation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "opt" => Ok(OutcomeRelation::Opt),
            "pess" => Ok(OutcomeRelation::Pess),
            "real" => Ok(OutcomeRelation::Real),
            "max" => Ok(OutcomeRelation::Max),
            other => Err(Error::Format(format!("unknown outcome relation {other:?}"))),
        }
    }
}

/// 𝐮_i(v, 𝐬): outcomes over the initial information set of `v`, in
/// valuation order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExpectedOutcome {
    pub player: PlayerId,
    /// Values of the player's own variables on the information set.
    pub class_key: VarSet,
    pub bits: Vec<bool>,
}

impl ExpectedOutcome {
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn min(&self) -> bool {
        self.bits.iter().all(|&b| b)
    }

    pub fn max(&self) -> bool {
        self.bits.iter().any(|&b| b)
    }

    pub fn sum(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn to_bitstring(&self) -> String {
        self.bits
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect()
    }

    /// Builds an outcome from a string of `0`/`1` characters.
    pub fn from_bitstring(player: PlayerId, class_key: VarSet, text: &str) -> Result<Self, Error> {
        let bits = text
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Format(format!("bad outcome bit {other:?}"))),
            })
            .collect::<Result<_, _>>()?;
        Ok(ExpectedOutcome {
            player,
            class_key,
            bits,
        })
    }
}

/// Strict comparison `a > b` under `rel`.
pub fn compare(
    rel: OutcomeRelation,
    a: &ExpectedOutcome,
    b: &ExpectedOutcome,
) -> Result<bool, Error> {
    if a.player != b.player || a.class_key != b.class_key || a.bits.len() != b.bits.len() {
        return Err(Error::IndexMismatch);
    }
    Ok(rel.prefers(&a.bits, &b.bits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn eo(s: &str) -> ExpectedOutcome {
        ExpectedOutcome::from_bitstring(PlayerId(1), VarSet(0), s).unwrap()
    }

    #[test]
    fn relation_examples() {
        use OutcomeRelation::*;
        assert!(compare(Max, &eo("10"), &eo("01")).unwrap());
        assert!(compare(Max, &eo("01"), &eo("10")).unwrap());
        assert!(compare(Pess, &eo("11"), &eo("01")).unwrap());
        assert!(!compare(Pess, &eo("01"), &eo("10")).unwrap());
        assert!(compare(Real, &eo("11"), &eo("10")).unwrap());
        assert!(!compare(Real, &eo("01"), &eo("10")).unwrap());
        for x in ["01", "10", "11"] {
            assert!(compare(Opt, &eo(x), &eo("00")).unwrap());
        }
        assert!(!compare(Opt, &eo("11"), &eo("01")).unwrap());
    }

    #[test]
    fn mismatched_index_sets_rejected() {
        let a = eo("10");
        let b = ExpectedOutcome::from_bitstring(PlayerId(1), VarSet(1), "10").unwrap();
        assert!(matches!(
            compare(OutcomeRelation::Pess, &a, &b),
            Err(Error::IndexMismatch)
        ));
        assert!(compare(OutcomeRelation::Pess, &a, &eo("101")).is_err());
    }

    fn bitvec(len: usize) -> impl Strategy<Value = Vec<bool>> {
        proptest::collection::vec(any::<bool>(), len)
    }

    proptest! {
        #[test]
        fn max_is_total_on_distinct_and_irreflexive(len in 1usize..8, seed in any::<u64>()) {
            let a: Vec<bool> = (0..len).map(|k| seed >> k & 1 == 1).collect();
            let b: Vec<bool> = (0..len).map(|k| seed >> (k + 8) & 1 == 1).collect();
            let rel = OutcomeRelation::Max;
            prop_assert!(!rel.prefers(&a, &a));
            if a != b {
                prop_assert!(rel.prefers(&a, &b) || rel.prefers(&b, &a));
            }
        }

        #[test]
        fn scalar_relations_are_strict_orders((a, b, c) in (1usize..6).prop_flat_map(|n| (bitvec(n), bitvec(n), bitvec(n)))) {
            for rel in [OutcomeRelation::Opt, OutcomeRelation::Pess, OutcomeRelation::Real] {
                prop_assert!(!rel.prefers(&a, &a));
                prop_assert!(!(rel.prefers(&a, &b) && rel.prefers(&b, &a)));
                if rel.prefers(&a, &b) && rel.prefers(&b, &c) {
                    prop_assert!(rel.prefers(&a, &c));
                }
            }
        }
    }
}
