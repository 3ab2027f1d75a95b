use std::fmt;
use std::ops::{BitAnd, BitOr, Not, Sub};

use serde::{Deserialize, Serialize};

use crate::logic::{Signature, VarId};

/// Positions of the set bits of `mask`, lowest first.
pub fn bits(mask: u64) -> impl Iterator<Item = u32> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let b = m.trailing_zeros();
            m &= m - 1;
            Some(b)
        }
    })
}

/// Scatters the low bits of `x` onto the set bits of `mask`.
pub fn deposit(mut x: u64, mask: u64) -> u64 {
    let mut out = 0;
    for b in bits(mask) {
        if x & 1 != 0 {
            out |= 1 << b;
        }
        x >>= 1;
        if x == 0 {
            break;
        }
    }
    out
}

/// Gathers the bits of `x` selected by `mask` into the low bits.
pub fn extract(x: u64, mask: u64) -> u64 {
    let mut out = 0;
    for (k, b) in bits(mask).enumerate() {
        if x >> b & 1 != 0 {
            out |= 1 << k;
        }
    }
    out
}

/// A set of variables as a bit vector in signature order.
#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct VarSet(pub u64);

/// A valuation is the set of true variables.
pub type Valuation = VarSet;

impl VarSet {
    pub const EMPTY: VarSet = VarSet(0);

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, v: VarId) -> bool {
        self.0 & v.bit() != 0
    }

    pub fn with(self, v: VarId) -> VarSet {
        VarSet(self.0 | v.bit())
    }

    pub fn is_subset(self, other: VarSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = VarId> {
        bits(self.0).map(|b| VarId(b as u16))
    }

    pub fn from_names<S: AsRef<str>>(sig: &Signature, names: &[S]) -> Result<VarSet, crate::Error> {
        sig.mask_of(names).map(VarSet)
    }

    pub fn names(self, sig: &Signature) -> Vec<String> {
        sig.names_of(self.0)
    }

    pub fn display(self, sig: &Signature) -> String {
        format!("{{{}}}", self.names(sig).join(","))
    }
}

impl BitOr for VarSet {
    type Output = VarSet;
    fn bitor(self, o: VarSet) -> VarSet {
        VarSet(self.0 | o.0)
    }
}

impl BitAnd for VarSet {
    type Output = VarSet;
    fn bitand(self, o: VarSet) -> VarSet {
        VarSet(self.0 & o.0)
    }
}

impl Sub for VarSet {
    type Output = VarSet;
    fn sub(self, o: VarSet) -> VarSet {
        VarSet(self.0 & !o.0)
    }
}

impl Not for VarSet {
    type Output = VarSet;
    fn not(self) -> VarSet {
        VarSet(!self.0)
    }
}

impl fmt::Binary for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Binary::fmt(&self.0, f)
    }
}
