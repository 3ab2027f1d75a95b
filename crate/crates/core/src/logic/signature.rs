use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Maximum number of propositional variables in a signature (one bit each).
pub const MAX_VARS: usize = 63;

/// A player, numbered from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PlayerId(pub u16);

impl PlayerId {
    pub fn new(index: u16) -> Self {
        PlayerId(index)
    }

    /// Zero-based position for indexing per-player vectors.
    pub fn idx(self) -> usize {
        self.0 as usize - 1
    }

    pub fn from_idx(i: usize) -> Self {
        PlayerId(i as u16 + 1)
    }
}

impl fmt::Display for PlayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A variable; the index is its bit position in every valuation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub u16);

impl VarId {
    pub fn bit(self) -> u64 {
        1u64 << self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarInfo {
    pub name: String,
    pub owner: PlayerId,
}

/// Players and the partition of the variables among them.
///
/// Variables are ordered by owner, then by declaration order; that order
/// fixes the bit layout of valuations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    n: usize,
    vars: Vec<VarInfo>,
    by_name: HashMap<String, VarId>,
    owned: Vec<u64>,
}

pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

impl Signature {
    /// `owned[i]` lists the variables of player `i + 1` in declaration order.
    pub fn new<S: AsRef<str>>(n: usize, owned: &[Vec<S>]) -> Result<Self, Error> {
        if n == 0 || n > u16::MAX as usize {
            return Err(Error::Signature(format!("player count {n} out of range")));
        }
        if owned.len() > n {
            return Err(Error::Signature(format!(
                "variables given for {} players but the game has {n}",
                owned.len()
            )));
        }
        let mut vars = Vec::new();
        let mut by_name = HashMap::new();
        let mut masks = vec![0u64; n];
        for (i, names) in owned.iter().enumerate() {
            for name in names {
                let name = name.as_ref();
                if !is_identifier(name) {
                    return Err(Error::Signature(format!("invalid variable name {name:?}")));
                }
                if vars.len() >= MAX_VARS {
                    return Err(Error::Signature(format!(
                        "at most {MAX_VARS} variables are supported"
                    )));
                }
                let id = VarId(vars.len() as u16);
                if by_name.insert(name.to_string(), id).is_some() {
                    return Err(Error::Signature(format!("duplicate variable {name:?}")));
                }
                masks[i] |= id.bit();
                vars.push(VarInfo {
                    name: name.to_string(),
                    owner: PlayerId::from_idx(i),
                });
            }
        }
        Ok(Signature {
            n,
            vars,
            by_name,
            owned: masks,
        })
    }

    /// One variable `p<i>` per player.
    pub fn one_var_each(n: usize) -> Self {
        let owned: Vec<Vec<String>> = (1..=n).map(|i| vec![format!("p{i}")]).collect();
        Signature::new(n, &owned).expect("generated names are valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn players(&self) -> impl Iterator<Item = PlayerId> {
        (1..=self.n as u16).map(PlayerId)
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> {
        (0..self.vars.len() as u16).map(VarId)
    }

    pub fn var(&self, id: VarId) -> &VarInfo {
        &self.vars[id.0 as usize]
    }

    pub fn name(&self, id: VarId) -> &str {
        &self.vars[id.0 as usize].name
    }

    pub fn owner(&self, id: VarId) -> PlayerId {
        self.vars[id.0 as usize].owner
    }

    pub fn lookup(&self, name: &str) -> Option<VarId> {
        self.by_name.get(name).copied()
    }

    pub fn has_player(&self, p: PlayerId) -> bool {
        p.0 >= 1 && (p.0 as usize) <= self.n
    }

    /// Bit mask of P_i.
    pub fn owned_mask(&self, p: PlayerId) -> u64 {
        self.owned[p.idx()]
    }

    pub fn owned_vars(&self, p: PlayerId) -> Vec<VarId> {
        crate::game::bits(self.owned[p.idx()])
            .map(|b| VarId(b as u16))
            .collect()
    }

    /// Bit mask of P.
    pub fn full_mask(&self) -> u64 {
        if self.vars.is_empty() {
            0
        } else {
            (1u64 << self.vars.len()) - 1
        }
    }

    /// |V| = 2^|P|.
    pub fn num_valuations(&self) -> u64 {
        1u64 << self.vars.len()
    }

    pub fn names_of(&self, mask: u64) -> Vec<String> {
        crate::game::bits(mask)
            .map(|b| self.vars[b as usize].name.clone())
            .collect()
    }

    pub fn mask_of<S: AsRef<str>>(&self, names: &[S]) -> Result<u64, Error> {
        let mut m = 0;
        for n in names {
            let id = self
                .lookup(n.as_ref())
                .ok_or_else(|| Error::UnknownVariable(n.as_ref().to_string()))?;
            m |= id.bit();
        }
        Ok(m)
    }

    /// Per-player variable names, in declaration order.
    pub fn partition_names(&self) -> Vec<Vec<String>> {
        self.players()
            .map(|p| self.names_of(self.owned_mask(p)))
            .collect()
    }
}
