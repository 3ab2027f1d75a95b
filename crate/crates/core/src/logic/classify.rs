use std::fmt;

use serde::{Deserialize, Serialize};

use super::formula::Formula;
use super::nnf::{count_trivial, normalize_trivial, to_nnf};
use super::signature::{PlayerId, Signature};

/// Fragment membership of a goal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FragmentReport {
    pub is_boolean: bool,
    pub is_kw: bool,
    pub is_nnf: bool,
    pub is_positive: bool,
    pub self_positive_for: Option<PlayerId>,
    pub is_guarded: bool,
    /// Occurrences of `Kw_i p` with `p` owned by `i`.
    pub trivial_constituents: usize,
}

/// Rewrites `->`, `<->` and `Kw` by their definitions, leaving all other
/// connectives alone.
fn unfold(phi: &Formula) -> Formula {
    use Formula::*;
    match phi {
        Top | Bottom | Atom(_) => phi.clone(),
        Not(a) => Formula::not(unfold(a)),
        And(a, b) => Formula::and(unfold(a), unfold(b)),
        Or(a, b) => Formula::or(unfold(a), unfold(b)),
        Implies(a, b) => Formula::or(Formula::not(unfold(a)), unfold(b)),
        Iff(a, b) => {
            let (a, b) = (unfold(a), unfold(b));
            Formula::and(
                Formula::or(Formula::not(a.clone()), b.clone()),
                Formula::or(Formula::not(b), a),
            )
        }
        K(i, a) => Formula::k(*i, unfold(a)),
        KHat(i, a) => Formula::khat(*i, unfold(a)),
        Kw(i, a) => {
            let a = unfold(a);
            Formula::or(Formula::k(*i, a.clone()), Formula::k(*i, Formula::not(a)))
        }
    }
}

fn in_nnf(phi: &Formula) -> bool {
    use Formula::*;
    match phi {
        Top | Bottom | Atom(_) => true,
        Not(a) => matches!(a.as_ref(), Atom(_)),
        And(a, b) | Or(a, b) => in_nnf(a) && in_nnf(b),
        K(_, a) | KHat(_, a) => in_nnf(a),
        Implies(..) | Iff(..) | Kw(..) => false,
    }
}

fn in_positive(phi: &Formula) -> bool {
    use Formula::*;
    match phi {
        Top | Bottom | Atom(_) => true,
        Not(a) => matches!(a.as_ref(), Atom(_)),
        And(a, b) | Or(a, b) => in_positive(a) && in_positive(b),
        K(_, a) => in_positive(a),
        KHat(..) | Implies(..) | Iff(..) | Kw(..) => false,
    }
}

fn in_self_positive(phi: &Formula, j: PlayerId) -> bool {
    use Formula::*;
    match phi {
        Top | Bottom | Atom(_) => true,
        Not(a) => matches!(a.as_ref(), Atom(_)),
        And(a, b) | Or(a, b) => in_self_positive(a, j) && in_self_positive(b, j),
        K(_, a) => in_self_positive(a, j),
        KHat(k, a) => *k != j && in_self_positive(a, j),
        Implies(..) | Iff(..) | Kw(..) => false,
    }
}

/// Propositional combination of `Kw_j p` literals and constants.
pub fn is_kw_formula(phi: &Formula) -> bool {
    use Formula::*;
    match phi {
        Top | Bottom => true,
        Atom(_) | K(..) | KHat(..) => false,
        Kw(_, a) => matches!(a.as_ref(), Atom(_)),
        Not(a) => is_kw_formula(a),
        And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) => is_kw_formula(a) && is_kw_formula(b),
    }
}

/// Goal of shape `K_owner α`.
pub fn is_guarded(phi: &Formula, owner: PlayerId) -> bool {
    matches!(phi, Formula::K(i, _) if *i == owner)
}

pub fn classify(phi: &Formula, owner: PlayerId, sig: &Signature) -> FragmentReport {
    let unfolded = unfold(phi);
    let is_nnf = in_nnf(&unfolded);
    FragmentReport {
        is_boolean: phi.is_modal_free(),
        is_kw: is_kw_formula(phi),
        is_nnf,
        is_positive: is_nnf && in_positive(&unfolded),
        self_positive_for: in_self_positive(&unfolded, owner).then_some(owner),
        is_guarded: is_guarded(phi, owner),
        trivial_constituents: count_trivial(phi, sig),
    }
}

/// Positive and negative assertions about foreign and own variables.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TypeSet {
    pub plus: bool,
    pub minus: bool,
    pub cplus: bool,
    pub cminus: bool,
}

impl TypeSet {
    pub const FULL: TypeSet = TypeSet {
        plus: true,
        minus: true,
        cplus: true,
        cminus: true,
    };

    pub fn len(&self) -> usize {
        [self.plus, self.minus, self.cplus, self.cminus]
            .iter()
            .filter(|b| **b)
            .count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn members(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.plus {
            out.push("+");
        }
        if self.minus {
            out.push("-");
        }
        if self.cplus {
            out.push("c+");
        }
        if self.cminus {
            out.push("c-");
        }
        out
    }

    pub fn from_members(items: &[&str]) -> Option<TypeSet> {
        let mut t = TypeSet::default();
        for m in items {
            match *m {
                "+" => t.plus = true,
                "-" => t.minus = true,
                "c+" => t.cplus = true,
                "c-" => t.cminus = true,
                _ => return None,
            }
        }
        Some(t)
    }
}

impl fmt::Display for TypeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.members().join(","))
    }
}

/// Polarity of each variable occurrence in an NNF formula: an occurrence
/// under an odd number of `K̂` is negative. `Kw_j p` counts as a positive
/// occurrence of `p`, `¬Kw_j p` as a negative one.
fn polarities(phi: &Formula, flipped: bool, sig: &Signature, out: &mut Vec<(PlayerId, bool)>) {
    use Formula::*;
    match phi {
        Top | Bottom => {}
        Atom(v) => out.push((sig.owner(*v), !flipped)),
        Not(a) => match a.as_ref() {
            Atom(v) => out.push((sig.owner(*v), !flipped)),
            Kw(_, b) => {
                if let Atom(v) = b.as_ref() {
                    out.push((sig.owner(*v), flipped));
                }
            }
            other => polarities(&to_nnf(&Formula::not(other.clone())), flipped, sig, out),
        },
        And(a, b) | Or(a, b) => {
            polarities(a, flipped, sig, out);
            polarities(b, flipped, sig, out);
        }
        K(_, a) => polarities(a, flipped, sig, out),
        KHat(_, a) => polarities(a, !flipped, sig, out),
        Kw(_, a) => match a.as_ref() {
            Atom(v) => out.push((sig.owner(*v), !flipped)),
            _ => polarities(&to_nnf(phi), flipped, sig, out),
        },
        Implies(..) | Iff(..) => polarities(&to_nnf(phi), flipped, sig, out),
    }
}

/// type(i) of goal `phi` owned by `owner`, computed after trivial
/// constituents are normalized to `Top` and the goal is put in NNF.
pub fn goal_type_of(phi: &Formula, owner: PlayerId, sig: &Signature) -> TypeSet {
    let (normalized, _) = normalize_trivial(phi, sig);
    let nnf = to_nnf(&normalized);
    let mut occ = Vec::new();
    polarities(&nnf, false, sig, &mut occ);
    let mut t = TypeSet::default();
    for (p, positive) in occ {
        match (p == owner, positive) {
            (false, true) => t.plus = true,
            (false, false) => t.minus = true,
            (true, true) => t.cplus = true,
            (true, false) => t.cminus = true,
        }
    }
    t
}
