use super::formula::Formula;
use super::signature::Signature;

/// Negation normal form.
///
/// Negations end up directly above atoms or above `Kw_j p` literals, which
/// are kept intact so that knowing-whether formulas stay in their own
/// fragment. `Kw_j` over a compound argument is expanded.
pub fn to_nnf(phi: &Formula) -> Formula {
    pos(phi)
}

/// Negation normal form with every `Kw` expanded into `K`/`K̂`.
pub fn to_nnf_expanded(phi: &Formula) -> Formula {
    pos(&expand_kw(phi))
}

fn expand_kw(phi: &Formula) -> Formula {
    use Formula::*;
    match phi {
        Kw(i, a) => {
            let a = expand_kw(a);
            Formula::or(Formula::k(*i, a.clone()), Formula::k(*i, Formula::not(a)))
        }
        Top | Bottom | Atom(_) => phi.clone(),
        Not(a) => Formula::not(expand_kw(a)),
        And(a, b) => Formula::and(expand_kw(a), expand_kw(b)),
        Or(a, b) => Formula::or(expand_kw(a), expand_kw(b)),
        Implies(a, b) => Formula::implies(expand_kw(a), expand_kw(b)),
        Iff(a, b) => Formula::iff(expand_kw(a), expand_kw(b)),
        K(i, a) => Formula::k(*i, expand_kw(a)),
        KHat(i, a) => Formula::khat(*i, expand_kw(a)),
    }
}

fn pos(phi: &Formula) -> Formula {
    use Formula::*;
    match phi {
        Top | Bottom | Atom(_) => phi.clone(),
        Not(a) => neg(a),
        And(a, b) => Formula::and(pos(a), pos(b)),
        Or(a, b) => Formula::or(pos(a), pos(b)),
        Implies(a, b) => Formula::or(neg(a), pos(b)),
        Iff(a, b) => Formula::and(Formula::or(neg(a), pos(b)), Formula::or(pos(a), neg(b))),
        K(i, a) => Formula::k(*i, pos(a)),
        KHat(i, a) => Formula::khat(*i, pos(a)),
        Kw(i, a) => match a.as_ref() {
            Atom(_) => phi.clone(),
            _ => Formula::or(Formula::k(*i, pos(a)), Formula::k(*i, neg(a))),
        },
    }
}

/// NNF of `¬phi`.
fn neg(phi: &Formula) -> Formula {
    use Formula::*;
    match phi {
        Top => Bottom,
        Bottom => Top,
        Atom(_) => Formula::not(phi.clone()),
        Not(a) => pos(a),
        And(a, b) => Formula::or(neg(a), neg(b)),
        Or(a, b) => Formula::and(neg(a), neg(b)),
        Implies(a, b) => Formula::and(pos(a), neg(b)),
        Iff(a, b) => Formula::or(Formula::and(pos(a), neg(b)), Formula::and(neg(a), pos(b))),
        K(i, a) => Formula::khat(*i, neg(a)),
        KHat(i, a) => Formula::k(*i, neg(a)),
        Kw(i, a) => match a.as_ref() {
            Atom(_) => Formula::not(phi.clone()),
            _ => Formula::and(Formula::khat(*i, neg(a)), Formula::khat(*i, pos(a))),
        },
    }
}

/// True when negations occur only directly above atoms or `Kw_j p`
/// literals and no `->`/`<->` remains.
pub fn is_nnf_shape(phi: &Formula) -> bool {
    use Formula::*;
    match phi {
        Top | Bottom | Atom(_) => true,
        Not(a) => matches!(a.as_ref(), Atom(_)) || is_kw_literal(a),
        And(a, b) | Or(a, b) => is_nnf_shape(a) && is_nnf_shape(b),
        Implies(..) | Iff(..) => false,
        K(_, a) | KHat(_, a) => is_nnf_shape(a),
        Kw(_, a) => matches!(a.as_ref(), Atom(_)),
    }
}

pub fn is_kw_literal(phi: &Formula) -> bool {
    matches!(phi, Formula::Kw(_, a) if matches!(a.as_ref(), Formula::Atom(_)))
}

/// Replaces every `Kw_i p` with `p` owned by `i` by `Top` (always true).
/// Returns the rewritten formula and the number of replacements.
pub fn normalize_trivial(phi: &Formula, sig: &Signature) -> (Formula, usize) {
    let mut count = 0;
    let out = normalize_rec(phi, sig, &mut count);
    (out, count)
}

fn normalize_rec(phi: &Formula, sig: &Signature, count: &mut usize) -> Formula {
    use Formula::*;
    match phi {
        Kw(i, a) => {
            if let Atom(v) = a.as_ref() {
                if sig.owner(*v) == *i {
                    *count += 1;
                    return Top;
                }
            }
            Formula::kw(*i, normalize_rec(a, sig, count))
        }
        Top | Bottom | Atom(_) => phi.clone(),
        Not(a) => Formula::not(normalize_rec(a, sig, count)),
        And(a, b) => Formula::and(normalize_rec(a, sig, count), normalize_rec(b, sig, count)),
        Or(a, b) => Formula::or(normalize_rec(a, sig, count), normalize_rec(b, sig, count)),
        Implies(a, b) => {
            Formula::implies(normalize_rec(a, sig, count), normalize_rec(b, sig, count))
        }
        Iff(a, b) => Formula::iff(normalize_rec(a, sig, count), normalize_rec(b, sig, count)),
        K(i, a) => Formula::k(*i, normalize_rec(a, sig, count)),
        KHat(i, a) => Formula::khat(*i, normalize_rec(a, sig, count)),
    }
}

/// Counts `Kw_i p` constituents with `p` owned by `i`.
pub fn count_trivial(phi: &Formula, sig: &Signature) -> usize {
    let mut count = 0;
    phi.visit(&mut |n| {
        if let Formula::Kw(i, a) = n {
            if let Formula::Atom(v) = a.as_ref() {
                if sig.owner(*v) == *i {
                    count += 1;
                }
            }
        }
    });
    count
}
