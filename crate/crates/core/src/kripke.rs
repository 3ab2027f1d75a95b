//! Explicit epistemic models and action models, evaluated with the
//! standard relational semantics. Used as an oracle for [`crate::logic::eval`].

use std::collections::HashMap;

use serde_json::{json, Value};

use crate::error::Error;
use crate::game::StrategyProfile;
use crate::logic::eval::subsets;
use crate::logic::{Formula, PlayerId, Signature};

/// Largest model accepted by [`isomorphic`].
pub const ISO_LIMIT: usize = 1 << 12;

/// Worlds labelled with valuations and, per player, a partition of the
/// worlds given as a block id per world. Relations are equivalences by
/// construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpistemicModel {
    labels: Vec<u64>,
    blocks: Vec<Vec<usize>>,
}

/// Renumbers arbitrary keys to block ids in order of first occurrence.
fn compact<K: std::hash::Hash + Eq>(keys: impl Iterator<Item = K>) -> Vec<usize> {
    let mut ids = HashMap::new();
    keys.map(|k| {
        let next = ids.len();
        *ids.entry(k).or_insert(next)
    })
    .collect()
}

impl EpistemicModel {
    /// `blocks[i][w]` names the block of world `w` for player `i + 1`.
    pub fn new(labels: Vec<u64>, blocks: Vec<Vec<usize>>) -> Result<Self, Error> {
        if let Some(b) = blocks.iter().find(|b| b.len() != labels.len()) {
            return Err(Error::Format(format!(
                "partition covers {} worlds, model has {}",
                b.len(),
                labels.len()
            )));
        }
        let blocks = blocks.into_iter().map(|b| compact(b.into_iter())).collect();
        Ok(EpistemicModel { labels, blocks })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn players(&self) -> usize {
        self.blocks.len()
    }

    pub fn label(&self, w: usize) -> u64 {
        self.labels[w]
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn block(&self, i: PlayerId, w: usize) -> usize {
        self.blocks[i.idx()][w]
    }

    pub fn related(&self, i: PlayerId, a: usize, b: usize) -> bool {
        self.blocks[i.idx()][a] == self.blocks[i.idx()][b]
    }

    /// Blocks of player `i` as sorted world lists, ordered by smallest member.
    pub fn partition(&self, i: PlayerId) -> Vec<Vec<usize>> {
        let b = &self.blocks[i.idx()];
        let count = b.iter().copied().max().map_or(0, |m| m + 1);
        let mut out = vec![Vec::new(); count];
        for (w, &k) in b.iter().enumerate() {
            out[k].push(w);
        }
        out
    }

    /// Relation as a reflexive, symmetric, transitive check over all pairs.
    pub fn is_equivalence(&self, i: PlayerId) -> bool {
        let n = self.len();
        let r = |a, b| self.related(i, a, b);
        (0..n).all(|a| r(a, a))
            && (0..n).all(|a| (0..n).all(|b| r(a, b) == r(b, a)))
            && (0..n).all(|a| (0..n).all(|b| !r(a, b) || (0..n).all(|c| !r(b, c) || r(a, c))))
    }

    /// Worlds with labels and per-player blocks.
    pub fn to_json(&self, sig: &Signature) -> Value {
        let worlds: Vec<Value> = self
            .labels
            .iter()
            .enumerate()
            .map(|(w, &v)| json!({ "id": w, "label": sig.names_of(v) }))
            .collect();
        let partitions: serde_json::Map<String, Value> = (0..self.players())
            .map(|i| {
                let p = PlayerId::from_idx(i);
                (p.0.to_string(), json!(self.partition(p)))
            })
            .collect();
        json!({ "worlds": worlds, "partitions": partitions })
    }
}

/// A conjunction of positive and negative literals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Precondition {
    pub pos: u64,
    pub neg: u64,
}

impl Precondition {
    pub const TOP: Precondition = Precondition { pos: 0, neg: 0 };

    /// δ_v over the variables of `full`.
    pub fn describing(v: u64, full: u64) -> Self {
        Precondition {
            pos: v & full,
            neg: full & !v,
        }
    }

    pub fn holds(&self, v: u64) -> bool {
        v & self.pos == self.pos && v & self.neg == 0
    }

    pub fn to_formula(&self) -> Formula {
        let lits = (0..64)
            .filter(|k| (self.pos | self.neg) >> k & 1 == 1)
            .map(|k| {
                let a = Formula::Atom(crate::logic::VarId(k as u16));
                if self.pos >> k & 1 == 1 {
                    a
                } else {
                    Formula::not(a)
                }
            });
        Formula::conj(lits)
    }
}

/// Actions with Boolean preconditions and, per player, a partition of the
/// actions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionModel {
    pre: Vec<Precondition>,
    blocks: Vec<Vec<usize>>,
}

impl ActionModel {
    pub fn new(pre: Vec<Precondition>, blocks: Vec<Vec<usize>>) -> Result<Self, Error> {
        if blocks.iter().any(|b| b.len() != pre.len()) {
            return Err(Error::Format("partition does not cover the actions".into()));
        }
        let blocks = blocks.into_iter().map(|b| compact(b.into_iter())).collect();
        Ok(ActionModel { pre, blocks })
    }

    pub fn len(&self) -> usize {
        self.pre.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pre.is_empty()
    }

    pub fn pre(&self, e: usize) -> Precondition {
        self.pre[e]
    }

    pub fn related(&self, i: PlayerId, a: usize, b: usize) -> bool {
        self.blocks[i.idx()][a] == self.blocks[i.idx()][b]
    }
}

fn valuation_model(sig: &Signature, masks: &[u64]) -> EpistemicModel {
    let labels: Vec<u64> = (0..sig.num_valuations()).collect();
    let blocks = masks
        .iter()
        .map(|&m| compact(labels.iter().map(|&v| v & m)))
        .collect();
    EpistemicModel { labels, blocks }
}

/// IM: worlds are valuations, each player distinguishes its own variables.
pub fn build_initial_model(sig: &Signature) -> EpistemicModel {
    let masks: Vec<u64> = sig.players().map(|p| sig.owned_mask(p)).collect();
    valuation_model(sig, &masks)
}

/// IM^s: each player distinguishes what is revealed to it.
pub fn build_observation_model(sig: &Signature, s: &StrategyProfile) -> EpistemicModel {
    valuation_model(sig, s.observation().masks())
}

/// U^s, or U^s_small when `small`.
///
/// The full model has one action per valuation with precondition δ_v. The
/// small model has one action per valuation of the variables revealed to
/// someone other than their owner, with the partial description of that
/// valuation as precondition.
pub fn build_action_model(sig: &Signature, s: &StrategyProfile, small: bool) -> ActionModel {
    let obs = s.observation();
    let scope = if small {
        s.revealed_somewhere().0
    } else {
        sig.full_mask()
    };
    let actions: Vec<u64> = subsets(scope).collect();
    let pre = actions
        .iter()
        .map(|&e| Precondition::describing(e, scope))
        .collect();
    let blocks = obs
        .masks()
        .iter()
        .map(|&m| compact(actions.iter().map(|&e| e & m)))
        .collect();
    ActionModel { pre, blocks }
}

/// The restricted modal product M ⊗ U with worlds ordered by world, then
/// action. Also returns the (world, action) pair behind each world.
pub fn product_with_origins(
    m: &EpistemicModel,
    u: &ActionModel,
) -> (EpistemicModel, Vec<(usize, usize)>) {
    let mut origin = Vec::new();
    for w in 0..m.len() {
        for e in 0..u.len() {
            if u.pre[e].holds(m.labels[w]) {
                origin.push((w, e));
            }
        }
    }
    let labels = origin.iter().map(|&(w, _)| m.labels[w]).collect();
    let players = m.players().min(u.blocks.len());
    let blocks = (0..players)
        .map(|i| {
            compact(
                origin
                    .iter()
                    .map(|&(w, e)| (m.blocks[i][w], u.blocks[i][e])),
            )
        })
        .collect();
    (EpistemicModel { labels, blocks }, origin)
}

pub fn product(m: &EpistemicModel, u: &ActionModel) -> EpistemicModel {
    product_with_origins(m, u).0
}

/// Truth set of `phi` over all worlds.
pub fn truth_set(m: &EpistemicModel, phi: &Formula) -> Vec<bool> {
    use Formula::*;
    let n = m.len();
    match phi {
        Top => vec![true; n],
        Bottom => vec![false; n],
        Atom(v) => m.labels.iter().map(|&l| l & v.bit() != 0).collect(),
        Not(a) => truth_set(m, a).into_iter().map(|x| !x).collect(),
        And(a, b) => zip(truth_set(m, a), truth_set(m, b), |x, y| x && y),
        Or(a, b) => zip(truth_set(m, a), truth_set(m, b), |x, y| x || y),
        Implies(a, b) => zip(truth_set(m, a), truth_set(m, b), |x, y| !x || y),
        Iff(a, b) => zip(truth_set(m, a), truth_set(m, b), |x, y| x == y),
        K(i, a) => box_of(m, *i, &truth_set(m, a)),
        KHat(i, a) => {
            let neg: Vec<bool> = truth_set(m, a).into_iter().map(|x| !x).collect();
            box_of(m, *i, &neg).into_iter().map(|x| !x).collect()
        }
        Kw(i, a) => {
            let t = truth_set(m, a);
            let f: Vec<bool> = t.iter().map(|x| !x).collect();
            zip(box_of(m, *i, &t), box_of(m, *i, &f), |x, y| x || y)
        }
    }
}

fn zip(a: Vec<bool>, b: Vec<bool>, f: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.into_iter().zip(b).map(|(x, y)| f(x, y)).collect()
}

/// Worlds all of whose `i`-alternatives satisfy `t`.
fn box_of(m: &EpistemicModel, i: PlayerId, t: &[bool]) -> Vec<bool> {
    let b = &m.blocks[i.idx()];
    let count = b.iter().copied().max().map_or(0, |x| x + 1);
    let mut all = vec![true; count];
    for (w, &k) in b.iter().enumerate() {
        all[k] &= t[w];
    }
    b.iter().map(|&k| all[k]).collect()
}

/// M, world ⊨ phi.
pub fn kripke_eval(m: &EpistemicModel, world: usize, phi: &Formula) -> Result<bool, Error> {
    if world >= m.len() {
        return Err(Error::WorldAbsent(world));
    }
    Ok(truth_set(m, phi)[world])
}

/// A label- and relation-preserving bijection `f` from the worlds of `a`
/// to those of `b`, if one exists.
pub fn isomorphic(a: &EpistemicModel, b: &EpistemicModel) -> Result<Option<Vec<usize>>, Error> {
    if a.len().max(b.len()) > ISO_LIMIT {
        return Err(Error::Unsupported(format!(
            "isomorphism check limited to {ISO_LIMIT} worlds"
        )));
    }
    if a.len() != b.len() || a.players() != b.players() {
        return Ok(None);
    }
    let sizes = |m: &EpistemicModel| -> Vec<Vec<usize>> {
        m.blocks
            .iter()
            .map(|bl| {
                let count = bl.iter().copied().max().map_or(0, |x| x + 1);
                let mut c = vec![0usize; count];
                for &k in bl {
                    c[k] += 1;
                }
                c
            })
            .collect()
    };
    let (sa, sb) = (sizes(a), sizes(b));
    let signature = |m: &EpistemicModel, s: &[Vec<usize>], w: usize| -> (u64, Vec<usize>) {
        (
            m.labels[w],
            (0..m.players()).map(|i| s[i][m.blocks[i][w]]).collect(),
        )
    };
    let mut by_sig: HashMap<(u64, Vec<usize>), Vec<usize>> = HashMap::new();
    for w in 0..b.len() {
        by_sig.entry(signature(b, &sb, w)).or_default().push(w);
    }
    let candidates: Vec<Vec<usize>> = (0..a.len())
        .map(|w| {
            by_sig
                .get(&signature(a, &sa, w))
                .cloned()
                .unwrap_or_default()
        })
        .collect();
    if candidates.iter().any(|c| c.is_empty()) {
        return Ok(None);
    }

    struct State {
        map: Vec<Option<usize>>,
        used: Vec<bool>,
        fwd: Vec<Vec<Option<usize>>>,
        back: Vec<Vec<Option<usize>>>,
    }
    let players = a.players();
    let block_count =
        |m: &EpistemicModel, i: usize| m.blocks[i].iter().copied().max().map_or(0, |x| x + 1);
    let mut st = State {
        map: vec![None; a.len()],
        used: vec![false; b.len()],
        fwd: (0..players)
            .map(|i| vec![None; block_count(a, i)])
            .collect(),
        back: (0..players)
            .map(|i| vec![None; block_count(b, i)])
            .collect(),
    };

    fn go(
        a: &EpistemicModel,
        b: &EpistemicModel,
        cand: &[Vec<usize>],
        w: usize,
        st: &mut State,
    ) -> bool {
        if w == a.len() {
            return true;
        }
        for &x in &cand[w] {
            if st.used[x] {
                continue;
            }
            let ok = (0..a.players()).all(|i| {
                let (ka, kb) = (a.blocks[i][w], b.blocks[i][x]);
                match (st.fwd[i][ka], st.back[i][kb]) {
                    (Some(y), _) => y == kb,
                    (None, Some(_)) => false,
                    (None, None) => true,
                }
            });
            if !ok {
                continue;
            }
            let fresh: Vec<bool> = (0..a.players())
                .map(|i| st.fwd[i][a.blocks[i][w]].is_none())
                .collect();
            for i in 0..a.players() {
                let (ka, kb) = (a.blocks[i][w], b.blocks[i][x]);
                st.fwd[i][ka] = Some(kb);
                st.back[i][kb] = Some(ka);
            }
            st.used[x] = true;
            st.map[w] = Some(x);
            if go(a, b, cand, w + 1, st) {
                return true;
            }
            st.used[x] = false;
            st.map[w] = None;
            for (i, &f) in fresh.iter().enumerate() {
                if f {
                    let (ka, kb) = (a.blocks[i][w], b.blocks[i][x]);
                    st.fwd[i][ka] = None;
                    st.back[i][kb] = None;
                }
            }
        }
        false
    }

    Ok(go(a, b, &candidates, 0, &mut st)
        .then(|| st.map.iter().map(|m| m.expect("complete")).collect()))
}

/// Three worlds over `p1`, `p2` (owned by players 1 and 2) that are not an
/// observation model: player 1 knows whether `p2` at world 0 while player
/// 2 does not know that. World 0 and 1 satisfy `p2`, world 2 does not.
pub fn non_observation_model() -> (Signature, EpistemicModel) {
    let sig = Signature::one_var_each(2);
    let m = EpistemicModel::new(vec![0b10, 0b10, 0b00], vec![vec![0, 1, 1], vec![0, 0, 1]])
        .expect("consistent sizes");
    (sig, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    #[test]
    fn initial_model_of_two_players() {
        let sig = Signature::one_var_each(2);
        let m = build_initial_model(&sig);
        assert_eq!(m.len(), 4);
        for i in sig.players() {
            let p = m.partition(i);
            assert_eq!(p.len(), 2);
            assert!(p.iter().all(|b| b.len() == 2));
            assert!(m.is_equivalence(i));
        }
    }

    #[test]
    fn empty_signature_has_one_world() {
        let sig = Signature::new::<&str>(1, &[vec![]]).unwrap();
        assert_eq!(build_initial_model(&sig).len(), 1);
    }

    #[test]
    fn reveal_all_gives_identity_relations() {
        let sig = Signature::one_var_each(2);
        let m = build_observation_model(&sig, &StrategyProfile::reveal_all(&sig));
        for i in sig.players() {
            assert_eq!(m.partition(i).len(), 4);
        }
        let u = build_action_model(&sig, &StrategyProfile::reveal_all(&sig), false);
        assert_eq!(u.len(), 4);
        let im = build_initial_model(&sig);
        assert!(isomorphic(&m, &im).unwrap().is_none());
    }

    #[test]
    fn hide_all_small_model_is_trivial() {
        let sig = Signature::one_var_each(3);
        let s = StrategyProfile::hide_all(&sig);
        let u = build_action_model(&sig, &s, true);
        assert_eq!(u.len(), 1);
        assert_eq!(u.pre(0), Precondition::TOP);
        let im = build_initial_model(&sig);
        assert!(isomorphic(&product(&im, &u), &im).unwrap().is_some());
    }

    #[test]
    fn descriptions_hold_at_one_world() {
        let sig = Signature::one_var_each(3);
        let u = build_action_model(&sig, &StrategyProfile::hide_all(&sig), false);
        for e in 0..u.len() {
            let n = (0..sig.num_valuations())
                .filter(|&v| u.pre(e).holds(v))
                .count();
            assert_eq!(n, 1);
        }
    }

    #[test]
    fn self_isomorphism_and_missing_world() {
        let sig = Signature::one_var_each(2);
        let m = build_initial_model(&sig);
        assert_eq!(isomorphic(&m, &m).unwrap(), Some(vec![0, 1, 2, 3]));
        let phi = parse_formula("p1", &sig).unwrap();
        assert!(matches!(
            kripke_eval(&m, 9, &phi),
            Err(Error::WorldAbsent(9))
        ));
    }

    #[test]
    fn knowing_whether_fails_on_arbitrary_models() {
        let (sig, m) = non_observation_model();
        let phi = parse_formula("Kw1 p2 & !K2 Kw1 p2", &sig).unwrap();
        assert!(kripke_eval(&m, 0, &phi).unwrap());
    }
}
