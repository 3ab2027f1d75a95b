//! Boolean games and the translations to and from knowing-whether games.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

use crate::budget::Budget;
use crate::error::Error;
use crate::game::{deposit, ObservationGame, Strategy, StrategyProfile, UniformProfile, VarSet};
use crate::logic::{
    eval, is_kw_formula, parse_formula, Formula, Observation, PlayerId, Signature, VarId,
};
use crate::solver::{max_ne_exists_with, MaxSearchOptions};

/// Players, partition and modal-free goals; a strategy of player `i` is
/// a valuation of `P_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanGame {
    sig: Signature,
    goals: Vec<Formula>,
}

impl BooleanGame {
    pub fn new(sig: Signature, goals: Vec<Formula>) -> Result<Self, Error> {
        if let Some(k) = goals.iter().position(|g| !g.is_modal_free()) {
            return Err(Error::Unsupported(format!(
                "goal of player {} is not Boolean",
                k + 1
            )));
        }
        let g = ObservationGame::new(sig, goals)?;
        Ok(BooleanGame {
            sig: g.sig().clone(),
            goals: g.goals().to_vec(),
        })
    }

    pub fn parse<S: AsRef<str>>(sig: Signature, texts: &[S]) -> Result<Self, Error> {
        let goals = texts
            .iter()
            .enumerate()
            .map(|(k, t)| {
                parse_formula(t.as_ref(), &sig).map_err(|source| Error::Goal {
                    player: PlayerId::from_idx(k),
                    source,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        BooleanGame::new(sig, goals)
    }

    pub fn sig(&self) -> &Signature {
        &self.sig
    }

    pub fn n(&self) -> usize {
        self.sig.n()
    }

    pub fn goal(&self, i: PlayerId) -> &Formula {
        &self.goals[i.idx()]
    }

    pub fn goals(&self) -> &[Formula] {
        &self.goals
    }

    pub fn goal_texts(&self) -> Vec<String> {
        self.goals.iter().map(|g| g.to_text(&self.sig)).collect()
    }

    /// u^B_i(v).
    pub fn outcome(&self, v: VarSet, i: PlayerId) -> bool {
        eval(
            &self.sig,
            v.0,
            &Observation::initial(&self.sig),
            self.goal(i),
        )
    }
}

/// Pure Nash equilibria in valuation order.
pub fn bool_ne(b: &BooleanGame, budget: &Budget) -> Result<Vec<VarSet>, Error> {
    let sig = b.sig();
    let mut out = Vec::new();
    for v in 0..sig.num_valuations() {
        if is_bool_ne(b, VarSet(v), budget)? {
            out.push(VarSet(v));
        }
    }
    Ok(out)
}

pub fn is_bool_ne(b: &BooleanGame, v: VarSet, budget: &Budget) -> Result<bool, Error> {
    let sig = b.sig();
    for i in sig.players() {
        budget.spend(1)?;
        if b.outcome(v, i) {
            continue;
        }
        let own = sig.owned_mask(i);
        for local in 0..1u64 << own.count_ones() {
            budget.spend(1)?;
            let w = VarSet(v.0 & !own | deposit(local, own));
            if b.outcome(w, i) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn bool_ne_exists(b: &BooleanGame, budget: &Budget) -> Result<bool, Error> {
    for v in 0..b.sig().num_valuations() {
        if is_bool_ne(b, VarSet(v), budget)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Which players learn `p_i` in the Boolean-to-Kw embedding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// The successor `i+1` (cyclically).
    Next,
    /// The predecessor `i-1` (cyclically).
    Prev,
    /// Everyone.
    Public,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Next, Variant::Prev, Variant::Public];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Next => "next",
            Variant::Prev => "prev",
            Variant::Public => "public",
        }
    }

    /// Readers of a variable owned by `i`; the owner itself only when it
    /// is its own neighbour.
    pub fn readers(self, i: PlayerId, n: usize) -> Vec<PlayerId> {
        let k = i.idx();
        match self {
            Variant::Next => vec![PlayerId::from_idx((k + 1) % n)],
            Variant::Prev => vec![PlayerId::from_idx((k + n - 1) % n)],
            Variant::Public => (0..n).filter(|&j| j != k).map(PlayerId::from_idx).collect(),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "next" => Ok(Variant::Next),
            "prev" => Ok(Variant::Prev),
            "public" => Ok(Variant::Public),
            other => Err(Error::Format(format!("unknown variant {other:?}"))),
        }
    }
}

/// λ(γ): each atom becomes "its readers know whether it holds".
///
/// With one player the successor is the owner itself and the atom
/// becomes the trivial `Kw_1 p`; the public variant drops such
/// conjuncts, leaving `T`.
pub fn lambda(phi: &Formula, sig: &Signature, variant: Variant) -> Formula {
    let n = sig.n();
    phi.substitute(&|p| {
        Formula::conj(
            variant
                .readers(sig.owner(p), n)
                .into_iter()
                .map(|j| Formula::kw_atom(j, p)),
        )
    })
}

/// G_B: same players and variables, goals λ(γ_i).
pub fn bool_to_kw(b: &BooleanGame, variant: Variant) -> ObservationGame {
    let goals = b
        .goals()
        .iter()
        .map(|g| lambda(g, b.sig(), variant))
        .collect();
    ObservationGame::new(b.sig().clone(), goals).expect("translation keeps the signature")
}

/// s^w: every player reveals to its readers exactly its variables true in
/// `w`.
pub fn strategy_lift_variant(b: &BooleanGame, w: VarSet, variant: Variant) -> StrategyProfile {
    let sig = b.sig();
    let strategies = sig
        .players()
        .map(|i| {
            let mut s = Strategy::hide(sig, i);
            let revealed = w.0 & sig.owned_mask(i);
            for j in variant.readers(i, sig.n()).into_iter().filter(|&j| j != i) {
                s.set_raw(j, revealed);
            }
            s
        })
        .collect();
    StrategyProfile::new(sig, strategies).expect("revelations are owned")
}

/// s^w for the successor embedding.
pub fn strategy_lift(b: &BooleanGame, w: VarSet) -> StrategyProfile {
    strategy_lift_variant(b, w, Variant::Next)
}

/// ≡-class key of a globally uniform profile: what each player reveals to
/// its successor.
pub fn chi_key(sig: &Signature, s: &StrategyProfile) -> Vec<VarSet> {
    sig.players()
        .map(|i| s.get(i).revealed(Variant::Next.readers(i, sig.n())[0]))
        .collect()
}

/// χ(w) as its class key.
pub fn chi(b: &BooleanGame, w: VarSet) -> Vec<VarSet> {
    chi_key(b.sig(), &strategy_lift(b, w))
}

/// Inverse of χ on class keys.
pub fn chi_inverse(sig: &Signature, key: &[VarSet]) -> VarSet {
    VarSet(
        key.iter()
            .zip(sig.players())
            .fold(0, |m, (k, i)| m | k.0 & sig.owned_mask(i)),
    )
}

/// The atom `Kw_reader variable` of a knowing-whether game viewed as a
/// variable of the Boolean game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KwAtom {
    /// Name in the Boolean game, `kw_<reader>_<variable>`.
    pub name: String,
    pub reader: PlayerId,
    /// The variable in the knowing-whether game.
    pub variable: VarId,
    pub variable_name: String,
}

/// The Kw atoms of a signature: owner order, then variable order, then
/// reader order.
pub fn kw_atoms(sig: &Signature) -> Vec<KwAtom> {
    let mut out = Vec::new();
    for i in sig.players() {
        for p in sig.owned_vars(i) {
            for j in sig.players().filter(|&j| j != i) {
                out.push(KwAtom {
                    name: format!("kw_{}_{}", j.0, sig.name(p)),
                    reader: j,
                    variable: p,
                    variable_name: sig.name(p).to_string(),
                });
            }
        }
    }
    out
}

/// B_G together with the provenance of its variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KwTranslation {
    pub game: BooleanGame,
    /// One entry per variable of `game`, in variable order.
    pub atoms: Vec<KwAtom>,
}

/// B_G: the same goals with each `Kw_j p_i` read as a variable owned by `i`.
pub fn kw_to_bool(g: &ObservationGame) -> Result<KwTranslation, Error> {
    let sig = g.sig();
    for i in g.players() {
        if !is_kw_formula(g.goal(i)) {
            return Err(Error::NotKw(i));
        }
        if crate::logic::nnf::count_trivial(g.goal(i), sig) > 0 {
            return Err(Error::TrivialConstituent(i));
        }
    }
    let atoms = kw_atoms(sig);
    let owned: Vec<Vec<String>> = sig
        .players()
        .map(|i| {
            atoms
                .iter()
                .filter(|a| sig.owner(a.variable) == i)
                .map(|a| a.name.clone())
                .collect()
        })
        .collect();
    let qsig = Signature::new(sig.n(), &owned)?;
    let goals = g
        .goals()
        .iter()
        .map(|f| replace_kw(f, sig, &qsig))
        .collect();
    Ok(KwTranslation {
        game: BooleanGame::new(qsig, goals)?,
        atoms,
    })
}

fn replace_kw(phi: &Formula, sig: &Signature, qsig: &Signature) -> Formula {
    use Formula::*;
    match phi {
        Kw(j, a) => match a.as_ref() {
            Atom(p) => Atom(
                qsig.lookup(&format!("kw_{}_{}", j.0, sig.name(*p)))
                    .expect("every nontrivial Kw atom has a variable"),
            ),
            _ => unreachable!("Kw goals only contain Kw atoms"),
        },
        Top | Bottom => phi.clone(),
        Atom(_) | K(..) | KHat(..) => unreachable!("Kw goals only contain Kw atoms"),
        Not(a) => Formula::not(replace_kw(a, sig, qsig)),
        And(a, b) => Formula::and(replace_kw(a, sig, qsig), replace_kw(b, sig, qsig)),
        Or(a, b) => Formula::or(replace_kw(a, sig, qsig), replace_kw(b, sig, qsig)),
        Implies(a, b) => Formula::implies(replace_kw(a, sig, qsig), replace_kw(b, sig, qsig)),
        Iff(a, b) => Formula::iff(replace_kw(a, sig, qsig), replace_kw(b, sig, qsig)),
    }
}

/// η(ṡ): `Kw_j p_i` holds iff `p_i ∈ s_i(j)`. Bits follow [`kw_atoms`].
pub fn eta(g: &ObservationGame, u: &UniformProfile) -> Result<VarSet, Error> {
    if !u.is_globally_uniform() {
        return Err(Error::NotGloballyUniform);
    }
    let sig = g.sig();
    let s = u.at(VarSet(0));
    Ok(VarSet(
        kw_atoms(sig)
            .iter()
            .enumerate()
            .filter(|(_, a)| {
                s.get(sig.owner(a.variable)).revealed(a.reader).0 & a.variable.bit() != 0
            })
            .fold(0, |m, (k, _)| m | 1 << k),
    ))
}

/// η⁻¹: the globally uniform profile revealing exactly the true Kw atoms.
pub fn eta_inverse(g: &ObservationGame, w: VarSet) -> UniformProfile {
    let sig = g.sig();
    let mut strategies: Vec<Strategy> = sig.players().map(|i| Strategy::hide(sig, i)).collect();
    for (k, a) in kw_atoms(sig).iter().enumerate() {
        if w.0 >> k & 1 == 1 {
            let s = &mut strategies[sig.owner(a.variable).idx()];
            let cur = s.revealed(a.reader).0;
            s.set_raw(a.reader, cur | a.variable.bit());
        }
    }
    let s = StrategyProfile::new(sig, strategies).expect("revelations are owned");
    UniformProfile::lift_global(sig, &s)
}

/// A distribution over strategy profiles with dyadic probabilities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedProfile {
    /// Profiles in order of first occurrence over valuations.
    pub support: Vec<(StrategyProfile, Ratio<u64>)>,
}

impl MixedProfile {
    pub fn total(&self) -> Ratio<u64> {
        self.support.iter().map(|(_, p)| *p).sum()
    }

    /// Marginal distribution of player `i`'s strategy.
    pub fn marginal(&self, i: PlayerId) -> Vec<(Strategy, Ratio<u64>)> {
        let mut out: Vec<(Strategy, Ratio<u64>)> = Vec::new();
        for (s, p) in &self.support {
            let si = s.get(i);
            match out.iter_mut().find(|(t, _)| t == si) {
                Some((_, q)) => *q += *p,
                None => out.push((si.clone(), *p)),
            }
        }
        out
    }
}

/// π(s) = |{v | 𝐬(v) = s}| / 2^|P|.
pub fn uniform_to_mixed(g: &ObservationGame, u: &UniformProfile) -> MixedProfile {
    let nv = g.sig().num_valuations();
    let mut support: Vec<(StrategyProfile, u64)> = Vec::new();
    for v in 0..nv {
        let s = u.at(VarSet(v));
        match support.iter_mut().find(|(t, _)| *t == s) {
            Some((_, c)) => *c += 1,
            None => support.push((s, 1)),
        }
    }
    MixedProfile {
        support: support
            .into_iter()
            .map(|(s, c)| (s, Ratio::new(c, nv)))
            .collect(),
    }
}

/// Both sides of an existence correspondence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Correspondence {
    /// NE of the Boolean game is nonempty.
    pub boolean: bool,
    /// Maximal NE of the knowing-whether game is nonempty.
    pub kw: bool,
}

impl Correspondence {
    pub fn holds(&self) -> bool {
        self.boolean == self.kw
    }
}

/// Maximal-equilibrium existence decided without restricting to globally
/// uniform profiles, so the check does not presuppose the result it tests.
fn max_nonempty(g: &ObservationGame, budget: &Budget) -> Result<bool, Error> {
    Ok(max_ne_exists_with(g, MaxSearchOptions { kw_shortcut: false }, budget)?.found())
}

/// NE(B) ≠ ∅ against NE_max(λ(B)) ≠ ∅.
pub fn check_bool_to_kw(
    b: &BooleanGame,
    variant: Variant,
    budget: &Budget,
) -> Result<Correspondence, Error> {
    Ok(Correspondence {
        boolean: bool_ne_exists(b, budget)?,
        kw: max_nonempty(&bool_to_kw(b, variant), budget)?,
    })
}

/// NE(B_G) ≠ ∅ against NE_max(G) ≠ ∅.
pub fn check_kw_to_bool(g: &ObservationGame, budget: &Budget) -> Result<Correspondence, Error> {
    let t = kw_to_bool(g)?;
    Ok(Correspondence {
        boolean: bool_ne_exists(&t.game, budget)?,
        kw: max_nonempty(g, budget)?,
    })
}

/// The globally uniform profile of s^w.
pub fn lifted_profile(b: &BooleanGame, w: VarSet) -> UniformProfile {
    UniformProfile::lift_global(b.sig(), &strategy_lift(b, w))
}
