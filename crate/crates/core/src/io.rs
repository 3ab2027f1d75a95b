//! JSON files: games, uniform profiles and solver reports.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::Error;
use crate::game::{
    ObservationGame, OutcomeRelation, Strategy, UniformProfile, UniformStrategy, VarSet,
};
use crate::logic::{PlayerId, Signature};
use crate::translate::{BooleanGame, KwTranslation};

/// On-disk game. Goals missing from `goals` default to `T`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameFile {
    pub players: usize,
    pub variables: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub goals: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LoadedGame {
    Observation(ObservationGame),
    Boolean(BooleanGame),
}

impl LoadedGame {
    pub fn sig(&self) -> &Signature {
        match self {
            LoadedGame::Observation(g) => g.sig(),
            LoadedGame::Boolean(b) => b.sig(),
        }
    }

    pub fn observation(self) -> Result<ObservationGame, Error> {
        match self {
            LoadedGame::Observation(g) => Ok(g),
            LoadedGame::Boolean(_) => Err(Error::Format(
                "expected an observation game, found a Boolean game".into(),
            )),
        }
    }

    pub fn boolean(self) -> Result<BooleanGame, Error> {
        match self {
            LoadedGame::Boolean(b) => Ok(b),
            LoadedGame::Observation(_) => Err(Error::Format(
                "expected a Boolean game (\"kind\": \"boolean\")".into(),
            )),
        }
    }
}

fn player_key(key: &str, n: usize) -> Result<PlayerId, Error> {
    let k: u64 = key
        .parse()
        .map_err(|_| Error::Format(format!("player key {key:?} is not a number")))?;
    if k == 0 || k as usize > n {
        return Err(Error::UnknownPlayer(k));
    }
    Ok(PlayerId(k as u16))
}

impl GameFile {
    pub fn into_game(self) -> Result<LoadedGame, Error> {
        let n = self.players;
        let mut owned: Vec<Vec<String>> = vec![Vec::new(); n];
        for (k, vars) in self.variables {
            owned[player_key(&k, n)?.idx()] = vars;
        }
        let sig = Signature::new(n, &owned)?;
        let mut texts = vec!["T".to_string(); n];
        for (k, g) in self.goals {
            texts[player_key(&k, n)?.idx()] = g;
        }
        match self.kind.as_deref() {
            None | Some("observation") => Ok(LoadedGame::Observation(ObservationGame::parse(
                sig, &texts,
            )?)),
            Some("boolean") => Ok(LoadedGame::Boolean(BooleanGame::parse(sig, &texts)?)),
            Some(other) => Err(Error::Format(format!("unknown game kind {other:?}"))),
        }
    }

    fn from_parts(sig: &Signature, goals: Vec<String>, kind: Option<&str>) -> Self {
        GameFile {
            players: sig.n(),
            variables: sig
                .players()
                .zip(sig.partition_names())
                .map(|(p, v)| (p.0.to_string(), v))
                .collect(),
            goals: sig
                .players()
                .zip(goals)
                .map(|(p, g)| (p.0.to_string(), g))
                .collect(),
            kind: kind.map(str::to_string),
        }
    }

    pub fn from_game(g: &ObservationGame) -> Self {
        GameFile::from_parts(g.sig(), g.goal_texts(), None)
    }

    pub fn from_boolean(b: &BooleanGame) -> Self {
        GameFile::from_parts(b.sig(), b.goal_texts(), Some("boolean"))
    }
}

pub fn parse_game(text: &str) -> Result<LoadedGame, Error> {
    serde_json::from_str::<GameFile>(text)?.into_game()
}

pub fn load_game(path: impl AsRef<Path>) -> Result<LoadedGame, Error> {
    parse_game(&std::fs::read_to_string(path)?)
}

pub fn game_to_json(g: &ObservationGame) -> Value {
    serde_json::to_value(GameFile::from_game(g)).expect("game files serialize")
}

pub fn boolean_game_to_json(b: &BooleanGame) -> Value {
    serde_json::to_value(GameFile::from_boolean(b)).expect("game files serialize")
}

/// One information class of a uniform strategy: the owner's observed
/// values and what is revealed to each other player.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassEntry {
    pub observes: BTreeMap<String, bool>,
    #[serde(default)]
    pub reveal: BTreeMap<String, Vec<String>>,
}

/// Per player key, the class entries of its uniform strategy.
pub type ProfileFile = BTreeMap<String, Vec<ClassEntry>>;

fn strategy_entry(sig: &Signature, s: &Strategy, key: VarSet) -> ClassEntry {
    let i = s.owner();
    ClassEntry {
        observes: sig
            .owned_vars(i)
            .into_iter()
            .map(|v| (sig.name(v).to_string(), key.0 & v.bit() != 0))
            .collect(),
        reveal: sig
            .players()
            .filter(|&j| j != i)
            .map(|j| (j.0.to_string(), sig.names_of(s.revealed(j).0)))
            .collect(),
    }
}

pub fn profile_to_file(sig: &Signature, u: &UniformProfile) -> ProfileFile {
    u.strategies()
        .iter()
        .map(|us| {
            let entries = us
                .by_class()
                .iter()
                .enumerate()
                .map(|(c, s)| strategy_entry(sig, s, us.class_key(c)))
                .collect();
            (us.owner().0.to_string(), entries)
        })
        .collect()
}

pub fn profile_to_json(sig: &Signature, u: &UniformProfile) -> Value {
    serde_json::to_value(profile_to_file(sig, u)).expect("profiles serialize")
}

pub fn profile_from_file(sig: &Signature, file: &ProfileFile) -> Result<UniformProfile, Error> {
    let n = sig.n();
    let mut strategies: Vec<UniformStrategy> = sig
        .players()
        .map(|i| UniformStrategy::global(sig, Strategy::hide(sig, i)))
        .collect();
    for (k, entries) in file {
        let i = player_key(k, n)?;
        let own = sig.owned_mask(i);
        let mut seen = vec![false; strategies[i.idx()].num_classes()];
        for entry in entries {
            let mut key = 0u64;
            for (name, &val) in &entry.observes {
                let v = sig
                    .lookup(name)
                    .ok_or_else(|| Error::UnknownVariable(name.clone()))?;
                if sig.owner(v) != i {
                    return Err(Error::InvalidProfile(format!(
                        "player {i} cannot observe {name} as its own"
                    )));
                }
                if val {
                    key |= v.bit();
                }
            }
            let mut s = Strategy::hide(sig, i);
            for (rk, names) in &entry.reveal {
                let j = player_key(rk, n)?;
                if j == i {
                    return Err(Error::InvalidProfile(format!(
                        "player {i} lists itself as a recipient"
                    )));
                }
                s.set(sig, j, VarSet(sig.mask_of(names)?))?;
            }
            let us = &mut strategies[i.idx()];
            let c = us.class_of(VarSet(key & own));
            if std::mem::replace(&mut seen[c], true) {
                return Err(Error::InvalidProfile(format!(
                    "player {i} lists the class {:?} twice",
                    sig.names_of(key)
                )));
            }
            us.set_class(c, s);
        }
    }
    UniformProfile::new(sig, strategies)
}

/// One profile (an object) or several (an array).
pub fn parse_profiles(sig: &Signature, text: &str) -> Result<Vec<UniformProfile>, Error> {
    let value: Value = serde_json::from_str(text)?;
    let files: Vec<ProfileFile> = match value {
        Value::Array(items) => items
            .into_iter()
            .map(serde_json::from_value)
            .collect::<Result<_, _>>()?,
        other => vec![serde_json::from_value(other)?],
    };
    files.iter().map(|f| profile_from_file(sig, f)).collect()
}

pub fn load_profiles(
    sig: &Signature,
    path: impl AsRef<Path>,
) -> Result<Vec<UniformProfile>, Error> {
    parse_profiles(sig, &std::fs::read_to_string(path)?)
}

/// Three-valued search answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportResult {
    Empty,
    Witness,
    BudgetExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportStats {
    pub profiles_checked: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverReport {
    pub relation: OutcomeRelation,
    pub result: ReportResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<ProfileFile>,
    pub stats: ReportStats,
}

/// `{ "kw_2_p1": { "reader": 2, "variable": "p1" }, ... }`.
pub fn provenance_json(t: &KwTranslation) -> Value {
    Value::Object(
        t.atoms
            .iter()
            .map(|a| {
                (
                    a.name.clone(),
                    json!({ "reader": a.reader.0, "variable": a.variable_name }),
                )
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::StrategyProfile;

    const PENNIES: &str = r#"{
        "players": 2,
        "variables": { "1": ["p1"], "2": ["p2"] },
        "goals": { "1": "Kw1 p2 <-> Kw2 p1", "2": "!(Kw1 p2 <-> Kw2 p1)" }
    }"#;

    #[test]
    fn game_round_trip() {
        let g = parse_game(PENNIES).unwrap().observation().unwrap();
        let again = parse_game(&game_to_json(&g).to_string())
            .unwrap()
            .observation()
            .unwrap();
        assert_eq!(g, again);
    }

    #[test]
    fn missing_goal_defaults_to_top() {
        let g = parse_game(r#"{"players": 2, "variables": {"1": ["p"], "2": []}}"#)
            .unwrap()
            .observation()
            .unwrap();
        assert_eq!(g.goal_texts(), ["T", "T"]);
    }

    #[test]
    fn boolean_kind() {
        let b = parse_game(
            r#"{"players": 1, "variables": {"1": ["p"]}, "goals": {"1": "p"}, "kind": "boolean"}"#,
        )
        .unwrap()
        .boolean()
        .unwrap();
        let again = parse_game(&boolean_game_to_json(&b).to_string())
            .unwrap()
            .boolean()
            .unwrap();
        assert_eq!(b, again);
        assert!(parse_game(r#"{"players": 1, "variables": {"1": ["p"]}, "goals": {"1": "K1 p"}, "kind": "boolean"}"#).is_err());
    }

    #[test]
    fn profile_round_trip_and_defaults() {
        let g = parse_game(PENNIES).unwrap().observation().unwrap();
        let sig = g.sig();
        let u = UniformProfile::lift_global(sig, &StrategyProfile::reveal_all(sig));
        let text = profile_to_json(sig, &u).to_string();
        assert_eq!(parse_profiles(sig, &text).unwrap(), vec![u]);
        let partial = r#"{"1": [{"observes": {"p1": true}, "reveal": {"2": ["p1"]}}]}"#;
        let v = parse_profiles(sig, partial).unwrap().remove(0);
        assert_eq!(
            v.get(PlayerId(1)).at(VarSet(0b01)).revealed(PlayerId(2)),
            VarSet(0b01)
        );
        assert_eq!(
            v.get(PlayerId(1)).at(VarSet(0)).revealed(PlayerId(2)),
            VarSet(0)
        );
        assert!(
            parse_profiles(sig, r#"{"1": [{"observes": {}, "reveal": {"2": ["p2"]}}]}"#).is_err()
        );
    }
}
