//! Python bindings. Games and profiles cross the boundary as JSON text in
//! the same formats the command-line tool reads and writes.

// The pyfunction macro expands to a conversion clippy considers redundant.
#![allow(clippy::useless_conversion)]

use obsgame::game::OutcomeRelation;
use obsgame::io::{self, profile_to_json};
use obsgame::logic::{eval, parse_formula};
use obsgame::solver::{self, Mode};
use obsgame::translate::{self, Variant};
use obsgame::{selftest, Budget, Error, ObservationGame, UniformProfile, VarSet};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use serde_json::json;

create_exception!(
    _native,
    BudgetExceeded,
    PyException,
    "The work budget ran out before an answer."
);

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Budget(b) => BudgetExceeded::new_err(b.to_string()),
        e => PyValueError::new_err(e.to_string()),
    }
}

fn game(text: &str) -> PyResult<ObservationGame> {
    io::parse_game(text)
        .and_then(|g| g.observation())
        .map_err(py_err)
}

fn relation(name: &str) -> PyResult<OutcomeRelation> {
    name.parse().map_err(py_err)
}

fn one_profile(g: &ObservationGame, text: &str) -> PyResult<UniformProfile> {
    let mut all = io::parse_profiles(g.sig(), text).map_err(py_err)?;
    if all.len() != 1 {
        return Err(PyValueError::new_err(format!(
            "expected one profile, found {}",
            all.len()
        )));
    }
    Ok(all.remove(0))
}

fn budget(limit: Option<u64>) -> Budget {
    Budget::new(limit.unwrap_or(obsgame::budget::DEFAULT_BUDGET))
}

/// Normalized JSON of a game file; raises ValueError when it is malformed.
#[pyfunction]
fn normalize_game(text: &str) -> PyResult<String> {
    let loaded = io::parse_game(text).map_err(py_err)?;
    let v = match loaded {
        io::LoadedGame::Observation(g) => io::game_to_json(&g),
        io::LoadedGame::Boolean(b) => io::boolean_game_to_json(&b),
    };
    Ok(v.to_string())
}

/// Truth of `formula` at the valuation given by its true variables, after
/// the revelations of `profile` (everyone hides when omitted).
#[pyfunction]
#[pyo3(signature = (game_json, formula, true_vars, profile_json=None))]
fn evaluate(
    game_json: &str,
    formula: &str,
    true_vars: Vec<String>,
    profile_json: Option<&str>,
) -> PyResult<bool> {
    let g = game(game_json)?;
    let sig = g.sig();
    let phi = parse_formula(formula, sig).map_err(|e| py_err(e.into()))?;
    let v = VarSet(sig.mask_of(&true_vars).map_err(py_err)?);
    let u = match profile_json {
        Some(t) => one_profile(&g, t)?,
        None => UniformProfile::lift_global(sig, &obsgame::StrategyProfile::hide_all(sig)),
    };
    Ok(eval(sig, v.0, &u.at(v).observation(), &phi))
}

/// Goal type and fragment flags per player, as JSON.
#[pyfunction]
fn classify(game_json: &str) -> PyResult<String> {
    let g = game(game_json)?;
    let rows: Vec<_> = g
        .players()
        .map(|i| json!({ "player": i.0, "type": g.goal_type(i).to_string(), "fragments": g.classify(i) }))
        .collect();
    Ok(serde_json::Value::Array(rows).to_string())
}

/// Whether the uniform profile is an equilibrium under `relation`.
#[pyfunction]
fn verify(game_json: &str, profile_json: &str, relation_name: &str) -> PyResult<bool> {
    let g = game(game_json)?;
    let u = one_profile(&g, profile_json)?;
    Ok(solver::ne_verify(&g, relation(relation_name)?, &u)
        .map_err(py_err)?
        .is_ne)
}

/// A witness equilibrium as profile JSON, or None when there is none.
#[pyfunction]
#[pyo3(signature = (game_json, relation_name, budget_limit=None))]
fn exists(
    game_json: &str,
    relation_name: &str,
    budget_limit: Option<u64>,
) -> PyResult<Option<String>> {
    let g = game(game_json)?;
    let b = budget(budget_limit);
    let report = match relation(relation_name)? {
        OutcomeRelation::Max => solver::max_ne_exists(&g, &b),
        rel => solver::ne_exists(&g, rel, &b),
    }
    .map_err(py_err)?;
    Ok(report
        .witness()
        .map(|u| profile_to_json(g.sig(), u).to_string()))
}

/// Up to `limit` equilibria in enumeration order.
#[pyfunction]
#[pyo3(signature = (game_json, relation_name, limit=100, budget_limit=None))]
fn enumerate(
    game_json: &str,
    relation_name: &str,
    limit: usize,
    budget_limit: Option<u64>,
) -> PyResult<Vec<String>> {
    let g = game(game_json)?;
    let all = solver::enumerate_ne(&g, relation(relation_name)?, limit, &budget(budget_limit))
        .map_err(py_err)?;
    Ok(all
        .iter()
        .map(|u| profile_to_json(g.sig(), u).to_string())
        .collect())
}

/// Profile built by one of `alg1-pess`, `alg1-opt`, `alg2`, `type2`,
/// `two-player`.
#[pyfunction]
#[pyo3(signature = (game_json, algorithm, budget_limit=None))]
fn construct(game_json: &str, algorithm: &str, budget_limit: Option<u64>) -> PyResult<String> {
    let g = game(game_json)?;
    let b = budget(budget_limit);
    let u = match algorithm {
        "alg1-pess" => solver::algorithm1(&g, Mode::Pess, &b),
        "alg1-opt" => solver::algorithm1(&g, Mode::Opt, &b),
        "alg2" => solver::algorithm2(&g, &b),
        "type2" => solver::construct_type2_max_ne(&g, &b),
        "two-player" => solver::two_player_kw_pess_ne(&g, &b),
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown algorithm {other:?}"
            )))
        }
    }
    .map_err(py_err)?;
    Ok(profile_to_json(g.sig(), &u).to_string())
}

/// `(game_json, provenance_json)` for direction `bool2kw` or `kw2bool`.
#[pyfunction]
#[pyo3(signature = (game_json, direction, variant="next"))]
fn translate_game(game_json: &str, direction: &str, variant: &str) -> PyResult<(String, String)> {
    let loaded = io::parse_game(game_json).map_err(py_err)?;
    match direction {
        "bool2kw" => {
            let variant: Variant = variant.parse().map_err(py_err)?;
            let b = loaded.boolean().map_err(py_err)?;
            let sig = b.sig();
            let prov: serde_json::Map<String, serde_json::Value> = sig
                .vars()
                .map(|p| {
                    let readers: Vec<u16> = variant
                        .readers(sig.owner(p), sig.n())
                        .iter()
                        .map(|j| j.0)
                        .collect();
                    (
                        sig.name(p).to_string(),
                        json!({ "variant": variant.name(), "readers": readers }),
                    )
                })
                .collect();
            Ok((
                io::game_to_json(&translate::bool_to_kw(&b, variant)).to_string(),
                serde_json::Value::Object(prov).to_string(),
            ))
        }
        "kw2bool" => {
            let t =
                translate::kw_to_bool(&loaded.observation().map_err(py_err)?).map_err(py_err)?;
            Ok((
                io::boolean_game_to_json(&t.game).to_string(),
                io::provenance_json(&t).to_string(),
            ))
        }
        other => Err(PyValueError::new_err(format!(
            "unknown direction {other:?}"
        ))),
    }
}

/// `(id, passed, line)` per criterion matching `filter`.
#[pyfunction]
#[pyo3(signature = (filter=None, seed=0))]
fn run_selftest(py: Python<'_>, filter: Option<String>, seed: u64) -> Vec<(u8, bool, String)> {
    let opts = selftest::Options {
        seed,
        filter,
        ..selftest::Options::default()
    };
    py.allow_threads(|| selftest::run(&opts))
        .iter()
        .map(|r| (r.id, r.passed, selftest::format_line(r)))
        .collect()
}

#[pymodule]
fn _native(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("BudgetExceeded", m.py().get_type_bound::<BudgetExceeded>())?;
    m.add_function(wrap_pyfunction!(normalize_game, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(exists, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate, m)?)?;
    m.add_function(wrap_pyfunction!(construct, m)?)?;
    m.add_function(wrap_pyfunction!(translate_game, m)?)?;
    m.add_function(wrap_pyfunction!(run_selftest, m)?)?;
    Ok(())
}
