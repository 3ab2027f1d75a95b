//! Human-readable tables and the JSON shape of deviations.

use obsgame::io::profile_to_file;
use obsgame::solver::{Deviation, Replacement};
use obsgame::{FragmentReport, Signature, Strategy, UniformProfile};
use serde_json::{json, Value};

fn reveals(sig: &Signature, s: &Strategy) -> String {
    sig.players()
        .filter(|&j| j != s.owner())
        .map(|j| format!("to {j}: {}", s.revealed(j).display(sig)))
        .collect::<Vec<_>>()
        .join("  ")
}

/// One line per player and information class.
pub fn profile(sig: &Signature, u: &UniformProfile) -> String {
    let mut out = String::new();
    for us in u.strategies() {
        for (c, s) in us.by_class().iter().enumerate() {
            let key = us.class_key(c);
            let observed: Vec<String> = sig
                .owned_vars(us.owner())
                .into_iter()
                .map(|v| format!("{}={}", sig.name(v), u8::from(key.0 & v.bit() != 0)))
                .collect();
            out.push_str(&format!(
                "  player {} [{}]  {}\n",
                us.owner(),
                observed.join(" "),
                reveals(sig, s)
            ));
        }
    }
    out
}

pub fn fragments(r: &FragmentReport) -> String {
    let mut tags = Vec::new();
    for (on, name) in [
        (r.is_boolean, "boolean"),
        (r.is_kw, "kw"),
        (r.is_nnf, "nnf"),
        (r.is_positive, "positive"),
        (r.is_guarded, "guarded"),
    ] {
        if on {
            tags.push(name.to_string());
        }
    }
    if let Some(i) = r.self_positive_for {
        tags.push(format!("self-positive for {i}"));
    }
    if r.trivial_constituents > 0 {
        tags.push(format!("{} trivial constituents", r.trivial_constituents));
    }
    if tags.is_empty() {
        "no special fragment".into()
    } else {
        tags.join(", ")
    }
}

pub fn replacement_text(sig: &Signature, d: &Deviation) -> String {
    match &d.replacement {
        Replacement::Plain(s) => reveals(sig, s),
        Replacement::Uniform(us) => {
            let classes: Vec<String> = us
                .by_class()
                .iter()
                .enumerate()
                .map(|(c, s)| format!("{} => {}", us.class_key(c).display(sig), reveals(sig, s)))
                .collect();
            format!("[{}]", classes.join("; "))
        }
    }
}

pub fn replacement_json(sig: &Signature, u: &UniformProfile, d: &Deviation) -> Value {
    match &d.replacement {
        Replacement::Plain(s) => {
            let map: serde_json::Map<String, Value> = sig
                .players()
                .filter(|&j| j != s.owner())
                .map(|j| (j.0.to_string(), json!(sig.names_of(s.revealed(j).0))))
                .collect();
            json!({ "plain": map })
        }
        Replacement::Uniform(us) => {
            let file = profile_to_file(sig, &u.with(us.clone()));
            json!({ "uniform": file.get(&d.player.0.to_string()) })
        }
    }
}
