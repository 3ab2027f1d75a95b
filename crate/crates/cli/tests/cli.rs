use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use obsgame::io::{load_game, parse_profiles, profile_to_json};
use obsgame::translate::{bool_to_kw, Variant};
use obsgame::{selftest, Budget, OutcomeRelation};
use serde_json::Value;

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/examples")
        .join(name)
}

fn obsgame(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_obsgame"))
        .args(args)
        .env_remove("OBSGAME_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn pennies_pessimist_witness_is_the_switch_profile() {
    let game = corpus("pennies.json");
    let o = obsgame(&[
        "exists",
        "--game",
        path(&game),
        "--relation",
        "pess",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let report = json(&o);
    assert_eq!(report["result"], "witness");
    let g = load_game(&game).unwrap().observation().unwrap();
    assert_eq!(
        report["witness"],
        profile_to_json(g.sig(), &selftest::switch_profile(g.sig()))
    );

    let o = obsgame(&[
        "exists",
        "--game",
        path(&game),
        "--relation",
        "max",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["result"], "empty");
}

#[test]
fn tony_maria_profiles_round_trip_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let game = corpus("tony_maria.json");
    let o = obsgame(&[
        "enumerate",
        "--game",
        path(&game),
        "--relation",
        "pess",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let file = dir.path().join("all16.json");
    std::fs::write(&file, &o.stdout).unwrap();

    let g = load_game(&game).unwrap().observation().unwrap();
    let reloaded = parse_profiles(g.sig(), &stdout(&o)).unwrap();
    assert_eq!(
        reloaded,
        obsgame::solver::enumerate_ne(&g, OutcomeRelation::Pess, 100, &Budget::unlimited())
            .unwrap()
    );
    assert_eq!(reloaded.len(), 16);

    // Two of the sixteen are maximal equilibria, so the batch is not all-true.
    let o = obsgame(&[
        "verify",
        "--game",
        path(&game),
        "--relation",
        "max",
        "--profile",
        path(&file),
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let rows = json(&o)["profiles"].as_array().unwrap().clone();
    assert_eq!(rows.len(), 16);
    assert_eq!(rows.iter().filter(|r| r["is_ne"] == true).count(), 2);
    assert!(rows
        .iter()
        .filter(|r| r["is_ne"] == false)
        .all(|r| r["deviation"].is_object()));

    let o = obsgame(&[
        "verify",
        "--game",
        path(&game),
        "--relation",
        "pess",
        "--profile",
        path(&file),
    ]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn translations_write_reloadable_files() {
    let dir = tempfile::tempdir().unwrap();
    let b = corpus("ex10_boolean.json");
    let gb = dir.path().join("g_b.json");
    let prov = dir.path().join("g_b.provenance.json");
    let o = obsgame(&[
        "translate",
        "--direction",
        "bool2kw",
        "--variant",
        "next",
        "--game",
        path(&b),
        "--out",
        path(&gb),
        "--provenance",
        path(&prov),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let loaded = load_game(&gb).unwrap().observation().unwrap();
    let want = bool_to_kw(&load_game(&b).unwrap().boolean().unwrap(), Variant::Next);
    assert_eq!(loaded, want);
    assert_eq!(loaded.goal_texts()[0], "Kw2 p1 <-> Kw1 p3");
    let p: Value = serde_json::from_str(&std::fs::read_to_string(&prov).unwrap()).unwrap();
    assert_eq!(p["p1"]["readers"], serde_json::json!([2]));

    let back = dir.path().join("b_gb.json");
    let prov2 = dir.path().join("b_gb.provenance.json");
    let o = obsgame(&[
        "translate",
        "--direction",
        "kw2bool",
        "--game",
        path(&gb),
        "--out",
        path(&back),
        "--provenance",
        path(&prov2),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let bgb = load_game(&back).unwrap().boolean().unwrap();
    assert_eq!(bgb.sig().num_vars(), 8);
    let p: Value = serde_json::from_str(&std::fs::read_to_string(&prov2).unwrap()).unwrap();
    assert_eq!(
        p["kw_2_p1"],
        serde_json::json!({ "reader": 2, "variable": "p1" })
    );
    assert_eq!(p.as_object().unwrap().len(), 8);

    // A Boolean game is not a valid kw2bool input.
    let o = obsgame(&["translate", "--direction", "kw2bool", "--game", path(&b)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn exit_codes() {
    let pennies = corpus("pennies.json");
    let p = path(&pennies);
    let eval = |f: &str, v: &str| {
        obsgame(&["eval", "--game", p, "--formula", f, "--valuation", v])
            .status
            .code()
    };
    assert_eq!(eval("Kw1 p1", "p1"), Some(0));
    assert_eq!(eval("Kw1 p2", "p1"), Some(1));
    assert_eq!(eval("Kw1 (p2", "p1"), Some(2));
    assert_eq!(eval("p1", "zz"), Some(2));
    assert_eq!(
        obsgame(&["exists", "--game", p, "--relation", "best"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(obsgame(&["frobnicate"]).status.code(), Some(2));

    let missing = obsgame(&["classify", "--game", "/no/such/game.json"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("/no/such/game.json"));

    let eight = corpus("eightplayer.json");
    let o = obsgame(&[
        "exists",
        "--game",
        path(&eight),
        "--relation",
        "pess",
        "--budget",
        "100",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(json(&o)["result"], "budget_exceeded");
    let o = Command::new(env!("CARGO_BIN_EXE_obsgame"))
        .args(["exists", "--game", path(&eight), "--relation", "pess"])
        .env("OBSGAME_BUDGET", "100")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn constructions_are_verified() {
    let pennies = corpus("pennies.json");
    let o = obsgame(&[
        "construct",
        "--game",
        path(&pennies),
        "--algorithm",
        "two-player",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["verified"], true);
    let o = obsgame(&["construct", "--game", path(&pennies), "--algorithm", "alg2"]);
    // Pennies has no maximal equilibrium, so the construction must refuse.
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn classify_reports_types() {
    let o = obsgame(&["classify", "--game", path(&corpus("ex8.json")), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = json(&o);
    assert_eq!(rows[0]["type"], "{+,c+,c-}");
    assert_eq!(rows[0]["fragments"]["is_kw"], true);
    let o = obsgame(&[
        "classify",
        "--game",
        path(&corpus("pennies.json")),
        "--formula",
        "K1 p2",
        "--player",
        "1",
    ]);
    assert!(stdout(&o).contains("type {+}"));
}

#[test]
fn output_is_deterministic() {
    let game = corpus("ex9.json");
    let args = [
        "kripke-check",
        "--game",
        path(&game),
        "--samples",
        "4",
        "--seed",
        "11",
        "--json",
    ];
    let a = obsgame(&args);
    let b = obsgame(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["agree"], true);
    let other = obsgame(&[
        "kripke-check",
        "--game",
        path(&game),
        "--samples",
        "4",
        "--seed",
        "12",
        "--json",
        "--dump",
    ]);
    assert!(json(&other)["models"].is_array());

    let tm = corpus("tony_maria.json");
    let e = ["enumerate", "--game", path(&tm), "--relation", "opt"];
    assert_eq!(obsgame(&e).stdout, obsgame(&e).stdout);
}

#[test]
fn selftest_filter_and_corpus_override() {
    let o = obsgame(&["selftest", "--filter", "kripke"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 1);
    assert!(out.starts_with("C9 PASS"));

    let o = obsgame(&["selftest", "--filter", "nothing-matches-this"]);
    assert_eq!(o.status.code(), Some(2));

    // Corrupt one goal of the eight-player file.
    let dir = tempfile::tempdir().unwrap();
    for name in selftest::corpus_names() {
        std::fs::write(dir.path().join(name), selftest::corpus_text(name).unwrap()).unwrap();
    }
    let file = dir.path().join("eightplayer.json");
    let text = std::fs::read_to_string(&file).unwrap();
    let mut v: Value = serde_json::from_str(&text).unwrap();
    v["goals"]["2"] = Value::String("Kw8 (p2".into());
    std::fs::write(&file, v.to_string()).unwrap();
    let o = obsgame(&[
        "selftest",
        "--filter",
        "c3",
        "--corpus-dir",
        path(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.starts_with("C3 FAIL"), "{out}");
    assert!(out.contains("eightplayer.json"), "{out}");
}

#[test]
fn kw_filter_selects_the_kw_criteria() {
    let ids: Vec<u8> = selftest::CRITERIA
        .iter()
        .filter(|c| c.matches("kw"))
        .map(|c| c.id)
        .collect();
    assert_eq!(ids, [2, 3, 4, 5, 6, 7, 8]);
    let o = obsgame(&["selftest", "--filter", "kw", "--json"]);
    let rows = json(&o);
    let ran: Vec<u64> = rows
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["id"].as_u64().unwrap())
        .collect();
    assert_eq!(ran, [2, 3, 4, 5, 6, 7, 8]);
}
