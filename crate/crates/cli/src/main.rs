//! `obsgame`: load observation and Boolean games, decide equilibria,
//! translate between game classes and cross-check the semantics.
//!
//! Exit codes: 0 success, 1 an empty or false answer, 2 usage or format
//! errors, 3 budget exhausted.

mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use obsgame::budget::DEFAULT_BUDGET;
use obsgame::game::OutcomeRelation;
use obsgame::io::{
    boolean_game_to_json, game_to_json, load_game, load_profiles, profile_to_file, provenance_json,
    ReportResult, ReportStats, SolverReport,
};
use obsgame::logic::{eval, parse_formula, Observation};
use obsgame::solver::{self, Mode};
use obsgame::translate::{self, Variant};
use obsgame::{
    kripke, selftest, Budget, Error, ObservationGame, PlayerId, Signature, UniformProfile, VarSet,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "obsgame",
    version,
    about = "Equilibria and translations for Boolean observation games"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Emit a JSON report instead of a table.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Work limit, in verifier calls or search nodes.
    #[arg(long, global = true, env = "OBSGAME_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Cap on worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a formula after the revelations of a profile.
    Eval {
        #[arg(long)]
        game: PathBuf,
        #[arg(long)]
        formula: String,
        /// Uniform profile file; everyone hides when absent.
        #[arg(long)]
        profile: Option<PathBuf>,
        /// Comma-separated true variables; every valuation when absent.
        #[arg(long)]
        valuation: Option<String>,
    },
    /// Report fragments and goal types.
    Classify {
        #[arg(long)]
        game: PathBuf,
        /// Classify this formula instead of the goals.
        #[arg(long, requires = "player")]
        formula: Option<String>,
        /// Owner the formula is classified for.
        #[arg(long)]
        player: Option<u16>,
    },
    /// Check whether profiles are equilibria.
    Verify {
        #[arg(long)]
        game: PathBuf,
        /// One profile or a JSON array of them.
        #[arg(long)]
        profile: PathBuf,
        #[arg(long)]
        relation: OutcomeRelation,
    },
    /// Decide whether a uniform equilibrium exists.
    Exists {
        #[arg(long)]
        game: PathBuf,
        #[arg(long)]
        relation: OutcomeRelation,
        /// Search only strategies that reveal atoms some goal mentions.
        #[arg(long)]
        reduced: bool,
    },
    /// List uniform equilibria in enumeration order.
    Enumerate {
        #[arg(long)]
        game: PathBuf,
        #[arg(long)]
        relation: OutcomeRelation,
        #[arg(long, default_value_t = 100)]
        limit: usize,
    },
    /// Build an equilibrium with one of the constructive algorithms.
    Construct {
        #[arg(long)]
        game: PathBuf,
        #[arg(long, value_enum)]
        algorithm: Algorithm,
    },
    /// Translate between Boolean games and knowing-whether games.
    Translate {
        #[arg(long)]
        game: PathBuf,
        #[arg(long, value_enum)]
        direction: Direction,
        #[arg(long, default_value = "next")]
        variant: Variant,
        /// Write the translated game here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the provenance map here.
        #[arg(long)]
        provenance: Option<PathBuf>,
    },
    /// Compare the game semantics with explicit Kripke models.
    KripkeCheck {
        #[arg(long)]
        game: PathBuf,
        /// Profiles to check; otherwise hide-all, reveal-all and random ones.
        #[arg(long)]
        profile: Option<PathBuf>,
        /// Seeded random profiles checked when no profile file is given.
        #[arg(long, default_value_t = 8)]
        samples: usize,
        /// Formula evaluated both ways at every world; the goals when absent.
        #[arg(long)]
        formula: Option<String>,
        /// Include the observation models in the JSON report.
        #[arg(long)]
        dump: bool,
    },
    /// Run the bundled regression criteria.
    Selftest {
        /// Criterion id (`c3`), tag (`kw`) or part of a name.
        #[arg(long)]
        filter: Option<String>,
        /// Directory overriding the bundled example files.
        #[arg(long)]
        corpus_dir: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Algorithm {
    /// Pessimist equilibrium of a guarded game.
    Alg1Pess,
    /// Optimist equilibrium of a guarded game.
    Alg1Opt,
    /// Maximal equilibrium of a knowing-whether game.
    Alg2,
    /// Maximal equilibrium of a guarded game with types of size at most 2.
    Type2,
    /// Pessimist equilibrium of a two-player knowing-whether game.
    TwoPlayer,
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    Bool2kw,
    Kw2bool,
}

/// A command's answer: what to print and the exit code.
struct Answer {
    code: u8,
    json: Value,
    text: String,
}

fn code(positive: bool) -> u8 {
    if positive {
        0
    } else {
        1
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(n) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            log::warn!("thread pool already configured: {e}");
        }
    }
    let start = Instant::now();
    let result = run(&cli);
    log::info!("finished in {} ms", start.elapsed().as_millis());
    match result {
        Ok(a) => {
            if cli.global.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&a.json).expect("reports serialize")
                );
            } else {
                print!("{}", a.text);
            }
            ExitCode::from(a.code)
        }
        Err(e) => {
            eprintln!("obsgame: {e}");
            ExitCode::from(match e {
                Error::Budget(_) => 3,
                _ => 2,
            })
        }
    }
}

fn run(cli: &Cli) -> Result<Answer, Error> {
    let g = &cli.global;
    let budget = Budget::new(g.budget);
    match &cli.command {
        Command::Eval {
            game,
            formula,
            profile,
            valuation,
        } => cmd_eval(
            &observation(game)?,
            formula,
            profile.as_deref(),
            valuation.as_deref(),
        ),
        Command::Classify {
            game,
            formula,
            player,
        } => cmd_classify(&observation(game)?, formula.as_deref(), *player),
        Command::Verify {
            game,
            profile,
            relation,
        } => cmd_verify(&observation(game)?, profile, *relation),
        Command::Exists {
            game,
            relation,
            reduced,
        } => cmd_exists(&observation(game)?, *relation, *reduced, &budget),
        Command::Enumerate {
            game,
            relation,
            limit,
        } => {
            let g = observation(game)?;
            let all = solver::enumerate_ne(&g, *relation, *limit, &budget)?;
            let files: Vec<Value> = all
                .iter()
                .map(|u| obsgame::io::profile_to_json(g.sig(), u))
                .collect();
            let mut text = format!("{} {relation} equilibria\n", all.len());
            for (k, u) in all.iter().enumerate() {
                text.push_str(&format!("#{}\n{}", k + 1, render::profile(g.sig(), u)));
            }
            Ok(Answer {
                code: code(!all.is_empty()),
                json: Value::Array(files),
                text,
            })
        }
        Command::Construct { game, algorithm } => {
            cmd_construct(&observation(game)?, *algorithm, &budget)
        }
        Command::Translate {
            game,
            direction,
            variant,
            out,
            provenance,
        } => cmd_translate(
            game,
            *direction,
            *variant,
            out.as_deref(),
            provenance.as_deref(),
        ),
        Command::KripkeCheck {
            game,
            profile,
            samples,
            formula,
            dump,
        } => {
            let g = observation(game)?;
            let profiles = match profile {
                Some(p) => with_path(p, load_profiles(g.sig(), p))?,
                None => sample_profiles(g.sig(), *samples, cli.global.seed),
            };
            cmd_kripke(&g, &profiles, formula.as_deref(), *dump)
        }
        Command::Selftest { filter, corpus_dir } => {
            let opts = selftest::Options {
                seed: g.seed,
                filter: filter.clone(),
                corpus_dir: corpus_dir.clone(),
                budget: g.budget.saturating_mul(10),
            };
            let reports = selftest::run(&opts);
            if reports.is_empty() {
                return Err(Error::Format(format!(
                    "no criterion matches {:?}",
                    filter.as_deref().unwrap_or("")
                )));
            }
            let text: String = reports
                .iter()
                .map(|r| selftest::format_line(r) + "\n")
                .collect();
            let positive = reports.iter().all(|r| r.passed);
            // Timings vary between runs; the JSON report leaves them out.
            let json = Value::Array(
                reports
                    .iter()
                    .map(|r| json!({ "id": r.id, "name": r.name, "tags": r.tags, "passed": r.passed, "detail": r.detail }))
                    .collect(),
            );
            Ok(Answer {
                code: code(positive),
                json,
                text,
            })
        }
    }
}

fn with_path<T>(path: &Path, r: Result<T, Error>) -> Result<T, Error> {
    r.map_err(|e| match e {
        Error::Budget(_) => e,
        e => Error::Format(format!("{}: {e}", path.display())),
    })
}

fn observation(path: &Path) -> Result<ObservationGame, Error> {
    with_path(path, load_game(path).and_then(|g| g.observation()))
}

fn single_profile(g: &ObservationGame, path: Option<&Path>) -> Result<UniformProfile, Error> {
    let Some(path) = path else {
        return Ok(UniformProfile::lift_global(
            g.sig(),
            &obsgame::StrategyProfile::hide_all(g.sig()),
        ));
    };
    let mut all = with_path(path, load_profiles(g.sig(), path))?;
    if all.len() != 1 {
        return Err(Error::Format(format!(
            "expected one profile, found {}",
            all.len()
        )));
    }
    Ok(all.remove(0))
}

fn cmd_eval(
    g: &ObservationGame,
    text: &str,
    profile: Option<&Path>,
    valuation: Option<&str>,
) -> Result<Answer, Error> {
    let sig = g.sig();
    let phi = parse_formula(text, sig)?;
    let u = single_profile(g, profile)?;
    let valuations: Vec<VarSet> = match valuation {
        Some(list) => {
            let names: Vec<&str> = list
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .collect();
            vec![VarSet(sig.mask_of(&names)?)]
        }
        None => (0..sig.num_valuations()).map(VarSet).collect(),
    };
    let rows: Vec<(VarSet, bool)> = valuations
        .iter()
        .map(|&v| (v, eval(sig, v.0, &u.at(v).observation(), &phi)))
        .collect();
    let positive = rows.iter().all(|&(_, b)| b);
    let mut text = String::new();
    for (v, b) in &rows {
        text.push_str(&format!("{:<24} {}\n", v.display(sig), b));
    }
    let json = json!({
        "formula": phi.to_text(sig),
        "results": rows.iter().map(|(v, b)| json!({ "valuation": sig.names_of(v.0), "value": b })).collect::<Vec<_>>(),
    });
    Ok(Answer {
        code: code(positive),
        json,
        text,
    })
}

fn cmd_classify(
    g: &ObservationGame,
    formula: Option<&str>,
    player: Option<u16>,
) -> Result<Answer, Error> {
    let sig = g.sig();
    let items: Vec<(PlayerId, obsgame::Formula)> = match (formula, player) {
        (Some(text), Some(p)) => {
            let i = PlayerId(p);
            if !sig.has_player(i) {
                return Err(Error::UnknownPlayer(p as u64));
            }
            vec![(i, parse_formula(text, sig)?)]
        }
        _ => g.players().map(|i| (i, g.goal(i).clone())).collect(),
    };
    let mut text = String::new();
    let mut rows = Vec::new();
    for (i, phi) in &items {
        let report = obsgame::logic::classify(phi, *i, sig);
        let ty = obsgame::logic::goal_type_of(phi, *i, sig);
        text.push_str(&format!(
            "player {i}: {}\n  type {ty}; {}\n",
            phi.to_text(sig),
            render::fragments(&report)
        ));
        rows.push(json!({ "player": i.0, "formula": phi.to_text(sig), "type": ty.to_string(), "fragments": report }));
    }
    Ok(Answer {
        code: 0,
        json: Value::Array(rows),
        text,
    })
}

fn cmd_verify(g: &ObservationGame, path: &Path, rel: OutcomeRelation) -> Result<Answer, Error> {
    let sig = g.sig();
    let profiles = with_path(path, load_profiles(sig, path))?;
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut positive = true;
    for (k, u) in profiles.iter().enumerate() {
        let r = solver::ne_verify(g, rel, u)?;
        positive &= r.is_ne;
        text.push_str(&format!("#{} is_ne={}", k + 1, r.is_ne));
        let deviation = r.witness.as_ref().map(|d| {
            text.push_str(&format!(
                " (player {} improves at {} by playing {})",
                d.player,
                d.valuation.display(sig),
                render::replacement_text(sig, d)
            ));
            json!({
                "player": d.player.0,
                "valuation": sig.names_of(d.valuation.0),
                "replacement": render::replacement_json(sig, u, d),
            })
        });
        text.push('\n');
        rows.push(json!({ "index": k + 1, "is_ne": r.is_ne, "deviation": deviation }));
    }
    Ok(Answer {
        code: code(positive),
        json: json!({ "relation": rel, "profiles": rows }),
        text,
    })
}

fn cmd_exists(
    g: &ObservationGame,
    rel: OutcomeRelation,
    reduced: bool,
    budget: &Budget,
) -> Result<Answer, Error> {
    let sig = g.sig();
    let outcome = match (rel, reduced) {
        (_, true) => solver::ne_exists_reduced(g, rel, budget),
        (OutcomeRelation::Max, false) => solver::max_ne_exists(g, budget),
        (_, false) => solver::ne_exists(g, rel, budget),
    };
    let report = match outcome {
        Ok(r) => r,
        Err(Error::Budget(e)) => {
            let report = SolverReport {
                relation: rel,
                result: ReportResult::BudgetExceeded,
                witness: None,
                stats: ReportStats {
                    profiles_checked: budget.used(),
                },
            };
            return Ok(Answer {
                code: 3,
                json: serde_json::to_value(&report).expect("reports serialize"),
                text: format!("{rel}: undecided, {e}\n"),
            });
        }
        Err(e) => return Err(e),
    };
    let witness = report.witness();
    let out = SolverReport {
        relation: rel,
        result: if witness.is_some() {
            ReportResult::Witness
        } else {
            ReportResult::Empty
        },
        witness: witness.map(|u| profile_to_file(sig, u)),
        stats: ReportStats {
            profiles_checked: report.profiles_checked,
        },
    };
    let mut text = match witness {
        Some(u) => format!("{rel}: equilibrium found\n{}", render::profile(sig, u)),
        None => format!("{rel}: no uniform equilibrium\n"),
    };
    text.push_str(&format!("checked {}\n", report.profiles_checked));
    Ok(Answer {
        code: code(witness.is_some()),
        json: serde_json::to_value(&out).expect("reports serialize"),
        text,
    })
}

fn cmd_construct(g: &ObservationGame, alg: Algorithm, budget: &Budget) -> Result<Answer, Error> {
    let sig = g.sig();
    let (u, rel) = match alg {
        Algorithm::Alg1Pess => (
            solver::algorithm1(g, Mode::Pess, budget)?,
            OutcomeRelation::Pess,
        ),
        Algorithm::Alg1Opt => (
            solver::algorithm1(g, Mode::Opt, budget)?,
            OutcomeRelation::Opt,
        ),
        Algorithm::Alg2 => (solver::algorithm2(g, budget)?, OutcomeRelation::Max),
        Algorithm::Type2 => (
            solver::construct_type2_max_ne(g, budget)?,
            OutcomeRelation::Max,
        ),
        Algorithm::TwoPlayer => (
            solver::two_player_kw_pess_ne(g, budget)?,
            OutcomeRelation::Pess,
        ),
    };
    let check = match rel {
        OutcomeRelation::Max => solver::max_ne_verify_pointwise(g, &u)?,
        _ => solver::ne_verify(g, rel, &u)?,
    };
    if !check.is_ne {
        log::error!("constructed profile fails the {rel} verifier");
    }
    let text = format!(
        "{rel} verified: {}\n{}",
        check.is_ne,
        render::profile(sig, &u)
    );
    let json =
        json!({ "relation": rel, "verified": check.is_ne, "profile": profile_to_file(sig, &u) });
    Ok(Answer {
        code: code(check.is_ne),
        json,
        text,
    })
}

fn cmd_translate(
    path: &Path,
    direction: Direction,
    variant: Variant,
    out: Option<&Path>,
    provenance: Option<&Path>,
) -> Result<Answer, Error> {
    let loaded = with_path(path, load_game(path))?;
    let (game, prov) = match direction {
        Direction::Bool2kw => {
            let b = loaded.boolean()?;
            let g = translate::bool_to_kw(&b, variant);
            let sig = b.sig();
            let prov: serde_json::Map<String, Value> = sig
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
            (game_to_json(&g), Value::Object(prov))
        }
        Direction::Kw2bool => {
            let t = translate::kw_to_bool(&loaded.observation()?)?;
            (boolean_game_to_json(&t.game), provenance_json(&t))
        }
    };
    let pretty = |v: &Value| serde_json::to_string_pretty(v).expect("game files serialize") + "\n";
    if let Some(p) = provenance {
        std::fs::write(p, pretty(&prov))?;
    }
    let text = match out {
        Some(p) => {
            std::fs::write(p, pretty(&game))?;
            format!("wrote {}\n", p.display())
        }
        None => pretty(&game),
    };
    Ok(Answer {
        code: 0,
        json: json!({ "game": game, "provenance": prov }),
        text,
    })
}

fn sample_profiles(sig: &Signature, samples: usize, seed: u64) -> Vec<UniformProfile> {
    let mut out = vec![
        UniformProfile::lift_global(sig, &obsgame::StrategyProfile::hide_all(sig)),
        UniformProfile::lift_global(sig, &obsgame::StrategyProfile::reveal_all(sig)),
    ];
    let mut rng = obsgame::gen::rng(seed);
    out.extend((0..samples).map(|_| obsgame::gen::uniform_profile(&mut rng, sig)));
    out
}

fn cmd_kripke(
    g: &ObservationGame,
    profiles: &[UniformProfile],
    formula: Option<&str>,
    dump: bool,
) -> Result<Answer, Error> {
    let sig = g.sig();
    let formulas = match formula {
        Some(t) => vec![parse_formula(t, sig)?],
        None => g.goals().to_vec(),
    };
    let im = kripke::build_initial_model(sig);
    let mut failures = Vec::new();
    let mut rows = Vec::new();
    let mut points = 0u64;
    for (k, u) in profiles.iter().enumerate() {
        for v in 0..sig.num_valuations() {
            let s = u.at(VarSet(v));
            let ims = kripke::build_observation_model(sig, &s);
            let full = kripke::product(&im, &kripke::build_action_model(sig, &s, false));
            let small = kripke::product(&im, &kripke::build_action_model(sig, &s, true));
            if kripke::isomorphic(&full, &ims)?.is_none() {
                failures.push(format!(
                    "profile {} at {}: full product not isomorphic",
                    k + 1,
                    VarSet(v).display(sig)
                ));
            }
            if kripke::isomorphic(&small, &ims)?.is_none() {
                failures.push(format!(
                    "profile {} at {}: small product not isomorphic",
                    k + 1,
                    VarSet(v).display(sig)
                ));
            }
            let obs: Observation = s.observation();
            for phi in &formulas {
                points += 1;
                if kripke::kripke_eval(&ims, v as usize, phi)? != eval(sig, v, &obs, phi) {
                    failures.push(format!(
                        "profile {} at {}: {} evaluates differently",
                        k + 1,
                        VarSet(v).display(sig),
                        phi.to_text(sig)
                    ));
                }
            }
            if dump {
                rows.push(json!({ "profile": k + 1, "valuation": sig.names_of(v), "model": ims.to_json(sig) }));
            }
        }
    }
    let positive = failures.is_empty();
    let mut text = format!(
        "{} profiles, {} evaluations: {}\n",
        profiles.len(),
        points,
        if positive { "agree" } else { "MISMATCH" }
    );
    for f in &failures {
        text.push_str(&format!("  {f}\n"));
    }
    let mut json = json!({ "profiles": profiles.len(), "evaluations": points, "agree": positive, "failures": failures });
    if dump {
        json["models"] = Value::Array(rows);
    }
    Ok(Answer {
        code: code(positive),
        json,
        text,
    })
}
