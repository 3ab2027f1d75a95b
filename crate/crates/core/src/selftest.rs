//! Bundled regression suite: worked examples plus seeded property sweeps.
//!
//! Each criterion is independent, builds its own budget and reports a
//! single pass/fail line. Corpus files are compiled in and can be
//! overridden by a directory holding files of the same names.

use std::path::PathBuf;
use std::time::Instant;

use serde::Serialize;

use crate::budget::Budget;
use crate::error::Error;
use crate::game::{
    compare, ObservationGame, OutcomeRelation, Strategy, StrategyProfile, UniformProfile,
    UniformStrategy, VarSet,
};
use crate::gen::{self, Fragment, GoalShape, Shape};
use crate::io::{parse_game, LoadedGame};
use crate::kripke;
use crate::logic::{self, eval_everywhere, Formula, PlayerId, Signature};
use crate::solver::{self, Mode, SearchResult};
use crate::translate::{self, Variant};

const CORPUS: [(&str, &str); 6] = [
    (
        "tony_maria.json",
        include_str!("../examples/tony_maria.json"),
    ),
    ("pennies.json", include_str!("../examples/pennies.json")),
    (
        "eightplayer.json",
        include_str!("../examples/eightplayer.json"),
    ),
    ("ex8.json", include_str!("../examples/ex8.json")),
    ("ex9.json", include_str!("../examples/ex9.json")),
    (
        "ex10_boolean.json",
        include_str!("../examples/ex10_boolean.json"),
    ),
];

pub fn corpus_names() -> impl Iterator<Item = &'static str> {
    CORPUS.iter().map(|(n, _)| *n)
}

/// Text of a bundled corpus file.
pub fn corpus_text(name: &str) -> Option<&'static str> {
    CORPUS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

#[derive(Debug, Clone)]
pub struct Options {
    pub seed: u64,
    /// Case-insensitive; matches a criterion id (`c3`), a tag, or part of
    /// the name.
    pub filter: Option<String>,
    pub corpus_dir: Option<PathBuf>,
    pub budget: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            seed: 0,
            filter: None,
            corpus_dir: None,
            budget: crate::budget::DEFAULT_BUDGET * 10,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub tags: &'static [&'static str],
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u64,
}

pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    pub tags: &'static [&'static str],
    run: fn(&Ctx) -> Outcome,
}

impl Criterion {
    pub fn matches(&self, filter: &str) -> bool {
        let f = filter.to_ascii_lowercase();
        f == format!("c{}", self.id)
            || f == self.id.to_string()
            || self.tags.iter().any(|t| *t == f)
            || self.name.to_ascii_lowercase().contains(&f)
    }
}

pub const CRITERIA: [Criterion; 10] = [
    Criterion {
        id: 1,
        name: "tony-maria uniform equilibria",
        tags: &["example", "uniform", "max"],
        run: c1,
    },
    Criterion {
        id: 2,
        name: "matching pennies",
        tags: &["example", "kw", "max"],
        run: c2,
    },
    Criterion {
        id: 3,
        name: "eight-player pessimist emptiness",
        tags: &["example", "kw", "pess"],
        run: c3,
    },
    Criterion {
        id: 4,
        name: "examples 8 and 9 maximal emptiness",
        tags: &["example", "kw", "max"],
        run: c4,
    },
    Criterion {
        id: 5,
        name: "correspondence theorems",
        tags: &["translate", "kw", "random"],
        run: c5,
    },
    Criterion {
        id: 6,
        name: "constructive algorithms",
        tags: &["construct", "kw", "random"],
        run: c6,
    },
    Criterion {
        id: 7,
        name: "two-player kw pessimist existence",
        tags: &["construct", "kw", "random"],
        run: c7,
    },
    Criterion {
        id: 8,
        name: "logic properties",
        tags: &["logic", "kw", "random"],
        run: c8,
    },
    Criterion {
        id: 9,
        name: "kripke oracle",
        tags: &["kripke", "random"],
        run: c9,
    },
    Criterion {
        id: 10,
        name: "positive and self-positive goals",
        tags: &["positive", "random"],
        run: c10,
    },
];

struct Ctx<'a> {
    opts: &'a Options,
}

impl Ctx<'_> {
    fn budget(&self) -> Budget {
        Budget::new(self.opts.budget)
    }

    fn seed(&self, id: u64) -> u64 {
        self.opts
            .seed
            .wrapping_mul(0x9e37_79b9_7f4a_7c15)
            .wrapping_add(id)
    }

    fn load(&self, name: &str) -> Result<LoadedGame, Error> {
        let text = match &self.opts.corpus_dir {
            Some(dir) => std::fs::read_to_string(dir.join(name))?,
            None => corpus_text(name)
                .ok_or_else(|| Error::Format(format!("no bundled file {name}")))?
                .to_string(),
        };
        parse_game(&text).map_err(|e| Error::Format(format!("{name}: {e}")))
    }

    fn game(&self, name: &str) -> Result<ObservationGame, Error> {
        self.load(name)?.observation()
    }
}

/// Accumulates named checks; the criterion passes when all of them do.
#[derive(Default)]
struct Outcome {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    fn error(e: Error) -> Self {
        Outcome {
            failures: vec![format!("error: {e}")],
            notes: Vec::new(),
        }
    }
}

fn guard(f: impl FnOnce(&mut Outcome) -> Result<(), Error>) -> Outcome {
    let mut out = Outcome::default();
    match f(&mut out) {
        Ok(()) => out,
        Err(e) => {
            out.failures.push(format!("error: {e}"));
            out
        }
    }
}

const MAX_LISTED: usize = 6;

pub fn run(opts: &Options) -> Vec<CriterionReport> {
    CRITERIA
        .iter()
        .filter(|c| opts.filter.as_deref().is_none_or(|f| c.matches(f)))
        .map(|c| run_criterion(c, opts))
        .collect()
}

pub fn run_criterion(c: &Criterion, opts: &Options) -> CriterionReport {
    let start = Instant::now();
    let ctx = Ctx { opts };
    let out = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| (c.run)(&ctx)))
        .unwrap_or_else(|_| Outcome::error(Error::Unsupported("criterion panicked".into())));
    let passed = out.failures.is_empty();
    let total = out.failures.len();
    let mut parts: Vec<String> = out.failures.into_iter().take(MAX_LISTED).collect();
    if total > MAX_LISTED {
        parts.push(format!("{} more failures", total - MAX_LISTED));
    }
    parts.extend(out.notes);
    CriterionReport {
        id: c.id,
        name: c.name,
        tags: c.tags,
        passed,
        detail: parts.join("; "),
        elapsed_ms: start.elapsed().as_millis() as u64,
    }
}

pub fn run_id(id: u8, opts: &Options) -> Option<CriterionReport> {
    CRITERIA
        .iter()
        .find(|c| c.id == id)
        .map(|c| run_criterion(c, opts))
}

/// `C3 PASS eight-player pessimist emptiness (812 ms) ...`
pub fn format_line(r: &CriterionReport) -> String {
    let mut s = format!(
        "C{} {} {} ({} ms)",
        r.id,
        if r.passed { "PASS" } else { "FAIL" },
        r.name,
        r.elapsed_ms
    );
    if !r.detail.is_empty() {
        s.push_str(": ");
        s.push_str(&r.detail);
    }
    s
}

fn rel_all() -> [OutcomeRelation; 4] {
    OutcomeRelation::ALL
}

fn c1(ctx: &Ctx) -> Outcome {
    guard(|out| {
        let g = ctx.game("tony_maria.json")?;
        let b = ctx.budget();
        let count = solver::uniform_profile_count(&g, &spaces(&g));
        out.check(
            count == Some(16),
            format!("expected 16 uniform profiles, found {count:?}"),
        );
        for rel in [
            OutcomeRelation::Pess,
            OutcomeRelation::Opt,
            OutcomeRelation::Real,
        ] {
            let all = solver::enumerate_ne(&g, rel, 1000, &b)?;
            out.check(
                all.len() == 16,
                format!("{rel}: {} of 16 profiles are equilibria", all.len()),
            );
        }
        let max = solver::enumerate_ne(&g, OutcomeRelation::Max, 1000, &b)?;
        out.check(
            max.is_empty(),
            format!("max: enumeration found {} equilibria", max.len()),
        );
        let csp = solver::max_ne_exists(&g, &b)?;
        out.check(!csp.found(), "max: constraint search found a witness");
        Ok(())
    })
}

fn spaces(g: &ObservationGame) -> Vec<crate::game::StrategySpace> {
    g.players().map(|i| g.strategies(i)).collect()
}

/// Player i reveals its variables to everyone exactly when they are all
/// true.
pub fn switch_profile(sig: &Signature) -> UniformProfile {
    let strategies = sig
        .players()
        .map(|i| {
            let own = sig.owned_mask(i);
            UniformStrategy::from_fn(sig, i, |v| {
                if v.0 & own == own {
                    Strategy::reveal_all(sig, i)
                } else {
                    Strategy::hide(sig, i)
                }
            })
        })
        .collect();
    UniformProfile::new(sig, strategies).expect("switch profile is uniform")
}

fn c2(ctx: &Ctx) -> Outcome {
    guard(|out| {
        let g = ctx.game("pennies.json")?;
        let b = ctx.budget();
        out.check(
            !solver::max_ne_exists(&g, &b)?.found(),
            "max: witness found",
        );
        let plain =
            solver::max_ne_exists_with(&g, solver::MaxSearchOptions { kw_shortcut: false }, &b)?;
        out.check(
            !plain.found(),
            "max: witness found without the global shortcut",
        );
        for rel in [OutcomeRelation::Pess, OutcomeRelation::Opt] {
            let global = solver::global_ne(&g, rel, &b)?;
            out.check(
                global.is_empty(),
                format!("{rel}: {} globally uniform equilibria", global.len()),
            );
            let sw = switch_profile(g.sig());
            out.check(
                solver::ne_verify(&g, rel, &sw)?.is_ne,
                format!("{rel}: switch profile refuted"),
            );
            out.check(
                solver::ne_verify_exhaustive(&g, rel, &sw, &b)?.is_ne,
                format!("{rel}: switch profile refuted by the exhaustive verifier"),
            );
        }
        Ok(())
    })
}

/// Player 1's options in the eight-player game: whether `p1` goes to 3
/// and to 4.
const FORMS: [(&str, bool, bool); 4] = [
    ("A", true, true),
    ("B", true, false),
    ("C", false, true),
    ("D", false, false),
];

fn form_strategy(sig: &Signature, form: &str) -> Strategy {
    let &(_, to3, to4) = FORMS.iter().find(|f| f.0 == form).expect("known form");
    let mut s = Strategy::hide(sig, PlayerId(1));
    let own = VarSet(sig.owned_mask(PlayerId(1)));
    for (to, on) in [(3, to3), (4, to4)] {
        if on {
            s.set(sig, PlayerId(to), own).expect("recipient exists");
        }
    }
    s
}

fn reveal_to_8(sig: &Signature, j: u16) -> Strategy {
    let mut s = Strategy::hide(sig, PlayerId(j));
    s.set(sig, PlayerId(8), VarSet(sig.owned_mask(PlayerId(j))))
        .expect("player 8 exists");
    s
}

fn c3(ctx: &Ctx) -> Outcome {
    guard(|out| {
        let g = ctx.game("eightplayer.json")?;
        let sig = g.sig().clone();
        out.check(sig.n() == 8, "expected eight players");
        if sig.n() != 8 {
            return Ok(());
        }
        let b = ctx.budget();
        let reduced = solver::kw_relevant_reduction(&g)?;
        let expect = |i: u16, j: u16| match i {
            1 => j == 3 || j == 4,
            2..=7 => j == 8,
            _ => false,
        };
        let shape_ok = sig.players().all(|i| {
            sig.players()
                .filter(|&j| j != i)
                .all(|j| reduced[i.idx()].allowed(j).is_empty() != expect(i.0, j.0))
        });
        out.check(
            shape_ok,
            "reduced strategy spaces differ from the expected recipients",
        );
        let rep = solver::ne_exists_in(&g, reduced, OutcomeRelation::Pess, &b)?;
        out.check(!rep.found(), "pess: equilibrium found in the reduced space");
        out.note(format!("{} reduced profiles checked", rep.profiles_checked));

        // Table 1: for a globally uniform strategy of player 1 satisfying a
        // form, the players who win by revealing to 8 (others silent), and
        // player 1's unique winning reply to each of them.
        let table1: [(&str, [u16; 3], [&str; 3]); 4] = [
            ("A", [2, 5, 6], ["D", "C", "B"]),
            ("B", [3, 5, 7], ["A", "C", "A"]),
            ("C", [2, 4, 7], ["D", "B", "A"]),
            ("D", [3, 4, 6], ["A", "B", "B"]),
        ];
        let v0 = VarSet(0);
        for (form, players, replies) in table1 {
            let base = StrategyProfile::hide_all(&sig).with(form_strategy(&sig, form));
            let winners: Vec<u16> = (2..=7)
                .filter(|&j| {
                    let pj = PlayerId(j);
                    g.outcome(v0, &base.with(reveal_to_8(&sig, j)), pj) && !g.outcome(v0, &base, pj)
                })
                .collect();
            out.check(
                winners == players,
                format!("table 1 row {form}: revealing wins for {winners:?}, listed {players:?}"),
            );
            for (&j, &reply) in players.iter().zip(&replies) {
                let with_j = base.with(reveal_to_8(&sig, j));
                let wins: Vec<&str> = FORMS
                    .iter()
                    .map(|f| f.0)
                    .filter(|f| g.outcome(v0, &with_j.with(form_strategy(&sig, f)), PlayerId(1)))
                    .collect();
                out.check(
                    wins == [reply],
                    format!("table 1 row {form}, player {j}: player 1 wins with {wins:?}, listed {reply}"),
                );
            }
        }

        // Table 2: a uniform strategy of player 1 satisfying one form when p1
        // holds and another otherwise. Every minimal set of revealers that
        // makes player 1 win everywhere contains a player who strictly gains
        // (pessimist) by hiding instead.
        let table2: [(&str, &str, &[&[u16]]); 6] = [
            ("C", "A", &[&[5, 7]]),
            ("B", "D", &[]),
            ("D", "C", &[]),
            ("A", "B", &[&[3, 6], &[6, 7]]),
            ("A", "D", &[&[2, 3]]),
            ("B", "C", &[&[4, 5]]),
        ];
        let p1 = sig.owned_mask(PlayerId(1));
        for (x, y, listed) in table2 {
            let s1 = UniformStrategy::from_fn(&sig, PlayerId(1), |v| {
                form_strategy(&sig, if v.0 & p1 != 0 { x } else { y })
            });
            let profile_for = |set: u64| -> UniformProfile {
                let others = (2..=8u16).map(|j| {
                    let pj = PlayerId(j);
                    let s = if set >> j & 1 == 1 {
                        reveal_to_8(&sig, j)
                    } else {
                        Strategy::hide(&sig, pj)
                    };
                    UniformStrategy::global(&sig, s)
                });
                UniformProfile::new(&sig, std::iter::once(s1.clone()).chain(others).collect())
                    .expect("valid profile")
            };
            let wins_everywhere = |set: u64| {
                let u = profile_for(set);
                (0..sig.num_valuations())
                    .all(|v| g.expected_outcome(VarSet(v), &u, PlayerId(1)).min())
            };
            let winning: Vec<u64> = (0..64u64)
                .map(|m| m << 2)
                .filter(|&m| wins_everywhere(m))
                .collect();
            let minimal: Vec<u64> = winning
                .iter()
                .copied()
                .filter(|&m| !winning.iter().any(|&w| w != m && w & m == w))
                .collect();
            let as_list = |m: u64| -> Vec<u16> { (2..=7).filter(|&j| m >> j & 1 == 1).collect() };
            let computed: Vec<Vec<u16>> = minimal.iter().map(|&m| as_list(m)).collect();
            for l in listed {
                out.check(
                    computed.iter().any(|c| c == l),
                    format!("table 2 row {x}|{y}: listed set {l:?} is not a minimal winning set"),
                );
            }
            let listed_all: Vec<Vec<u16>> = listed.iter().map(|l| l.to_vec()).collect();
            if computed != listed_all {
                out.note(format!(
                    "table 2 row {x}|{y}: minimal winning sets {computed:?}"
                ));
            }
            for &m in &minimal {
                let u = profile_for(m);
                let blocker = as_list(m).into_iter().find(|&k| {
                    let pk = PlayerId(k);
                    let dev = u.with(UniformStrategy::global(&sig, Strategy::hide(&sig, pk)));
                    (0..sig.num_valuations()).any(|v| {
                        let v = VarSet(v);
                        compare(
                            OutcomeRelation::Pess,
                            &g.expected_outcome(v, &dev, pk),
                            &g.expected_outcome(v, &u, pk),
                        )
                        .unwrap_or(false)
                    })
                });
                out.check(
                    blocker.is_some(),
                    format!(
                        "table 2 row {x}|{y}: no blocking player in {:?}",
                        as_list(m)
                    ),
                );
            }
        }
        Ok(())
    })
}

fn c4(ctx: &Ctx) -> Outcome {
    guard(|out| {
        for (name, types) in [("ex8.json", [3usize, 2]), ("ex9.json", [4, 3])] {
            let start = Instant::now();
            let g = ctx.game(name)?;
            let b = ctx.budget();
            let got: Vec<usize> = g.players().map(|i| g.goal_type(i).len()).collect();
            out.check(
                got == types,
                format!("{name}: type sizes {got:?}, expected {types:?}"),
            );
            let rep = solver::max_ne_exists(&g, &b)?;
            out.check(!rep.found(), format!("{name}: maximal equilibrium found"));
            if g.is_kw() {
                let plain = solver::max_ne_exists_with(
                    &g,
                    solver::MaxSearchOptions { kw_shortcut: false },
                    &b,
                )?;
                out.check(
                    !plain.found(),
                    format!("{name}: maximal equilibrium found without the global shortcut"),
                );
            }
            out.note(format!("{name} {} ms", start.elapsed().as_millis()));
        }
        Ok(())
    })
}

fn c5(ctx: &Ctx) -> Outcome {
    guard(|out| {
        let shape = Shape::new(2..=3, 1..=4);
        let mut r = gen::rng(ctx.seed(5));
        let b = ctx.budget();
        let mut with_ne = 0;
        let mut variant_mismatch = [0usize; 3];
        let mut points = [0usize; 2];
        for k in 0..100 {
            let bg = gen::boolean_game(&mut r, &shape, &GoalShape::new(Fragment::Boolean, 4));
            let c = translate::check_bool_to_kw(&bg, Variant::Next, &b)?;
            out.check(
                c.holds(),
                format!(
                    "bool2kw instance {k}: NE(B)={} NE_max(G_B)={}",
                    c.boolean, c.kw
                ),
            );
            with_ne += c.boolean as usize;
            // Existence alone is nearly always true at this size; the lift
            // must also agree valuation by valuation.
            let gb = translate::bool_to_kw(&bg, Variant::Next);
            for w in 0..1u64 << bg.sig().num_vars() {
                let w = VarSet(w);
                let lhs = translate::is_bool_ne(&bg, w, &b)?;
                let rhs =
                    solver::max_ne_verify_pointwise(&gb, &translate::lifted_profile(&bg, w))?.is_ne;
                points[lhs as usize] += 1;
                out.check(
                    lhs == rhs,
                    format!(
                        "bool2kw instance {k}: w={:?} NE(B)={lhs} lift NE_max={rhs}",
                        bg.sig().names_of(w.0)
                    ),
                );
            }
            for (slot, v) in Variant::ALL.iter().enumerate() {
                if !translate::check_bool_to_kw(&bg, *v, &b)?.holds() {
                    variant_mismatch[slot] += 1;
                }
            }
        }
        out.note(format!("{with_ne}/100 Boolean games have an equilibrium"));
        out.note(format!(
            "pointwise: {} equilibria, {} non-equilibria",
            points[1], points[0]
        ));
        out.note(format!(
            "variant mismatches next/prev/public: {}/{}/{}",
            variant_mismatch[0], variant_mismatch[1], variant_mismatch[2]
        ));
        let mut kw_with_ne = 0;
        for k in 0..100 {
            let g = gen::observation_game(&mut r, &shape, &GoalShape::new(Fragment::Kw, 4));
            let c = translate::check_kw_to_bool(&g, &b)?;
            out.check(
                c.holds(),
                format!(
                    "kw2bool instance {k}: NE(B_G)={} NE_max(G)={}",
                    c.boolean, c.kw
                ),
            );
            kw_with_ne += c.kw as usize;
        }
        out.note(format!(
            "{kw_with_ne}/100 Kw games have a maximal equilibrium"
        ));
        Ok(())
    })
}

fn c6(ctx: &Ctx) -> Outcome {
    guard(|out| {
        let shape = Shape::new(2..=3, 1..=4).per_player(2);
        let mut r = gen::rng(ctx.seed(6));
        let b = ctx.budget();
        let guarded3 = GoalShape::new(Fragment::Epistemic, 3).guarded().max_type(3);
        for k in 0..50 {
            let g = gen::observation_game(&mut r, &shape, &guarded3);
            for (mode, rel) in [
                (Mode::Pess, OutcomeRelation::Pess),
                (Mode::Opt, OutcomeRelation::Opt),
            ] {
                let u = solver::algorithm1(&g, mode, &b)?;
                if !solver::ne_verify(&g, rel, &u)?.is_ne {
                    let exists = solver::ne_exists(&g, rel, &b)?.found();
                    out.check(
                        false,
                        format!(
                            "algorithm1 {rel} instance {k} refuted (goals {:?}; an equilibrium {})",
                            g.goal_texts(),
                            if exists { "exists" } else { "does not exist" }
                        ),
                    );
                }
            }
        }
        let kw3 = GoalShape::new(Fragment::Kw, 3).max_type(3);
        for k in 0..50 {
            let g = gen::observation_game(&mut r, &shape, &kw3);
            let u = solver::algorithm2(&g, &b)?;
            out.check(
                u.is_globally_uniform(),
                format!("algorithm2 instance {k}: output not globally uniform"),
            );
            out.check(
                solver::max_ne_verify_pointwise(&g, &u)?.is_ne,
                format!("algorithm2 instance {k} refuted"),
            );
        }
        let guarded2 = GoalShape::new(Fragment::Epistemic, 3).guarded().max_type(2);
        for k in 0..30 {
            let g = gen::observation_game(&mut r, &shape, &guarded2);
            let u = solver::construct_type2_max_ne(&g, &b)?;
            out.check(
                solver::max_ne_verify_pointwise(&g, &u)?.is_ne,
                format!("type-2 construction instance {k} refuted"),
            );
        }
        Ok(())
    })
}

fn c7(ctx: &Ctx) -> Outcome {
    guard(|out| {
        let shape = Shape::new(2..=2, 1..=3).per_player(2);
        let mut r = gen::rng(ctx.seed(7));
        let b = ctx.budget();
        for k in 0..50 {
            let g = gen::observation_game(&mut r, &shape, &GoalShape::new(Fragment::Kw, 4));
            let u = solver::two_player_kw_pess_ne(&g, &b)?;
            out.check(
                solver::ne_verify(&g, OutcomeRelation::Pess, &u)?.is_ne,
                format!("instance {k}: construction refuted"),
            );
            let brute = solver::ne_exists(&g, OutcomeRelation::Pess, &b)?;
            out.check(
                brute.found(),
                format!("instance {k}: brute force found no equilibrium"),
            );
        }
        Ok(())
    })
}

fn small_signatures() -> Vec<Signature> {
    // Every way to spread at most three variables over at most three players.
    let mut out = Vec::new();
    for n in 1..=3usize {
        let mut counts = vec![0usize; n];
        loop {
            if counts.iter().sum::<usize>() <= 3 {
                let owned: Vec<Vec<String>> = counts
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| {
                        (0..c)
                            .map(|x| format!("{}{}", ["p", "q", "r"][x], i + 1))
                            .collect()
                    })
                    .collect();
                out.push(Signature::new(n, &owned).expect("valid names"));
            }
            let mut d = 0;
            while d < n && counts[d] == 3 {
                counts[d] = 0;
                d += 1;
            }
            if d == n {
                break;
            }
            counts[d] += 1;
        }
    }
    out
}

fn c8(ctx: &Ctx) -> Outcome {
    guard(|out| {
        let sigs = small_signatures();
        let mut r = gen::rng(ctx.seed(8));
        let b = ctx.budget();
        let mut checked = 0;
        for k in 0..500 {
            let sig = &sigs[k % sigs.len()];
            let phi = gen::formula(&mut r, sig, &gen::FormulaShape::new(Fragment::Epistemic, 5));
            let nnf = logic::to_nnf(&phi);
            let expanded = logic::to_nnf_expanded(&phi);
            let kw = gen::formula(&mut r, sig, &gen::FormulaShape::new(Fragment::Kw, 4));
            let kw_nnf = logic::to_nnf(&kw);
            out.check(
                logic::nnf::is_nnf_shape(&nnf),
                format!("formula {k}: NNF output not in NNF"),
            );
            out.check(
                logic::classify(&expanded, PlayerId(1), sig).is_nnf,
                format!("formula {k}: expanded NNF output not in NNF"),
            );
            out.check(
                logic::classify(&kw_nnf, PlayerId(1), sig).is_kw
                    && logic::nnf::is_nnf_shape(&kw_nnf),
                format!("formula {k}: NNF of a Kw formula left the Kw fragment"),
            );
            for obs in logic::eval::all_observations(sig) {
                let a = eval_everywhere(sig, &obs, &phi);
                out.check(
                    a == eval_everywhere(sig, &obs, &nnf),
                    format!("formula {k}: NNF changes truth"),
                );
                out.check(
                    a == eval_everywhere(sig, &obs, &expanded),
                    format!("formula {k}: expanded NNF changes truth"),
                );
                let t = eval_everywhere(sig, &obs, &kw);
                out.check(
                    t.windows(2).all(|w| w[0] == w[1]),
                    format!("formula {k}: Kw truth depends on the valuation"),
                );
                out.check(
                    t == eval_everywhere(sig, &obs, &kw_nnf),
                    format!("formula {k}: Kw NNF changes truth"),
                );
            }
            for i in sig.players() {
                let bi = Formula::iff(kw.clone(), Formula::k(i, kw.clone()));
                out.check(
                    logic::check_validity_small(&bi, sig, &b)?,
                    format!("formula {k}: alpha <-> K{i} alpha not valid"),
                );
            }
            checked += 1;
        }
        for sig in &sigs {
            for i in sig.players() {
                for j in sig.players() {
                    for v in sig.vars() {
                        let f = Formula::kw(i, Formula::kw_atom(j, v));
                        out.check(
                            logic::check_validity_small(&f, sig, &b)?,
                            format!("Kw{i} Kw{j} {} not valid", sig.name(v)),
                        );
                    }
                }
            }
            // Own variables: Kw_i p_i is valid, while K_i p_i and K_i !p_i
            // reduce to the literal itself.
            for v in sig.vars() {
                let i = sig.owner(v);
                let p = Formula::atom(v);
                let own = [
                    Formula::kw_atom(i, v),
                    Formula::iff(Formula::k(i, p.clone()), p.clone()),
                    Formula::iff(Formula::k(i, Formula::not(p.clone())), Formula::not(p)),
                ];
                for f in own {
                    out.check(
                        logic::check_validity_small(&f, sig, &b)?,
                        format!("{} not valid", f.to_text(sig)),
                    );
                }
            }
        }
        out.note(format!("{checked} formulas over {} signatures", sigs.len()));

        let shape = Shape::new(2..=3, 1..=3).per_player(2);
        let mut agree = 0;
        let mut max_ne = 0;
        for k in 0..50 {
            let g = gen::observation_game(&mut r, &shape, &GoalShape::new(Fragment::Epistemic, 3));
            let u = gen::uniform_profile(&mut r, g.sig());
            let pointwise = solver::max_ne_verify_pointwise(&g, &u)?.is_ne;
            let by_point = (0..g.sig().num_valuations()).try_fold(true, |acc, v| {
                let v = VarSet(v);
                Ok::<_, Error>(acc && solver::pointed_ne_verify(&g, v, &u.at(v))?.is_ne)
            })?;
            let exhaustive = solver::ne_verify_exhaustive(&g, OutcomeRelation::Max, &u, &b)?.is_ne;
            out.check(
                pointwise == exhaustive && by_point == exhaustive,
                format!("game {k}: verifiers disagree (pointwise {pointwise}, pointed {by_point}, exhaustive {exhaustive})"),
            );
            agree += (pointwise == exhaustive) as usize;
            // A maximal equilibrium of the game, when one exists, is an
            // equilibrium under every relation.
            if let SearchResult::Witness(w) = solver::max_ne_exists(&g, &b)?.result {
                max_ne += 1;
                for rel in rel_all() {
                    out.check(
                        solver::ne_verify_exhaustive(&g, rel, &w, &b)?.is_ne,
                        format!("game {k}: maximal equilibrium is not a {rel} equilibrium"),
                    );
                }
            }
        }
        out.note(format!(
            "verifiers agree on {agree}/50 games, {max_ne} with a maximal equilibrium"
        ));
        Ok(())
    })
}

fn c9(ctx: &Ctx) -> Outcome {
    guard(|out| {
        let mut r = gen::rng(ctx.seed(9));
        let shape = Shape::new(1..=3, 0..=4);
        for k in 0..500 {
            let sig = gen::signature(&mut r, &shape);
            let s = gen::profile(&mut r, &sig);
            let v = gen::valuation(&mut r, &sig);
            let phi = gen::formula(
                &mut r,
                &sig,
                &gen::FormulaShape::new(Fragment::Epistemic, 5),
            );
            let m = kripke::build_observation_model(&sig, &s);
            let a = logic::eval(&sig, v.0, &s.observation(), &phi);
            let b = kripke::kripke_eval(&m, v.0 as usize, &phi)?;
            out.check(a == b, format!("tuple {k}: eval {a}, kripke {b}"));
        }
        let shape = Shape::new(1..=3, 0..=5);
        for k in 0..100 {
            let sig = gen::signature(&mut r, &shape);
            let s = gen::profile(&mut r, &sig);
            let im = kripke::build_initial_model(&sig);
            let target = kripke::build_observation_model(&sig, &s);
            for small in [false, true] {
                let p = kripke::product(&im, &kripke::build_action_model(&sig, &s, small));
                if !small {
                    out.check(
                        p.len() == im.len(),
                        format!("instance {k}: full product has {} worlds", p.len()),
                    );
                }
                out.check(
                    kripke::isomorphic(&p, &target)?.is_some(),
                    format!("instance {k}: product (small={small}) not isomorphic to the observation model"),
                );
            }
        }
        let (sig, m) = kripke::non_observation_model();
        let f = logic::parse_formula("Kw1 p2 & !K2 Kw1 p2", &sig)?;
        out.check(
            kripke::kripke_eval(&m, 0, &f)?,
            "non-observation model does not satisfy Kw1 p2 & !K2 Kw1 p2",
        );
        Ok(())
    })
}

fn c10(ctx: &Ctx) -> Outcome {
    guard(|out| {
        let mut r = gen::rng(ctx.seed(10));
        let b = ctx.budget();
        let shape = Shape::new(2..=3, 1..=4).per_player(2);
        for k in 0..30 {
            let g = gen::observation_game(&mut r, &shape, &GoalShape::new(Fragment::Positive, 4));
            let all = UniformProfile::lift_global(g.sig(), &StrategyProfile::reveal_all(g.sig()));
            for rel in rel_all() {
                out.check(
                    solver::ne_verify(&g, rel, &all)?.is_ne,
                    format!("positive instance {k}: all-reveal refuted under {rel}"),
                );
            }
            out.check(
                solver::ne_verify_exhaustive(&g, OutcomeRelation::Max, &all, &b)?.is_ne,
                format!("positive instance {k}: all-reveal refuted by the exhaustive verifier"),
            );
        }
        let shape = Shape::new(2..=3, 1..=3).per_player(1);
        let mut constructed = 0;
        let mut rejected = 0;
        for k in 0..30 {
            let g = gen::observation_game(
                &mut r,
                &shape,
                &GoalShape::new(Fragment::SelfPositive(PlayerId(1)), 3).guarded(),
            );
            for (mode, rel) in [
                (Mode::Pess, OutcomeRelation::Pess),
                (Mode::Opt, OutcomeRelation::Opt),
            ] {
                let brute = solver::ne_exists(&g, rel, &b)?;
                out.check(
                    brute.found(),
                    format!("self-positive instance {k}: no {rel} equilibrium"),
                );
                match solver::algorithm1(&g, mode, &b) {
                    Ok(u) => {
                        constructed += 1;
                        out.check(
                            solver::ne_verify(&g, rel, &u)?.is_ne,
                            format!("self-positive instance {k}: algorithm1 {rel} output refuted (goals {:?})", g.goal_texts()),
                        );
                    }
                    Err(Error::Precondition { .. }) => rejected += 1,
                    Err(e) => return Err(e),
                }
            }
        }
        out.note(format!(
            "algorithm1 ran on {constructed} and rejected {rejected} self-positive runs"
        ));
        Ok(())
    })
}
