//! Boolean observation games.
//!
//! Players privately observe their own propositional variables and choose,
//! per recipient, which of them to reveal. Goals are epistemic formulas
//! evaluated after the revelations. This crate provides the goal language,
//! the game machinery (uniform strategies, expected outcomes, outcome
//! relations), exact equilibrium verification and search, constructive
//! equilibrium algorithms, translations between Boolean games and
//! knowing-whether games, and an explicit Kripke-model oracle.

pub mod budget;
pub mod error;
pub mod game;
pub mod gen;
pub mod io;
pub mod kripke;
pub mod logic;
pub mod selftest;
pub mod solver;
pub mod translate;

pub use budget::{Budget, BudgetExceeded};
pub use error::Error;
pub use game::{
    ExpectedOutcome, InformationClass, ObservationGame, OutcomeRelation, Strategy, StrategyProfile,
    StrategySpace, UniformProfile, UniformStrategy, Valuation, VarSet,
};
pub use logic::{Formula, FragmentReport, PlayerId, Signature, TypeSet, VarId};
pub use translate::BooleanGame;
