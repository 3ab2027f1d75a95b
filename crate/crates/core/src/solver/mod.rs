//! Equilibrium verification, search and construction.

pub mod construct;
pub(crate) mod engine;
pub mod reduction;
pub mod search;
pub mod verify;

pub use construct::{algorithm1, algorithm2, construct_type2_max_ne, two_player_kw_pess_ne, Mode};
pub use reduction::kw_relevant_reduction;
pub use search::{
    enumerate_ne, global_max_ne_exists, global_ne, max_ne_exists, max_ne_exists_with, ne_exists,
    ne_exists_in, ne_exists_reduced, uniform_profile_count, MaxSearchOptions, SearchReport,
    SearchResult,
};
pub use verify::{
    check_deviation, max_ne_verify_pointwise, ne_verify, ne_verify_exhaustive, pointed_ne_verify,
    profile_succeq, Deviation, Replacement, VerifyResult,
};
