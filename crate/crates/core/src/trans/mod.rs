//! Building featured games from other problems: mu-calculus model checking
//! and discounted-distance comparison of weighted systems.

pub mod distance;
pub mod fts;
pub mod mucalc;
pub mod parity_game;

pub use distance::{direct_distance_oracle, distance_game, split_tolerances, DistanceGame};
pub use fts::{parse_fts, Fts, FtsTransition, FtsVariant, ToleranceFts};
pub use mucalc::{alternation_depth, FixKind, MuFormula};
pub use parity_game::{mucalc_to_parity_game, MucalcGame};
