//! Solvers for featured two-player graph games.
//!
//! A featured game superimposes one game per product of a product line; its
//! transitions carry feature guards. The solvers in [`featured`] compute
//! winners, values and locally optimal strategies for *all* products in one
//! fixed-point computation over canonical guard partitions, while [`plain`]
//! solves single games and serves as a per-product oracle. [`trans`] builds
//! featured games from mu-calculus model-checking problems and from
//! discounted-distance comparisons of weighted transition systems.

pub mod error;
pub mod featured;
pub mod game;
pub mod logic;
pub mod plain;
pub mod random;
pub mod trans;
pub mod value;

pub use error::{Error, Result};
pub use game::{
    FeaturedGame, FeaturedStrategy, FeaturedTransition, Game, GameKind, GameMeta, Player,
    StateInfo, Strategy,
};
pub use logic::{FeatureExpr, FeatureFunction, FeatureSet, Product, ProductSet};
pub use value::{Cost, EnergyValue, ParityMeasure, Value};
