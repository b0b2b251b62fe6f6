//! Single-game solvers: attractor fixed points for one product at a time.
//!
//! These operate on projections of featured games and double as the
//! verification baseline for the family-based solvers in [`crate::featured`].

mod discounted;
mod energy;
mod minreach;
mod parity;
mod reach;
mod strategy;
mod zielonka;

pub use discounted::solve_discounted;
pub(crate) use discounted::check_params as check_discount_params;
pub use energy::{energy_bound, solve_energy};
pub use minreach::solve_min_reach;
pub use parity::{solve_parity, MeasureContext};
pub use reach::solve_reachability;
pub use strategy::{extract_strategy, value_under_strategy};
pub use zielonka::zielonka_winners;

use crate::error::{Error, Result};
use crate::game::{Game, GameKind};
use crate::value::{Cost, EnergyValue, ParityMeasure, Value};

/// The per-state result of a plain solver, tagged by game kind.
#[derive(Clone, Debug)]
pub enum PlainSolution {
    Reachability(Vec<bool>),
    MinReachability(Vec<Cost>),
    Discounted { values: Vec<f64>, lambda: f64, epsilon: f64 },
    Energy { values: Vec<EnergyValue>, bound: u64 },
    Parity(Vec<ParityMeasure>),
}

impl PlainSolution {
    /// The game value at `state`. For parity the value is the winner.
    pub fn value_at(&self, state: usize) -> Value {
        match self {
            PlainSolution::Reachability(v) => Value::Bool(v[state]),
            PlainSolution::MinReachability(v) => Value::Cost(v[state]),
            PlainSolution::Discounted { values, .. } => Value::Real(values[state]),
            PlainSolution::Energy { values, .. } => Value::Energy(values[state]),
            PlainSolution::Parity(m) => Value::Bool(!m[state].is_top()),
        }
    }
}

/// Solves `game` with the solver matching its kind. `lambda` and `epsilon`
/// are required for discounted games and ignored otherwise.
pub fn solve(game: &Game, lambda: Option<f64>, epsilon: Option<f64>) -> Result<PlainSolution> {
    Ok(match game.kind() {
        GameKind::Reachability => PlainSolution::Reachability(solve_reachability(game)?),
        GameKind::MinReachability => PlainSolution::MinReachability(solve_min_reach(game)?),
        GameKind::Discounted => {
            let lambda = lambda
                .ok_or_else(|| Error::parameter("discounted games require a discounting factor"))?;
            let epsilon =
                epsilon.ok_or_else(|| Error::parameter("discounted games require a precision"))?;
            PlainSolution::Discounted {
                values: solve_discounted(game, lambda, epsilon)?,
                lambda,
                epsilon,
            }
        }
        GameKind::Energy => {
            let bound = energy_bound(game);
            PlainSolution::Energy { values: solve_energy(game)?, bound }
        }
        GameKind::Parity => PlainSolution::Parity(solve_parity(game)?),
    })
}

fn check_kind(game: &Game, expected: GameKind) -> Result<()> {
    if game.kind() == expected {
        Ok(())
    } else {
        Err(Error::parameter(format!(
            "expected a {} game, got {}",
            expected,
            game.kind()
        )))
    }
}

fn exceeded(bound: usize, what: &str) -> Error {
    Error::internal(format!("{what} exceeded its convergence bound of {bound} rounds"))
}
