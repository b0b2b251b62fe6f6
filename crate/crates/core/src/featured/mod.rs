//! Family-based solvers: attractor fixed points over guard-partition
//! functions, computing every product's result in one run.
//!
//! Each solver mirrors its plain counterpart in [`crate::plain`]. Per
//! transition, the successor's symbolic value function is restricted by the
//! transition guard; products outside the guard receive the identity of the
//! subsequent combine step, so a disabled transition never affects the
//! aggregate. Partitions split only where guards force distinct values.

mod discounted;
pub(crate) mod energy;
mod minreach;
mod parity;
mod reach;
pub mod report;
mod strategy;

pub use discounted::{solve_discounted, step as discounted_step};
pub use energy::{energy_bound, solve_energy, step as energy_step};
pub use minreach::{solve_min_reach, step as min_reach_step};
pub use parity::{fprog, solve_parity, step as parity_step, winners_at, ParitySolved};
pub use reach::{solve_reachability, step as reach_step};
pub use strategy::extract_featured_strategy;

use crate::error::{Error, Result};
use crate::game::{FeaturedGame, GameKind, Player};
use crate::logic::{FeatureFunction, Product, ProductSet};
use crate::value::{Cost, EnergyValue, Value};

/// A per-state family of values: one canonical guard-partition function per
/// state.
#[derive(Clone, Debug)]
pub struct Solution<X> {
    per_state: Vec<FeatureFunction<X>>,
}

impl<X> Solution<X> {
    pub fn new(per_state: Vec<FeatureFunction<X>>) -> Self {
        Solution { per_state }
    }

    pub fn state(&self, state: usize) -> &FeatureFunction<X> {
        &self.per_state[state]
    }

    pub fn states(&self) -> &[FeatureFunction<X>] {
        &self.per_state
    }

    pub fn state_count(&self) -> usize {
        self.per_state.len()
    }

    /// The value at a state for the product with the given index.
    pub fn value_at(&self, state: usize, product_index: usize) -> &X {
        self.per_state[state].value_at_index(product_index)
    }

    pub fn lookup(&self, ctx: &ProductSet, state: usize, product: Product) -> Result<&X> {
        self.per_state[state].lookup(ctx, product)
    }

    /// The largest per-state cell count.
    pub fn max_cells(&self) -> usize {
        self.per_state.iter().map(|f| f.cell_count()).max().unwrap_or(0)
    }
}

impl<X: Clone + PartialEq> Solution<X> {
    /// Checks that every per-state function is a canonical partition.
    pub fn validate(&self, ctx: &ProductSet) -> Result<()> {
        for (s, f) in self.per_state.iter().enumerate() {
            if !f.is_partition(ctx) {
                return Err(Error::internal(format!(
                    "solution at state {s} is not a partition"
                )));
            }
            if !f.is_canonical() {
                return Err(Error::internal(format!("solution at state {s} is not canonical")));
            }
        }
        Ok(())
    }

    pub fn semantically_equal(&self, other: &Self, ctx: &ProductSet) -> bool {
        self.per_state
            .iter()
            .zip(&other.per_state)
            .all(|(a, b)| a.semantically_equal(b, ctx))
    }
}

/// Iteration counts and per-round symbolic size of a fixed-point run.
#[derive(Clone, Debug, Default)]
pub struct SolveStats {
    /// Number of applications of the one-round operator.
    pub iterations: usize,
    /// Largest per-state cell count after each round, starting with the
    /// initial solution.
    pub max_cells_per_round: Vec<usize>,
}

impl SolveStats {
    fn record<X>(&mut self, solution: &Solution<X>) {
        self.max_cells_per_round.push(solution.max_cells());
    }
}

/// A solved featured game.
#[derive(Clone, Debug)]
pub struct Solved<X> {
    pub solution: Solution<X>,
    pub stats: SolveStats,
}

/// A featured solver result of any kind, for reports.
#[derive(Clone, Debug)]
pub enum FeaturedSolution {
    Reachability(Solved<bool>),
    MinReachability(Solved<Cost>),
    Discounted { solved: Solved<f64>, lambda: f64, epsilon: f64 },
    Energy(Solved<EnergyValue>),
    Parity(ParitySolved),
}

impl FeaturedSolution {
    pub fn stats(&self) -> &SolveStats {
        match self {
            FeaturedSolution::Reachability(s) => &s.stats,
            FeaturedSolution::MinReachability(s) => &s.stats,
            FeaturedSolution::Discounted { solved, .. } => &solved.stats,
            FeaturedSolution::Energy(s) => &s.stats,
            FeaturedSolution::Parity(s) => &s.stats,
        }
    }

    /// The per-product value function at `state`; for parity games this is
    /// the measure, not the winner.
    pub fn value_function(&self, state: usize) -> FeatureFunction<Value> {
        match self {
            FeaturedSolution::Reachability(s) => s.solution.state(state).map(|&b| Value::Bool(b)),
            FeaturedSolution::MinReachability(s) => {
                s.solution.state(state).map(|&c| Value::Cost(c))
            }
            FeaturedSolution::Discounted { solved, .. } => {
                solved.solution.state(state).map(|&x| Value::Real(x))
            }
            FeaturedSolution::Energy(s) => s.solution.state(state).map(|&e| Value::Energy(e)),
            FeaturedSolution::Parity(s) => {
                s.solution.state(state).map(|m| Value::Measure(m.clone()))
            }
        }
    }

    /// The per-product headline value at `state`: winners for parity, the
    /// solution value otherwise.
    pub fn headline_function(&self, state: usize) -> FeatureFunction<Value> {
        match self {
            FeaturedSolution::Parity(s) => {
                s.solution.state(state).map(|m| Value::Bool(!m.is_top()))
            }
            other => other.value_function(state),
        }
    }
}

/// Solves `game` with the featured solver matching its kind.
pub fn solve(
    game: &FeaturedGame,
    lambda: Option<f64>,
    epsilon: Option<f64>,
) -> Result<FeaturedSolution> {
    Ok(match game.kind() {
        GameKind::Reachability => FeaturedSolution::Reachability(solve_reachability(game)?),
        GameKind::MinReachability => FeaturedSolution::MinReachability(solve_min_reach(game)?),
        GameKind::Discounted => {
            let lambda = lambda
                .ok_or_else(|| Error::parameter("discounted games require a discounting factor"))?;
            let epsilon =
                epsilon.ok_or_else(|| Error::parameter("discounted games require a precision"))?;
            FeaturedSolution::Discounted {
                solved: solve_discounted(game, lambda, epsilon)?,
                lambda,
                epsilon,
            }
        }
        GameKind::Energy => FeaturedSolution::Energy(solve_energy(game)?),
        GameKind::Parity => FeaturedSolution::Parity(solve_parity(game)?),
    })
}

/// One transition's contribution to the backup at its source: the
/// successor's function restricted by the transition guard, with `map`
/// applied to enabled cells and `neutral` on the complement.
pub(crate) fn transition_backup<X: Clone + PartialEq>(
    game: &FeaturedGame,
    solution: &Solution<X>,
    transition: usize,
    neutral: X,
    map: impl Fn(&X) -> X,
) -> FeatureFunction<X> {
    let tr = &game.transitions()[transition];
    solution.state(tr.target).restrict_with(
        game.products(),
        &tr.guard,
        game.guard_denotation(transition),
        neutral,
        map,
    )
}

/// Folds the per-transition backups of one state with the owner's combine
/// operator.
pub(crate) fn fold_state<X: Clone + PartialEq>(
    game: &FeaturedGame,
    state: usize,
    mut backup: impl FnMut(usize, Player) -> FeatureFunction<X>,
    combine: impl Fn(&X, &X) -> X,
) -> FeatureFunction<X> {
    let owner = game.states()[state].owner;
    let mut acc: Option<FeatureFunction<X>> = None;
    for &t in game.outgoing(state) {
        let v = backup(t, owner);
        acc = Some(match acc {
            None => v,
            Some(a) => a.combine(&v, &combine),
        });
    }
    acc.expect("non-blocking games have outgoing transitions everywhere")
}

fn check_kind(game: &FeaturedGame, expected: GameKind) -> Result<()> {
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
