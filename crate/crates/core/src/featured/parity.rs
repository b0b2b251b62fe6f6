//! Featured parity games: family-based small progress measures.

use crate::error::Result;
use crate::featured::{check_kind, exceeded, fold_state, transition_backup, Solution, SolveStats};
use crate::game::{FeaturedGame, GameKind, Player};
use crate::logic::FeatureFunction;
use crate::plain::MeasureContext;
use crate::value::ParityMeasure;

/// A solved featured parity game: per-state measure families and the
/// per-product winners at the initial state.
#[derive(Clone, Debug)]
pub struct ParitySolved {
    pub solution: Solution<ParityMeasure>,
    /// True at a product iff player 1 wins the projection from the initial
    /// state.
    pub winners: FeatureFunction<bool>,
    pub stats: SolveStats,
}

/// Cell-wise lift of the one-step measure obligation along one transition.
pub fn fprog(
    game: &FeaturedGame,
    ctx: &MeasureContext,
    solution: &Solution<ParityMeasure>,
    transition: usize,
) -> FeatureFunction<ParityMeasure> {
    let source = game.transitions()[transition].source;
    let priority = game.states()[source].priority.unwrap();
    solution
        .state(game.transitions()[transition].target)
        .map(|m| ctx.prog(m, priority))
        .reduce()
}

/// Per-state, per-product least progress measures and initial-state winners.
pub fn solve_parity(game: &FeaturedGame) -> Result<ParitySolved> {
    check_kind(game, GameKind::Parity)?;
    game.require_non_blocking()?;
    let ctx = MeasureContext::for_states(game.states())?;
    let products = game.products();

    let mut solution = Solution::new(
        game.states()
            .iter()
            .map(|_| FeatureFunction::constant(products, ctx.zero()))
            .collect(),
    );
    let mut stats = SolveStats::default();
    stats.record(&solution);

    let cap = game.state_count() * (measure_domain_size(game) + 1) + 2;
    for _ in 0..cap {
        let next = step(game, &ctx, &solution);
        stats.iterations += 1;
        stats.record(&next);
        if next.semantically_equal(&solution, products) {
            let winners = solution
                .state(game.initial())
                .map(|m| !m.is_top())
                .reduce();
            return Ok(ParitySolved { solution, winners, stats });
        }
        solution = next;
    }
    Err(exceeded(cap, "featured parity fixed point"))
}

fn measure_domain_size(game: &FeaturedGame) -> usize {
    let mut counts = std::collections::BTreeMap::new();
    for s in game.states() {
        let p = s.priority.unwrap();
        if p % 2 == 1 {
            *counts.entry(p).or_insert(0usize) += 1;
        }
    }
    counts.values().map(|&c| c + 1).product()
}

/// One round: per transition the guarded successor measures are lifted
/// through the source's priority obligation; player 1 takes the minimum,
/// player 2 the maximum; the result joins the previous round from below.
pub fn step(
    game: &FeaturedGame,
    ctx: &MeasureContext,
    solution: &Solution<ParityMeasure>,
) -> Solution<ParityMeasure> {
    let per_state = (0..game.state_count())
        .map(|s| {
            let priority = game.states()[s].priority.unwrap();
            let backed = fold_state(
                game,
                s,
                |t, owner| {
                    let neutral = match owner {
                        Player::One => ParityMeasure::Top,
                        Player::Two => ctx.zero(),
                    };
                    transition_backup(game, solution, t, neutral, |m| ctx.prog(m, priority))
                },
                |a, b| match game.states()[s].owner {
                    Player::One => a.clone().min(b.clone()),
                    Player::Two => a.clone().max(b.clone()),
                },
            );
            solution.state(s).combine(&backed, |a, b| a.clone().max(b.clone()))
        })
        .collect();
    Solution::new(per_state)
}

/// Canonicalized winners from an arbitrary state's measure family.
pub fn winners_at(solution: &Solution<ParityMeasure>, state: usize) -> FeatureFunction<bool> {
    solution.state(state).map(|m| !m.is_top()).reduce()
}
