//! Featured discounted games: symbolic value iteration.

use crate::error::Result;
use crate::featured::{check_kind, fold_state, transition_backup, Solution, SolveStats, Solved};
use crate::game::{FeaturedGame, GameKind, Player};
use crate::logic::FeatureFunction;
use crate::plain::check_discount_params as check_params;

/// Per-state, per-product discounted values. Iterates from the zero family
/// until the largest per-product change drops below `epsilon`; per product
/// the result is within `epsilon * lambda / (1 - lambda)` of the exact
/// fixed point.
pub fn solve_discounted(game: &FeaturedGame, lambda: f64, epsilon: f64) -> Result<Solved<f64>> {
    check_kind(game, GameKind::Discounted)?;
    check_params(lambda, epsilon)?;
    game.require_non_blocking()?;

    let ctx = game.products();
    let mut solution = Solution::new(
        game.states().iter().map(|_| FeatureFunction::constant(ctx, 0.0)).collect(),
    );
    let mut stats = SolveStats::default();
    stats.record(&solution);

    loop {
        let next = step(game, &solution, lambda);
        stats.iterations += 1;
        stats.record(&next);
        let delta = sup_distance(&solution, &next, ctx.len());
        solution = next;
        if delta < epsilon {
            return Ok(Solved { solution, stats });
        }
    }
}

fn sup_distance(a: &Solution<f64>, b: &Solution<f64>, n_products: usize) -> f64 {
    let mut sup = 0.0f64;
    for s in 0..a.state_count() {
        for i in 0..n_products {
            sup = sup.max((a.value_at(s, i) - b.value_at(s, i)).abs());
        }
    }
    sup
}

/// One round of the contracting backup; unlike the other kinds there is no
/// join with the previous round.
pub fn step(game: &FeaturedGame, solution: &Solution<f64>, lambda: f64) -> Solution<f64> {
    let per_state = (0..game.state_count())
        .map(|s| {
            fold_state(
                game,
                s,
                |t, owner| {
                    let weight = game.weight_real(t);
                    let neutral = match owner {
                        Player::One => f64::NEG_INFINITY,
                        Player::Two => f64::INFINITY,
                    };
                    transition_backup(game, solution, t, neutral, |&v| weight + lambda * v)
                },
                |&a, &b| match game.states()[s].owner {
                    Player::One => a.max(b),
                    Player::Two => a.min(b),
                },
            )
        })
        .collect();
    Solution::new(per_state)
}
