//! Featured energy games.

use crate::error::Result;
use crate::featured::{check_kind, exceeded, fold_state, transition_backup, Solution, SolveStats, Solved};
use crate::game::{FeaturedGame, GameKind, Player};
use crate::logic::FeatureFunction;
use crate::value::EnergyValue;

/// The credit bound of a featured energy game, over all transitions
/// regardless of guards. It dominates every projection's own bound, which
/// keeps the family-based fixed point sound for every product.
pub fn energy_bound(game: &FeaturedGame) -> u64 {
    (0..game.state_count())
        .map(|s| {
            game.outgoing(s)
                .iter()
                .map(|&t| (-game.weight_int(t)).max(0) as u64)
                .max()
                .unwrap_or(0)
        })
        .sum()
}

/// Per-state, per-product minimal initial credits.
pub fn solve_energy(game: &FeaturedGame) -> Result<Solved<EnergyValue>> {
    check_kind(game, GameKind::Energy)?;
    game.require_non_blocking()?;

    let ctx = game.products();
    let bound = energy_bound(game);
    let mut solution = Solution::new(
        game.states()
            .iter()
            .map(|_| FeatureFunction::constant(ctx, EnergyValue::Finite(0)))
            .collect(),
    );
    let mut stats = SolveStats::default();
    stats.record(&solution);

    let cap = game.state_count() * (bound as usize + 1) + 2;
    for _ in 0..cap {
        let next = step(game, &solution, bound);
        stats.iterations += 1;
        stats.record(&next);
        if next.semantically_equal(&solution, ctx) {
            return Ok(Solved { solution, stats });
        }
        solution = next;
    }
    Err(exceeded(cap, "featured energy fixed point"))
}

/// One round: per transition the guarded successor credits are discharged
/// by the weight; player 1 takes the minimum, player 2 the maximum; the
/// result joins the previous round from below.
pub fn step(game: &FeaturedGame, solution: &Solution<EnergyValue>, bound: u64) -> Solution<EnergyValue> {
    let per_state = (0..game.state_count())
        .map(|s| {
            let backed = fold_state(
                game,
                s,
                |t, owner| {
                    let weight = game.weight_int(t);
                    let neutral = match owner {
                        Player::One => EnergyValue::Top,
                        Player::Two => EnergyValue::Finite(0),
                    };
                    transition_backup(game, solution, t, neutral, |&v| v.ominus(weight, bound))
                },
                |&a, &b| match game.states()[s].owner {
                    Player::One => a.min(b),
                    Player::Two => a.max(b),
                },
            );
            solution.state(s).combine(&backed, |&a, &b| a.max(b))
        })
        .collect();
    Solution::new(per_state)
}
