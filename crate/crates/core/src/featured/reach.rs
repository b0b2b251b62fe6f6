//! Featured reachability: family-based attractor over boolean functions.

use crate::error::Result;
use crate::featured::{check_kind, exceeded, fold_state, transition_backup, Solution, SolveStats, Solved};
use crate::game::{FeaturedGame, GameKind, Player};
use crate::logic::FeatureFunction;

/// Per-state, per-product reachability winners. Looking the result up at a
/// product's characteristic formula equals solving the projection.
pub fn solve_reachability(game: &FeaturedGame) -> Result<Solved<bool>> {
    check_kind(game, GameKind::Reachability)?;
    game.require_non_blocking()?;

    let ctx = game.products();
    let mut solution = Solution::new(
        game.states()
            .iter()
            .map(|s| FeatureFunction::constant(ctx, s.accepting))
            .collect(),
    );
    let mut stats = SolveStats::default();
    stats.record(&solution);

    let cap = game.state_count() + 2;
    for _ in 0..cap {
        let next = step(game, &solution);
        stats.iterations += 1;
        stats.record(&next);
        if next.semantically_equal(&solution, ctx) {
            return Ok(Solved { solution, stats });
        }
        solution = next;
    }
    Err(exceeded(cap, "featured reachability fixed point"))
}

/// One round: per state, the guarded backups of all successors combined
/// disjunctively (player 1) or conjunctively (player 2), joined with the
/// previous round.
pub fn step(game: &FeaturedGame, solution: &Solution<bool>) -> Solution<bool> {
    let per_state = (0..game.state_count())
        .map(|s| {
            let backed = fold_state(
                game,
                s,
                |t, owner| {
                    let neutral = matches!(owner, Player::Two);
                    transition_backup(game, solution, t, neutral, |&b| b)
                },
                |&a, &b| match game.states()[s].owner {
                    Player::One => a || b,
                    Player::Two => a && b,
                },
            );
            solution.state(s).combine(&backed, |&a, &b| a || b)
        })
        .collect();
    Solution::new(per_state)
}
