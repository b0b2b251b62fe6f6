//! Featured minimum reachability.

use crate::error::{Error, Result};
use crate::featured::{check_kind, exceeded, fold_state, transition_backup, Solution, SolveStats, Solved};
use crate::game::{FeaturedGame, GameKind, Player};
use crate::logic::FeatureFunction;
use crate::value::Cost;

/// Per-state, per-product minimum reachability values.
pub fn solve_min_reach(game: &FeaturedGame) -> Result<Solved<Cost>> {
    check_kind(game, GameKind::MinReachability)?;
    game.require_non_blocking()?;
    let mut max_weight = 0u64;
    for (i, t) in game.transitions().iter().enumerate() {
        let w = t.weight.unwrap_or(0.0);
        if w < 0.0 {
            return Err(Error::validation(format!(
                "min-reachability weights must be non-negative; transition {i} has weight {w}"
            )));
        }
        max_weight = max_weight.max(w as u64);
    }

    let ctx = game.products();
    let mut solution = Solution::new(
        game.states()
            .iter()
            .map(|s| {
                let v = if s.accepting { Cost::Finite(0) } else { Cost::Infinite };
                FeatureFunction::constant(ctx, v)
            })
            .collect(),
    );
    let mut stats = SolveStats::default();
    stats.record(&solution);

    let n = game.state_count();
    let cap = (n * n).saturating_mul(max_weight.max(1) as usize) + 2;
    for _ in 0..cap {
        let next = step(game, &solution);
        stats.iterations += 1;
        stats.record(&next);
        if next.semantically_equal(&solution, ctx) {
            return Ok(Solved { solution, stats });
        }
        solution = next;
    }
    Err(exceeded(cap, "featured minimum reachability fixed point"))
}

/// One round: per transition, add the weight to the guarded successor
/// values; player 1 takes the minimum, player 2 the maximum; the result is
/// floored by the previous round.
pub fn step(game: &FeaturedGame, solution: &Solution<Cost>) -> Solution<Cost> {
    let per_state = (0..game.state_count())
        .map(|s| {
            let backed = fold_state(
                game,
                s,
                |t, owner| {
                    let weight = game.weight_int(t) as u64;
                    let neutral = match owner {
                        Player::One => Cost::Infinite,
                        Player::Two => Cost::Finite(0),
                    };
                    transition_backup(game, solution, t, neutral, |&c| c.add(weight))
                },
                |&a, &b| match game.states()[s].owner {
                    Player::One => a.min(b),
                    Player::Two => a.max(b),
                },
            );
            solution.state(s).combine(&backed, |&a, &b| a.min(b))
        })
        .collect();
    Solution::new(per_state)
}
