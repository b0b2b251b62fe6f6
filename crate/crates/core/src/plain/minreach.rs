//! Minimum reachability: weighted attractor iterated down from infinity.

use crate::error::{Error, Result};
use crate::game::{Game, GameKind, Player};
use crate::plain::{check_kind, exceeded};
use crate::value::Cost;

/// Per-state minimum reachability values: the least accumulated weight with
/// which player 1 can force a visit to an accepting state, maximized over
/// player-2 behaviour. Requires non-negative integer weights.
pub fn solve_min_reach(game: &Game) -> Result<Vec<Cost>> {
    check_kind(game, GameKind::MinReachability)?;
    game.require_non_blocking()?;
    let mut max_weight = 0u64;
    for (i, t) in game.transitions().iter().enumerate() {
        let w = t.weight.unwrap_or(0.0);
        if w < 0.0 || w.fract() != 0.0 {
            return Err(Error::validation(format!(
                "min-reachability weights must be non-negative integers; \
                 transition {i} has weight {w}"
            )));
        }
        max_weight = max_weight.max(w as u64);
    }

    let mut values: Vec<Cost> = game
        .states()
        .iter()
        .map(|s| if s.accepting { Cost::Finite(0) } else { Cost::Infinite })
        .collect();
    let n = game.state_count();
    let cap = (n * n).saturating_mul(max_weight.max(1) as usize) + 2;
    for _ in 0..cap {
        let next = step(game, &values);
        if next == values {
            return Ok(values);
        }
        values = next;
    }
    Err(exceeded(cap, "minimum reachability fixed point"))
}

pub(crate) fn step(game: &Game, values: &[Cost]) -> Vec<Cost> {
    (0..game.state_count())
        .map(|s| {
            let backed = game
                .outgoing(s)
                .iter()
                .map(|&t| values[game.transitions()[t].target].add(game.weight_int(t) as u64));
            let backed = match game.states()[s].owner {
                Player::One => backed.min(),
                Player::Two => backed.max(),
            }
            .unwrap_or(Cost::Infinite);
            values[s].min(backed)
        })
        .collect()
}
