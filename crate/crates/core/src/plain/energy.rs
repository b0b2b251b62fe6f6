//! Energy games: minimal sufficient initial credit via a bounded lattice
//! fixed point.

use crate::error::Result;
use crate::game::{Game, GameKind, Player};
use crate::plain::{check_kind, exceeded};
use crate::value::EnergyValue;

/// The credit bound `M`: the sum over states of the largest weight drain on
/// any of their outgoing transitions. Any bound at least this large is
/// sound; finite fixed-point values never exceed it.
pub fn energy_bound(game: &Game) -> u64 {
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

/// Per-state minimal initial credits with which player 1 can keep the
/// running weight sum non-negative forever; top marks states where no finite
/// credit suffices.
pub fn solve_energy(game: &Game) -> Result<Vec<EnergyValue>> {
    check_kind(game, GameKind::Energy)?;
    game.require_non_blocking()?;

    let bound = energy_bound(game);
    let mut values = vec![EnergyValue::Finite(0); game.state_count()];
    let cap = game.state_count() * (bound as usize + 1) + 2;
    for _ in 0..cap {
        let next = step(game, &values, bound);
        if next == values {
            return Ok(values);
        }
        values = next;
    }
    Err(exceeded(cap, "energy fixed point"))
}

pub(crate) fn step(game: &Game, values: &[EnergyValue], bound: u64) -> Vec<EnergyValue> {
    (0..game.state_count())
        .map(|s| {
            let backed = game
                .outgoing(s)
                .iter()
                .map(|&t| values[game.transitions()[t].target].ominus(game.weight_int(t), bound));
            let backed = match game.states()[s].owner {
                Player::One => backed.min(),
                Player::Two => backed.max(),
            }
            .unwrap_or(EnergyValue::Top);
            values[s].max(backed)
        })
        .collect()
}
