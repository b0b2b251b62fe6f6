//! Locally optimal strategy extraction and strategy evaluation.
//!
//! For reachability kinds, achieving the backup equation alone does not
//! prevent a strategy from circling inside the winning region forever, so
//! the choice is additionally required to decrease the round at which the
//! fixed point stabilized; that is the attractor-stage strategy.

use crate::error::{Error, Result};
use crate::game::{Game, Player, Strategy};
use crate::plain::parity::MeasureContext;
use crate::plain::{solve, PlainSolution};
use crate::value::{Cost, Value};

/// Extracts a memoryless player-1 strategy achieving the solver's value at
/// every player-1 state: per state the first transition (in document order)
/// whose one-step backup attains the state value and, for reachability
/// kinds, whose target stabilized strictly earlier.
///
/// At accepting states of reachability kinds the backup equation is not
/// meaningful (the play is already won there) and the first best transition
/// is chosen without a consistency check.
pub fn extract_strategy(game: &Game, solution: &PlainSolution) -> Result<Strategy> {
    let ranks = match solution {
        PlainSolution::Reachability(_) => Some(reach_ranks(game)),
        PlainSolution::MinReachability(_) => Some(min_reach_ranks(game)),
        _ => None,
    };
    let mut choices = vec![None; game.state_count()];
    for s in 0..game.state_count() {
        if game.states()[s].owner != Player::One {
            continue;
        }
        if game.outgoing(s).is_empty() {
            return Err(Error::validation(format!(
                "state `{}` has no outgoing transition",
                game.states()[s].id
            )));
        }
        let check = !(game.kind().uses_accepting() && game.states()[s].accepting);
        choices[s] = Some(choose(game, solution, ranks.as_deref(), s, check)?);
    }
    Ok(Strategy::new(choices))
}

/// Per state, the round at which the reachability fixed point last changed
/// its value.
fn reach_ranks(game: &Game) -> Vec<usize> {
    let mut won: Vec<bool> = game.states().iter().map(|s| s.accepting).collect();
    let mut ranks = vec![0usize; game.state_count()];
    for round in 1.. {
        let next = crate::plain::reach::attractor_step(game, &won);
        if next == won {
            return ranks;
        }
        for s in 0..game.state_count() {
            if next[s] != won[s] {
                ranks[s] = round;
            }
        }
        won = next;
    }
    unreachable!()
}

fn min_reach_ranks(game: &Game) -> Vec<usize> {
    let mut values: Vec<Cost> = game
        .states()
        .iter()
        .map(|s| if s.accepting { Cost::Finite(0) } else { Cost::Infinite })
        .collect();
    let mut ranks = vec![0usize; game.state_count()];
    for round in 1.. {
        let next = crate::plain::minreach::step(game, &values);
        if next == values {
            return ranks;
        }
        for s in 0..game.state_count() {
            if next[s] != values[s] {
                ranks[s] = round;
            }
        }
        values = next;
    }
    unreachable!()
}

fn choose(
    game: &Game,
    solution: &PlainSolution,
    ranks: Option<&[usize]>,
    s: usize,
    check: bool,
) -> Result<usize> {
    let out = game.outgoing(s);
    let mismatch = |have: &dyn std::fmt::Display, want: &dyn std::fmt::Display| {
        Error::internal(format!(
            "no transition at `{}` achieves the solution value {want} (best backup {have})",
            game.states()[s].id
        ))
    };
    match solution {
        PlainSolution::Reachability(won) => {
            let ranks = ranks.unwrap();
            let val = |t: usize| won[game.transitions()[t].target];
            let best = out.iter().map(|&t| val(t)).max().unwrap();
            if check && best != won[s] {
                return Err(mismatch(&best, &won[s]));
            }
            if check && won[s] {
                // Progress towards the accepting set, not just staying in
                // the winning region.
                return out
                    .iter()
                    .copied()
                    .find(|&t| val(t) && ranks[game.transitions()[t].target] < ranks[s])
                    .ok_or_else(|| mismatch(&"no progressing successor", &won[s]));
            }
            Ok(*out.iter().find(|&&t| val(t) == best).unwrap())
        }
        PlainSolution::MinReachability(values) => {
            let ranks = ranks.unwrap();
            let val = |t: usize| values[game.transitions()[t].target].add(game.weight_int(t) as u64);
            let best = out.iter().map(|&t| val(t)).min().unwrap();
            if check && best != values[s] {
                return Err(mismatch(&best, &values[s]));
            }
            if check && values[s].is_finite() {
                return out
                    .iter()
                    .copied()
                    .find(|&t| val(t) == values[s] && ranks[game.transitions()[t].target] < ranks[s])
                    .ok_or_else(|| mismatch(&"no progressing successor", &values[s]));
            }
            Ok(*out.iter().find(|&&t| val(t) == best).unwrap())
        }
        PlainSolution::Discounted { values, lambda, epsilon } => {
            let val =
                |t: usize| game.weight_real(t) + lambda * values[game.transitions()[t].target];
            let best = out.iter().map(|&t| val(t)).fold(f64::NEG_INFINITY, f64::max);
            let tolerance = 2.0 * epsilon / (1.0 - lambda);
            if check && (best - values[s]).abs() > tolerance {
                return Err(mismatch(&best, &values[s]));
            }
            Ok(*out.iter().find(|&&t| val(t) == best).unwrap())
        }
        PlainSolution::Energy { values, bound } => {
            let val = |t: usize| values[game.transitions()[t].target].ominus(game.weight_int(t), *bound);
            let best = out.iter().map(|&t| val(t)).min().unwrap();
            if check && best != values[s] {
                return Err(mismatch(&best, &values[s]));
            }
            Ok(*out.iter().find(|&&t| val(t) == best).unwrap())
        }
        PlainSolution::Parity(measures) => {
            let ctx = MeasureContext::for_states(game.states())?;
            let priority = game.states()[s].priority.unwrap();
            let val = |t: usize| ctx.prog(&measures[game.transitions()[t].target], priority);
            let best = out.iter().map(|&t| val(t)).min().unwrap();
            if check && best != measures[s] {
                return Err(mismatch(&best, &measures[s]));
            }
            Ok(*out.iter().find(|&&t| val(t) == best).unwrap())
        }
    }
}

/// The game value at the initial state when player 1 plays `strategy` and
/// player 2 plays optimally against it. Matches the unrestricted game value
/// exactly when the strategy is optimal.
pub fn value_under_strategy(
    game: &Game,
    strategy: &Strategy,
    lambda: Option<f64>,
    epsilon: Option<f64>,
) -> Result<Value> {
    let restricted = game.apply_strategy(strategy)?;
    let solution = solve(&restricted, lambda, epsilon)?;
    Ok(solution.value_at(restricted.initial()))
}
