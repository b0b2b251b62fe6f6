//! Discounted games: value iteration for the contracting backup operator.

use crate::error::{Error, Result};
use crate::game::{Game, GameKind, Player};
use crate::plain::check_kind;

/// Per-state discounted values: player 1 maximizes, player 2 minimizes the
/// discounted weight sum. Iterates from the zero function until the maximal
/// change drops below `epsilon`; the result is within
/// `epsilon * lambda / (1 - lambda)` of the exact fixed point.
pub fn solve_discounted(game: &Game, lambda: f64, epsilon: f64) -> Result<Vec<f64>> {
    check_kind(game, GameKind::Discounted)?;
    check_params(lambda, epsilon)?;
    game.require_non_blocking()?;

    let mut values = vec![0.0; game.state_count()];
    loop {
        let next = step(game, &values, lambda);
        let delta = values
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        values = next;
        if delta < epsilon {
            return Ok(values);
        }
    }
}

pub(crate) fn check_params(lambda: f64, epsilon: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::parameter(format!(
            "discounting factor must lie in (0, 1), got {lambda}"
        )));
    }
    if !(epsilon > 0.0) {
        return Err(Error::parameter(format!("precision must be positive, got {epsilon}")));
    }
    Ok(())
}

fn step(game: &Game, values: &[f64], lambda: f64) -> Vec<f64> {
    (0..game.state_count())
        .map(|s| {
            let backed = game
                .outgoing(s)
                .iter()
                .map(|&t| game.weight_real(t) + lambda * values[game.transitions()[t].target]);
            match game.states()[s].owner {
                Player::One => backed.fold(f64::NEG_INFINITY, f64::max),
                Player::Two => backed.fold(f64::INFINITY, f64::min),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{PlainTransition, StateInfo};

    fn self_loop(weight: f64) -> Game {
        let states = vec![StateInfo {
            id: "i".into(),
            owner: Player::One,
            accepting: false,
            priority: None,
        }];
        let transitions =
            vec![PlainTransition { source: 0, target: 0, weight: Some(weight), origin: 0 }];
        Game::from_parts(GameKind::Discounted, states, 0, transitions)
    }

    #[test]
    fn zero_loop_is_zero() {
        let v = solve_discounted(&self_loop(0.0), 0.5, 1e-9).unwrap();
        assert!(v[0].abs() < 1e-8);
    }

    #[test]
    fn unit_loop_is_geometric_series() {
        let v = solve_discounted(&self_loop(1.0), 0.5, 1e-12).unwrap();
        assert!((v[0] - 2.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_parameters() {
        let g = self_loop(0.0);
        assert!(solve_discounted(&g, 1.0, 1e-9).is_err());
        assert!(solve_discounted(&g, 0.5, 0.0).is_err());
        assert!(solve_discounted(&g, -0.1, 1e-9).is_err());
    }

    #[test]
    fn satisfies_the_fixed_point_equation() {
        use crate::random::{random_featured_game, GameConfig};
        let lambda = 0.9;
        let epsilon = 1e-10;
        for seed in 0..40 {
            let config = GameConfig {
                kind: GameKind::Discounted,
                max_states: 8,
                n_features: 0,
                ..GameConfig::default()
            };
            let game = random_featured_game(&config, seed).unwrap().project_by_index(0);
            let values = solve_discounted(&game, lambda, epsilon).unwrap();
            let backed = step(&game, &values, lambda);
            let tolerance = epsilon * lambda / (1.0 - lambda) * 2.0;
            for (s, (v, b)) in values.iter().zip(&backed).enumerate() {
                assert!(
                    (v - b).abs() <= tolerance,
                    "seed {seed}, state {s}: {v} vs {b}"
                );
            }
        }
    }
}
