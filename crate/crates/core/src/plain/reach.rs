//! Reachability: least fixed point of the backward game attractor.

use crate::error::Result;
use crate::game::{Game, GameKind, Player};
use crate::plain::{check_kind, exceeded};

/// Per-state winners of the reachability game: `true` iff player 1 can force
/// a visit to an accepting state.
pub fn solve_reachability(game: &Game) -> Result<Vec<bool>> {
    check_kind(game, GameKind::Reachability)?;
    game.require_non_blocking()?;

    let mut won: Vec<bool> = game.states().iter().map(|s| s.accepting).collect();
    let cap = game.state_count() + 2;
    for _ in 0..cap {
        let next = attractor_step(game, &won);
        if next == won {
            return Ok(won);
        }
        won = next;
    }
    Err(exceeded(cap, "reachability fixed point"))
}

pub(crate) fn attractor_step(game: &Game, won: &[bool]) -> Vec<bool> {
    (0..game.state_count())
        .map(|s| {
            let mut targets = game.outgoing(s).iter().map(|&t| won[game.transitions()[t].target]);
            let attracted = match game.states()[s].owner {
                Player::One => targets.any(|w| w),
                Player::Two => targets.all(|w| w),
            };
            won[s] || attracted
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{PlainTransition, StateInfo};

    pub(crate) fn plain_game(
        kind: GameKind,
        specs: &[(&str, Player, bool)],
        edges: &[(usize, usize)],
    ) -> Game {
        let states = specs
            .iter()
            .map(|(id, owner, accepting)| StateInfo {
                id: id.to_string(),
                owner: *owner,
                accepting: *accepting,
                priority: None,
            })
            .collect();
        let transitions = edges
            .iter()
            .enumerate()
            .map(|(i, &(source, target))| PlainTransition { source, target, weight: None, origin: i })
            .collect();
        Game::from_parts(kind, states, 0, transitions)
    }

    #[test]
    fn initial_accepting_wins_immediately() {
        let game = plain_game(
            GameKind::Reachability,
            &[("i", Player::One, true)],
            &[(0, 0)],
        );
        let won = solve_reachability(&game).unwrap();
        assert!(won[0]);
    }

    #[test]
    fn player_two_escapes_into_sink() {
        // Player 2 at the initial state moves into a non-accepting sink.
        let game = plain_game(
            GameKind::Reachability,
            &[("i", Player::Two, false), ("sink", Player::One, false), ("f", Player::One, true)],
            &[(0, 1), (0, 2), (1, 1), (2, 2)],
        );
        let won = solve_reachability(&game).unwrap();
        assert!(!won[0]);
        assert!(won[2]);
    }

    #[test]
    fn blocking_game_is_rejected() {
        let game = plain_game(GameKind::Reachability, &[("i", Player::One, true)], &[]);
        assert!(solve_reachability(&game).is_err());
    }

    /// Bounded-horizon forward induction; independent of the attractor.
    pub(crate) fn brute_force_reach(game: &Game) -> Vec<bool> {
        let n = game.state_count();
        let mut win: Vec<bool> = game.states().iter().map(|s| s.accepting).collect();
        for _ in 0..n {
            win = (0..n)
                .map(|s| {
                    if game.states()[s].accepting {
                        return true;
                    }
                    let mut succ =
                        game.outgoing(s).iter().map(|&t| win[game.transitions()[t].target]);
                    match game.states()[s].owner {
                        Player::One => succ.any(|w| w),
                        Player::Two => succ.all(|w| w),
                    }
                })
                .collect();
        }
        win
    }

    #[test]
    fn agrees_with_brute_force_on_random_games() {
        use crate::random::{random_featured_game, GameConfig};
        for seed in 0..60 {
            let config = GameConfig {
                kind: GameKind::Reachability,
                max_states: 8,
                n_features: 0,
                ..GameConfig::default()
            };
            let game = random_featured_game(&config, seed).unwrap();
            let plain = game.project_by_index(0);
            assert_eq!(
                solve_reachability(&plain).unwrap(),
                brute_force_reach(&plain),
                "seed {seed}"
            );
        }
    }
}
