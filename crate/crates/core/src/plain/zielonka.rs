//! An independent parity oracle: recursive decomposition by extremal
//! priority, under the same minimum-parity convention as the progress
//! measure solver.

use crate::error::Result;
use crate::game::{Game, GameKind, Player};
use crate::plain::check_kind;

/// The winner of every state.
pub fn zielonka_winners(game: &Game) -> Result<Vec<Player>> {
    check_kind(game, GameKind::Parity)?;
    game.require_non_blocking()?;
    let all = vec![true; game.state_count()];
    let (w1, _) = solve(game, all);
    Ok((0..game.state_count())
        .map(|s| if w1[s] { Player::One } else { Player::Two })
        .collect())
}

fn solve(game: &Game, region: Vec<bool>) -> (Vec<bool>, Vec<bool>) {
    let n = game.state_count();
    if !region.iter().any(|&b| b) {
        return (vec![false; n], vec![false; n]);
    }

    let min_priority = (0..n)
        .filter(|&s| region[s])
        .map(|s| game.states()[s].priority.unwrap())
        .min()
        .unwrap();
    let favored = if min_priority % 2 == 0 { Player::One } else { Player::Two };

    let mut targets = vec![false; n];
    for s in 0..n {
        targets[s] = region[s] && game.states()[s].priority.unwrap() == min_priority;
    }
    let head = attractor(game, &region, favored, targets);

    let rest = minus(&region, &head);
    let (w1, w2) = solve(game, rest);
    let (_, won_opponent) = split(favored, w1, w2);

    if !won_opponent.iter().any(|&b| b) {
        // The opponent wins nothing outside the head region, so the favored
        // player wins all of it.
        return merge(favored, region, won_opponent);
    }

    let escape = attractor(game, &region, opponent(favored), won_opponent);
    let rest = minus(&region, &escape);
    let (w1, w2) = solve(game, rest);
    let (won_favored, mut won_opponent) = split(favored, w1, w2);
    for s in 0..n {
        won_opponent[s] |= escape[s];
    }
    merge(favored, won_favored, won_opponent)
}

fn opponent(player: Player) -> Player {
    match player {
        Player::One => Player::Two,
        Player::Two => Player::One,
    }
}

fn split(favored: Player, w1: Vec<bool>, w2: Vec<bool>) -> (Vec<bool>, Vec<bool>) {
    match favored {
        Player::One => (w1, w2),
        Player::Two => (w2, w1),
    }
}

fn merge(favored: Player, won_favored: Vec<bool>, won_opponent: Vec<bool>) -> (Vec<bool>, Vec<bool>) {
    match favored {
        Player::One => (won_favored, won_opponent),
        Player::Two => (won_opponent, won_favored),
    }
}

fn minus(a: &[bool], b: &[bool]) -> Vec<bool> {
    a.iter().zip(b).map(|(&x, &y)| x && !y).collect()
}

/// States from which `player` can force the play into `targets` while
/// staying inside `region`.
fn attractor(game: &Game, region: &[bool], player: Player, mut targets: Vec<bool>) -> Vec<bool> {
    loop {
        let mut changed = false;
        for s in 0..game.state_count() {
            if !region[s] || targets[s] {
                continue;
            }
            let mut successors = game
                .outgoing(s)
                .iter()
                .map(|&t| game.transitions()[t].target)
                .filter(|&t| region[t])
                .peekable();
            let attracted = if game.states()[s].owner == player {
                successors.any(|t| targets[t])
            } else {
                successors.peek().is_some() && successors.all(|t| targets[t])
            };
            if attracted {
                targets[s] = true;
                changed = true;
            }
        }
        if !changed {
            return targets;
        }
    }
}
