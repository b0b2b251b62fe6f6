//! Parity games under the minimum-parity convention, solved with small
//! progress measures.
//!
//! Player 1 wins iff the least priority occurring infinitely often is even.
//! Measures are tuples indexed by priorities `0..=d` with even components
//! pinned to zero and the odd component `i` bounded by the number of states
//! of priority `i`; `top` marks player-2-winning states.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::game::{Game, GameKind, Player, StateInfo};
use crate::plain::{check_kind, exceeded};
use crate::value::ParityMeasure;

/// The measure domain of a parity game: maximal priority and per-priority
/// component caps. The domain depends only on the states, so a featured game
/// and all of its projections share it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasureContext {
    max_priority: u32,
    caps: Vec<u64>,
}

impl MeasureContext {
    pub fn for_states(states: &[StateInfo]) -> Result<Self> {
        let mut max_priority = 0;
        for s in states {
            let p = s.priority.ok_or_else(|| {
                Error::validation(format!("state `{}` is missing a priority", s.id))
            })?;
            max_priority = max_priority.max(p);
        }
        let mut caps = vec![0u64; max_priority as usize + 1];
        for s in states {
            let p = s.priority.unwrap() as usize;
            if p % 2 == 1 {
                caps[p] += 1;
            }
        }
        Ok(MeasureContext { max_priority, caps })
    }

    pub fn max_priority(&self) -> u32 {
        self.max_priority
    }

    pub fn zero(&self) -> ParityMeasure {
        ParityMeasure::zero(self.max_priority)
    }

    /// The number of finite measures, bounding the lift count per state.
    fn domain_size(&self) -> usize {
        self.caps
            .iter()
            .enumerate()
            .filter(|(i, _)| i % 2 == 1)
            .map(|(_, &c)| c as usize + 1)
            .product()
    }

    /// The least measure required at a state of priority `state_priority`
    /// whose chosen successor carries `target`: at even priorities the least
    /// measure agreeing with `target` on components up to the priority, at
    /// odd priorities the least measure strictly above it there (or top).
    pub fn prog(&self, target: &ParityMeasure, state_priority: u32) -> ParityMeasure {
        let Some(comps) = target.components() else {
            return ParityMeasure::Top;
        };
        let p = state_priority as usize;
        let mut out = comps.to_vec();
        if p % 2 == 0 {
            for x in out.iter_mut().skip(p + 1) {
                *x = 0;
            }
            return ParityMeasure::Finite(out);
        }
        // Find the deepest odd component at or below p that can still be
        // incremented; everything after it resets to zero.
        let mut j = p;
        loop {
            if out[j] < self.caps[j] {
                out[j] += 1;
                for x in out.iter_mut().skip(j + 1) {
                    *x = 0;
                }
                return ParityMeasure::Finite(out);
            }
            if j < 2 {
                return ParityMeasure::Top;
            }
            j -= 2;
        }
    }
}

/// Per-state least progress measures; a state is won by player 1 iff its
/// measure is not top.
pub fn solve_parity(game: &Game) -> Result<Vec<ParityMeasure>> {
    check_kind(game, GameKind::Parity)?;
    game.require_non_blocking()?;
    let ctx = MeasureContext::for_states(game.states())?;

    let mut measures = vec![ctx.zero(); game.state_count()];
    let cap = game.state_count() * (ctx.domain_size() + 1) + 2;
    for _ in 0..cap {
        let next = step(game, &ctx, &measures);
        if next == measures {
            return Ok(measures);
        }
        measures = next;
    }
    Err(exceeded(cap, "parity fixed point"))
}

pub(crate) fn step(
    game: &Game,
    ctx: &MeasureContext,
    measures: &[ParityMeasure],
) -> Vec<ParityMeasure> {
    (0..game.state_count())
        .map(|s| {
            let priority = game.states()[s].priority.unwrap();
            let backed = game
                .outgoing(s)
                .iter()
                .map(|&t| ctx.prog(&measures[game.transitions()[t].target], priority));
            let backed = match game.states()[s].owner {
                Player::One => backed.min(),
                Player::Two => backed.max(),
            }
            .unwrap_or(ParityMeasure::Top);
            if backed.cmp(&measures[s]) == Ordering::Greater {
                backed
            } else {
                measures[s].clone()
            }
        })
        .collect()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::game::PlainTransition;

    pub(crate) fn parity_game(
        specs: &[(&str, Player, u32)],
        edges: &[(usize, usize)],
    ) -> Game {
        let states = specs
            .iter()
            .map(|(id, owner, priority)| StateInfo {
                id: id.to_string(),
                owner: *owner,
                accepting: false,
                priority: Some(*priority),
            })
            .collect();
        let transitions = edges
            .iter()
            .enumerate()
            .map(|(i, &(source, target))| PlainTransition { source, target, weight: None, origin: i })
            .collect();
        Game::from_parts(GameKind::Parity, states, 0, transitions)
    }

    #[test]
    fn all_even_priorities_win_everywhere() {
        let g = parity_game(
            &[("a", Player::One, 0), ("b", Player::Two, 0)],
            &[(0, 1), (1, 0)],
        );
        let m = solve_parity(&g).unwrap();
        assert!(m.iter().all(|x| !x.is_top()));
        assert!(m.iter().all(|x| *x == ParityMeasure::zero(0)));
    }

    #[test]
    fn odd_self_loop_loses() {
        let g = parity_game(&[("a", Player::One, 1)], &[(0, 0)]);
        let m = solve_parity(&g).unwrap();
        assert!(m[0].is_top());
    }

    #[test]
    fn min_parity_prefers_low_even() {
        // A cycle visiting priorities 0 and 1 infinitely often: the least
        // priority seen infinitely often is 0, so player 1 wins.
        let g = parity_game(
            &[("a", Player::One, 0), ("b", Player::One, 1)],
            &[(0, 1), (1, 0)],
        );
        let m = solve_parity(&g).unwrap();
        assert!(!m[0].is_top());
        assert!(!m[1].is_top());
    }

    #[test]
    fn prog_examples() {
        // Domain: priorities up to 3, one state of priority 1, two of
        // priority 3.
        let ctx = MeasureContext {
            max_priority: 3,
            caps: vec![0, 1, 0, 2],
        };
        let m = ParityMeasure::Finite(vec![0, 1, 0, 1]);
        // Even source priority: copy the prefix, reset the rest.
        assert_eq!(ctx.prog(&m, 0), ParityMeasure::Finite(vec![0, 0, 0, 0]));
        assert_eq!(ctx.prog(&m, 2), ParityMeasure::Finite(vec![0, 1, 0, 0]));
        // Odd source priority: strictly increase within the prefix.
        assert_eq!(ctx.prog(&m, 3), ParityMeasure::Finite(vec![0, 1, 0, 2]));
        let saturated = ParityMeasure::Finite(vec![0, 1, 0, 2]);
        assert_eq!(ctx.prog(&saturated, 3), ParityMeasure::Top);
        assert_eq!(ctx.prog(&saturated, 1), ParityMeasure::Top);
        assert_eq!(ctx.prog(&ParityMeasure::Top, 0), ParityMeasure::Top);
    }
}
