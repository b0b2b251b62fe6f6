//! Model checking as a game: the product of an FTS and a mu-calculus
//! formula, as a featured parity game in the solver's min-parity convention.
//!
//! Game states are pairs of a system state and a subformula. Disjunctions
//! and diamonds belong to player 1, conjunctions, boxes and fixpoint
//! unfoldings to player 2; fixpoint unfoldings carry priorities derived from
//! alternation depth (even for greatest, odd for least fixpoints, max-parity
//! reading). The construction then converts to min-parity by inverting
//! priorities, preserving the parity of every priority class.
//!
//! States that are stuck for some products are repaired to keep the game
//! non-blocking without changing winners: a state with no successors at all
//! gets a self-loop and the priority that makes looping a loss for its
//! owner; a state whose successors cover only part of the product set gets
//! an escape edge, guarded by the uncovered part, into a sink with the same
//! polarity.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::game::{FeaturedGame, FeaturedTransition, GameKind, GameMeta, Player, StateInfo};
use crate::logic::FeatureExpr;
use crate::trans::fts::Fts;
use crate::trans::mucalc::{alternation_depth, FixKind, MuFormula};

/// A translation result: the parity game plus any warnings (for instance a
/// modality over an action the system never uses).
#[derive(Debug)]
pub struct MucalcGame {
    pub game: FeaturedGame,
    pub warnings: Vec<String>,
}

struct Builder<'a> {
    fts: &'a Fts,
    formula_depths: HashMap<Arc<str>, u32>,
    ids: HashMap<(usize, MuFormula), usize>,
    states: Vec<StateInfo>,
    /// Max-parity priorities; converted at the end.
    priorities: Vec<u32>,
    transitions: Vec<FeaturedTransition>,
    queue: Vec<(usize, MuFormula, usize)>,
    sink_lose: Option<usize>,
    sink_win: Option<usize>,
}

/// Builds the featured parity game checking `formula` on `fts`.
pub fn mucalc_to_parity_game(fts: &Fts, formula: &MuFormula) -> Result<MucalcGame> {
    let mut warnings = Vec::new();
    for action in formula.actions() {
        if !fts.actions().iter().any(|a| a.as_str() == action.as_ref()) {
            warnings.push(format!(
                "modality action `{action}` does not occur in the system; \
                 the modality has no successors"
            ));
        }
    }

    let mut depths = HashMap::new();
    collect_depths(formula, formula, &mut depths)?;

    let mut builder = Builder {
        fts,
        formula_depths: depths,
        ids: HashMap::new(),
        states: Vec::new(),
        priorities: Vec::new(),
        transitions: Vec::new(),
        queue: Vec::new(),
        sink_lose: None,
        sink_win: None,
    };
    let initial = builder.state_id(fts.initial(), formula.clone());
    while let Some((fts_state, formula, id)) = builder.queue.pop() {
        builder.expand(fts_state, &formula, id)?;
    }

    // Convert max-parity to min-parity: invert, then shift to keep every
    // class's parity.
    let max_priority = builder.priorities.iter().copied().max().unwrap_or(0);
    let shift = max_priority % 2;
    let mut states = builder.states;
    for (s, p) in builder.priorities.iter().enumerate() {
        states[s].priority = Some(max_priority - p + shift);
    }

    let game = FeaturedGame::new(
        GameKind::Parity,
        fts.products().clone(),
        states,
        initial,
        builder.transitions,
        GameMeta { discount: None, notes: warnings.clone() },
    )?;
    Ok(MucalcGame { game, warnings })
}

fn collect_depths(
    formula: &MuFormula,
    root: &MuFormula,
    depths: &mut HashMap<Arc<str>, u32>,
) -> Result<()> {
    match formula {
        MuFormula::True | MuFormula::False | MuFormula::Var(_) => Ok(()),
        MuFormula::Or(a, b) | MuFormula::And(a, b) => {
            collect_depths(a, root, depths)?;
            collect_depths(b, root, depths)
        }
        MuFormula::Diamond(_, body) | MuFormula::Box(_, body) => collect_depths(body, root, depths),
        MuFormula::Fix(_, name, body) => {
            depths.insert(name.clone(), alternation_depth(name, root)?);
            collect_depths(body, root, depths)
        }
    }
}

impl Builder<'_> {
    fn state_id(&mut self, fts_state: usize, formula: MuFormula) -> usize {
        if let Some(&id) = self.ids.get(&(fts_state, formula.clone())) {
            return id;
        }
        let id = self.states.len();
        self.states.push(StateInfo {
            id: format!("{}|{}", self.fts.states()[fts_state], formula),
            owner: Player::One, // fixed up in expand
            accepting: false,
            priority: None,
        });
        self.priorities.push(0);
        self.ids.insert((fts_state, formula.clone()), id);
        self.queue.push((fts_state, formula, id));
        id
    }

    fn expand(&mut self, fts_state: usize, formula: &MuFormula, id: usize) -> Result<()> {
        let (owner, priority, successors) = match formula {
            MuFormula::False => (Player::One, 0, Vec::new()),
            MuFormula::True => (Player::Two, 0, Vec::new()),
            MuFormula::Or(a, b) => (
                Player::One,
                0,
                vec![
                    (fts_state, a.as_ref().clone(), FeatureExpr::tt()),
                    (fts_state, b.as_ref().clone(), FeatureExpr::tt()),
                ],
            ),
            MuFormula::And(a, b) => (
                Player::Two,
                0,
                vec![
                    (fts_state, a.as_ref().clone(), FeatureExpr::tt()),
                    (fts_state, b.as_ref().clone(), FeatureExpr::tt()),
                ],
            ),
            MuFormula::Diamond(action, body) => {
                (Player::One, 0, self.modal_successors(fts_state, action, body))
            }
            MuFormula::Box(action, body) => {
                (Player::Two, 0, self.modal_successors(fts_state, action, body))
            }
            MuFormula::Fix(kind, name, body) => {
                let depth = self.formula_depths[name];
                let priority = match kind {
                    FixKind::Greatest => 2 * (depth / 2),
                    FixKind::Least => 2 * (depth / 2) + 1,
                };
                let unfolded = body.substitute(name, formula);
                (Player::Two, priority, vec![(fts_state, unfolded, FeatureExpr::tt())])
            }
            MuFormula::Var(name) => {
                return Err(Error::internal(format!(
                    "unsubstituted variable `{name}` during game construction"
                )))
            }
        };

        self.states[id].owner = owner;
        self.priorities[id] = priority;

        if successors.is_empty() {
            // A dead end: its owner is stuck. Loop forever at the priority
            // that makes the loop losing for the owner.
            self.priorities[id] = match owner {
                Player::One => 1,
                Player::Two => 0,
            };
            self.transitions.push(FeaturedTransition {
                source: id,
                target: id,
                guard: FeatureExpr::tt(),
                weight: None,
            });
            return Ok(());
        }

        let mut covered = FeatureExpr::ff();
        for (target_state, target_formula, guard) in successors {
            covered = FeatureExpr::or(&covered, &guard);
            let target = self.state_id(target_state, target_formula);
            self.transitions.push(FeaturedTransition { source: id, target, guard, weight: None });
        }

        // Products not covered by any successor guard leave the owner stuck
        // there; give them an escape into the matching sink.
        let gap = FeatureExpr::not(&covered);
        if self.fts.products().sat(&gap)? {
            let sink = self.sink(owner);
            self.transitions.push(FeaturedTransition {
                source: id,
                target: sink,
                guard: gap,
                weight: None,
            });
        }
        Ok(())
    }

    fn modal_successors(
        &self,
        fts_state: usize,
        action: &str,
        body: &MuFormula,
    ) -> Vec<(usize, MuFormula, FeatureExpr)> {
        let action_index = self.fts.actions().iter().position(|a| a == action);
        let Some(action_index) = action_index else {
            return Vec::new();
        };
        self.fts
            .outgoing(fts_state)
            .filter(|(_, t)| t.action == action_index)
            .map(|(_, t)| (t.target, body.clone(), t.guard.clone()))
            .collect()
    }

    fn sink(&mut self, owner: Player) -> usize {
        let existing = match owner {
            Player::One => self.sink_lose,
            Player::Two => self.sink_win,
        };
        if let Some(id) = existing {
            return id;
        }
        let id = self.states.len();
        let (name, priority) = match owner {
            Player::One => ("stuck|lose", 1),
            Player::Two => ("stuck|win", 0),
        };
        self.states.push(StateInfo {
            id: name.to_string(),
            owner,
            accepting: false,
            priority: None,
        });
        self.priorities.push(priority);
        self.transitions.push(FeaturedTransition {
            source: id,
            target: id,
            guard: FeatureExpr::tt(),
            weight: None,
        });
        match owner {
            Player::One => self.sink_lose = Some(id),
            Player::Two => self.sink_win = Some(id),
        }
        id
    }
}
