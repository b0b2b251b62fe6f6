//! Featured and plain two-player game structures, projection and
//! structural validation.

pub mod format;

use std::fmt;

use crate::error::{Error, Result};
use crate::logic::{Denotation, FeatureExpr, FeatureFunction, Product, ProductSet};

/// The objective a game is solved for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GameKind {
    Reachability,
    MinReachability,
    Discounted,
    Energy,
    Parity,
}

impl GameKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            GameKind::Reachability => "reachability",
            GameKind::MinReachability => "min-reachability",
            GameKind::Discounted => "discounted",
            GameKind::Energy => "energy",
            GameKind::Parity => "parity",
        }
    }

    pub fn from_str(text: &str) -> Result<Self> {
        Ok(match text {
            "reachability" | "reach" => GameKind::Reachability,
            "min-reachability" | "minreach" => GameKind::MinReachability,
            "discounted" => GameKind::Discounted,
            "energy" => GameKind::Energy,
            "parity" => GameKind::Parity,
            _ => return Err(Error::parse(format!("unknown game kind `{text}`"))),
        })
    }

    /// Whether transitions of this kind carry weights.
    pub fn is_weighted(&self) -> bool {
        matches!(
            self,
            GameKind::MinReachability | GameKind::Discounted | GameKind::Energy
        )
    }

    /// Whether accepting states are meaningful for this kind.
    pub fn uses_accepting(&self) -> bool {
        matches!(self, GameKind::Reachability | GameKind::MinReachability)
    }
}

impl fmt::Display for GameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Player {
    One,
    Two,
}

impl Player {
    pub fn number(&self) -> u8 {
        match self {
            Player::One => 1,
            Player::Two => 2,
        }
    }

    pub fn from_number(n: u8) -> Result<Self> {
        match n {
            1 => Ok(Player::One),
            2 => Ok(Player::Two),
            _ => Err(Error::parse(format!("owner must be 1 or 2, got {n}"))),
        }
    }
}

/// Per-state data shared by featured and plain games.
#[derive(Clone, Debug, PartialEq)]
pub struct StateInfo {
    pub id: String,
    pub owner: Player,
    pub accepting: bool,
    pub priority: Option<u32>,
}

/// A guarded, optionally weighted transition of a featured game.
#[derive(Clone, Debug)]
pub struct FeaturedTransition {
    pub source: usize,
    pub target: usize,
    pub guard: FeatureExpr,
    pub weight: Option<f64>,
}

/// Free-form document metadata. `discount` records the discounting factor a
/// generated game is meant to be solved with.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GameMeta {
    pub discount: Option<f64>,
    pub notes: Vec<String>,
}

impl GameMeta {
    pub fn is_empty(&self) -> bool {
        self.discount.is_none() && self.notes.is_empty()
    }
}

/// A two-player game graph over a product line: states with owners and
/// kind-specific annotations, transitions with feature guards.
#[derive(Clone, Debug)]
pub struct FeaturedGame {
    kind: GameKind,
    products: ProductSet,
    states: Vec<StateInfo>,
    initial: usize,
    transitions: Vec<FeaturedTransition>,
    outgoing: Vec<Vec<usize>>,
    guard_denots: Vec<Denotation>,
    meta: GameMeta,
}

impl FeaturedGame {
    pub fn new(
        kind: GameKind,
        products: ProductSet,
        states: Vec<StateInfo>,
        initial: usize,
        transitions: Vec<FeaturedTransition>,
        meta: GameMeta,
    ) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::validation("a game needs at least one state"));
        }
        if initial >= states.len() {
            return Err(Error::validation("initial state out of range"));
        }
        for (i, t) in transitions.iter().enumerate() {
            if t.source >= states.len() || t.target >= states.len() {
                return Err(Error::validation(format!("transition {i} has a dangling endpoint")));
            }
        }
        match kind {
            GameKind::Reachability | GameKind::MinReachability => {
                if !states.iter().any(|s| s.accepting) {
                    return Err(Error::validation(format!(
                        "{kind} games require a non-empty accepting set"
                    )));
                }
            }
            GameKind::Parity => {
                for s in &states {
                    if s.priority.is_none() {
                        return Err(Error::validation(format!(
                            "parity games require a priority on every state; `{}` has none",
                            s.id
                        )));
                    }
                }
            }
            _ => {}
        }
        if kind.is_weighted() {
            for (i, t) in transitions.iter().enumerate() {
                let w = t.weight.ok_or_else(|| {
                    Error::validation(format!("{kind} games require a weight on transition {i}"))
                })?;
                if !w.is_finite() {
                    return Err(Error::validation(format!(
                        "transition {i} has a non-finite weight"
                    )));
                }
                match kind {
                    GameKind::MinReachability => {
                        if w < 0.0 || w.fract() != 0.0 {
                            return Err(Error::validation(format!(
                                "min-reachability weights must be non-negative integers; \
                                 transition {i} has weight {w}"
                            )));
                        }
                    }
                    GameKind::Energy => {
                        if w.fract() != 0.0 {
                            return Err(Error::validation(format!(
                                "energy weights must be integers; transition {i} has weight {w}"
                            )));
                        }
                    }
                    _ => {}
                }
            }
        }
        let mut outgoing = vec![Vec::new(); states.len()];
        for (i, t) in transitions.iter().enumerate() {
            outgoing[t.source].push(i);
        }
        let guard_denots = transitions
            .iter()
            .map(|t| products.denotation(&t.guard))
            .collect::<Result<Vec<_>>>()?;
        Ok(FeaturedGame { kind, products, states, initial, transitions, outgoing, guard_denots, meta })
    }

    pub fn kind(&self) -> GameKind {
        self.kind
    }

    pub fn products(&self) -> &ProductSet {
        &self.products
    }

    pub fn states(&self) -> &[StateInfo] {
        &self.states
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn transitions(&self) -> &[FeaturedTransition] {
        &self.transitions
    }

    pub fn outgoing(&self, state: usize) -> &[usize] {
        &self.outgoing[state]
    }

    pub fn guard_denotation(&self, transition: usize) -> &Denotation {
        &self.guard_denots[transition]
    }

    pub fn meta(&self) -> &GameMeta {
        &self.meta
    }

    pub fn set_meta(&mut self, meta: GameMeta) {
        self.meta = meta;
    }

    pub fn state_index(&self, id: &str) -> Option<usize> {
        self.states.iter().position(|s| s.id == id)
    }

    /// Integer weight of a transition; valid for integer-weighted kinds
    /// after construction.
    pub fn weight_int(&self, transition: usize) -> i64 {
        self.transitions[transition].weight.unwrap_or(0.0) as i64
    }

    pub fn weight_real(&self, transition: usize) -> f64 {
        self.transitions[transition].weight.unwrap_or(0.0)
    }

    /// Keeps only the transitions enabled by `product` and drops guards.
    pub fn project(&self, product: Product) -> Result<Game> {
        let pi = self.products.index_of(product).ok_or_else(|| {
            Error::domain(format!(
                "product {} is not in the product set",
                product.render(self.products.features())
            ))
        })?;
        Ok(self.project_by_index(pi))
    }

    /// [`project`](Self::project) by product-set index.
    pub fn project_by_index(&self, product_index: usize) -> Game {
        let transitions = self
            .transitions
            .iter()
            .enumerate()
            .filter(|(i, _)| self.guard_denots[*i][product_index])
            .map(|(i, t)| PlainTransition {
                source: t.source,
                target: t.target,
                weight: t.weight,
                origin: i,
            })
            .collect();
        Game::from_parts(self.kind, self.states.clone(), self.initial, transitions)
    }

    /// Returns `(state, product)` pairs with no enabled outgoing transition.
    /// An empty list means the game is non-blocking.
    pub fn blocking_witnesses(&self) -> Vec<(usize, usize)> {
        let mut violations = Vec::new();
        for s in 0..self.states.len() {
            let mut covered = crate::logic::empty_denotation(self.products.len());
            for &t in &self.outgoing[s] {
                covered |= &self.guard_denots[t];
            }
            for p in 0..self.products.len() {
                if !covered[p] {
                    violations.push((s, p));
                }
            }
        }
        violations
    }

    /// Errors with the first blocking witness, if any.
    pub fn require_non_blocking(&self) -> Result<()> {
        match self.blocking_witnesses().first() {
            None => Ok(()),
            Some(&(s, p)) => Err(Error::validation(format!(
                "state `{}` has no enabled transition for product {}",
                self.states[s].id,
                self.products.product(p).render(self.products.features())
            ))),
        }
    }
}

/// A single-product game: the result of projecting a featured game.
#[derive(Clone, Debug)]
pub struct Game {
    kind: GameKind,
    states: Vec<StateInfo>,
    initial: usize,
    transitions: Vec<PlainTransition>,
    outgoing: Vec<Vec<usize>>,
}

/// A transition of a plain game. `origin` is the index of the featured
/// transition it was projected from, for strategies that must refer back.
#[derive(Clone, Debug)]
pub struct PlainTransition {
    pub source: usize,
    pub target: usize,
    pub weight: Option<f64>,
    pub origin: usize,
}

impl Game {
    pub fn from_parts(
        kind: GameKind,
        states: Vec<StateInfo>,
        initial: usize,
        transitions: Vec<PlainTransition>,
    ) -> Self {
        let mut outgoing = vec![Vec::new(); states.len()];
        for (i, t) in transitions.iter().enumerate() {
            outgoing[t.source].push(i);
        }
        Game { kind, states, initial, transitions, outgoing }
    }

    pub fn kind(&self) -> GameKind {
        self.kind
    }

    pub fn states(&self) -> &[StateInfo] {
        &self.states
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn transitions(&self) -> &[PlainTransition] {
        &self.transitions
    }

    pub fn outgoing(&self, state: usize) -> &[usize] {
        &self.outgoing[state]
    }

    pub fn weight_int(&self, transition: usize) -> i64 {
        self.transitions[transition].weight.unwrap_or(0.0) as i64
    }

    pub fn weight_real(&self, transition: usize) -> f64 {
        self.transitions[transition].weight.unwrap_or(0.0)
    }

    pub fn is_non_blocking(&self) -> bool {
        self.outgoing.iter().all(|out| !out.is_empty())
    }

    pub fn require_non_blocking(&self) -> Result<()> {
        match self.outgoing.iter().position(|out| out.is_empty()) {
            None => Ok(()),
            Some(s) => Err(Error::validation(format!(
                "state `{}` has no outgoing transition",
                self.states[s].id
            ))),
        }
    }

    /// Restricts every player-1 state to the single transition chosen by
    /// `strategy`; player-2 states are unchanged.
    pub fn apply_strategy(&self, strategy: &Strategy) -> Result<Game> {
        let mut transitions = Vec::new();
        for (s, info) in self.states.iter().enumerate() {
            match info.owner {
                Player::One => {
                    let t = strategy.choice(s).ok_or_else(|| {
                        Error::domain(format!("strategy undefined at player-1 state `{}`", info.id))
                    })?;
                    let tr = self.transitions.get(t).filter(|tr| tr.source == s).ok_or_else(
                        || {
                            Error::domain(format!(
                                "strategy at `{}` selects a transition absent from the game",
                                info.id
                            ))
                        },
                    )?;
                    transitions.push(tr.clone());
                }
                Player::Two => {
                    for &t in &self.outgoing[s] {
                        transitions.push(self.transitions[t].clone());
                    }
                }
            }
        }
        Ok(Game::from_parts(self.kind, self.states.clone(), self.initial, transitions))
    }
}

/// A memoryless player-1 strategy: one outgoing transition per player-1
/// state, addressed by transition index.
#[derive(Clone, Debug, PartialEq)]
pub struct Strategy {
    choices: Vec<Option<usize>>,
}

impl Strategy {
    pub fn new(choices: Vec<Option<usize>>) -> Self {
        Strategy { choices }
    }

    pub fn choice(&self, state: usize) -> Option<usize> {
        self.choices.get(state).copied().flatten()
    }

    pub fn choices(&self) -> &[Option<usize>] {
        &self.choices
    }

    pub fn set(&mut self, state: usize, transition: usize) {
        self.choices[state] = Some(transition);
    }
}

/// A memoryless featured player-1 strategy: per player-1 state, a canonical
/// guard-indexed choice of a featured transition (by index).
#[derive(Clone, Debug)]
pub struct FeaturedStrategy {
    choices: Vec<Option<FeatureFunction<usize>>>,
}

impl FeaturedStrategy {
    pub fn new(choices: Vec<Option<FeatureFunction<usize>>>) -> Self {
        FeaturedStrategy { choices }
    }

    pub fn choice(&self, state: usize) -> Option<&FeatureFunction<usize>> {
        self.choices.get(state).and_then(|c| c.as_ref())
    }

    pub fn choices(&self) -> &[Option<FeatureFunction<usize>>] {
        &self.choices
    }

    /// Projects to a plain strategy on `game.project(product)`: per state,
    /// the chosen featured transition looked up at `product`, translated to
    /// the projected game's transition indices.
    pub fn project(&self, game: &FeaturedGame, product: Product) -> Result<Strategy> {
        let pi = game.products().index_of(product).ok_or_else(|| {
            Error::domain(format!(
                "product {} is not in the product set",
                product.render(game.products().features())
            ))
        })?;
        let projection = game.project_by_index(pi);
        let mut choices = vec![None; game.state_count()];
        for (s, choice) in self.choices.iter().enumerate() {
            let Some(function) = choice else { continue };
            let featured_index = *function.value_at_index(pi);
            let local = projection
                .transitions()
                .iter()
                .position(|t| t.origin == featured_index)
                .ok_or_else(|| {
                    Error::internal(format!(
                        "strategy at `{}` selects a transition disabled for {}",
                        game.states()[s].id,
                        product.render(game.products().features())
                    ))
                })?;
            choices[s] = Some(local);
        }
        Ok(Strategy::new(choices))
    }
}
