//! Deterministic random instance generation for tests and benchmarks.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::game::{FeaturedGame, FeaturedTransition, GameKind, GameMeta, Player, StateInfo};
use crate::logic::{FeatureExpr, FeatureFunction, FeatureSet, ProductSet};

/// Shape of a random featured game.
#[derive(Clone, Debug)]
pub struct GameConfig {
    pub kind: GameKind,
    /// States are drawn uniformly from `2..=max_states`.
    pub max_states: usize,
    /// The product set is the full power set of `n_features` features.
    pub n_features: usize,
    /// Out-degree per state before the non-blocking repair, `1..=max_out_degree`.
    pub max_out_degree: usize,
    /// Weight magnitude bound; min-reachability clamps to non-negative.
    pub max_weight: i64,
    pub max_priority: u32,
}

impl Default for GameConfig {
    fn default() -> Self {
        GameConfig {
            kind: GameKind::Reachability,
            max_states: 8,
            n_features: 2,
            max_out_degree: 3,
            max_weight: 8,
            max_priority: 4,
        }
    }
}

/// Generates a non-blocking featured game; the same seed yields the same
/// game.
pub fn random_featured_game(config: &GameConfig, seed: u64) -> Result<FeaturedGame> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let features =
        FeatureSet::new((0..config.n_features).map(|i| format!("f{i}")))?;
    let products = ProductSet::all(features.clone())?;

    let n = rng.gen_range(2..=config.max_states.max(2));
    let mut states: Vec<StateInfo> = (0..n)
        .map(|i| StateInfo {
            id: format!("s{i}"),
            owner: if rng.gen_bool(0.5) { Player::One } else { Player::Two },
            accepting: config.kind.uses_accepting() && rng.gen_bool(0.3),
            priority: matches!(config.kind, GameKind::Parity)
                .then(|| rng.gen_range(0..=config.max_priority)),
        })
        .collect();
    if config.kind.uses_accepting() && !states.iter().any(|s| s.accepting) {
        let i = rng.gen_range(0..n);
        states[i].accepting = true;
    }

    let mut transitions = Vec::new();
    for s in 0..n {
        let degree = rng.gen_range(1..=config.max_out_degree.max(1));
        for _ in 0..degree {
            transitions.push(FeaturedTransition {
                source: s,
                target: rng.gen_range(0..n),
                guard: random_guard(&mut rng, &features, 2),
                weight: random_weight(&mut rng, config),
            });
        }
    }

    // Repair blocking states: cover the products missed by the guards above
    // with one extra transition guarded by the complement.
    for s in 0..n {
        let mut covered = FeatureExpr::ff();
        for t in transitions.iter().filter(|t| t.source == s) {
            covered = FeatureExpr::or(&covered, &t.guard);
        }
        let gap = FeatureExpr::not(&covered);
        if products.sat(&gap)? {
            transitions.push(FeaturedTransition {
                source: s,
                target: rng.gen_range(0..n),
                guard: gap,
                weight: random_weight(&mut rng, config),
            });
        }
    }

    FeaturedGame::new(config.kind, products, states, 0, transitions, GameMeta::default())
}

fn random_weight(rng: &mut ChaCha8Rng, config: &GameConfig) -> Option<f64> {
    if !config.kind.is_weighted() {
        return None;
    }
    let lo = if config.kind == GameKind::MinReachability { 0 } else { -config.max_weight };
    Some(rng.gen_range(lo..=config.max_weight) as f64)
}

/// A random guard expression of bounded depth over `features`; `true` when
/// there are no features.
pub fn random_guard(rng: &mut ChaCha8Rng, features: &FeatureSet, depth: usize) -> FeatureExpr {
    if features.is_empty() {
        return FeatureExpr::tt();
    }
    if depth == 0 || rng.gen_bool(0.4) {
        let var = FeatureExpr::var(features.name(rng.gen_range(0..features.len())));
        return if rng.gen_bool(0.3) { FeatureExpr::not(&var) } else { var };
    }
    match rng.gen_range(0..4) {
        0 => {
            let a = random_guard(rng, features, depth - 1);
            let b = random_guard(rng, features, depth - 1);
            FeatureExpr::and(&a, &b)
        }
        1 => {
            let a = random_guard(rng, features, depth - 1);
            let b = random_guard(rng, features, depth - 1);
            FeatureExpr::or(&a, &b)
        }
        2 => FeatureExpr::not(&random_guard(rng, features, depth - 1)),
        _ => FeatureExpr::tt(),
    }
}

/// Shape of a random weighted transition-system pair.
#[derive(Clone, Debug)]
pub struct FtsPairConfig {
    pub max_states: usize,
    pub n_features: usize,
    pub n_actions: usize,
    /// Weights are drawn from `{0, 1/2, 1, ..., max_weight}`.
    pub max_weight: i64,
}

impl Default for FtsPairConfig {
    fn default() -> Self {
        FtsPairConfig { max_states: 5, n_features: 3, n_actions: 2, max_weight: 4 }
    }
}

/// Two weighted systems over a shared signature, for distance comparisons.
pub fn random_fts_pair(
    config: &FtsPairConfig,
    seed: u64,
) -> Result<(crate::trans::Fts, crate::trans::Fts)> {
    use crate::trans::fts::FtsTransition;
    use num_rational::Rational64;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let features = FeatureSet::new((0..config.n_features).map(|i| format!("f{i}")))?;
    let products = ProductSet::all(features.clone())?;
    let actions: Vec<String> = (0..config.n_actions.max(1)).map(|i| format!("a{i}")).collect();

    let make = |rng: &mut ChaCha8Rng| -> Result<crate::trans::Fts> {
        let n = rng.gen_range(1..=config.max_states.max(1));
        let states: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
        let mut transitions = Vec::new();
        for s in 0..n {
            for _ in 0..rng.gen_range(1..=2) {
                transitions.push(FtsTransition {
                    source: s,
                    action: rng.gen_range(0..actions.len()),
                    weight: Some(Rational64::new(rng.gen_range(0..=2 * config.max_weight), 2)),
                    target: rng.gen_range(0..n),
                    guard: random_guard(rng, &features, 2),
                });
            }
        }
        crate::trans::Fts::new(products.clone(), states, 0, actions.clone(), transitions)
    };
    let f1 = make(&mut rng)?;
    let f2 = make(&mut rng)?;
    Ok((f1, f2))
}

/// A random canonical function over a random partition of `ctx`, with values
/// drawn from `0..value_range`.
pub fn random_feature_function(
    ctx: &ProductSet,
    value_range: u64,
    seed: u64,
) -> Result<FeatureFunction<u64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cells: Vec<FeatureExpr> = vec![FeatureExpr::tt()];
    for _ in 0..rng.gen_range(0..=3) {
        let splitter = random_guard(&mut rng, ctx.features(), 2);
        let mut next = Vec::new();
        for cell in cells {
            let pos = FeatureExpr::and(&cell, &splitter);
            let neg = FeatureExpr::and(&cell, &FeatureExpr::not(&splitter));
            match (ctx.sat(&pos)?, ctx.sat(&neg)?) {
                (true, true) => {
                    next.push(pos);
                    next.push(neg);
                }
                _ => next.push(cell),
            }
        }
        cells = next;
    }
    let valued = cells
        .into_iter()
        .map(|g| (g, rng.gen_range(0..value_range.max(1))))
        .collect::<Vec<_>>();
    Ok(FeatureFunction::from_cells(ctx, valued)?.reduce())
}
