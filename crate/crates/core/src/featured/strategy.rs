//! Featured strategy extraction: per player-1 state, a guard-indexed choice
//! of transition that attains the solver's value for every product.
//!
//! As in the plain extraction, reachability kinds require the chosen
//! transition to make progress (a target that stabilized strictly earlier in
//! the fixed point), per product.

use crate::error::{Error, Result};
use crate::featured::{
    energy_bound, min_reach_step, reach_step, FeaturedSolution, Solution,
};
use crate::game::{FeaturedGame, FeaturedStrategy, Player};
use crate::logic::{Denotation, FeatureExpr, FeatureFunction, ProductSet};
use crate::plain::MeasureContext;
use crate::value::{Cost, EnergyValue};

/// Extracts a locally optimal featured strategy from a matching solution.
///
/// Per player-1 state and product, the first transition (in document order)
/// that is enabled and attains the backup equation is chosen; cells are
/// refined where products need different transitions and merged where they
/// agree.
pub fn extract_featured_strategy(
    game: &FeaturedGame,
    solution: &FeaturedSolution,
) -> Result<FeaturedStrategy> {
    let ctx = game.products();
    let ranks = match solution {
        FeaturedSolution::Reachability(_) => Some(reach_ranks(game)),
        FeaturedSolution::MinReachability(_) => Some(min_reach_ranks(game)),
        _ => None,
    };
    let mut choices = vec![None; game.state_count()];
    for s in 0..game.state_count() {
        if game.states()[s].owner != Player::One {
            continue;
        }
        let mut chosen = vec![usize::MAX; ctx.len()];
        for (i, slot) in chosen.iter_mut().enumerate() {
            *slot = choose_for_product(game, solution, ranks.as_deref(), s, i)?;
        }
        choices[s] = Some(function_from_choices(game, ctx, &chosen)?);
    }
    Ok(FeaturedStrategy::new(choices))
}

/// Per state and product, the round at which the family-based reachability
/// fixed point last changed.
fn reach_ranks(game: &FeaturedGame) -> Vec<Vec<usize>> {
    let ctx = game.products();
    let mut sol = Solution::new(
        game.states()
            .iter()
            .map(|s| FeatureFunction::constant(ctx, s.accepting))
            .collect(),
    );
    let mut ranks = vec![vec![0usize; ctx.len()]; game.state_count()];
    for round in 1.. {
        let next = reach_step(game, &sol);
        if next.semantically_equal(&sol, ctx) {
            return ranks;
        }
        record_changes(&sol, &next, round, &mut ranks, ctx.len());
        sol = next;
    }
    unreachable!()
}

fn min_reach_ranks(game: &FeaturedGame) -> Vec<Vec<usize>> {
    let ctx = game.products();
    let mut sol = Solution::new(
        game.states()
            .iter()
            .map(|s| {
                let v = if s.accepting { Cost::Finite(0) } else { Cost::Infinite };
                FeatureFunction::constant(ctx, v)
            })
            .collect(),
    );
    let mut ranks = vec![vec![0usize; ctx.len()]; game.state_count()];
    for round in 1.. {
        let next = min_reach_step(game, &sol);
        if next.semantically_equal(&sol, ctx) {
            return ranks;
        }
        record_changes(&sol, &next, round, &mut ranks, ctx.len());
        sol = next;
    }
    unreachable!()
}

fn record_changes<X: PartialEq>(
    old: &Solution<X>,
    new: &Solution<X>,
    round: usize,
    ranks: &mut [Vec<usize>],
    n_products: usize,
) {
    for (s, row) in ranks.iter_mut().enumerate() {
        for (i, slot) in row.iter_mut().enumerate().take(n_products) {
            if old.value_at(s, i) != new.value_at(s, i) {
                *slot = round;
            }
        }
    }
}

fn choose_for_product(
    game: &FeaturedGame,
    solution: &FeaturedSolution,
    ranks: Option<&[Vec<usize>]>,
    s: usize,
    product: usize,
) -> Result<usize> {
    let enabled: Vec<usize> = game
        .outgoing(s)
        .iter()
        .copied()
        .filter(|&t| game.guard_denotation(t)[product])
        .collect();
    if enabled.is_empty() {
        return Err(Error::validation(format!(
            "state `{}` is blocking for product {}",
            game.states()[s].id,
            game.products().product(product).render(game.products().features())
        )));
    }
    let accepting = game.kind().uses_accepting() && game.states()[s].accepting;
    let no_attaining = || {
        Error::internal(format!(
            "no transition at `{}` attains the solution value for product {}",
            game.states()[s].id,
            game.products().product(product).render(game.products().features())
        ))
    };

    match solution {
        FeaturedSolution::Reachability(solved) => {
            let won = |t: usize| *solved.solution.value_at(game.transitions()[t].target, product);
            let value = *solved.solution.value_at(s, product);
            if accepting {
                return Ok(enabled.iter().copied().find(|&t| won(t)).unwrap_or(enabled[0]));
            }
            if value {
                let ranks = ranks.unwrap();
                enabled
                    .iter()
                    .copied()
                    .find(|&t| {
                        won(t) && ranks[game.transitions()[t].target][product] < ranks[s][product]
                    })
                    .ok_or_else(no_attaining)
            } else {
                enabled.iter().copied().find(|&t| !won(t)).ok_or_else(no_attaining)
            }
        }
        FeaturedSolution::MinReachability(solved) => {
            let backed = |t: usize| {
                solved
                    .solution
                    .value_at(game.transitions()[t].target, product)
                    .add(game.weight_int(t) as u64)
            };
            let value = *solved.solution.value_at(s, product);
            if accepting {
                return Ok(enabled
                    .iter()
                    .copied()
                    .find(|&t| backed(t) == value)
                    .unwrap_or(enabled[0]));
            }
            if value.is_finite() {
                let ranks = ranks.unwrap();
                enabled
                    .iter()
                    .copied()
                    .find(|&t| {
                        backed(t) == value
                            && ranks[game.transitions()[t].target][product] < ranks[s][product]
                    })
                    .ok_or_else(no_attaining)
            } else {
                enabled.iter().copied().find(|&t| backed(t) == value).ok_or_else(no_attaining)
            }
        }
        FeaturedSolution::Energy(solved) => {
            let bound = energy_bound(game);
            let backed = |t: usize| {
                solved
                    .solution
                    .value_at(game.transitions()[t].target, product)
                    .ominus(game.weight_int(t), bound)
            };
            let value: EnergyValue = *solved.solution.value_at(s, product);
            enabled.iter().copied().find(|&t| backed(t) == value).ok_or_else(no_attaining)
        }
        FeaturedSolution::Parity(solved) => {
            let ctx = MeasureContext::for_states(game.states())?;
            let priority = game.states()[s].priority.unwrap();
            let backed = |t: usize| {
                ctx.prog(solved.solution.value_at(game.transitions()[t].target, product), priority)
            };
            let value = solved.solution.value_at(s, product).clone();
            enabled.iter().copied().find(|&t| backed(t) == value).ok_or_else(no_attaining)
        }
        FeaturedSolution::Discounted { solved, lambda, epsilon } => {
            let lambda = *lambda;
            let tolerance = 2.0 * epsilon / (1.0 - lambda);
            let backed = |t: usize| {
                game.weight_real(t)
                    + lambda * solved.solution.value_at(game.transitions()[t].target, product)
            };
            let best = enabled.iter().map(|&t| backed(t)).fold(f64::NEG_INFINITY, f64::max);
            let have = *solved.solution.value_at(s, product);
            if (best - have).abs() > tolerance {
                return Err(Error::internal(format!(
                    "no transition at `{}` attains the discounted value {have} (best {best})",
                    game.states()[s].id
                )));
            }
            Ok(*enabled.iter().find(|&&t| backed(t) == best).unwrap())
        }
    }
}

/// Builds the guard-indexed transition choice from one chosen transition per
/// product, merging equal choices.
fn function_from_choices(
    game: &FeaturedGame,
    ctx: &ProductSet,
    chosen: &[usize],
) -> Result<FeatureFunction<usize>> {
    let mut groups: Vec<(usize, Denotation)> = Vec::new();
    for (i, &t) in chosen.iter().enumerate() {
        match groups.iter_mut().find(|(u, _)| *u == t) {
            Some((_, d)) => d.set(i, true),
            None => {
                let mut d = crate::logic::empty_denotation(ctx.len());
                d.set(i, true);
                groups.push((t, d));
            }
        }
    }
    let cells = groups
        .into_iter()
        .map(|(t, denot)| (guard_for(game, ctx, t, &denot), t))
        .collect::<Vec<_>>();
    FeatureFunction::from_cells(ctx, cells)
}

/// A readable guard whose denotation is exactly `denot`: the whole set, the
/// transition's own guard when it matches, or a disjunction of
/// characteristic formulas.
fn guard_for(
    game: &FeaturedGame,
    ctx: &ProductSet,
    transition: usize,
    denot: &Denotation,
) -> FeatureExpr {
    if denot.count_ones() == ctx.len() {
        return FeatureExpr::tt();
    }
    if denot == game.guard_denotation(transition) {
        return game.transitions()[transition].guard.clone();
    }
    let mut guard = FeatureExpr::ff();
    for i in denot.iter_ones() {
        let gamma = ctx.product(i).characteristic_formula(ctx.features());
        guard = FeatureExpr::or(&guard, &gamma);
    }
    guard
}
