//! Discounted bisimulation distance between weighted systems, as a
//! discounted game, plus a direct equation-system oracle.
//!
//! Player 1 challenges with a transition in either system; player 2 must
//! respond with an equally-labelled transition in the other. The response
//! step costs the weight mismatch, scaled so that solving the game with
//! discount `sqrt(lambda)` yields the `lambda`-discounted distance at every
//! product.

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::game::{FeaturedGame, FeaturedTransition, GameKind, GameMeta, Player, StateInfo};
use crate::logic::FeatureExpr;
use crate::trans::fts::{rational_to_f64, Fts, FtsTransition, ToleranceFts};

/// Splits a tolerance-weighted system into its minimal- and maximal-
/// consumption versions: weights `nominal * (1 -+ tolerance)`, exactly.
pub fn split_tolerances(tfts: &ToleranceFts) -> Result<(Fts, Fts)> {
    let one = Rational64::new(1, 1);
    let make = |factor: &dyn Fn(Rational64, Rational64) -> Rational64| -> Result<Fts> {
        let transitions = tfts
            .fts
            .transitions()
            .iter()
            .zip(&tfts.tolerances)
            .map(|(t, &(nominal, tolerance))| FtsTransition {
                source: t.source,
                action: t.action,
                weight: Some(factor(nominal, tolerance)),
                target: t.target,
                guard: t.guard.clone(),
            })
            .collect();
        Fts::new(
            tfts.fts.products().clone(),
            tfts.fts.states().to_vec(),
            tfts.fts.initial(),
            tfts.fts.actions().to_vec(),
            transitions,
        )
    };
    let low = make(&|n, t| n * (one - t))?;
    let high = make(&|n, t| n * (one + t))?;
    Ok((low, high))
}

/// A constructed distance game with any stuck-responder warnings.
#[derive(Debug)]
pub struct DistanceGame {
    pub game: FeaturedGame,
    /// The discount the game must be solved with, `sqrt(lambda)`.
    pub discount: f64,
    pub warnings: Vec<String>,
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Vertex {
    Pair(usize, usize),
    /// After a challenge: the updated pair, the action, the challenged
    /// weight, and which system was challenged (1 or 2).
    Response { s1: usize, s2: usize, action: usize, weight: Rational64, side: u8 },
}

/// Builds the featured discounted game whose value at the initial pair,
/// solved with discount `sqrt(lambda)`, is the `lambda`-discounted
/// bisimulation distance of the projections.
pub fn distance_game(f1: &Fts, f2: &Fts, lambda: f64) -> Result<DistanceGame> {
    check_compatible(f1, f2)?;
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::parameter(format!(
            "discounting factor must lie in (0, 1), got {lambda}"
        )));
    }
    let discount = lambda.sqrt();
    let scale = 1.0 / discount;
    let mismatch_bound = weight_spread(f1, f2);
    let products = f1.products().clone();

    let mut ids: std::collections::HashMap<Vertex, usize> = Default::default();
    let mut states: Vec<StateInfo> = Vec::new();
    let mut vertex_of: Vec<Vertex> = Vec::new();
    let mut transitions: Vec<FeaturedTransition> = Vec::new();
    let mut warnings = Vec::new();
    let mut queue = Vec::new();

    let mut intern = |v: Vertex,
                      states: &mut Vec<StateInfo>,
                      vertex_of: &mut Vec<Vertex>,
                      queue: &mut Vec<usize>| {
        if let Some(&id) = ids.get(&v) {
            return id;
        }
        let id = states.len();
        let (label, owner) = match &v {
            Vertex::Pair(a, b) => {
                (format!("({},{})", f1.states()[*a], f2.states()[*b]), Player::One)
            }
            Vertex::Response { s1, s2, action, weight, side } => (
                format!(
                    "({},{},{},{},{})",
                    f1.states()[*s1],
                    f2.states()[*s2],
                    f1.actions()[*action],
                    weight,
                    side
                ),
                Player::Two,
            ),
        };
        states.push(StateInfo { id: label, owner, accepting: false, priority: None });
        vertex_of.push(v.clone());
        ids.insert(v, id);
        queue.push(id);
        id
    };

    let initial = intern(
        Vertex::Pair(f1.initial(), f2.initial()),
        &mut states,
        &mut vertex_of,
        &mut queue,
    );

    while let Some(id) = queue.pop() {
        match vertex_of[id].clone() {
            Vertex::Pair(u1, u2) => {
                let mut covered = FeatureExpr::ff();
                for (_, t) in f1.outgoing(u1) {
                    covered = FeatureExpr::or(&covered, &t.guard);
                    let target = intern(
                        Vertex::Response {
                            s1: t.target,
                            s2: u2,
                            action: t.action,
                            weight: t.weight.unwrap(),
                            side: 1,
                        },
                        &mut states,
                        &mut vertex_of,
                        &mut queue,
                    );
                    transitions.push(FeaturedTransition {
                        source: id,
                        target,
                        guard: t.guard.clone(),
                        weight: Some(0.0),
                    });
                }
                for (_, t) in f2.outgoing(u2) {
                    covered = FeatureExpr::or(&covered, &t.guard);
                    let target = intern(
                        Vertex::Response {
                            s1: u1,
                            s2: t.target,
                            action: t.action,
                            weight: t.weight.unwrap(),
                            side: 2,
                        },
                        &mut states,
                        &mut vertex_of,
                        &mut queue,
                    );
                    transitions.push(FeaturedTransition {
                        source: id,
                        target,
                        guard: t.guard.clone(),
                        weight: Some(0.0),
                    });
                }
                // Products with no challenge available anywhere: distance 0.
                let gap = FeatureExpr::not(&covered);
                if products.sat(&gap)? {
                    transitions.push(FeaturedTransition {
                        source: id,
                        target: id,
                        guard: gap,
                        weight: Some(0.0),
                    });
                }
            }
            Vertex::Response { s1, s2, action, weight, side } => {
                let (responder, responder_state) =
                    if side == 1 { (f2, s2) } else { (f1, s1) };
                let mut covered = FeatureExpr::ff();
                for (_, t) in responder.outgoing(responder_state) {
                    if t.action != action {
                        continue;
                    }
                    covered = FeatureExpr::or(&covered, &t.guard);
                    let pair = if side == 1 {
                        Vertex::Pair(s1, t.target)
                    } else {
                        Vertex::Pair(t.target, s2)
                    };
                    let target = intern(pair, &mut states, &mut vertex_of, &mut queue);
                    let mismatch = rational_to_f64(weight - t.weight.unwrap()).abs();
                    transitions.push(FeaturedTransition {
                        source: id,
                        target,
                        guard: t.guard.clone(),
                        weight: Some(scale * mismatch),
                    });
                }
                // Products for which the responder has no equally-labelled
                // move: maximal mismatch forever.
                let gap = FeatureExpr::not(&covered);
                if products.sat(&gap)? {
                    warnings.push(format!(
                        "no response to `{}` at {} for products satisfying {}",
                        f1.actions()[action],
                        states[id].id,
                        gap
                    ));
                    transitions.push(FeaturedTransition {
                        source: id,
                        target: id,
                        guard: gap,
                        weight: Some(scale * mismatch_bound),
                    });
                }
            }
        }
    }

    let meta = GameMeta { discount: Some(discount), notes: warnings.clone() };
    let game = FeaturedGame::new(GameKind::Discounted, products, states, initial, transitions, meta)?;
    Ok(DistanceGame { game, discount, warnings })
}

fn check_compatible(f1: &Fts, f2: &Fts) -> Result<()> {
    if f1.products() != f2.products() {
        return Err(Error::validation(
            "distance requires both systems over the same features and products",
        ));
    }
    if f1.actions() != f2.actions() {
        return Err(Error::validation("distance requires a shared action alphabet"));
    }
    if !f1.is_weighted() || !f2.is_weighted() {
        return Err(Error::validation("distance requires weighted systems"));
    }
    Ok(())
}

/// The largest possible per-step weight mismatch between the two systems.
fn weight_spread(f1: &Fts, f2: &Fts) -> f64 {
    let weights: Vec<Rational64> = f1
        .transitions()
        .iter()
        .chain(f2.transitions())
        .filter_map(|t| t.weight)
        .collect();
    match (weights.iter().min(), weights.iter().max()) {
        (Some(&lo), Some(&hi)) => rational_to_f64(hi - lo),
        _ => 0.0,
    }
}

/// Fixed-point iteration of the distance equation system on the projections
/// of the two systems to `product_index`; independent of the game
/// construction.
pub fn direct_distance_oracle(
    f1: &Fts,
    f2: &Fts,
    product_index: usize,
    lambda: f64,
    epsilon: f64,
) -> Result<f64> {
    check_compatible(f1, f2)?;
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::parameter(format!(
            "discounting factor must lie in (0, 1), got {lambda}"
        )));
    }
    if !(epsilon > 0.0) {
        return Err(Error::parameter(format!("precision must be positive, got {epsilon}")));
    }
    if product_index >= f1.products().len() {
        return Err(Error::domain("product index out of range"));
    }

    // A stuck responder is worth the maximal mismatch at every future step.
    let stuck = weight_spread(f1, f2) / (1.0 - lambda.sqrt());

    let n1 = f1.states().len();
    let n2 = f2.states().len();
    let mut d = vec![vec![0.0f64; n2]; n1];
    loop {
        let mut next = vec![vec![0.0f64; n2]; n1];
        let mut delta = 0.0f64;
        for s1 in 0..n1 {
            for s2 in 0..n2 {
                let mut value = 0.0f64;
                for (_, c) in f1.outgoing_enabled(s1, product_index) {
                    value = value.max(best_response(
                        f2,
                        s2,
                        product_index,
                        c,
                        |t| (c.target, t.target),
                        lambda,
                        stuck,
                        &d,
                    ));
                }
                for (_, c) in f2.outgoing_enabled(s2, product_index) {
                    value = value.max(best_response(
                        f1,
                        s1,
                        product_index,
                        c,
                        |t| (t.target, c.target),
                        lambda,
                        stuck,
                        &d,
                    ));
                }
                delta = delta.max((value - d[s1][s2]).abs());
                next[s1][s2] = value;
            }
        }
        d = next;
        if delta < epsilon {
            return Ok(d[f1.initial()][f2.initial()]);
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn best_response(
    responder: &Fts,
    responder_state: usize,
    product_index: usize,
    challenge: &FtsTransition,
    pair_of: impl Fn(&FtsTransition) -> (usize, usize),
    lambda: f64,
    stuck: f64,
    d: &[Vec<f64>],
) -> f64 {
    let mut best: Option<f64> = None;
    for (_, t) in responder.outgoing_enabled(responder_state, product_index) {
        if t.action != challenge.action {
            continue;
        }
        let mismatch = rational_to_f64(challenge.weight.unwrap() - t.weight.unwrap()).abs();
        let (t1, t2) = pair_of(t);
        let value = mismatch + lambda * d[t1][t2];
        best = Some(best.map_or(value, |b: f64| b.min(value)));
    }
    best.unwrap_or(stuck)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::featured::solve_discounted;
    use crate::trans::fts::{parse_fts, FtsVariant};

    fn coffee_split() -> (Fts, Fts) {
        let FtsVariant::Tolerance(tfts) =
            parse_fts(crate::trans::fts::tests::COFFEE_TOLERANCE_FTS).unwrap()
        else {
            panic!("expected a tolerance FTS");
        };
        split_tolerances(&tfts).unwrap()
    }

    #[test]
    fn tolerances_split_exactly() {
        let (low, high) = coffee_split();
        let weights = |fts: &Fts| -> Vec<Rational64> {
            fts.transitions().iter().map(|t| t.weight.unwrap()).collect()
        };
        assert_eq!(
            weights(&low),
            vec![
                Rational64::new(0, 1),
                Rational64::new(0, 1),
                Rational64::new(9, 10),
                Rational64::new(9, 5)
            ]
        );
        assert_eq!(
            weights(&high),
            vec![
                Rational64::new(0, 1),
                Rational64::new(0, 1),
                Rational64::new(11, 10),
                Rational64::new(11, 5)
            ]
        );
    }

    #[test]
    fn zero_tolerance_splits_into_identical_copies() {
        let text = r#"{
            "features": [],
            "products": "all",
            "actions": ["a"],
            "initial": "s0",
            "states": [{"id": "s0"}],
            "transitions": [
                {"from": "s0", "action": "a", "to": "s0", "guard": "true",
                 "weight": {"nominal": 2, "tolerance": 0}}
            ]
        }"#;
        let FtsVariant::Tolerance(tfts) = parse_fts(text).unwrap() else { panic!() };
        let (low, high) = split_tolerances(&tfts).unwrap();
        assert_eq!(low.transitions()[0].weight, high.transitions()[0].weight);
        assert_eq!(low.transitions()[0].weight, Some(Rational64::new(2, 1)));
    }

    #[test]
    fn identical_systems_have_distance_zero() {
        let (low, _) = coffee_split();
        let result = distance_game(&low, &low, 0.99).unwrap();
        let solved = solve_discounted(&result.game, result.discount, 1e-9).unwrap();
        for i in 0..result.game.products().len() {
            assert!(solved.solution.value_at(result.game.initial(), i).abs() < 1e-6);
            let oracle = direct_distance_oracle(&low, &low, i, 0.99, 1e-9).unwrap();
            assert!(oracle.abs() < 1e-6);
        }
    }

    #[test]
    fn coffee_distances_match_the_closed_forms() {
        let (low, high) = coffee_split();
        let lambda = 0.99f64;
        let result = distance_game(&low, &high, lambda).unwrap();
        let solved = solve_discounted(&result.game, result.discount, 1e-9).unwrap();
        let ctx = result.game.products();

        let euro_expected = 0.2 * lambda / (1.0 - lambda * lambda);
        let dollar_expected = 0.4 * lambda * lambda / (1.0 - lambda.powi(3));
        for (i, &p) in ctx.products().iter().enumerate() {
            let value = *solved.solution.value_at(result.game.initial(), i);
            let expected = match (p.contains_index(0), p.contains_index(1)) {
                (true, false) => euro_expected,
                (false, true) => dollar_expected,
                (true, true) => dollar_expected,
                (false, false) => unreachable!("no such product"),
            };
            assert!(
                (value - expected).abs() < 1e-3,
                "{}: {value} vs {expected}",
                p.render(ctx.features())
            );
            let oracle = direct_distance_oracle(&low, &high, i, lambda, 1e-9).unwrap();
            assert!((oracle - expected).abs() < 1e-3);
        }
        // The paper-level figures at two decimals.
        assert!((euro_expected - 9.95).abs() < 0.01);
        assert!((dollar_expected - 13.2).abs() < 0.01);
    }

    #[test]
    fn challenge_weights_embed_the_scaled_mismatch() {
        let (low, high) = coffee_split();
        let result = distance_game(&low, &high, 0.99).unwrap();
        let scale = 1.0 / 0.99f64.sqrt();
        let weights: Vec<f64> = result
            .game
            .transitions()
            .iter()
            .map(|t| t.weight.unwrap())
            .filter(|w| *w > 0.0)
            .collect();
        // The std mismatch is |0.9 - 1.1| = 0.2 and the xxl mismatch 0.4;
        // stuck-responder loops carry the maximal spread 2.2.
        for w in &weights {
            let close_to = |x: f64| (w - scale * x).abs() < 1e-12;
            assert!(
                close_to(0.2) || close_to(0.4) || close_to(2.2),
                "unexpected weight {w}"
            );
        }
        assert!(weights.iter().any(|w| (w - scale * 0.2).abs() < 1e-12));
        assert!(weights.iter().any(|w| (w - scale * 0.4).abs() < 1e-12));
    }

    #[test]
    fn rejects_mismatched_signatures() {
        let (low, _) = coffee_split();
        let other = r#"{
            "features": ["x"],
            "products": "all",
            "actions": ["ins", "std", "xxl"],
            "initial": "s0",
            "states": [{"id": "s0"}],
            "transitions": [
                {"from": "s0", "action": "ins", "to": "s0", "guard": "true", "weight": 1}
            ]
        }"#;
        let FtsVariant::Plain(other) = parse_fts(other).unwrap() else { panic!() };
        assert!(distance_game(&low, &other, 0.99).is_err());
    }
}
