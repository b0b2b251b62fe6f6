//! Per-product verification of featured results against the plain solvers.

use serde::Serialize;

use featgames::error::{Error, Result};
use featgames::featured::{report::parse_solution_document, FeaturedSolution, Solution};
use featgames::game::{FeaturedGame, GameKind, Player};
use featgames::plain;
use featgames::value::Value;

#[derive(Serialize)]
pub struct Comparison {
    pub product: Vec<String>,
    pub state: String,
    pub featured: Value,
    pub oracle: Value,
    pub matched: bool,
}

#[derive(Serialize)]
pub struct VerifyOutcome {
    pub checked: usize,
    pub mismatches: Vec<Comparison>,
    pub passed: bool,
}

/// The values a verification run compares: either a freshly solved featured
/// solution or one loaded from a solution file.
pub enum Subject {
    Solved(FeaturedSolution),
    Loaded(Solution<Value>),
}

impl Subject {
    fn value_at(&self, state: usize, product_index: usize) -> Value {
        match self {
            Subject::Solved(solution) => {
                solution.value_function(state).value_at_index(product_index).clone()
            }
            Subject::Loaded(solution) => solution.value_at(state, product_index).clone(),
        }
    }
}

pub fn load_subject(game: &FeaturedGame, text: &str) -> Result<Subject> {
    Ok(Subject::Loaded(parse_solution_document(game, text)?))
}

/// Compares the subject against the plain solver on every projection, state
/// by state; parity winners are additionally cross-checked against the
/// recursive-decomposition oracle.
pub fn verify(
    game: &FeaturedGame,
    subject: &Subject,
    lambda: Option<f64>,
    epsilon: Option<f64>,
    jobs: usize,
) -> Result<VerifyOutcome> {
    let ctx = game.products();
    let per_product: Vec<Result<Vec<Comparison>>> = if jobs > 1 {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::parameter(format!("cannot build a {jobs}-thread pool: {e}")))?;
        pool.install(|| {
            (0..ctx.len())
                .into_par_iter()
                .map(|i| verify_product(game, subject, lambda, epsilon, i))
                .collect()
        })
    } else {
        (0..ctx.len()).map(|i| verify_product(game, subject, lambda, epsilon, i)).collect()
    };

    let mut mismatches = Vec::new();
    let mut checked = 0;
    for result in per_product {
        for comparison in result? {
            checked += 1;
            if !comparison.matched {
                mismatches.push(comparison);
            }
        }
    }
    Ok(VerifyOutcome { checked, passed: mismatches.is_empty(), mismatches })
}

fn verify_product(
    game: &FeaturedGame,
    subject: &Subject,
    lambda: Option<f64>,
    epsilon: Option<f64>,
    product_index: usize,
) -> Result<Vec<Comparison>> {
    let ctx = game.products();
    let product = ctx.product(product_index);
    let names: Vec<String> =
        product.member_names(ctx.features()).iter().map(|s| s.to_string()).collect();
    let projection = game.project_by_index(product_index);
    let oracle = plain::solve(&projection, lambda, epsilon)?;

    let tolerance = match (game.kind(), lambda, epsilon) {
        (GameKind::Discounted, Some(l), Some(e)) => Some(2.0 * e / (1.0 - l)),
        _ => None,
    };

    let mut out = Vec::new();
    for state in 0..game.state_count() {
        let featured = subject.value_at(state, product_index);
        let expected = oracle_value(&oracle, state);
        let matched = values_match(&featured, &expected, tolerance);
        out.push(Comparison {
            product: names.clone(),
            state: game.states()[state].id.clone(),
            featured,
            oracle: expected,
            matched,
        });
    }

    // Parity: winners must also agree with the independent oracle.
    if game.kind() == GameKind::Parity {
        let zielonka = plain::zielonka_winners(&projection)?;
        for state in 0..game.state_count() {
            let featured = subject.value_at(state, product_index);
            let winner = match &featured {
                Value::Measure(m) => Value::Bool(!m.is_top()),
                other => other.clone(),
            };
            let expected = Value::Bool(zielonka[state] == Player::One);
            let matched = winner == expected;
            out.push(Comparison {
                product: names.clone(),
                state: game.states()[state].id.clone(),
                featured: winner,
                oracle: expected,
                matched,
            });
        }
    }
    Ok(out)
}

fn oracle_value(oracle: &plain::PlainSolution, state: usize) -> Value {
    match oracle {
        plain::PlainSolution::Parity(measures) => Value::Measure(measures[state].clone()),
        other => other.value_at(state),
    }
}

fn values_match(a: &Value, b: &Value, tolerance: Option<f64>) -> bool {
    match (a, b, tolerance) {
        (Value::Real(x), Value::Real(y), Some(tol)) => (x - y).abs() <= tol,
        _ => a == b,
    }
}
