//! Solution and strategy serialization.
//!
//! A solution serializes per state as a list of `{"guard": ..., "value": ...}`
//! cells, with guards in the guard grammar, top as `"top"`, infinity as
//! `"inf"` and parity measures as integer arrays.

use serde::Serialize;

use crate::featured::{FeaturedSolution, Solution};
use crate::game::{FeaturedGame, FeaturedStrategy};
use crate::logic::FeatureFunction;
use crate::value::Value;

#[derive(Serialize)]
pub struct SolutionCell {
    pub guard: String,
    pub value: Value,
}

#[derive(Serialize)]
pub struct StateCells {
    pub state: String,
    pub cells: Vec<SolutionCell>,
}

/// The per-state cell lists of a solution, in state order.
pub fn solution_cells(game: &FeaturedGame, solution: &FeaturedSolution) -> Vec<StateCells> {
    (0..game.state_count())
        .map(|s| StateCells {
            state: game.states()[s].id.clone(),
            cells: function_cells(&solution.value_function(s)),
        })
        .collect()
}

/// The cells of a single value function.
pub fn function_cells(function: &FeatureFunction<Value>) -> Vec<SolutionCell> {
    function
        .cells()
        .iter()
        .map(|c| SolutionCell { guard: c.guard.to_string(), value: c.value.clone() })
        .collect()
}

#[derive(Serialize)]
pub struct StrategyCell {
    pub guard: String,
    pub transition: TransitionRef,
}

#[derive(Serialize)]
pub struct TransitionRef {
    pub index: usize,
    pub from: String,
    pub to: String,
}

#[derive(Serialize)]
pub struct StateStrategy {
    pub state: String,
    pub cells: Vec<StrategyCell>,
}

/// The per-state cell lists of a featured strategy, player-1 states only.
pub fn strategy_cells(game: &FeaturedGame, strategy: &FeaturedStrategy) -> Vec<StateStrategy> {
    (0..game.state_count())
        .filter_map(|s| {
            let choice = strategy.choice(s)?;
            Some(StateStrategy {
                state: game.states()[s].id.clone(),
                cells: choice
                    .cells()
                    .iter()
                    .map(|c| {
                        let t = c.value;
                        let tr = &game.transitions()[t];
                        StrategyCell {
                            guard: c.guard.to_string(),
                            transition: TransitionRef {
                                index: t,
                                from: game.states()[tr.source].id.clone(),
                                to: game.states()[tr.target].id.clone(),
                            },
                        }
                    })
                    .collect(),
            })
        })
        .collect()
}

/// Per-product table of a value function: one row per product in product
/// order.
pub fn per_product_rows(
    game: &FeaturedGame,
    function: &FeatureFunction<Value>,
) -> Vec<(Vec<String>, Value)> {
    let ctx = game.products();
    ctx.products()
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let names = p.member_names(ctx.features()).iter().map(|s| s.to_string()).collect();
            (names, function.value_at_index(i).clone())
        })
        .collect()
}

/// Parses a serialized solution back into a per-state lookup table. The
/// game's kind decides how plain JSON values are read back.
pub fn parse_solution_document(
    game: &FeaturedGame,
    text: &str,
) -> crate::error::Result<Solution<Value>> {
    use crate::error::Error;
    let records: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| Error::parse(format!("solution document: {e}")))?;
    let records = records
        .as_array()
        .ok_or_else(|| Error::parse("solution document must be an array of states"))?;
    let ctx = game.products();
    let mut slots: Vec<Option<FeatureFunction<Value>>> = vec![None; game.state_count()];
    for record in records {
        let state = record
            .get("state")
            .and_then(|v| v.as_str())
            .ok_or_else(|| Error::parse("solution record is missing `state`"))?;
        let index = game
            .state_index(state)
            .ok_or_else(|| Error::validation(format!("unknown state `{state}`")))?;
        let raw_cells = record
            .get("cells")
            .and_then(|v| v.as_array())
            .ok_or_else(|| Error::parse("solution record is missing `cells`"))?;
        let mut cells = Vec::new();
        for cell in raw_cells {
            let guard_text = cell
                .get("guard")
                .and_then(|v| v.as_str())
                .ok_or_else(|| Error::parse("solution cell is missing `guard`"))?;
            let guard = crate::logic::FeatureExpr::parse(guard_text, ctx.features())?;
            let raw = cell
                .get("value")
                .ok_or_else(|| Error::parse("solution cell is missing `value`"))?;
            cells.push((guard, parse_value(game.kind(), raw)?));
        }
        slots[index] = Some(FeatureFunction::from_cells(ctx, cells)?);
    }
    let per_state = slots
        .into_iter()
        .enumerate()
        .map(|(s, f)| {
            f.ok_or_else(|| {
                Error::validation(format!(
                    "solution is missing state `{}`",
                    game.states()[s].id
                ))
            })
        })
        .collect::<crate::error::Result<Vec<_>>>()?;
    Ok(Solution::new(per_state))
}

/// Reads a single JSON value in the representation of `kind`.
pub fn parse_value(kind: crate::game::GameKind, raw: &serde_json::Value) -> crate::error::Result<Value> {
    use crate::error::Error;
    use crate::game::GameKind;
    use crate::value::{Cost, EnergyValue, ParityMeasure};
    let bad = || Error::parse(format!("value {raw} does not fit a {kind} solution"));
    Ok(match kind {
        GameKind::Reachability => Value::Bool(raw.as_bool().ok_or_else(bad)?),
        GameKind::MinReachability => match raw {
            serde_json::Value::String(s) if s == "inf" => Value::Cost(Cost::Infinite),
            _ => Value::Cost(Cost::Finite(raw.as_u64().ok_or_else(bad)?)),
        },
        GameKind::Discounted => Value::Real(raw.as_f64().ok_or_else(bad)?),
        GameKind::Energy => match raw {
            serde_json::Value::String(s) if s == "top" => Value::Energy(EnergyValue::Top),
            _ => Value::Energy(EnergyValue::Finite(raw.as_u64().ok_or_else(bad)?)),
        },
        GameKind::Parity => match raw {
            serde_json::Value::String(s) if s == "top" => Value::Measure(ParityMeasure::Top),
            serde_json::Value::Array(items) => {
                let comps = items
                    .iter()
                    .map(|v| v.as_u64().ok_or_else(bad))
                    .collect::<crate::error::Result<Vec<_>>>()?;
                Value::Measure(ParityMeasure::Finite(comps))
            }
            _ => return Err(bad()),
        },
    })
}
