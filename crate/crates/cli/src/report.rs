//! Run reports: the machine-readable output of `solve` and `verify`.

use std::path::Path;

use serde::Serialize;

use featgames::featured::report::{
    function_cells, solution_cells, strategy_cells, SolutionCell, StateCells, StateStrategy,
};
use featgames::featured::{FeaturedSolution, SolveStats};
use featgames::game::{FeaturedGame, FeaturedStrategy};
use featgames::value::Value;

#[derive(Serialize)]
pub struct GameInfo {
    pub file: String,
    pub kind: String,
    pub states: usize,
    pub transitions: usize,
    pub features: usize,
    pub products: usize,
}

impl GameInfo {
    pub fn new(path: &Path, game: &FeaturedGame) -> Self {
        GameInfo {
            file: path.display().to_string(),
            kind: game.kind().as_str().to_string(),
            states: game.state_count(),
            transitions: game.transitions().len(),
            features: game.products().features().len(),
            products: game.products().len(),
        }
    }
}

#[derive(Serialize)]
pub struct ProductRow {
    pub product: Vec<String>,
    pub value: Value,
}

#[derive(Serialize)]
pub struct RunReport {
    pub game: GameInfo,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    pub iterations: usize,
    pub table: Vec<ProductRow>,
    pub solution: Vec<StateCells>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub winners: Option<Vec<SolutionCell>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strategy: Option<Vec<StateStrategy>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    pub duration_ms: f64,
}

pub struct ReportInputs<'a> {
    pub path: &'a Path,
    pub game: &'a FeaturedGame,
    pub solution: &'a FeaturedSolution,
    pub lambda: Option<f64>,
    pub epsilon: Option<f64>,
    pub strategy: Option<&'a FeaturedStrategy>,
    pub product_filter: Option<&'a [String]>,
    pub duration_ms: f64,
}

pub fn build_report(inputs: ReportInputs<'_>) -> RunReport {
    let game = inputs.game;
    let headline = inputs.solution.headline_function(game.initial());
    let stats: &SolveStats = inputs.solution.stats();

    let ctx = game.products();
    let mut table = Vec::new();
    for (i, p) in ctx.products().iter().enumerate() {
        let names: Vec<String> =
            p.member_names(ctx.features()).iter().map(|s| s.to_string()).collect();
        if let Some(filter) = inputs.product_filter {
            let mut filter: Vec<String> = filter.to_vec();
            filter.sort();
            let mut mine = names.clone();
            mine.sort();
            if filter != mine {
                continue;
            }
        }
        table.push(ProductRow { product: names, value: headline.value_at_index(i).clone() });
    }

    let winners = match inputs.solution {
        FeaturedSolution::Parity(solved) => {
            Some(function_cells(&solved.winners.map(|&b| Value::Bool(b))))
        }
        _ => None,
    };

    RunReport {
        game: GameInfo::new(inputs.path, game),
        lambda: inputs.lambda,
        epsilon: inputs.epsilon,
        iterations: stats.iterations,
        table,
        solution: solution_cells(game, inputs.solution),
        winners,
        strategy: inputs.strategy.map(|s| strategy_cells(game, s)),
        warnings: game.meta().notes.clone(),
        duration_ms: inputs.duration_ms,
    }
}

/// Renders the per-product table for `--format table`.
pub fn render_table(report: &RunReport) -> String {
    let mut out = String::new();
    let width = report
        .table
        .iter()
        .map(|r| product_label(&r.product).len())
        .max()
        .unwrap_or(7)
        .max("product".len());
    out.push_str(&format!("{:width$}  value\n", "product"));
    for row in &report.table {
        out.push_str(&format!("{:width$}  {}\n", product_label(&row.product), row.value));
    }
    out
}

pub fn product_label(names: &[String]) -> String {
    format!("{{{}}}", names.join(","))
}
