//! Batch front end for featured-game solving: load documents, run the
//! family-based solvers, translate model-checking and distance problems into
//! games, and verify featured results against per-product oracles.
//!
//! Exit codes: 0 success, 1 parse/validation failure, 2 bad parameters,
//! 3 internal consistency failure, 4 verification mismatch.

mod report;
mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use featgames::error::Error;
use featgames::featured;
use featgames::game::format::{emit_game, parse_game};
use featgames::game::{FeaturedGame, GameKind};
use featgames::trans;
use featgames::trans::{FtsVariant, MuFormula};

#[derive(Parser)]
#[command(name = "featgames", version, about = "Solvers for featured two-player graph games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a featured game for all products at once.
    Solve(SolveArgs),
    /// Solve, then check every product against the single-game solvers.
    Verify(VerifyArgs),
    /// Build a featured game from another problem.
    Translate(TranslateArgs),
    /// List the products of a game document.
    Products(ProductsArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Table,
}

#[derive(Args)]
struct SolveArgs {
    /// Game document to solve.
    #[arg(long)]
    game: PathBuf,
    /// Expected game kind; must match the document.
    #[arg(long = "type")]
    kind: Option<KindArg>,
    /// Discounting factor (discounted games; defaults to the document's
    /// recorded discount, if any).
    #[arg(long)]
    lambda: Option<f64>,
    /// Iteration precision for discounted games.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Also extract a featured strategy and write it to this file.
    #[arg(long)]
    strategy: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    /// Restrict the report table to one product, as a comma-separated
    /// feature list (empty string for the empty product).
    #[arg(long)]
    product: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    game: PathBuf,
    #[arg(long = "type")]
    kind: Option<KindArg>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// Verify this solution file instead of a freshly computed solution.
    #[arg(long)]
    solution: Option<PathBuf>,
    /// Parallelize the per-product oracle loop.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Reach,
    Minreach,
    Discounted,
    Energy,
    Parity,
}

impl KindArg {
    fn to_kind(self) -> GameKind {
        match self {
            KindArg::Reach => GameKind::Reachability,
            KindArg::Minreach => GameKind::MinReachability,
            KindArg::Discounted => GameKind::Discounted,
            KindArg::Energy => GameKind::Energy,
            KindArg::Parity => GameKind::Parity,
        }
    }
}

#[derive(Args)]
struct TranslateArgs {
    #[command(subcommand)]
    mode: TranslateMode,
}

#[derive(Subcommand)]
enum TranslateMode {
    /// FTS plus mu-calculus formula, to a featured parity game.
    Mucalc {
        /// FTS document.
        fts: PathBuf,
        /// Formula text, e.g. "nu X. <a>X".
        formula: String,
        /// Output file (standard output if omitted).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Weighted FTS pair (or one tolerance-weighted FTS), to the discounted
    /// game computing their distance.
    Distance {
        /// First weighted FTS, or a tolerance-weighted FTS to split.
        fts: PathBuf,
        /// Second weighted FTS; omitted when splitting a tolerance FTS.
        fts2: Option<PathBuf>,
        /// The distance's discounting factor; the game records the square
        /// root it must be solved with.
        #[arg(long)]
        lambda: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ProductsArgs {
    #[arg(long)]
    game: PathBuf,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(args) => run_solve(args),
        Command::Verify(args) => run_verify(args),
        Command::Translate(args) => run_translate(args),
        Command::Products(args) => run_products(args),
    };
    match result {
        Ok(code) => code,
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(match error {
                Error::Parse(_) | Error::Validation(_) | Error::Domain(_) => 1u8,
                Error::Parameter(_) => 2u8,
                Error::Internal(_) => 3u8,
            })
        }
    }
}

fn read_file(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

fn load_game(path: &Path, expected: Option<KindArg>) -> Result<FeaturedGame, Error> {
    let game = parse_game(&read_file(path)?)?;
    if let Some(expected) = expected {
        let expected = expected.to_kind();
        if game.kind() != expected {
            return Err(Error::Parameter(format!(
                "--type {} does not match the document kind {}",
                expected,
                game.kind()
            )));
        }
    }
    Ok(game)
}

fn discount_params(
    game: &FeaturedGame,
    lambda: Option<f64>,
    epsilon: Option<f64>,
) -> Result<(Option<f64>, Option<f64>), Error> {
    if game.kind() != GameKind::Discounted {
        return Ok((None, None));
    }
    let lambda = lambda.or(game.meta().discount).ok_or_else(|| {
        Error::Parameter("discounted games require --lambda (or a recorded discount)".into())
    })?;
    Ok((Some(lambda), Some(epsilon.unwrap_or(1e-9))))
}

fn run_solve(args: SolveArgs) -> Result<ExitCode, Error> {
    let game = load_game(&args.game, args.kind)?;
    let (lambda, epsilon) = discount_params(&game, args.lambda, args.epsilon)?;

    let start = Instant::now();
    let solution = featured::solve(&game, lambda, epsilon)?;
    let strategy = match &args.strategy {
        None => None,
        Some(_) => Some(featured::extract_featured_strategy(&game, &solution)?),
    };
    let duration_ms = start.elapsed().as_secs_f64() * 1e3;

    let product_filter = args.product.as_deref().map(parse_product_filter);
    let report = report::build_report(report::ReportInputs {
        path: &args.game,
        game: &game,
        solution: &solution,
        lambda,
        epsilon,
        strategy: strategy.as_ref(),
        product_filter: product_filter.as_deref(),
        duration_ms,
    });

    if let (Some(path), Some(cells)) = (&args.strategy, &report.strategy) {
        std::fs::write(path, serde_json::to_string_pretty(cells).expect("serializable"))
            .map_err(|e| Error::Validation(format!("cannot write {}: {e}", path.display())))?;
    }

    match args.format {
        OutputFormat::Json => println!("{}", serde_json::to_string(&report).expect("serializable")),
        OutputFormat::Table => print!("{}", report::render_table(&report)),
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_product_filter(text: &str) -> Vec<String> {
    text.split(',').map(str::trim).filter(|s| !s.is_empty()).map(str::to_string).collect()
}

fn run_verify(args: VerifyArgs) -> Result<ExitCode, Error> {
    let game = load_game(&args.game, args.kind)?;
    let (lambda, epsilon) = discount_params(&game, args.lambda, args.epsilon)?;
    if args.jobs == 0 {
        return Err(Error::Parameter("--jobs must be at least 1".into()));
    }

    let subject = match &args.solution {
        None => verify::Subject::Solved(featured::solve(&game, lambda, epsilon)?),
        Some(path) => verify::load_subject(&game, &read_file(path)?)?,
    };
    let outcome = verify::verify(&game, &subject, lambda, epsilon, args.jobs)?;

    match args.format {
        OutputFormat::Json => {
            println!("{}", serde_json::to_string(&outcome).expect("serializable"))
        }
        OutputFormat::Table => {
            println!(
                "{} checks, {} mismatches: {}",
                outcome.checked,
                outcome.mismatches.len(),
                if outcome.passed { "pass" } else { "fail" }
            );
        }
    }

    if outcome.passed {
        Ok(ExitCode::SUCCESS)
    } else {
        let first = &outcome.mismatches[0];
        eprintln!(
            "mismatch: product {} state {}: featured {} vs oracle {}",
            report::product_label(&first.product),
            first.state,
            first.featured,
            first.oracle,
        );
        Ok(ExitCode::from(4))
    }
}

fn run_translate(args: TranslateArgs) -> Result<ExitCode, Error> {
    let (game, warnings, output) = match args.mode {
        TranslateMode::Mucalc { fts, formula, output } => {
            let fts = match trans::parse_fts(&read_file(&fts)?)? {
                FtsVariant::Plain(fts) => fts,
                FtsVariant::Tolerance(tfts) => tfts.fts,
            };
            let formula = MuFormula::parse(&formula)?;
            let result = trans::mucalc_to_parity_game(&fts, &formula)?;
            (result.game, result.warnings, output)
        }
        TranslateMode::Distance { fts, fts2, lambda, output } => {
            let (first, second) = match (trans::parse_fts(&read_file(&fts)?)?, fts2) {
                (FtsVariant::Tolerance(tfts), None) => trans::split_tolerances(&tfts)?,
                (FtsVariant::Plain(first), Some(path)) => {
                    match trans::parse_fts(&read_file(&path)?)? {
                        FtsVariant::Plain(second) => (first, second),
                        FtsVariant::Tolerance(_) => {
                            return Err(Error::Parameter(
                                "the second system must carry plain weights".into(),
                            ))
                        }
                    }
                }
                (FtsVariant::Plain(_), None) => {
                    return Err(Error::Parameter(
                        "distance needs two weighted systems, or one with tolerances".into(),
                    ))
                }
                (FtsVariant::Tolerance(_), Some(_)) => {
                    return Err(Error::Parameter(
                        "a tolerance-weighted system is split in place; drop the second file"
                            .into(),
                    ))
                }
            };
            let result = trans::distance_game(&first, &second, lambda)?;
            (result.game, result.warnings, output)
        }
    };

    for warning in &warnings {
        eprintln!("warning: {warning}");
    }
    let text = emit_game(&game);
    // The emitted document must load back.
    parse_game(&text)?;
    match output {
        None => println!("{text}"),
        Some(path) => std::fs::write(&path, text)
            .map_err(|e| Error::Validation(format!("cannot write {}: {e}", path.display())))?,
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(serde::Serialize)]
struct ProductListing {
    features: Vec<String>,
    products: Vec<ProductEntry>,
}

#[derive(serde::Serialize)]
struct ProductEntry {
    features: Vec<String>,
    formula: String,
}

fn run_products(args: ProductsArgs) -> Result<ExitCode, Error> {
    let game = load_game(&args.game, None)?;
    let ctx = game.products();
    let listing = ProductListing {
        features: ctx.features().names().to_vec(),
        products: ctx
            .products()
            .iter()
            .map(|p| ProductEntry {
                features: p.member_names(ctx.features()).iter().map(|s| s.to_string()).collect(),
                formula: p.characteristic_formula(ctx.features()).to_string(),
            })
            .collect(),
    };
    match args.format {
        OutputFormat::Json => {
            println!("{}", serde_json::to_string(&listing).expect("serializable"))
        }
        OutputFormat::Table => {
            for entry in &listing.products {
                println!("{}\t{}", report::product_label(&entry.features), entry.formula);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
