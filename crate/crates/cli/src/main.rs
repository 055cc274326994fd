//! `hexslide`: analyses, table checks, solvability queries and graph export.

mod tables;

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hexslide_core::puzzlegraph::dot::DOT_LIMIT;
use hexslide_core::puzzlegraph::{export_dot, shortest_path, BUDGET_ENV};
use hexslide_core::report::{analyze, AnalysisError, CSV_HEADER};
use hexslide_core::theorems::patching::{verify_derivation, DeriveError, Deriver, PatchDerivation};
use hexslide_core::{
    parse_cell_list, BoardSpec, Budget, Cell, Configuration, Decision, GraphError, Shape, Solver,
    SolverOptions,
};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "hexslide",
    version,
    about = "Hexagonal sliding puzzle analyses"
)]
struct Cli {
    /// Worker threads for parallel search (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Maximum number of visited states per search.
    #[arg(long, global = true, env = BUDGET_ENV)]
    budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Component count, sample component and God's-number bounds.
    Analyze {
        #[command(flatten)]
        board: BoardArgs,
        #[arg(long)]
        holes: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Recompute the published tables.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Also run rows that search more than a million states.
        #[arg(long)]
        include_slow: bool,
    },
    /// Decide whether `start` can be slid into `target`.
    Solve {
        #[arg(long)]
        board: PathBuf,
        #[arg(long)]
        start: PathBuf,
        #[arg(long)]
        target: PathBuf,
        /// Include a shortest slide sequence.
        #[arg(long)]
        emit_moves: bool,
    },
    /// Write the component of the default start as a DOT graph.
    ExportGraph {
        #[command(flatten)]
        board: BoardArgs,
        #[arg(long)]
        holes: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = DOT_LIMIT)]
        limit: u64,
    },
    /// Build a patching derivation of maximal connectivity (h >= 3) or
    /// strong parity (h = 2).
    Derive {
        #[command(flatten)]
        board: BoardArgs,
        #[arg(long)]
        holes: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a derivation file produced by `derive`.
    Check {
        #[arg(long)]
        derivation: PathBuf,
    },
    /// Run the HTTP game service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value_t = hexslide_service::DEFAULT_HINT_BUDGET)]
        hint_budget: u64,
        /// Directory for session snapshots.
        #[arg(long)]
        snapshot_dir: Option<PathBuf>,
        /// Allowed CORS origin (default: any).
        #[arg(long)]
        cors_origin: Option<String>,
        #[arg(long, default_value = "127.0.0.1")]
        bind: String,
    },
}

#[derive(Args)]
struct BoardArgs {
    #[arg(long, value_parser = ["parallelogram", "triangle", "flower", "trimmed-parallelogram", "trimmed-triangle", "explicit"])]
    shape: String,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    m1: Option<u32>,
    #[arg(long)]
    m2: Option<u32>,
    /// Cells of an explicit board as `q,r;q,r;...`.
    #[arg(long)]
    cells: Option<String>,
}

impl BoardArgs {
    fn build(&self) -> Result<Arc<BoardSpec>, Failure> {
        let cells = self
            .cells
            .as_deref()
            .map(parse_cell_list)
            .transpose()
            .map_err(Failure::invalid)?;
        let shape = Shape::from_parts(&self.shape, self.m, self.m1, self.m2, cells)
            .map_err(Failure::invalid)?;
        BoardSpec::build(shape)
            .map(Arc::new)
            .map_err(Failure::invalid)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    PaperTables,
}

/// Error with the exit code it maps to.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn invalid(e: impl fmt::Display) -> Failure {
        Failure {
            code: 2,
            message: e.to_string(),
        }
    }

    fn budget(e: impl fmt::Display) -> Failure {
        Failure {
            code: 3,
            message: e.to_string(),
        }
    }

    fn failed(e: impl fmt::Display) -> Failure {
        Failure {
            code: 1,
            message: e.to_string(),
        }
    }

    fn graph(e: GraphError) -> Failure {
        match e {
            GraphError::BudgetExceeded { .. }
            | GraphError::StateTooWide { .. }
            | GraphError::ComponentTooLarge { .. } => Failure::budget(e),
            _ => Failure::invalid(e),
        }
    }
}

/// Writes one line to stdout; a closed pipe is not an error.
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let budget = cli.budget.map(Budget).unwrap_or_default();
    match run(cli.command, budget) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command, budget: Budget) -> Result<u8, Failure> {
    match command {
        Command::Analyze {
            board,
            holes,
            format,
        } => cmd_analyze(board.build()?, holes, format, budget),
        Command::Verify {
            suite: Suite::PaperTables,
            include_slow,
        } => Ok(if tables::run(include_slow, budget) {
            0
        } else {
            1
        }),
        Command::Solve {
            board,
            start,
            target,
            emit_moves,
        } => cmd_solve(&board, &start, &target, emit_moves, budget),
        Command::ExportGraph {
            board,
            holes,
            out,
            limit,
        } => cmd_export(board.build()?, holes, &out, limit),
        Command::Derive { board, holes, out } => {
            cmd_derive(board.build()?, holes, out.as_deref(), budget)
        }
        Command::Check { derivation } => cmd_check(&derivation),
        Command::Serve {
            port,
            hint_budget,
            snapshot_dir,
            cors_origin,
            bind,
        } => {
            let config = hexslide_service::ServiceConfig {
                budget,
                hint_budget: Budget(hint_budget),
                snapshot_dir,
                cors_origin,
            };
            serve(&bind, port, config)
        }
    }
}

fn cmd_analyze(
    board: Arc<BoardSpec>,
    h: usize,
    format: Format,
    budget: Budget,
) -> Result<u8, Failure> {
    let report = analyze(board, h, budget).map_err(|e| match e {
        AnalysisError::Graph(g) => Failure::graph(g),
        e => Failure::invalid(e),
    })?;
    match format {
        Format::Json => emit(&serde_json::to_string_pretty(&report).expect("report serializes")),
        Format::Csv => emit(&format!("{CSV_HEADER}\n{}", report.csv_row())),
        Format::Text => emit(report.to_text().trim_end()),
    }
    Ok(if report.partial { 3 } else { 0 })
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

/// Start and target files hold `{"cells": [[q, r, label], ...]}`, with an
/// optional `board` that must match the board file.
#[derive(serde::Deserialize)]
struct ConfigFile {
    board: Option<Shape>,
    cells: Vec<(i32, i32, u8)>,
}

fn load_configuration(path: &Path, board: &Arc<BoardSpec>) -> Result<Configuration, Failure> {
    let file: ConfigFile = serde_json::from_str(&read(path)?)
        .map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
    if file.board.as_ref().is_some_and(|s| s != board.shape()) {
        return Err(Failure::invalid(format!(
            "{}: board differs from the board file",
            path.display()
        )));
    }
    let cells: Vec<(Cell, u8)> = file
        .cells
        .iter()
        .map(|&(q, r, l)| (Cell::new(q, r), l))
        .collect();
    Configuration::from_cells(board.clone(), &cells)
        .map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

fn cmd_solve(
    board: &Path,
    start: &Path,
    target: &Path,
    emit_moves: bool,
    budget: Budget,
) -> Result<u8, Failure> {
    let shape: Shape = serde_json::from_str(&read(board)?)
        .map_err(|e| Failure::invalid(format!("{}: {e}", board.display())))?;
    let board = Arc::new(BoardSpec::build(shape).map_err(Failure::invalid)?);
    let start = load_configuration(start, &board)?;
    let target = load_configuration(target, &board)?;
    let solver = Solver::new(SolverOptions {
        budget,
        ..SolverOptions::default()
    });
    let verdict = solver.decide(&start, &target).map_err(Failure::invalid)?;
    let mut out = serde_json::to_value(&verdict).expect("verdict serializes");
    let mut code = if verdict.decision == Decision::Unknown {
        3
    } else {
        0
    };
    if emit_moves && verdict.decision == Decision::Solvable {
        match shortest_path(&start, &target, budget) {
            Ok(path) => out["moves"] = json!(path),
            Err(e) => {
                out["moves"] = serde_json::Value::Null;
                out["moves_error"] = json!(e.to_string());
                code = 3;
            }
        }
    }
    emit(&serde_json::to_string_pretty(&out).expect("json"));
    Ok(code)
}

fn cmd_export(board: Arc<BoardSpec>, h: usize, out: &Path, limit: u64) -> Result<u8, Failure> {
    if h == 0 || h >= board.len() {
        return Err(Failure::invalid(format!(
            "{board} with {h} holes has no movable configuration"
        )));
    }
    let start = Configuration::default_start(board, h).map_err(Failure::invalid)?;
    let (dot, nodes, edges) = export_dot(&start, limit).map_err(Failure::graph)?;
    std::fs::write(out, dot).map_err(|e| Failure::failed(format!("{}: {e}", out.display())))?;
    emit(&json!({ "out": out, "nodes": nodes, "edges": edges }).to_string());
    Ok(0)
}

fn cmd_derive(
    board: Arc<BoardSpec>,
    h: usize,
    out: Option<&Path>,
    budget: Budget,
) -> Result<u8, Failure> {
    let d = Deriver::new(budget)
        .derive(&board, h)
        .map_err(|e| match e {
            DeriveError::Graph(g) => Failure::graph(g),
            e => Failure::failed(e),
        })?;
    let text = serde_json::to_string_pretty(&d).expect("derivation serializes");
    match out {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| Failure::failed(format!("{}: {e}", p.display())))?
        }
        None => emit(&text),
    }
    Ok(0)
}

fn cmd_check(path: &Path) -> Result<u8, Failure> {
    let d: PatchDerivation = serde_json::from_str(&read(path)?)
        .map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
    match verify_derivation(&d) {
        Ok(()) => {
            emit(&json!({ "valid": true }).to_string());
            Ok(0)
        }
        Err(problem) => {
            emit(&json!({ "valid": false, "problem": problem }).to_string());
            Ok(1)
        }
    }
}

fn serve(bind: &str, port: u16, config: hexslide_service::ServiceConfig) -> Result<u8, Failure> {
    tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()),
        )
        .init();
    let addr: std::net::SocketAddr = format!("{bind}:{port}")
        .parse()
        .map_err(|e| Failure::invalid(format!("{bind}:{port}: {e}")))?;
    let rt = tokio::runtime::Runtime::new().map_err(Failure::failed)?;
    rt.block_on(hexslide_service::serve(addr, config))
        .map_err(Failure::failed)?;
    Ok(0)
}
