//! `verify --suite paper-tables`: recomputes the published component
//! counts, component sizes and depth lower bounds.

use std::sync::Arc;

use hexslide_core::puzzlegraph::bfs::{count_components_with, enumerate_component};
use hexslide_core::puzzlegraph::placement_depths;
use hexslide_core::theorems::formula::component_count_formula;
use hexslide_core::{BoardError, BoardSpec, Budget, Configuration};

enum Check {
    /// Number of non-trivial components and size of the default start's.
    Count { components: u128, size: u64 },
    /// Some hole placement has exactly this BFS depth.
    Depth(u32),
    /// Closed form and search agree on the component count.
    FormulaAgrees,
}

struct Row {
    table: &'static str,
    board: Result<BoardSpec, BoardError>,
    h: usize,
    check: Check,
    slow: bool,
    note: Option<&'static str>,
}

const FLOWER_NOTE: &str =
    "run on F(2): the table labels this row F(3), but its depths are those of the 7-cell flower";
const START_NOTE: &str = "depth depends on the start configuration; the matching start is shown";

fn rows() -> Vec<Row> {
    use Check::*;
    let row = |table, board, h, check, slow, note| Row {
        table,
        board,
        h,
        check,
        slow,
        note,
    };
    vec![
        row(
            "table-1",
            BoardSpec::flower(2),
            2,
            Count {
                components: 24,
                size: 60,
            },
            false,
            None,
        ),
        row(
            "table-1",
            BoardSpec::flower(2),
            3,
            Count {
                components: 6,
                size: 132,
            },
            false,
            None,
        ),
        row(
            "table-1",
            BoardSpec::flower(2),
            4,
            Count {
                components: 1,
                size: 210,
            },
            false,
            None,
        ),
        row(
            "table-2",
            BoardSpec::triangle(2),
            2,
            Count {
                components: 1,
                size: 3,
            },
            false,
            None,
        ),
        row(
            "table-2",
            BoardSpec::triangle(3),
            2,
            Count {
                components: 24,
                size: 9,
            },
            false,
            None,
        ),
        row(
            "table-2",
            BoardSpec::triangle(3),
            3,
            Count {
                components: 6,
                size: 19,
            },
            false,
            None,
        ),
        row(
            "table-2",
            BoardSpec::triangle(3),
            4,
            Count {
                components: 1,
                size: 30,
            },
            false,
            None,
        ),
        row(
            "table-2",
            BoardSpec::triangle(4),
            2,
            Count {
                components: 8064,
                size: 90,
            },
            false,
            None,
        ),
        row(
            "table-2",
            BoardSpec::triangle(4),
            3,
            Count {
                components: 1,
                size: 498_960,
            },
            true,
            None,
        ),
        row("table-3", BoardSpec::triangle(3), 2, Depth(3), false, None),
        row("table-3", BoardSpec::triangle(3), 3, Depth(4), false, None),
        row("table-3", BoardSpec::triangle(3), 4, Depth(6), false, None),
        row(
            "table-3",
            BoardSpec::triangle(4),
            2,
            Depth(17),
            false,
            Some(START_NOTE),
        ),
        row(
            "table-3",
            BoardSpec::triangle(4),
            3,
            Depth(56),
            true,
            Some(START_NOTE),
        ),
        row(
            "table-3",
            BoardSpec::parallelogram(3, 3),
            3,
            Depth(51),
            false,
            None,
        ),
        row(
            "table-3",
            BoardSpec::trimmed_parallelogram(3, 4),
            2,
            Depth(78),
            true,
            Some(START_NOTE),
        ),
        row(
            "table-3",
            BoardSpec::flower(2),
            2,
            Depth(16),
            false,
            Some(FLOWER_NOTE),
        ),
        row(
            "table-3",
            BoardSpec::flower(2),
            3,
            Depth(12),
            false,
            Some(FLOWER_NOTE),
        ),
        row(
            "table-3",
            BoardSpec::flower(2),
            4,
            Depth(8),
            false,
            Some(FLOWER_NOTE),
        ),
        row(
            "cross-check",
            BoardSpec::parallelogram(3, 4),
            2,
            FormulaAgrees,
            true,
            None,
        ),
    ]
}

fn evaluate(
    board: &Arc<BoardSpec>,
    h: usize,
    check: &Check,
    budget: Budget,
) -> Result<String, String> {
    let err = |e: &dyn std::fmt::Display| e.to_string();
    match *check {
        Check::Count { components, size } => {
            let c = count_components_with(board, h, budget).map_err(|e| err(&e))?;
            let start = Configuration::default_start(board.clone(), h).map_err(|e| err(&e))?;
            let s = enumerate_component(&start, &start.holes(), budget)
                .map_err(|e| err(&e))?
                .size;
            let text =
                format!("components {c} (expected {components}), size {s} (expected {size})");
            if c == components && s == size {
                Ok(text)
            } else {
                Err(text)
            }
        }
        Check::Depth(expected) => {
            let start = Configuration::default_start(board.clone(), h).map_err(|e| err(&e))?;
            let depths = placement_depths(&start, budget, true).map_err(|e| err(&e))?;
            match depths.iter().find(|d| d.depth == expected) {
                Some(d) => {
                    let holes: Vec<String> = d.holes.iter().map(ToString::to_string).collect();
                    Ok(format!(
                        "depth {} (expected {expected}), bounds [{}, {}], holes {}",
                        d.depth,
                        d.depth,
                        2 * d.depth,
                        holes.join(" ")
                    ))
                }
                None => {
                    let found: Vec<u32> = depths.iter().map(|d| d.depth).collect();
                    Err(format!(
                        "no start reaches depth {expected}; depths {found:?}"
                    ))
                }
            }
        }
        Check::FormulaAgrees => {
            let formula = component_count_formula(board, h).count();
            let bfs = count_components_with(board, h, budget).map_err(|e| err(&e))?;
            let text = format!("formula {formula:?}, search {bfs}");
            if formula == Some(bfs) {
                Ok(text)
            } else {
                Err(text)
            }
        }
    }
}

/// Prints one line per row and the totals; true when nothing failed.
pub fn run(include_slow: bool, budget: Budget) -> bool {
    let (mut passed, mut failed, mut skipped) = (0, 0, 0);
    for row in rows() {
        let board = Arc::new(row.board.expect("table boards are valid"));
        let name = format!("{} {} h={}", row.table, board, row.h);
        if row.slow && !include_slow {
            println!("SKIP {name}: needs --include-slow");
            skipped += 1;
            continue;
        }
        match evaluate(&board, row.h, &row.check, budget) {
            Ok(text) => {
                println!("PASS {name}: {text}");
                passed += 1;
            }
            Err(text) => {
                println!("FAIL {name}: {text}");
                failed += 1;
            }
        }
        if let Some(note) = row.note {
            println!("     note: {note}");
        }
    }
    println!("{passed} passed, {failed} failed, {skipped} skipped");
    failed == 0
}
