//! Closed-form component counts.

use std::sync::Arc;

use serde::Serialize;

use crate::hexboard::{BoardSpec, Shape};
use crate::puzzlegraph::bfs::count_components_with;
use crate::puzzlegraph::{binomial, factorial, Budget, GraphError};

/// Which closed form produced a count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormulaSource {
    /// `(2 m2 - h)!` on two-column parallelograms.
    Skinny,
    /// One component: large parallelograms, triangles and flowers, `h >= 3`.
    Maximal,
    /// Two components: flowers, trimmed triangles and trimmed parallelograms, `h = 2`.
    StrongParity,
    /// `4 C(m1 m2 - 2, 2)` on parallelograms with two holes.
    ParallelogramTwoHoles,
    /// `12 C(m(m+1)/2 - 2, 3)` on triangles with two holes.
    TriangleTwoHoles,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum FormulaCount {
    Covered { count: u128, source: FormulaSource },
    NotCovered,
}

impl FormulaCount {
    pub fn count(self) -> Option<u128> {
        match self {
            FormulaCount::Covered { count, .. } => Some(count),
            FormulaCount::NotCovered => None,
        }
    }
}

fn covered(count: Option<u128>, source: FormulaSource) -> FormulaCount {
    match count {
        Some(count) => FormulaCount::Covered { count, source },
        None => FormulaCount::NotCovered,
    }
}

/// True for the shapes with one component of non-isolated configurations.
pub fn is_maximal_family(shape: &Shape, h: usize) -> bool {
    if h < 3 {
        return false;
    }
    match *shape {
        Shape::Parallelogram { m1, m2 } => m1 >= 3 && m2 >= 3,
        Shape::Triangle { m } => m >= 5,
        Shape::Flower { m } => m >= 3,
        _ => false,
    }
}

/// True for the shapes with exactly two components of non-isolated
/// configurations when `h = 2`.
pub fn is_strong_parity_family(shape: &Shape, h: usize) -> bool {
    if h != 2 {
        return false;
    }
    match *shape {
        Shape::Flower { m } => m >= 3,
        Shape::TrimmedTriangle { m } => m >= 5,
        Shape::TrimmedParallelogram { m1, m2 } => m1 >= 3 && m2 >= 3 && m1.max(m2) >= 4,
        _ => false,
    }
}

/// Two-column (or two-row) parallelogram: returns the number of rows.
pub fn skinny_rows(shape: &Shape) -> Option<u32> {
    match *shape {
        Shape::Parallelogram { m1: 2, m2 } if m2 >= 2 => Some(m2),
        Shape::Parallelogram { m1, m2: 2 } if m1 >= 2 => Some(m1),
        _ => None,
    }
}

/// Component count from closed forms alone.
pub fn component_count_formula(board: &BoardSpec, h: usize) -> FormulaCount {
    let n = board.len();
    if h < 2 || h >= n {
        return FormulaCount::NotCovered;
    }
    let shape = board.shape();
    if skinny_rows(shape).is_some() {
        return covered(factorial(n - h), FormulaSource::Skinny);
    }
    if is_maximal_family(shape, h) {
        return FormulaCount::Covered {
            count: 1,
            source: FormulaSource::Maximal,
        };
    }
    if is_strong_parity_family(shape, h) {
        return FormulaCount::Covered {
            count: 2,
            source: FormulaSource::StrongParity,
        };
    }
    match (shape, h) {
        (&Shape::Parallelogram { m1, m2 }, 2) if m1 >= 3 && m2 >= 3 && m1.max(m2) >= 4 => covered(
            binomial(n as u64 - 2, 2).and_then(|b| b.checked_mul(4)),
            FormulaSource::ParallelogramTwoHoles,
        ),
        (&Shape::Triangle { m }, 2) if m >= 5 => covered(
            binomial(n as u64 - 2, 3).and_then(|b| b.checked_mul(12)),
            FormulaSource::TriangleTwoHoles,
        ),
        _ => FormulaCount::NotCovered,
    }
}

/// Tight-corner reduction: given `c` components for the trimmed board with
/// two holes, the count for a parallelogram (`m1, m2 >= 3`) or triangle
/// (`m >= 4`) with two holes. `None` for other boards or on overflow.
pub fn corner_reduction_count(board: &BoardSpec, c: u128) -> Option<u128> {
    let tiles = board.len() as u64 - 2;
    match *board.shape() {
        Shape::Parallelogram { m1, m2 } if m1 >= 3 && m2 >= 3 => {
            binomial(tiles, 2)?.checked_mul(2)?.checked_mul(c)
        }
        Shape::Triangle { m } if m >= 4 => binomial(tiles, 3)?.checked_mul(6)?.checked_mul(c),
        _ => None,
    }
}

/// Tight-corner reduction with `c` taken from the trimmed board's closed
/// form, or from BFS when no closed form covers it.
pub fn corner_reduction_with_bfs(
    board: &BoardSpec,
    budget: Budget,
) -> Result<Option<u128>, GraphError> {
    if !matches!(board.shape(), Shape::Parallelogram { m1, m2 } if *m1 >= 3 && *m2 >= 3)
        && !matches!(board.shape(), Shape::Triangle { m } if *m >= 4)
    {
        return Ok(None);
    }
    let trimmed = match board.trim() {
        Ok(b) => Arc::new(b),
        Err(_) => return Ok(None),
    };
    let c = match component_count_formula(&trimmed, 2).count() {
        Some(c) => c,
        None => count_components_with(&trimmed, 2, budget)?,
    };
    Ok(corner_reduction_count(board, c))
}
