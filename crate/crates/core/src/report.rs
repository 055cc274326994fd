//! Board analysis summaries shared by the command line and the HTTP service.

use std::fmt::Write;
use std::sync::Arc;

use serde::Serialize;

use crate::configuration::Configuration;
use crate::hexboard::{BoardSpec, Shape};
use crate::puzzlegraph::bfs::{count_components_with, enumerate_component};
use crate::puzzlegraph::group::count_components_algebraic;
use crate::puzzlegraph::placements::PlacementGraph;
use crate::puzzlegraph::{factorial, Budget, GodsNumberBounds, GraphError};
use crate::theorems::formula::{component_count_formula, corner_reduction_count, FormulaCount};

/// How the component count was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Formula,
    Bfs,
    Derivation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub board: String,
    pub shape: Shape,
    pub h: usize,
    pub components: Option<u128>,
    pub provenance: Option<Provenance>,
    pub component_size: Option<u128>,
    pub depth: Option<u32>,
    pub gods_bounds: Option<GodsNumberBounds>,
    pub start: Option<Configuration>,
    /// True when some field could not be computed within the budget.
    pub partial: bool,
    pub notes: Vec<String>,
}

pub const CSV_HEADER: &str = "board,h,components,component_size,depth_lower,depth_upper";

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Board names such as `P(3,4)` contain commas, so they are quoted.
fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl AnalysisReport {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            csv_field(&self.board),
            self.h,
            opt(self.components),
            opt(self.component_size),
            opt(self.gods_bounds.map(|g| g.lower)),
            opt(self.gods_bounds.map(|g| g.upper)),
        )
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let na = || "n/a".to_string();
        writeln!(s, "board:          {}", self.board).unwrap();
        writeln!(s, "holes:          {}", self.h).unwrap();
        let prov = self
            .provenance
            .map(|p| format!(" ({})", serde_json::to_value(p).unwrap().as_str().unwrap()));
        writeln!(
            s,
            "components:     {}{}",
            self.components.map_or_else(na, |c| c.to_string()),
            prov.unwrap_or_default()
        )
        .unwrap();
        writeln!(
            s,
            "component size: {}",
            self.component_size.map_or_else(na, |c| c.to_string())
        )
        .unwrap();
        writeln!(
            s,
            "god's number:   {}",
            self.gods_bounds
                .map_or_else(na, |g| format!("between {} and {}", g.lower, g.upper))
        )
        .unwrap();
        for note in &self.notes {
            writeln!(s, "note:           {note}").unwrap();
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalysisError {
    #[error("hole count {h} is invalid for a board with {cells} cells")]
    InvalidHoles { h: usize, cells: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Component count, one sample component and God's-number bounds for
/// `board` with `h` holes. Closed forms are preferred for the count; search
/// results that exceed `budget` are left empty and the report is marked
/// partial.
pub fn analyze(
    board: Arc<BoardSpec>,
    h: usize,
    budget: Budget,
) -> Result<AnalysisReport, AnalysisError> {
    let n = board.len();
    if h == 0 || h >= n {
        return Err(AnalysisError::InvalidHoles { h, cells: n });
    }
    let mut report = AnalysisReport {
        board: board.name(),
        shape: board.shape().clone(),
        h,
        components: None,
        provenance: None,
        component_size: None,
        depth: None,
        gods_bounds: None,
        start: None,
        partial: false,
        notes: Vec::new(),
    };
    let graph = PlacementGraph::build(&board, h);
    if graph.is_empty() {
        report.components = Some(0);
        report.provenance = Some(Provenance::Bfs);
        report.notes.push("every configuration is isolated".into());
        return Ok(report);
    }
    let t = n - h;

    match component_count_formula(&board, h) {
        FormulaCount::Covered { count, .. } => {
            report.components = Some(count);
            report.provenance = Some(Provenance::Formula);
        }
        FormulaCount::NotCovered => {
            let trimmed_count = if h == 2 && !board.tight_corners().is_empty() {
                board
                    .trim()
                    .ok()
                    .and_then(|tb| component_count_formula(&tb, 2).count())
            } else {
                None
            };
            if let Some(c) = trimmed_count.and_then(|c| corner_reduction_count(&board, c)) {
                report.components = Some(c);
                report.provenance = Some(Provenance::Formula);
            } else {
                match count_components_with(&board, h, budget) {
                    Ok(c) => {
                        report.components = Some(c);
                        report.provenance = Some(Provenance::Bfs);
                    }
                    Err(GraphError::BudgetExceeded { .. })
                    | Err(GraphError::StateTooWide { .. }) => {
                        match count_components_algebraic(&board, h) {
                            Ok(c) => {
                                report.components = Some(c);
                                report.provenance = Some(Provenance::Derivation);
                                report.notes.push(
                                    "count derived from the label-permutation groups of the hole-placement graph".into(),
                                );
                            }
                            Err(_) => report.partial = true,
                        }
                    }
                    Err(e) => return Err(e.into()),
                }
            }
        }
    }

    let start = Configuration::default_start(board.clone(), h).map_err(GraphError::from)?;
    let sample = enumerate_component(&start, &start.holes(), budget);
    match sample {
        Ok(s) => {
            report.component_size = Some(s.size as u128);
            report.depth = Some(s.depth);
            report.gods_bounds = Some(GodsNumberBounds {
                lower: s.depth,
                upper: 2 * s.depth,
            });
        }
        Err(GraphError::BudgetExceeded { .. }) | Err(GraphError::StateTooWide { .. }) => {
            report.partial = true;
            report
                .notes
                .push("sample component exceeds the search budget; depth not computed".into());
            if graph.n_components == 1 {
                let total = factorial(t).and_then(|f| f.checked_mul(graph.len() as u128));
                if let (Some(total), Some(c)) = (total, report.components) {
                    if c > 0 && total % c == 0 {
                        report.component_size = Some(total / c);
                    }
                }
            }
        }
        Err(e) => return Err(e.into()),
    }
    if graph.n_components > 1 {
        report.notes.push(format!(
            "hole placements split into {} classes",
            graph.n_components
        ));
    }
    report.start = Some(start);
    Ok(report)
}
