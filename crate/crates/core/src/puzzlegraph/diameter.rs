//! God's-number bounds and exact component diameters.
//!
//! One BFS tree of depth `d` bounds the diameter of its component between `d`
//! and `2d`. The exact diameter is the largest eccentricity; since slides do
//! not depend on labels, relabelling tiles is a graph isomorphism, so the
//! eccentricity of a configuration depends only on its hole placement. One
//! BFS per placement therefore suffices.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use crate::configuration::Configuration;
use crate::hexboard::{BoardSpec, Cell};

use super::bfs::enumerate_component;
use super::placements::{Placement, PlacementGraph};
use super::{Budget, GraphError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GodsNumberBounds {
    pub lower: u32,
    pub upper: u32,
}

/// `(d, 2d)` where `d` is the BFS depth from `start`.
pub fn gods_number_bounds(
    start: &Configuration,
    budget: Budget,
) -> Result<GodsNumberBounds, GraphError> {
    if start.is_isolated() {
        return Err(GraphError::IsolatedStart);
    }
    let s = enumerate_component(start, &start.holes(), budget)?;
    Ok(GodsNumberBounds {
        lower: s.depth,
        upper: 2 * s.depth,
    })
}

/// Eccentricity of the configurations with one hole placement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlacementDepth {
    pub holes: Vec<Cell>,
    pub depth: u32,
    pub component_size: u64,
}

/// BFS depth from the ordered configuration over each non-isolated hole
/// placement in the same placement component as `start`. With `symmetry`,
/// placements equivalent under a board symmetry are searched once and the
/// result is reported for the least placement of each orbit.
pub fn placement_depths(
    start: &Configuration,
    budget: Budget,
    symmetry: bool,
) -> Result<Vec<PlacementDepth>, GraphError> {
    let board = start.board_arc().clone();
    let graph = PlacementGraph::build(&board, start.h());
    let home = start.hole_indices();
    let comp = graph
        .index_of(&home)
        .map(|i| graph.component[i])
        .ok_or(GraphError::IsolatedStart)?;
    let members = graph.members(comp);
    let reps: Vec<Placement> = if symmetry {
        orbit_representatives(&board, members.iter().map(|&i| graph.placements[i].clone()))
    } else {
        members
            .iter()
            .map(|&i| graph.placements[i].clone())
            .collect()
    };
    reps.into_iter()
        .map(|p| {
            let holes: Vec<Cell> = p.iter().map(|&i| board.cell(i)).collect();
            let c = Configuration::ordered(board.clone(), &holes)?;
            let s = enumerate_component(&c, &holes, budget)?;
            Ok(PlacementDepth {
                holes,
                depth: s.depth,
                component_size: s.size,
            })
        })
        .collect()
}

fn orbit_representatives(
    board: &Arc<BoardSpec>,
    placements: impl Iterator<Item = Placement>,
) -> Vec<Placement> {
    let syms = board.symmetries();
    let mut seen = BTreeSet::new();
    let mut reps = Vec::new();
    for p in placements {
        let orbit: Vec<Placement> = syms
            .iter()
            .map(|g| {
                let mut img: Placement = p.iter().map(|&i| g[i]).collect();
                img.sort_unstable();
                img
            })
            .collect();
        let least = orbit.iter().min().cloned().unwrap_or_else(|| p.clone());
        if seen.insert(least.clone()) {
            reps.push(least);
        }
    }
    reps
}

/// Exact diameter of the component of the default start for `(board, h)`.
pub fn exact_gods_number(
    board: &Arc<BoardSpec>,
    h: usize,
    budget: Budget,
    symmetry: bool,
) -> Result<u32, GraphError> {
    let start = Configuration::default_start(board.clone(), h)?;
    if start.is_isolated() {
        return Err(GraphError::NoNonIsolated { h });
    }
    Ok(placement_depths(&start, budget, symmetry)?
        .iter()
        .map(|p| p.depth)
        .max()
        .unwrap_or(0))
}
