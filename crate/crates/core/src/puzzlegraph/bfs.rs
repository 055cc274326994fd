//! Level-synchronous parallel BFS over one puzzle-graph component.

use std::hash::BuildHasherDefault;
use std::sync::Arc;

use dashmap::DashSet;
use rayon::prelude::*;
use rustc_hash::FxHasher;
use serde::Serialize;

use crate::configuration::Configuration;
use crate::hexboard::{BoardSpec, Cell};

use super::codec::StateCodec;
use super::placements::PlacementGraph;
use super::{factorial, Budget, GraphError};

type StateSet = DashSet<u128, BuildHasherDefault<FxHasher>>;

/// Frontiers smaller than this are expanded on the calling thread.
const PARALLEL_THRESHOLD: usize = 2048;

/// Size, depth and home count of the component of `start`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentSummary {
    pub start: Configuration,
    pub size: u64,
    /// Eccentricity of `start` within its component.
    pub depth: u32,
    /// Configurations in the component whose holes are exactly the home set.
    pub home_count: u64,
    pub contains_isolated: bool,
    /// Number of states at each BFS distance from `start`.
    pub level_sizes: Vec<u64>,
}

/// A fully explored component with its visited set kept for membership tests.
pub struct ExploredComponent {
    pub summary: ComponentSummary,
    codec: StateCodec,
    states: StateSet,
}

impl ExploredComponent {
    pub fn codec(&self) -> StateCodec {
        self.codec
    }

    pub fn contains(&self, c: &Configuration) -> bool {
        c.labels().len() == self.codec.cells()
            && c.labels()
                .iter()
                .all(|&l| (l as u32) < (1 << self.codec.bits()))
            && self.states.contains(&self.codec.encode(c.labels()))
    }

    pub fn contains_state(&self, s: u128) -> bool {
        self.states.contains(&s)
    }

    /// Every state of the component, in no particular order.
    pub fn states(&self) -> Vec<u128> {
        self.states.iter().map(|s| *s).collect()
    }
}

fn home_mask(board: &BoardSpec, home_holes: &[Cell]) -> Result<u128, GraphError> {
    let mut mask = 0u128;
    for &c in home_holes {
        let i = board
            .index_of(c)
            .ok_or(crate::configuration::ConfigError::CellNotOnBoard(c))?;
        mask |= 1 << i;
    }
    Ok(mask)
}

/// Explores the component of `start`, keeping the visited set.
pub fn explore_component(
    start: &Configuration,
    home_holes: &[Cell],
    budget: Budget,
) -> Result<ExploredComponent, GraphError> {
    let board = start.board();
    let codec = StateCodec::for_labels(start.labels())?;
    let home = home_mask(board, home_holes)?;
    let s0 = codec.encode(start.labels());
    let states = StateSet::default();
    states.insert(s0);
    let mut frontier = vec![s0];
    let mut level_sizes = vec![1u64];
    let mut home_count = (codec.hole_mask(s0) == home) as u64;
    let mut size = 1u64;
    loop {
        let next: Vec<u128> = if frontier.len() < PARALLEL_THRESHOLD {
            let mut next = Vec::new();
            for &s in &frontier {
                codec.for_each_successor(board, s, |t, _| {
                    if states.insert(t) {
                        next.push(t);
                    }
                });
            }
            next
        } else {
            frontier
                .par_iter()
                .fold(Vec::new, |mut acc, &s| {
                    codec.for_each_successor(board, s, |t, _| {
                        if states.insert(t) {
                            acc.push(t);
                        }
                    });
                    acc
                })
                .reduce(Vec::new, |mut a, mut b| {
                    a.append(&mut b);
                    a
                })
        };
        if next.is_empty() {
            break;
        }
        size += next.len() as u64;
        if size > budget.0 {
            return Err(GraphError::BudgetExceeded { budget: budget.0 });
        }
        home_count += next.iter().filter(|&&s| codec.hole_mask(s) == home).count() as u64;
        level_sizes.push(next.len() as u64);
        frontier = next;
    }
    let summary = ComponentSummary {
        start: start.clone(),
        size,
        depth: (level_sizes.len() - 1) as u32,
        home_count,
        contains_isolated: size == 1 && start.is_isolated(),
        level_sizes,
    };
    Ok(ExploredComponent {
        summary,
        codec,
        states,
    })
}

/// Size, depth and home count of the component containing `start`.
pub fn enumerate_component(
    start: &Configuration,
    home_holes: &[Cell],
    budget: Budget,
) -> Result<ComponentSummary, GraphError> {
    explore_component(start, home_holes, budget).map(|e| e.summary)
}

/// Number of puzzle-graph components containing non-isolated configurations.
///
/// For each component of the hole-placement graph, one component is explored
/// from a representative placement `H`; every component over that placement
/// class contains the same number of configurations with holes `H`, so the
/// class contributes `t! / home_count` components.
pub fn count_components(board: &Arc<BoardSpec>, h: usize) -> Result<u128, GraphError> {
    count_components_with(board, h, Budget::from_env())
}

pub fn count_components_with(
    board: &Arc<BoardSpec>,
    h: usize,
    budget: Budget,
) -> Result<u128, GraphError> {
    let graph = PlacementGraph::build(board, h);
    if graph.is_empty() {
        return Err(GraphError::NoNonIsolated { h });
    }
    let t = board.len() - h;
    let total = factorial(t).ok_or(GraphError::Overflow)?;
    let mut count = 0u128;
    for rep in graph.representatives() {
        let holes: Vec<Cell> = graph.placements[rep]
            .iter()
            .map(|&i| board.cell(i))
            .collect();
        let start = Configuration::ordered(board.clone(), &holes)?;
        let summary = enumerate_component(&start, &holes, budget)?;
        if total % summary.home_count as u128 != 0 {
            return Err(GraphError::DivisionNotExact {
                total,
                home_count: summary.home_count,
            });
        }
        count += total / summary.home_count as u128;
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn start(board: BoardSpec, h: usize) -> Configuration {
        Configuration::default_start(Arc::new(board), h).unwrap()
    }

    #[test]
    fn flower_two_sizes() {
        for (h, size) in [(2, 60), (3, 132), (4, 210)] {
            let c = start(BoardSpec::flower(2).unwrap(), h);
            let s = enumerate_component(&c, &c.holes(), Budget::default()).unwrap();
            assert_eq!(s.size, size);
            assert_eq!(s.level_sizes.iter().sum::<u64>(), size);
        }
    }

    #[test]
    fn triangle_three_holes_four() {
        let c = start(BoardSpec::triangle(3).unwrap(), 4);
        let s = enumerate_component(&c, &c.holes(), Budget::default()).unwrap();
        assert_eq!(s.size, 30);
        assert_eq!(s.home_count, 2);
    }

    #[test]
    fn budget_is_enforced() {
        let c = start(BoardSpec::flower(2).unwrap(), 2);
        assert_eq!(
            enumerate_component(&c, &c.holes(), Budget(10)).unwrap_err(),
            GraphError::BudgetExceeded { budget: 10 }
        );
    }

    #[test]
    fn isolated_start_is_singleton() {
        let b = Arc::new(BoardSpec::parallelogram(3, 3).unwrap());
        let c = Configuration::ordered(b, &[Cell::new(0, 0), Cell::new(2, 2)]).unwrap();
        let s = enumerate_component(&c, &c.holes(), Budget::default()).unwrap();
        assert_eq!(s.size, 1);
        assert_eq!(s.depth, 0);
        assert!(s.contains_isolated);
    }

    #[test]
    fn counts_small_tables() {
        let t2 = Arc::new(BoardSpec::triangle(2).unwrap());
        assert_eq!(count_components(&t2, 2).unwrap(), 1);
        let t3 = Arc::new(BoardSpec::triangle(3).unwrap());
        assert_eq!(count_components(&t3, 2).unwrap(), 24);
        assert_eq!(count_components(&t3, 3).unwrap(), 6);
        let f2 = Arc::new(BoardSpec::flower(2).unwrap());
        assert_eq!(count_components(&f2, 2).unwrap(), 24);
        assert_eq!(
            count_components(&f2, 1),
            Err(GraphError::NoNonIsolated { h: 1 })
        );
    }
}
