//! The solvability decision procedure.
//!
//! Rules are tried in a fixed order and the first that applies decides:
//!
//! 1. identical configurations are solvable;
//! 2. an isolated configuration reaches nothing but itself;
//! 3. if the hole placements are not connected in the projected hole graph,
//!    the pair is unsolvable;
//! 4. on two-column parallelograms the reading order of the tiles is a
//!    complete invariant;
//! 5. maximally connected families with `h >= 3` are always solvable;
//! 6. with two holes, each tight corner has an owner tile that never changes;
//! 7. with two holes on strong-parity boards (or boards whose trimmed board
//!    is one), permutation parity after hole normalization is a complete
//!    invariant;
//! 8. with two holes on any board, an odd permutation is unsolvable;
//! 9. otherwise the component of the start is enumerated.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use parking_lot::RwLock;
use rustc_hash::FxHashMap;
use serde::Serialize;
use thiserror::Error;

use crate::configuration::{ConfigError, Configuration, IndexMove, Parity, SlideMove};
use crate::hexboard::{BoardSpec, Cell, Shape};
use crate::puzzlegraph::bfs::{explore_component, ExploredComponent};
use crate::puzzlegraph::placements::{hole_path, non_isolated_placements, Placement};
use crate::puzzlegraph::{Budget, GraphError};

use super::formula::{is_maximal_family, is_strong_parity_family, skinny_rows};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Solvable,
    Unsolvable,
    Unknown,
}

/// The rule that decided a verdict. Serialized as a stable identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Rule {
    #[serde(rename = "identical")]
    Identical,
    #[serde(rename = "isolated")]
    Isolated,
    #[serde(rename = "hole-placement")]
    HolePlacement,
    #[serde(rename = "thm-1.3-skinny")]
    Skinny,
    #[serde(rename = "thm-1.4-maximal")]
    Maximal,
    #[serde(rename = "lemma-4.2-corner")]
    Corner,
    #[serde(rename = "strong-parity")]
    StrongParity,
    #[serde(rename = "parity-weak")]
    WeakParity,
    #[serde(rename = "bfs-fallback")]
    BfsFallback,
}

impl Rule {
    pub fn id(self) -> &'static str {
        match self {
            Rule::Identical => "identical",
            Rule::Isolated => "isolated",
            Rule::HolePlacement => "hole-placement",
            Rule::Skinny => "thm-1.3-skinny",
            Rule::Maximal => "thm-1.4-maximal",
            Rule::Corner => "lemma-4.2-corner",
            Rule::StrongParity => "strong-parity",
            Rule::WeakParity => "parity-weak",
            Rule::BfsFallback => "bfs-fallback",
        }
    }
}

/// Supporting data for a verdict. Only the fields relevant to the deciding
/// rule are set.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Certificate {
    /// Slides moving the target's holes onto the comparison placement.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normalizing_moves: Option<Vec<SlideMove>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parity: Option<Parity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corner: Option<Cell>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub start_owner: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target_owner: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub start_order: Option<Vec<u8>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target_order: Option<Vec<u8>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub states_explored: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolvabilityVerdict {
    pub decision: Decision,
    pub rule: Rule,
    pub explanation: String,
    pub certificate: Certificate,
}

impl SolvabilityVerdict {
    fn new(decision: Decision, rule: Rule, explanation: impl Into<String>) -> Self {
        SolvabilityVerdict {
            decision,
            rule,
            explanation: explanation.into(),
            certificate: Certificate::default(),
        }
    }

    fn with(mut self, f: impl FnOnce(&mut Certificate)) -> Self {
        f(&mut self.certificate);
        self
    }

    pub fn is_solvable(&self) -> bool {
        self.decision == Decision::Solvable
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalizeError {
    #[error("target holes cannot be reached by sliding")]
    HolesUnreachable,
    #[error("expected {expected} target holes, got {got}")]
    HoleCount { expected: usize, got: usize },
    #[error(transparent)]
    Config(#[from] ConfigError),
}

fn placement_of(board: &BoardSpec, holes: &[Cell]) -> Result<Placement, ConfigError> {
    let mut p = holes
        .iter()
        .map(|&c| board.index_of(c).ok_or(ConfigError::CellNotOnBoard(c)))
        .collect::<Result<Placement, _>>()?;
    p.sort_unstable();
    p.dedup();
    Ok(p)
}

fn apply_index_moves(c: &Configuration, moves: &[IndexMove]) -> (Configuration, Vec<SlideMove>) {
    let board = c.board();
    let mut cur = c.clone();
    let mut out = Vec::with_capacity(moves.len());
    for m in moves {
        out.push(SlideMove {
            tile_from: board.cell(m.from),
            tile_to: board.cell(m.to),
            witness_hole: board.cell(m.witness),
        });
        cur = cur.apply_index(m.from, m.to);
    }
    (cur, out)
}

/// Slides `c`'s holes onto `target_holes` along a shortest path in the hole
/// placement graph, returning the resulting configuration and the slides.
pub fn normalize_holes(
    c: &Configuration,
    target_holes: &[Cell],
) -> Result<(Configuration, Vec<SlideMove>), NormalizeError> {
    let to = placement_of(c.board(), target_holes)?;
    if to.len() != c.h() || target_holes.len() != c.h() {
        return Err(NormalizeError::HoleCount {
            expected: c.h(),
            got: target_holes.len(),
        });
    }
    let moves =
        hole_path(c.board(), &c.hole_indices(), &to).ok_or(NormalizeError::HolesUnreachable)?;
    Ok(apply_index_moves(c, &moves))
}

/// Tiles in reading order on a two-column parallelogram: by row, then the
/// left column first. `None` on other boards.
pub fn reading_order(c: &Configuration) -> Option<Vec<u8>> {
    let key: fn(Cell) -> (i32, i32) = match *c.board().shape() {
        Shape::Parallelogram { m1: 2, .. } => |cell| (cell.r, cell.q),
        Shape::Parallelogram { m2: 2, .. } => |cell| (cell.q, cell.r),
        _ => return None,
    };
    skinny_rows(c.board().shape())?;
    let mut tiles: Vec<(Cell, u8)> = c
        .board()
        .cells()
        .iter()
        .zip(c.labels())
        .filter(|(_, &l)| l != 0)
        .map(|(&cell, &l)| (cell, l))
        .collect();
    tiles.sort_by_key(|&(cell, _)| key(cell));
    Some(tiles.into_iter().map(|(_, l)| l).collect())
}

/// The tile bound to a tight corner in a non-isolated two-hole configuration:
/// the tile on the corner, or, when the corner is a hole, the tile on the one
/// corner neighbour that is not the second hole.
pub fn corner_owner(c: &Configuration, corner: Cell) -> Option<u8> {
    let board = c.board();
    let i = board.index_of(corner)?;
    let label = c.labels()[i];
    if label != 0 {
        return Some(label);
    }
    let tiles: Vec<u8> = board
        .neighbor_indices(i)
        .map(|j| c.labels()[j])
        .filter(|&l| l != 0)
        .collect();
    match tiles.as_slice() {
        [only] => Some(*only),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverOptions {
    /// Enumerate the start's component when no rule decides.
    pub bfs_fallback: bool,
    pub budget: Budget,
    /// Total states the solver may keep in memoized components.
    pub memo_limit: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            bfs_fallback: true,
            budget: Budget::from_env(),
            memo_limit: 20_000_000,
        }
    }
}

type HolePaths = FxHashMap<(Placement, Placement), Option<Arc<Vec<IndexMove>>>>;

#[derive(Default)]
struct BoardMemo {
    paths: RwLock<HolePaths>,
    components: RwLock<Vec<Arc<ExploredComponent>>>,
    stored_states: AtomicU64,
}

/// Decides solvability, caching hole paths and enumerated components per
/// board. Safe to share between threads.
#[derive(Default)]
pub struct Solver {
    options: SolverOptions,
    memos: RwLock<FxHashMap<Vec<Cell>, Arc<BoardMemo>>>,
}

impl Solver {
    pub fn new(options: SolverOptions) -> Self {
        Solver {
            options,
            memos: RwLock::default(),
        }
    }

    pub fn options(&self) -> SolverOptions {
        self.options
    }

    fn memo(&self, board: &BoardSpec) -> Arc<BoardMemo> {
        if let Some(m) = self.memos.read().get(board.cells()) {
            return m.clone();
        }
        self.memos
            .write()
            .entry(board.cells().to_vec())
            .or_default()
            .clone()
    }

    fn path(
        &self,
        memo: &BoardMemo,
        board: &BoardSpec,
        from: &[usize],
        to: &[usize],
    ) -> Option<Arc<Vec<IndexMove>>> {
        let key = (from.to_vec(), to.to_vec());
        if let Some(p) = memo.paths.read().get(&key) {
            return p.clone();
        }
        let p = hole_path(board, from, to).map(Arc::new);
        memo.paths.write().insert(key, p.clone());
        p
    }

    /// Decides whether `target` can be reached from `start`.
    pub fn decide(
        &self,
        start: &Configuration,
        target: &Configuration,
    ) -> Result<SolvabilityVerdict, ConfigError> {
        if start.board() != target.board() {
            return Err(ConfigError::BoardMismatch);
        }
        if start.tile_labels() != target.tile_labels() {
            return Err(ConfigError::LabelMismatch);
        }
        let target = &target.with_board(start.board_arc().clone())?;
        if start == target {
            return Ok(SolvabilityVerdict::new(
                Decision::Solvable,
                Rule::Identical,
                "start equals target",
            ));
        }
        let board = start.board();
        let h = start.h();
        if start.is_isolated() || target.is_isolated() {
            let which = if start.is_isolated() {
                "start"
            } else {
                "target"
            };
            return Ok(SolvabilityVerdict::new(
                Decision::Unsolvable,
                Rule::Isolated,
                format!("the {which} configuration admits no slide"),
            ));
        }

        let memo = self.memo(board);
        let (ps, pt) = (start.hole_indices(), target.hole_indices());
        let Some(to_start) = self.path(&memo, board, &pt, &ps) else {
            return Ok(SolvabilityVerdict::new(
                Decision::Unsolvable,
                Rule::HolePlacement,
                "the target's holes cannot be slid onto the start's hole positions",
            ));
        };

        if let (Some(a), Some(b)) = (reading_order(start), reading_order(target)) {
            let same = a == b;
            return Ok(SolvabilityVerdict::new(
                if same {
                    Decision::Solvable
                } else {
                    Decision::Unsolvable
                },
                Rule::Skinny,
                if same {
                    "tiles appear in the same reading order on a two-column board"
                } else {
                    "slides on a two-column board never change the reading order of the tiles"
                },
            )
            .with(|c| {
                c.start_order = Some(a);
                c.target_order = Some(b);
            }));
        }

        if is_maximal_family(board.shape(), h) {
            return Ok(SolvabilityVerdict::new(
                Decision::Solvable,
                Rule::Maximal,
                format!("{} with {h} holes is maximally connected", board.name()),
            ));
        }

        if h == 2 {
            for corner in board.tight_corners() {
                let (a, b) = (corner_owner(start, corner), corner_owner(target, corner));
                if a != b {
                    return Ok(SolvabilityVerdict::new(
                        Decision::Unsolvable,
                        Rule::Corner,
                        format!("the tight corner {corner} is bound to different tiles"),
                    )
                    .with(|c| {
                        c.corner = Some(corner);
                        c.start_owner = a;
                        c.target_owner = b;
                    }));
                }
            }
            if let Some(v) = self.strong_parity(&memo, start, target, &to_start) {
                return Ok(v);
            }
            let (normalized, moves) = apply_index_moves(target, &to_start);
            let parity = start.permutation_between(&normalized)?.parity();
            if parity == Parity::Odd {
                return Ok(SolvabilityVerdict::new(
                    Decision::Unsolvable,
                    Rule::WeakParity,
                    "after moving the holes into place the tiles differ by an odd permutation",
                )
                .with(|c| {
                    c.parity = Some(parity);
                    c.normalizing_moves = Some(moves);
                }));
            }
        }

        Ok(self.bfs_fallback(&memo, start, target))
    }

    /// Parity comparison on boards whose non-isolated two-hole configurations
    /// form exactly two components once tight corners are fixed.
    fn strong_parity(
        &self,
        memo: &BoardMemo,
        start: &Configuration,
        target: &Configuration,
        to_start: &[IndexMove],
    ) -> Option<SolvabilityVerdict> {
        let board = start.board();
        let (s, t, moves) = if is_strong_parity_family(board.shape(), 2) {
            let (t, moves) = apply_index_moves(target, to_start);
            (start.clone(), t, moves)
        } else {
            let trimmed = board.trim().ok()?;
            if board.tight_corners().is_empty() || !is_strong_parity_family(trimmed.shape(), 2) {
                return None;
            }
            // Park the holes inside the trimmed board so every corner holds its owner.
            let inner = non_isolated_placements(&trimmed, 2).into_iter().next()?;
            let home: Placement = inner
                .iter()
                .map(|&i| board.index_of(trimmed.cell(i)).expect("sub-board"))
                .collect();
            let ps = self.path(memo, board, &start.hole_indices(), &home)?;
            let pt = self.path(memo, board, &target.hole_indices(), &home)?;
            let (s, _) = apply_index_moves(start, &ps);
            let (t, moves) = apply_index_moves(target, &pt);
            (s, t, moves)
        };
        let parity = s.permutation_between(&t).ok()?.parity();
        let solvable = parity == Parity::Even;
        Some(
            SolvabilityVerdict::new(
                if solvable {
                    Decision::Solvable
                } else {
                    Decision::Unsolvable
                },
                Rule::StrongParity,
                if solvable {
                    "after moving the holes into place the tiles differ by an even permutation"
                } else {
                    "after moving the holes into place the tiles differ by an odd permutation"
                },
            )
            .with(|c| {
                c.parity = Some(parity);
                c.normalizing_moves = Some(moves);
            }),
        )
    }

    fn bfs_fallback(
        &self,
        memo: &BoardMemo,
        start: &Configuration,
        target: &Configuration,
    ) -> SolvabilityVerdict {
        let unknown =
            |why: &str| SolvabilityVerdict::new(Decision::Unknown, Rule::BfsFallback, why);
        if !self.options.bfs_fallback {
            return unknown("no rule applies and component enumeration is disabled");
        }
        let cached = memo
            .components
            .read()
            .iter()
            .find(|c| c.contains(start))
            .cloned();
        let component = match cached {
            Some(c) => c,
            None => match explore_component(start, &start.holes(), self.options.budget) {
                Ok(c) => {
                    let c = Arc::new(c);
                    let size = c.summary.size;
                    let stored = memo.stored_states.load(Ordering::Relaxed);
                    if stored + size <= self.options.memo_limit {
                        memo.stored_states.fetch_add(size, Ordering::Relaxed);
                        memo.components.write().push(c.clone());
                    }
                    c
                }
                Err(GraphError::BudgetExceeded { budget }) => {
                    return unknown(&format!(
                        "no rule applies and the component exceeds the budget of {budget} states"
                    ))
                }
                Err(e) => return unknown(&format!("no rule applies and enumeration failed: {e}")),
            },
        };
        let reachable = component.contains(target);
        SolvabilityVerdict::new(
            if reachable {
                Decision::Solvable
            } else {
                Decision::Unsolvable
            },
            Rule::BfsFallback,
            if reachable {
                "the target lies in the enumerated component of the start"
            } else {
                "the target is not in the enumerated component of the start"
            },
        )
        .with(|c| c.states_explored = Some(component.summary.size))
    }
}

/// Decides with default options.
pub fn decide_solvable(
    start: &Configuration,
    target: &Configuration,
) -> Result<SolvabilityVerdict, ConfigError> {
    Solver::new(SolverOptions::default()).decide(start, target)
}
