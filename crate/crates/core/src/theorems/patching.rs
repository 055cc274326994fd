//! Patching derivations: certificates that a large board is maximally
//! connected (or has the strong parity property) built from computed base
//! cases and unions of overlapping patches.
//!
//! A derivation lists base cases with their recorded search summaries and a
//! sequence of steps. Every step glues two patches, each of which must be
//! congruent to an earlier fact (a base case or the union produced by an
//! earlier step). Checking a derivation re-verifies all geometry and the
//! arithmetic consistency of base-case summaries without searching again.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::configuration::Configuration;
use crate::hexboard::{
    canonical_form, cells_connected, has_adjacent_pair, placements, BoardSpec, Cell, Shape,
};
use crate::puzzlegraph::bfs::{count_components_with, enumerate_component};
use crate::puzzlegraph::placements::non_isolated_placements;
use crate::puzzlegraph::{factorial, Budget, GraphError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Claim {
    /// One component holds every non-isolated configuration.
    Maximal,
    /// Exactly two components, related by odd permutations.
    StrongParity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepKind {
    Connectivity,
    Parity,
}

impl StepKind {
    fn claim(self) -> Claim {
        match self {
            StepKind::Connectivity => Claim::Maximal,
            StepKind::Parity => Claim::StrongParity,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conclusion {
    pub board: BoardSpec,
    pub h: usize,
    pub claim: Claim,
}

/// A claim discharged by enumeration, with the recorded results.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseCase {
    pub board: BoardSpec,
    pub h: usize,
    pub claim: Claim,
    pub components: u128,
    pub component_size: u128,
    pub home_count: u128,
    pub nonisolated_placements: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatchStep {
    pub b1: BoardSpec,
    pub b2: BoardSpec,
    pub intersection: Vec<Cell>,
    pub k: usize,
    pub kind: StepKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatchDerivation {
    pub conclusion: Conclusion,
    pub base_cases: Vec<BaseCase>,
    pub steps: Vec<PatchStep>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeriveError {
    #[error("not derivable by patching: {0}")]
    NotDerivable(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn not_derivable(msg: impl Into<String>) -> DeriveError {
    DeriveError::NotDerivable(msg.into())
}

/// Computes a base-case summary by breadth-first search.
pub fn compute_base_case(
    board: &Arc<BoardSpec>,
    h: usize,
    claim: Claim,
    budget: Budget,
) -> Result<BaseCase, GraphError> {
    let start = Configuration::default_start(board.clone(), h)?;
    if start.is_isolated() {
        return Err(GraphError::NoNonIsolated { h });
    }
    let summary = enumerate_component(&start, &start.holes(), budget)?;
    let components = count_components_with(board, h, budget)?;
    Ok(BaseCase {
        board: (**board).clone(),
        h,
        claim,
        components,
        component_size: summary.size as u128,
        home_count: summary.home_count as u128,
        nonisolated_placements: non_isolated_placements(board, h).len() as u64,
    })
}

/// Why a base case or step was rejected.
fn base_case_problem(b: &BaseCase) -> Option<String> {
    let n = b.board.len();
    if b.h == 0 || b.h >= n {
        return Some(format!(
            "base case {} has an invalid hole count {}",
            b.board, b.h
        ));
    }
    let Some(total) = factorial(n - b.h) else {
        return Some("base case is too large".into());
    };
    let expected_components = match b.claim {
        Claim::Maximal => 1,
        Claim::StrongParity => 2,
    };
    if b.claim == Claim::StrongParity && b.h != 2 {
        return Some("strong parity base cases need exactly two holes".into());
    }
    if b.components != expected_components {
        return Some(format!(
            "base case {} records {} components",
            b.board, b.components
        ));
    }
    if non_isolated_placements(&b.board, b.h).len() as u64 != b.nonisolated_placements {
        return Some(format!(
            "base case {} records a wrong placement count",
            b.board
        ));
    }
    let lhs = b.components.checked_mul(b.component_size);
    let rhs = (b.nonisolated_placements as u128).checked_mul(total);
    if lhs.is_none() || lhs != rhs {
        return Some(format!(
            "base case {}: components times size does not cover all non-isolated configurations",
            b.board
        ));
    }
    if b.home_count.checked_mul(b.components) != Some(total) {
        return Some(format!(
            "base case {}: home count times components is not t!",
            b.board
        ));
    }
    None
}

fn step_problem(step: &PatchStep, h: usize) -> Option<String> {
    let s1: BTreeSet<Cell> = step.b1.cells().iter().copied().collect();
    let s2: BTreeSet<Cell> = step.b2.cells().iter().copied().collect();
    let inter: Vec<Cell> = s1.intersection(&s2).copied().collect();
    let mut recorded = step.intersection.clone();
    recorded.sort_unstable();
    recorded.dedup();
    if recorded != inter {
        return Some("recorded intersection differs from b1 ∩ b2".into());
    }
    if step.k != h {
        return Some(format!("step uses k = {} with {h} holes", step.k));
    }
    let union: Vec<Cell> = s1.union(&s2).copied().collect();
    if union.len() == s1.len() || union.len() == s2.len() {
        return Some("a patch must be smaller than the union".into());
    }
    if !cells_connected(&union) {
        return Some("union of the patches is disconnected".into());
    }
    match step.kind {
        StepKind::Connectivity => {
            if !cells_connected(&inter) {
                return Some("intersection is not connected".into());
            }
            if inter.len() < step.k + 1 {
                return Some(format!(
                    "intersection has {} cells, needs at least {}",
                    inter.len(),
                    step.k + 1
                ));
            }
        }
        StepKind::Parity => {
            if h != 2 {
                return Some("parity steps need exactly two holes".into());
            }
            if s1.len() < 5 || s2.len() < 5 {
                return Some("parity patches need at least five cells".into());
            }
            if inter.len() < 4 || !has_adjacent_pair(&inter) {
                return Some(
                    "parity intersection needs four cells including an adjacent pair".into(),
                );
            }
        }
    }
    None
}

/// Re-verifies a derivation. Returns the first problem found.
pub fn verify_derivation(d: &PatchDerivation) -> Result<(), String> {
    let h = d.conclusion.h;
    let claim = d.conclusion.claim;
    let mut facts: Vec<Vec<Cell>> = Vec::new();
    for b in &d.base_cases {
        if let Some(p) = base_case_problem(b) {
            return Err(p);
        }
        if b.h == h && b.claim == claim {
            facts.push(canonical_form(b.board.cells()));
        }
    }
    if facts.is_empty() {
        return Err("no base case supports the conclusion".into());
    }
    let known = |facts: &[Vec<Cell>], cells: &[Cell]| {
        let c = canonical_form(cells);
        facts.contains(&c)
    };
    for (i, step) in d.steps.iter().enumerate() {
        if step.kind.claim() != claim {
            return Err(format!("step {i} has the wrong kind for the conclusion"));
        }
        if !known(&facts, step.b1.cells()) {
            return Err(format!(
                "step {i}: b1 is not congruent to an established board"
            ));
        }
        if !known(&facts, step.b2.cells()) {
            return Err(format!(
                "step {i}: b2 is not congruent to an established board"
            ));
        }
        if let Some(p) = step_problem(step, h) {
            return Err(format!("step {i}: {p}"));
        }
        let union: BTreeSet<Cell> = step
            .b1
            .cells()
            .iter()
            .chain(step.b2.cells())
            .copied()
            .collect();
        facts.push(canonical_form(&union.into_iter().collect::<Vec<_>>()));
    }
    let last = facts.last().expect("non-empty");
    if d.steps.is_empty() {
        if !known(&facts, d.conclusion.board.cells()) {
            return Err("conclusion is not a base case".into());
        }
    } else if canonical_form(d.conclusion.board.cells()) != *last {
        return Err("final union is not congruent to the conclusion board".into());
    }
    Ok(())
}

/// True iff every step and base case passes its checks.
pub fn check_derivation(d: &PatchDerivation) -> bool {
    verify_derivation(d).is_ok()
}

/// Bitset over the target's cells.
type Mask = u128;

struct Target<'a> {
    cells: &'a [Cell],
}

impl Target<'_> {
    fn mask(&self, cells: &[Cell]) -> Mask {
        cells.iter().fold(0, |m, c| {
            m | 1
                << self
                    .cells
                    .binary_search(c)
                    .expect("placement inside target")
        })
    }

    fn cells(&self, m: Mask) -> Vec<Cell> {
        (0..self.cells.len())
            .filter(|&i| m & (1 << i) != 0)
            .map(|i| self.cells[i])
            .collect()
    }
}

fn explicit(cells: Vec<Cell>) -> BoardSpec {
    BoardSpec::explicit(cells).expect("patch cells form a board")
}

/// Generates derivations, computing base cases once per deriver.
pub struct Deriver {
    budget: Budget,
    bases: parking_lot::Mutex<Vec<BaseCase>>,
}

impl Default for Deriver {
    fn default() -> Self {
        Deriver::new(Budget::from_env())
    }
}

impl Deriver {
    pub fn new(budget: Budget) -> Self {
        Deriver {
            budget,
            bases: parking_lot::Mutex::new(Vec::new()),
        }
    }

    /// Adds a precomputed base case so it is not recomputed.
    pub fn with_base_case(self, b: BaseCase) -> Self {
        self.bases.lock().push(b);
        self
    }

    fn base(&self, board: BoardSpec, h: usize, claim: Claim) -> Result<BaseCase, DeriveError> {
        if let Some(b) = self
            .bases
            .lock()
            .iter()
            .find(|b| b.h == h && b.claim == claim && b.board == board)
        {
            return Ok(b.clone());
        }
        let b = compute_base_case(&Arc::new(board), h, claim, self.budget)?;
        if let Some(p) = base_case_problem(&b) {
            return Err(not_derivable(format!("base case fails: {p}")));
        }
        self.bases.lock().push(b.clone());
        Ok(b)
    }

    /// Derivation that `board` with `h` holes is maximally connected
    /// (`h >= 3`) or has the strong parity property (`h = 2`).
    pub fn derive(&self, board: &BoardSpec, h: usize) -> Result<PatchDerivation, DeriveError> {
        let claim = match h {
            2 => Claim::StrongParity,
            h if h >= 3 => Claim::Maximal,
            _ => return Err(not_derivable("patching needs at least two holes")),
        };
        let (base_board, kind) = match claim {
            Claim::Maximal => (
                BoardSpec::parallelogram(3, 3).expect("valid"),
                StepKind::Connectivity,
            ),
            Claim::StrongParity => (
                BoardSpec::trimmed_parallelogram(3, 4).expect("valid"),
                StepKind::Parity,
            ),
        };
        if board.len() > 128 {
            return Err(not_derivable("board too large for the patch search"));
        }
        let base = self.base(base_board, h, claim)?;
        let mut steps = Vec::new();
        match *board.shape() {
            Shape::Parallelogram { m1, m2 } if claim == Claim::Maximal => {
                if m1 < 3 || m2 < 3 {
                    return Err(not_derivable(
                        "parallelogram patches need both sides at least 3",
                    ));
                }
                steps = parallelogram_chain(false, m1, m2, h, kind);
            }
            Shape::TrimmedParallelogram { m1, m2 } if claim == Claim::StrongParity => {
                if m1 < 3 || m2 < 3 || m1.max(m2) < 4 {
                    return Err(not_derivable(
                        "trimmed parallelogram below the smallest base case",
                    ));
                }
                steps = parallelogram_chain(true, m1, m2, h, kind);
            }
            _ => {
                if board.is_congruent_to(&base.board) {
                    // The board is itself the base case.
                } else {
                    steps = cover_search(board, h, kind)?;
                }
            }
        }
        let d = PatchDerivation {
            conclusion: Conclusion {
                board: board.clone(),
                h,
                claim,
            },
            base_cases: vec![base],
            steps,
        };
        verify_derivation(&d)
            .map_err(|p| not_derivable(format!("generated derivation fails: {p}")))?;
        Ok(d)
    }
}

/// Derivation with a fresh deriver.
pub fn derive_connectivity(board: &BoardSpec, h: usize) -> Result<PatchDerivation, DeriveError> {
    Deriver::default().derive(board, h)
}

fn patch_cells(trimmed: bool, m1: u32, m2: u32) -> Vec<Cell> {
    let b = if trimmed {
        BoardSpec::trimmed_parallelogram(m1, m2)
    } else {
        BoardSpec::parallelogram(m1, m2)
    };
    b.expect("valid patch").cells().to_vec()
}

fn shifted(cells: &[Cell], dq: i32, dr: i32) -> Vec<Cell> {
    cells.iter().map(|c| c.offset(dq, dr)).collect()
}

fn make_step(b1: Vec<Cell>, b2: Vec<Cell>, h: usize, kind: StepKind) -> PatchStep {
    let s2: BTreeSet<Cell> = b2.iter().copied().collect();
    let intersection = b1
        .iter()
        .copied()
        .filter(|c| s2.contains(c))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    PatchStep {
        b1: explicit(b1),
        b2: explicit(b2),
        intersection,
        k: h,
        kind,
    }
}

/// Row-and-column induction from the smallest base parallelogram: each step
/// glues two copies of the current board offset by one column (or row).
fn parallelogram_chain(
    trimmed: bool,
    m1: u32,
    m2: u32,
    h: usize,
    kind: StepKind,
) -> Vec<PatchStep> {
    let (mut a, mut b) = if trimmed && m2 < 4 {
        (4, 3)
    } else if trimmed {
        (3, 4)
    } else {
        (3, 3)
    };
    let mut steps = Vec::new();
    while a < m1 {
        let cur = patch_cells(trimmed, a, b);
        steps.push(make_step(cur.clone(), shifted(&cur, 1, 0), h, kind));
        a += 1;
    }
    while b < m2 {
        let cur = patch_cells(trimmed, a, b);
        steps.push(make_step(cur.clone(), shifted(&cur, 0, 1), h, kind));
        b += 1;
    }
    steps
}

fn mask_step_ok(t: &Target, m1: Mask, m2: Mask, h: usize, kind: StepKind) -> bool {
    let inter = m1 & m2;
    if inter == 0 || m1 | m2 == m1 || m1 | m2 == m2 {
        return false;
    }
    let ic = inter.count_ones() as usize;
    match kind {
        StepKind::Connectivity => ic > h && cells_connected(&t.cells(inter)),
        StepKind::Parity => {
            m1.count_ones() >= 5
                && m2.count_ones() >= 5
                && ic >= 4
                && has_adjacent_pair(&t.cells(inter))
        }
    }
}

/// Covers an arbitrary board with patches: two patches, three patches, or
/// two unions of two patches each. Patch shapes are tried largest first.
fn cover_search(
    board: &BoardSpec,
    h: usize,
    kind: StepKind,
) -> Result<Vec<PatchStep>, DeriveError> {
    let cells = board.cells();
    let t = Target { cells };
    let full: Mask = if cells.len() == 128 {
        Mask::MAX
    } else {
        (1 << cells.len()) - 1
    };
    let trimmed = kind == StepKind::Parity;
    let span = {
        let qs = cells.iter().map(|c| c.q);
        let rs = cells.iter().map(|c| c.r);
        let sq = (qs.clone().max().unwrap() - qs.min().unwrap() + 1) as u32;
        let sr = (rs.clone().max().unwrap() - rs.min().unwrap() + 1) as u32;
        sq.max(sr) + 1
    };
    let mut shapes: Vec<(u32, u32)> = Vec::new();
    for a in 3..=span {
        for b in a..=span {
            if trimmed && b < 4 {
                continue;
            }
            shapes.push((a, b));
        }
    }
    shapes.sort_by_key(|&(a, b)| std::cmp::Reverse((patch_cells(trimmed, a, b).len(), b)));
    for (a, b) in shapes {
        let patch = patch_cells(trimmed, a, b);
        if patch.len() >= cells.len() {
            continue;
        }
        let found = placements(&patch, cells);
        if found.is_empty() {
            continue;
        }
        let masks: Vec<Mask> = found.iter().map(|p| t.mask(p)).collect();
        let Some(cover) = find_cover(&t, &masks, full, h, kind) else {
            continue;
        };
        let mut steps = parallelogram_chain(trimmed, a, b, h, kind);
        for (x, y) in cover {
            steps.push(make_step(t.cells(x), t.cells(y), h, kind));
        }
        return Ok(steps);
    }
    Err(not_derivable(format!(
        "no patch cover found for {}",
        board.name()
    )))
}

/// Sequence of `(b1, b2)` gluings ending in `full`.
fn find_cover(
    t: &Target,
    masks: &[Mask],
    full: Mask,
    h: usize,
    kind: StepKind,
) -> Option<Vec<(Mask, Mask)>> {
    let n = masks.len();
    let mut pairs: Vec<(Mask, usize, usize)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let (x, y) = (masks[i], masks[j]);
            if !mask_step_ok(t, x, y, h, kind) {
                continue;
            }
            if x | y == full {
                return Some(vec![(x, y)]);
            }
            pairs.push((x | y, i, j));
        }
    }
    for &(u, i, j) in &pairs {
        for &z in masks {
            if u | z == full && mask_step_ok(t, u, z, h, kind) {
                return Some(vec![(masks[i], masks[j]), (u, z)]);
            }
        }
    }
    let mut unions: Vec<(Mask, usize, usize)> = pairs.clone();
    unions.sort_by_key(|&(u, _, _)| u);
    unions.dedup_by_key(|&mut (u, _, _)| u);
    for (a, &(u, i, j)) in unions.iter().enumerate() {
        for &(v, k, l) in &unions[a + 1..] {
            if u | v == full && mask_step_ok(t, u, v, h, kind) {
                let mut steps = vec![(masks[i], masks[j])];
                if canonical_form(&t.cells(u)) != canonical_form(&t.cells(v)) {
                    steps.push((masks[k], masks[l]));
                }
                steps.push((u, v));
                return Some(steps);
            }
        }
    }
    None
}
