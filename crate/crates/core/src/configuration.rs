//! Puzzle states and the hexagonal slide rule.
//!
//! A tile may slide into a neighbouring hole only when a second hole is
//! adjacent to both the tile and the destination, i.e. the three cells form a
//! triangle. Labels are stored one byte per cell in canonical cell order,
//! with `0` for a hole.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hexboard::{BoardSpec, Cell, Shape};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("expected {expected} labels, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("tile label {0} appears more than once")]
    DuplicateLabel(u8),
    #[error("cell {0} is not on the board")]
    CellNotOnBoard(Cell),
    #[error("cell {0} listed twice")]
    DuplicateCell(Cell),
    #[error("hole count {h} is not allowed for a board with {cells} cells")]
    BadHoleCount { h: usize, cells: usize },
    #[error("illegal move {0}")]
    IllegalMove(SlideMove),
    #[error("configurations are on different boards")]
    BoardMismatch,
    #[error("configurations have holes in different positions")]
    HoleMismatch,
    #[error("configurations use different tile labels")]
    LabelMismatch,
    #[error("augmented parity needs a parallelogram board")]
    BoardNotParallelogram,
    #[error("augmented parity needs exactly two holes, found {0}")]
    HoleCountNotTwo(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(odd: bool) -> Self {
        if odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn flip(self) -> Self {
        Parity::from_bit(!self.is_odd())
    }

    pub fn xor(self, other: Parity) -> Parity {
        Parity::from_bit(self.is_odd() != other.is_odd())
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.is_odd() { "odd" } else { "even" })
    }
}

/// Parity of a permutation of `0..n` given as `perm[i] = image of i`.
pub fn permutation_parity(perm: &[usize]) -> Parity {
    let mut seen = vec![false; perm.len()];
    let mut cycles = 0usize;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
        }
    }
    Parity::from_bit((perm.len() - cycles) % 2 == 1)
}

/// One legal slide: the tile on `tile_from` moves into the hole `tile_to`;
/// `witness_hole` is the second hole adjacent to both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SlideMove {
    #[serde(rename = "from")]
    pub tile_from: Cell,
    #[serde(rename = "to")]
    pub tile_to: Cell,
    #[serde(rename = "witness")]
    pub witness_hole: Cell,
}

impl SlideMove {
    /// The slide that undoes this one.
    pub fn reversed(self) -> SlideMove {
        SlideMove {
            tile_from: self.tile_to,
            tile_to: self.tile_from,
            witness_hole: self.witness_hole,
        }
    }

    /// Diagonal slides are those along the `(1,-1)` direction.
    pub fn is_diagonal(self) -> bool {
        let (dq, dr) = (
            self.tile_from.q - self.tile_to.q,
            self.tile_from.r - self.tile_to.r,
        );
        (dq, dr) == (1, -1) || (dq, dr) == (-1, 1)
    }
}

impl fmt::Display for SlideMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}->{} via {}",
            self.tile_from, self.tile_to, self.witness_hole
        )
    }
}

/// Index form of a slide, used by the search code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexMove {
    pub from: usize,
    pub to: usize,
    pub witness: usize,
}

/// All legal slides for a label vector, one per `(from, to)` with the least
/// witness, sorted by `(from, to)`.
pub(crate) fn legal_index_moves(board: &BoardSpec, labels: &[u8]) -> Vec<IndexMove> {
    let mut out = Vec::new();
    for from in 0..board.len() {
        if labels[from] == 0 {
            continue;
        }
        for link in board.links(from) {
            let to = link.to as usize;
            if labels[to] != 0 {
                continue;
            }
            if let Some(&w) = link.common().iter().find(|&&w| labels[w as usize] == 0) {
                out.push(IndexMove {
                    from,
                    to,
                    witness: w as usize,
                });
            }
        }
    }
    out
}

/// True if some tile can slide given only which cells are holes.
pub(crate) fn holes_admit_move(board: &BoardSpec, is_hole: impl Fn(usize) -> bool) -> bool {
    (0..board.len()).any(|x| {
        is_hole(x)
            && board
                .links(x)
                .iter()
                .any(|l| is_hole(l.to as usize) && l.common().iter().any(|&z| !is_hole(z as usize)))
    })
}

/// An assignment of labelled tiles to the cells of a board.
#[derive(Clone)]
pub struct Configuration {
    board: Arc<BoardSpec>,
    labels: Vec<u8>,
}

impl PartialEq for Configuration {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels
            && (Arc::ptr_eq(&self.board, &other.board) || self.board == other.board)
    }
}

impl Eq for Configuration {}

impl std::hash::Hash for Configuration {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.labels.hash(state);
    }
}

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Configuration({} {:?})", self.board.name(), self.labels)
    }
}

impl Configuration {
    /// Builds a configuration from labels in canonical cell order.
    pub fn new(board: Arc<BoardSpec>, labels: Vec<u8>) -> Result<Self, ConfigError> {
        if labels.len() != board.len() {
            return Err(ConfigError::WrongLength {
                expected: board.len(),
                got: labels.len(),
            });
        }
        let mut seen = [false; 256];
        for &l in &labels {
            if l != 0 {
                if seen[l as usize] {
                    return Err(ConfigError::DuplicateLabel(l));
                }
                seen[l as usize] = true;
            }
        }
        Ok(Configuration { board, labels })
    }

    /// Builds a configuration from `(cell, label)` triples covering every cell.
    pub fn from_cells(board: Arc<BoardSpec>, cells: &[(Cell, u8)]) -> Result<Self, ConfigError> {
        let mut labels = vec![None; board.len()];
        for &(c, l) in cells {
            let i = board.index_of(c).ok_or(ConfigError::CellNotOnBoard(c))?;
            if labels[i].replace(l).is_some() {
                return Err(ConfigError::DuplicateCell(c));
            }
        }
        if labels.iter().any(Option::is_none) {
            return Err(ConfigError::WrongLength {
                expected: board.len(),
                got: cells.len(),
            });
        }
        Self::new(board, labels.into_iter().map(Option::unwrap).collect())
    }

    /// Tiles `1..=t` in canonical cell order, skipping the given holes.
    pub fn ordered(board: Arc<BoardSpec>, holes: &[Cell]) -> Result<Self, ConfigError> {
        let mut hole_idx = BTreeSet::new();
        for &c in holes {
            let i = board.index_of(c).ok_or(ConfigError::CellNotOnBoard(c))?;
            if !hole_idx.insert(i) {
                return Err(ConfigError::DuplicateCell(c));
            }
        }
        if hole_idx.len() > board.len() {
            return Err(ConfigError::BadHoleCount {
                h: hole_idx.len(),
                cells: board.len(),
            });
        }
        let mut next = 0u8;
        let labels = (0..board.len())
            .map(|i| {
                if hole_idx.contains(&i) {
                    0
                } else {
                    next += 1;
                    next
                }
            })
            .collect();
        Self::new(board, labels)
    }

    /// Default start for analyses: tiles `1..=t` in canonical order with the
    /// holes on the last `h` cells. If that placement is isolated, the holes
    /// go to the lexicographically greatest non-isolated placement instead.
    pub fn default_start(board: Arc<BoardSpec>, h: usize) -> Result<Self, ConfigError> {
        let n = board.len();
        if h == 0 || h >= n {
            return Err(ConfigError::BadHoleCount { h, cells: n });
        }
        let last: Vec<Cell> = board.cells()[n - h..].to_vec();
        let c = Self::ordered(board.clone(), &last)?;
        if !c.is_isolated() {
            return Ok(c);
        }
        let mut placements = crate::puzzlegraph::placements::non_isolated_placements(&board, h);
        match placements.pop() {
            Some(p) => {
                let cells: Vec<Cell> = p.iter().map(|&i| board.cell(i)).collect();
                Self::ordered(board, &cells)
            }
            None => Ok(c),
        }
    }

    pub fn board(&self) -> &BoardSpec {
        &self.board
    }

    pub fn board_arc(&self) -> &Arc<BoardSpec> {
        &self.board
    }

    /// Labels in canonical cell order, `0` for holes.
    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn into_labels(self) -> Vec<u8> {
        self.labels
    }

    pub fn label_at(&self, c: Cell) -> Option<u8> {
        self.board.index_of(c).map(|i| self.labels[i])
    }

    pub fn holes(&self) -> Vec<Cell> {
        self.hole_indices()
            .into_iter()
            .map(|i| self.board.cell(i))
            .collect()
    }

    pub fn hole_indices(&self) -> Vec<usize> {
        (0..self.labels.len())
            .filter(|&i| self.labels[i] == 0)
            .collect()
    }

    pub fn h(&self) -> usize {
        self.labels.iter().filter(|&&l| l == 0).count()
    }

    pub fn t(&self) -> usize {
        self.labels.len() - self.h()
    }

    /// Tile labels present, sorted.
    pub fn tile_labels(&self) -> Vec<u8> {
        let mut v: Vec<u8> = self.labels.iter().copied().filter(|&l| l != 0).collect();
        v.sort_unstable();
        v
    }

    pub fn position_of(&self, label: u8) -> Option<Cell> {
        if label == 0 {
            return None;
        }
        self.labels
            .iter()
            .position(|&l| l == label)
            .map(|i| self.board.cell(i))
    }

    pub(crate) fn index_moves(&self) -> Vec<IndexMove> {
        legal_index_moves(&self.board, &self.labels)
    }

    fn to_slide(&self, m: IndexMove) -> SlideMove {
        SlideMove {
            tile_from: self.board.cell(m.from),
            tile_to: self.board.cell(m.to),
            witness_hole: self.board.cell(m.witness),
        }
    }

    /// Every legal slide, one per `(from, to)` pair with the least witness,
    /// ordered by `(from, to)`.
    pub fn legal_moves(&self) -> Vec<SlideMove> {
        self.index_moves()
            .into_iter()
            .map(|m| self.to_slide(m))
            .collect()
    }

    pub fn is_isolated(&self) -> bool {
        !holes_admit_move(&self.board, |i| self.labels[i] == 0)
    }

    /// Checks that `m` is a legal slide here. Any valid witness is accepted.
    pub fn check_move(&self, m: &SlideMove) -> Result<(usize, usize), ConfigError> {
        let illegal = || ConfigError::IllegalMove(*m);
        let from = self.board.index_of(m.tile_from).ok_or_else(illegal)?;
        let to = self.board.index_of(m.tile_to).ok_or_else(illegal)?;
        let w = self.board.index_of(m.witness_hole).ok_or_else(illegal)?;
        let link = self.board.link(from, to).ok_or_else(illegal)?;
        if self.labels[from] == 0 || self.labels[to] != 0 || self.labels[w] != 0 {
            return Err(illegal());
        }
        if !link.common().contains(&(w as u8)) {
            return Err(illegal());
        }
        Ok((from, to))
    }

    pub fn apply_move(&self, m: &SlideMove) -> Result<Configuration, ConfigError> {
        let (from, to) = self.check_move(m)?;
        Ok(self.apply_index(from, to))
    }

    pub(crate) fn apply_index(&self, from: usize, to: usize) -> Configuration {
        let mut labels = self.labels.clone();
        labels.swap(from, to);
        Configuration {
            board: self.board.clone(),
            labels,
        }
    }

    /// Finds the legal slide from `from` to `to`, choosing the least witness.
    pub fn find_move(&self, from: Cell, to: Cell) -> Option<SlideMove> {
        let fi = self.board.index_of(from)?;
        let ti = self.board.index_of(to)?;
        self.index_moves()
            .into_iter()
            .find(|m| m.from == fi && m.to == ti)
            .map(|m| self.to_slide(m))
    }

    /// Applies a sequence of slides, failing on the first illegal one.
    pub fn apply_all<'a>(
        &self,
        moves: impl IntoIterator<Item = &'a SlideMove>,
    ) -> Result<Configuration, ConfigError> {
        let mut cur = self.clone();
        for m in moves {
            cur = cur.apply_move(m)?;
        }
        Ok(cur)
    }

    fn same_board(&self, other: &Configuration) -> bool {
        Arc::ptr_eq(&self.board, &other.board) || self.board == other.board
    }

    /// The relabelling `sigma` with `sigma . self = other`.
    pub fn permutation_between(
        &self,
        other: &Configuration,
    ) -> Result<TilePermutation, ConfigError> {
        if !self.same_board(other) {
            return Err(ConfigError::BoardMismatch);
        }
        if self.tile_labels() != other.tile_labels() {
            return Err(ConfigError::LabelMismatch);
        }
        if self.hole_indices() != other.hole_indices() {
            return Err(ConfigError::HoleMismatch);
        }
        let mapping = self
            .labels
            .iter()
            .zip(&other.labels)
            .filter(|(&a, _)| a != 0)
            .map(|(&a, &b)| (a, b))
            .collect();
        Ok(TilePermutation::from_mapping(mapping))
    }

    /// Applies a relabelling to every tile. Labels missing from `sigma` stay.
    pub fn relabel(&self, sigma: &TilePermutation) -> Configuration {
        let labels = self
            .labels
            .iter()
            .map(|&l| if l == 0 { 0 } else { sigma.apply(l) })
            .collect();
        Configuration {
            board: self.board.clone(),
            labels,
        }
    }

    /// Same configuration with the tiles on two cells exchanged.
    pub fn swap_cells(&self, a: Cell, b: Cell) -> Result<Configuration, ConfigError> {
        let i = self
            .board
            .index_of(a)
            .ok_or(ConfigError::CellNotOnBoard(a))?;
        let j = self
            .board
            .index_of(b)
            .ok_or(ConfigError::CellNotOnBoard(b))?;
        let mut labels = self.labels.clone();
        labels.swap(i, j);
        Ok(Configuration {
            board: self.board.clone(),
            labels,
        })
    }

    /// Rebinds to a different board handle with the same cells.
    pub fn with_board(&self, board: Arc<BoardSpec>) -> Result<Configuration, ConfigError> {
        if *board != *self.board {
            return Err(ConfigError::BoardMismatch);
        }
        Ok(Configuration {
            board,
            labels: self.labels.clone(),
        })
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.labels.iter().map(u8::to_string).collect();
        write!(f, "{}[{}]", self.board.name(), parts.join(","))
    }
}

#[derive(Serialize, Deserialize)]
struct ConfigurationWire {
    board: Shape,
    cells: Vec<(i32, i32, u8)>,
}

impl Serialize for Configuration {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ConfigurationWire {
            board: self.board.shape().clone(),
            cells: self
                .board
                .cells()
                .iter()
                .zip(&self.labels)
                .map(|(c, &l)| (c.q, c.r, l))
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Configuration {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = ConfigurationWire::deserialize(deserializer)?;
        let board = BoardSpec::build(wire.board).map_err(serde::de::Error::custom)?;
        let cells: Vec<(Cell, u8)> = wire
            .cells
            .iter()
            .map(|&(q, r, l)| (Cell::new(q, r), l))
            .collect();
        Configuration::from_cells(Arc::new(board), &cells).map_err(serde::de::Error::custom)
    }
}

/// A bijection on tile labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TilePermutation {
    mapping: Vec<(u8, u8)>,
    parity: Parity,
}

impl TilePermutation {
    /// `mapping` lists `(label, image)` pairs; it must be a bijection on the
    /// labels it mentions.
    pub fn from_mapping(mut mapping: Vec<(u8, u8)>) -> Self {
        mapping.sort_unstable();
        let index: BTreeMap<u8, usize> = mapping
            .iter()
            .enumerate()
            .map(|(i, &(a, _))| (a, i))
            .collect();
        let perm: Vec<usize> = mapping.iter().map(|&(_, b)| index[&b]).collect();
        let parity = permutation_parity(&perm);
        TilePermutation { mapping, parity }
    }

    pub fn identity(labels: impl IntoIterator<Item = u8>) -> Self {
        Self::from_mapping(labels.into_iter().map(|l| (l, l)).collect())
    }

    pub fn mapping(&self) -> &[(u8, u8)] {
        &self.mapping
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn apply(&self, label: u8) -> u8 {
        match self.mapping.binary_search_by_key(&label, |&(a, _)| a) {
            Ok(i) => self.mapping[i].1,
            Err(_) => label,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.mapping.iter().all(|&(a, b)| a == b)
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &TilePermutation) -> TilePermutation {
        let mut domain: BTreeSet<u8> = self.mapping.iter().map(|&(a, _)| a).collect();
        domain.extend(other.mapping.iter().map(|&(a, _)| a));
        Self::from_mapping(
            domain
                .into_iter()
                .map(|l| (l, self.apply(other.apply(l))))
                .collect(),
        )
    }

    pub fn inverse(&self) -> TilePermutation {
        Self::from_mapping(self.mapping.iter().map(|&(a, b)| (b, a)).collect())
    }
}

/// A two-hole configuration whose holes carry the labels `-1` and `0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugmentedConfiguration {
    base: Configuration,
    /// Cell of the hole labelled `-1`, then the hole labelled `0`.
    hole_cells: [Cell; 2],
}

impl AugmentedConfiguration {
    /// Labels the hole at `minus_one` as `-1` and the other hole as `0`.
    pub fn new(base: Configuration, minus_one: Cell) -> Result<Self, ConfigError> {
        if !matches!(base.board().shape(), Shape::Parallelogram { .. }) {
            return Err(ConfigError::BoardNotParallelogram);
        }
        let holes = base.holes();
        if holes.len() != 2 {
            return Err(ConfigError::HoleCountNotTwo(holes.len()));
        }
        let zero = if holes[0] == minus_one {
            holes[1]
        } else if holes[1] == minus_one {
            holes[0]
        } else {
            return Err(ConfigError::HoleMismatch);
        };
        Ok(AugmentedConfiguration {
            base,
            hole_cells: [minus_one, zero],
        })
    }

    /// Labels the first hole in canonical order as `-1`.
    pub fn from_base(base: Configuration) -> Result<Self, ConfigError> {
        let first = base
            .holes()
            .first()
            .copied()
            .ok_or(ConfigError::HoleCountNotTwo(0))?;
        Self::new(base, first)
    }

    pub fn base(&self) -> &Configuration {
        &self.base
    }

    pub fn hole_minus_one(&self) -> Cell {
        self.hole_cells[0]
    }

    pub fn hole_zero(&self) -> Cell {
        self.hole_cells[1]
    }

    /// Slides a tile; the hole label at the destination moves to the source.
    pub fn apply_move(&self, m: &SlideMove) -> Result<AugmentedConfiguration, ConfigError> {
        let base = self.base.apply_move(m)?;
        let mut hole_cells = self.hole_cells;
        for h in hole_cells.iter_mut() {
            if *h == m.tile_to {
                *h = m.tile_from;
            }
        }
        Ok(AugmentedConfiguration { base, hole_cells })
    }

    /// Per-cell labels with holes as `-1` and `0`.
    fn extended_labels(&self) -> Vec<i16> {
        let board = self.base.board();
        let mut out: Vec<i16> = self.base.labels().iter().map(|&l| l as i16).collect();
        out[board.index_of(self.hole_cells[0]).expect("hole on board")] = -1;
        out
    }
}

/// Parity of the `-1`/`0` labelled augmented configuration `cur` relative to
/// `reference`: the parities of the orthogonal distances of both holes from
/// the origin cell in each configuration, plus the parity of the permutation
/// of positions carrying `reference` onto `cur`. Invariant under orthogonal
/// slides, flipped by diagonal ones.
pub fn augmented_parity(
    reference: &AugmentedConfiguration,
    cur: &AugmentedConfiguration,
) -> Result<Parity, ConfigError> {
    if reference.base.board() != cur.base.board() {
        return Err(ConfigError::BoardMismatch);
    }
    if reference.base.tile_labels() != cur.base.tile_labels() {
        return Err(ConfigError::LabelMismatch);
    }
    let a = reference.extended_labels();
    let b = cur.extended_labels();
    let mut where_in_cur = BTreeMap::new();
    for (j, &l) in b.iter().enumerate() {
        where_in_cur.insert(l, j);
    }
    let perm: Vec<usize> = a.iter().map(|l| where_in_cur[l]).collect();
    let p3 = permutation_parity(&perm).is_odd() as i32;
    let dist = |c: Cell| c.q + c.r;
    let holes = reference
        .hole_cells
        .iter()
        .chain(&cur.hole_cells)
        .map(|&c| dist(c))
        .sum::<i32>();
    Ok(Parity::from_bit((holes + p3).rem_euclid(2) == 1))
}
