//! Hexagonal board geometry: axial cells, shape families, tight corners and
//! trimming.
//!
//! Cells use axial coordinates `(q, r)`. The six neighbours of a cell differ
//! from it by `(±1, 0)`, `(0, ±1)` or `±(1, -1)`. With this embedding every
//! shape family is cut out of the lattice by linear inequalities:
//!
//! | family | cells |
//! |---|---|
//! | parallelogram `P(m1, m2)` | `0 <= q < m1`, `0 <= r < m2` |
//! | triangle `T(m)` | `q, r >= 0`, `q + r <= m - 1` |
//! | flower `F(m)` | `abs(q), abs(r), abs(q + r) <= m - 1` |
//!
//! Trimmed variants remove the tight corners of the base shape once.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest board supported. Labels are stored in one byte per cell.
pub const MAX_CELLS: usize = 255;

/// The six axial neighbour offsets, in a fixed order.
pub const HEX_OFFSETS: [(i32, i32); 6] = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoardError {
    #[error("invalid board parameters: {0}")]
    InvalidParams(String),
    #[error("trimming leaves an empty or disconnected board")]
    DisconnectedAfterTrim,
    #[error("board cells do not form a connected region")]
    Disconnected,
    #[error("board has no cells")]
    Empty,
    #[error("cell {0} listed twice")]
    DuplicateCell(Cell),
    #[error("cell {0} is not on the board")]
    CellNotOnBoard(Cell),
    #[error("board has {0} cells, at most {MAX_CELLS} are supported")]
    TooLarge(usize),
}

/// A hexagon position in axial coordinates. Serialized as `[q, r]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[i32; 2]", into = "[i32; 2]")]
pub struct Cell {
    pub q: i32,
    pub r: i32,
}

impl Cell {
    pub const fn new(q: i32, r: i32) -> Self {
        Self { q, r }
    }

    pub fn offset(self, dq: i32, dr: i32) -> Self {
        Self::new(self.q + dq, self.r + dr)
    }

    /// The six lattice neighbours, whether or not they are on any board.
    pub fn lattice_neighbors(self) -> [Cell; 6] {
        HEX_OFFSETS.map(|(dq, dr)| self.offset(dq, dr))
    }

    pub fn is_adjacent(self, other: Cell) -> bool {
        HEX_OFFSETS.contains(&(other.q - self.q, other.r - self.r))
    }
}

impl From<[i32; 2]> for Cell {
    fn from([q, r]: [i32; 2]) -> Self {
        Cell::new(q, r)
    }
}

impl From<Cell> for [i32; 2] {
    fn from(c: Cell) -> Self {
        [c.q, c.r]
    }
}

impl From<(i32, i32)> for Cell {
    fn from((q, r): (i32, i32)) -> Self {
        Cell::new(q, r)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.q, self.r)
    }
}

/// One of the twelve point symmetries of the hexagonal lattice.
///
/// Index `i` encodes a permutation of the cube coordinates `(q, r, s)` with
/// `s = -q - r` (`i / 2`) and an overall sign (`i % 2`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LatticeSymmetry(u8);

const CUBE_PERMS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

impl LatticeSymmetry {
    pub fn all() -> impl Iterator<Item = LatticeSymmetry> {
        (0..12).map(LatticeSymmetry)
    }

    pub fn identity() -> Self {
        LatticeSymmetry(0)
    }

    pub fn apply(self, c: Cell) -> Cell {
        let cube = [c.q, c.r, -c.q - c.r];
        let perm = CUBE_PERMS[(self.0 / 2) as usize];
        let sign = if self.0 & 1 == 0 { 1 } else { -1 };
        Cell::new(sign * cube[perm[0]], sign * cube[perm[1]])
    }
}

/// Named shape families plus explicit cell lists. This is also the board
/// wire format, e.g. `{"family":"parallelogram","m1":3,"m2":4}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Shape {
    Parallelogram { m1: u32, m2: u32 },
    Triangle { m: u32 },
    Flower { m: u32 },
    TrimmedParallelogram { m1: u32, m2: u32 },
    TrimmedTriangle { m: u32 },
    Explicit { cells: Vec<Cell> },
}

impl Shape {
    pub fn family_name(&self) -> &'static str {
        match self {
            Shape::Parallelogram { .. } => "parallelogram",
            Shape::Triangle { .. } => "triangle",
            Shape::Flower { .. } => "flower",
            Shape::TrimmedParallelogram { .. } => "trimmed-parallelogram",
            Shape::TrimmedTriangle { .. } => "trimmed-triangle",
            Shape::Explicit { .. } => "explicit",
        }
    }

    /// Assembles a shape from a family name and loose parameters, as given
    /// on a command line or in a query string.
    pub fn from_parts(
        family: &str,
        m: Option<u32>,
        m1: Option<u32>,
        m2: Option<u32>,
        cells: Option<Vec<Cell>>,
    ) -> Result<Shape, BoardError> {
        let need = |v: Option<u32>, name: &str| {
            v.ok_or_else(|| BoardError::InvalidParams(format!("family {family} needs {name}")))
        };
        Ok(match family {
            "parallelogram" => Shape::Parallelogram {
                m1: need(m1, "m1")?,
                m2: need(m2, "m2")?,
            },
            "trimmed-parallelogram" => Shape::TrimmedParallelogram {
                m1: need(m1, "m1")?,
                m2: need(m2, "m2")?,
            },
            "triangle" => Shape::Triangle { m: need(m, "m")? },
            "trimmed-triangle" => Shape::TrimmedTriangle { m: need(m, "m")? },
            "flower" => Shape::Flower { m: need(m, "m")? },
            "explicit" => Shape::Explicit {
                cells: cells.ok_or_else(|| {
                    BoardError::InvalidParams("family explicit needs cells".into())
                })?,
            },
            other => return Err(BoardError::InvalidParams(format!("unknown family {other}"))),
        })
    }
}

/// Parses `"q,r;q,r;..."` into cells.
pub fn parse_cell_list(s: &str) -> Result<Vec<Cell>, BoardError> {
    s.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|pair| {
            let bad = || BoardError::InvalidParams(format!("bad cell {pair:?}, expected q,r"));
            let (q, r) = pair.split_once(',').ok_or_else(bad)?;
            Ok(Cell::new(
                q.trim().parse().map_err(|_| bad())?,
                r.trim().parse().map_err(|_| bad())?,
            ))
        })
        .collect()
}

fn parallelogram_cells(m1: u32, m2: u32) -> Vec<Cell> {
    let mut cells = Vec::with_capacity((m1 * m2) as usize);
    for q in 0..m1 as i32 {
        for r in 0..m2 as i32 {
            cells.push(Cell::new(q, r));
        }
    }
    cells
}

fn triangle_cells(m: u32) -> Vec<Cell> {
    let m = m as i32;
    let mut cells = Vec::new();
    for q in 0..m {
        for r in 0..m - q {
            cells.push(Cell::new(q, r));
        }
    }
    cells
}

fn flower_cells(m: u32) -> Vec<Cell> {
    let radius = m as i32 - 1;
    let mut cells = Vec::new();
    for q in -radius..=radius {
        for r in -radius..=radius {
            if (q + r).abs() <= radius {
                cells.push(Cell::new(q, r));
            }
        }
    }
    cells
}

fn check_positive(name: &str, v: u32, min: u32) -> Result<(), BoardError> {
    if v < min {
        return Err(BoardError::InvalidParams(format!(
            "{name} must be at least {min}, got {v}"
        )));
    }
    Ok(())
}

/// Returns true when `cells` is non-empty and connected under hex adjacency.
pub fn cells_connected(cells: &[Cell]) -> bool {
    let set: BTreeSet<Cell> = cells.iter().copied().collect();
    let Some(&first) = set.iter().next() else {
        return false;
    };
    let mut seen = BTreeSet::from([first]);
    let mut queue = VecDeque::from([first]);
    while let Some(c) = queue.pop_front() {
        for n in c.lattice_neighbors() {
            if set.contains(&n) && seen.insert(n) {
                queue.push_back(n);
            }
        }
    }
    seen.len() == set.len()
}

/// Returns true if some two cells of `cells` are adjacent.
pub fn has_adjacent_pair(cells: &[Cell]) -> bool {
    let set: BTreeSet<Cell> = cells.iter().copied().collect();
    set.iter()
        .any(|c| c.lattice_neighbors().iter().any(|n| set.contains(n)))
}

/// Translation-and-symmetry invariant form of a cell set: the
/// lexicographically least sorted image under the twelve lattice symmetries,
/// each translated so its minimum `q` and minimum `r` are zero.
pub fn canonical_form(cells: &[Cell]) -> Vec<Cell> {
    LatticeSymmetry::all()
        .map(|g| normalized_image(cells, g))
        .min()
        .unwrap_or_default()
}

fn normalized_image(cells: &[Cell], g: LatticeSymmetry) -> Vec<Cell> {
    let img: Vec<Cell> = cells.iter().map(|&c| g.apply(c)).collect();
    let min_q = img.iter().map(|c| c.q).min().unwrap_or(0);
    let min_r = img.iter().map(|c| c.r).min().unwrap_or(0);
    let mut out: Vec<Cell> = img.into_iter().map(|c| c.offset(-min_q, -min_r)).collect();
    out.sort_unstable();
    out
}

/// True when the two cell sets are images of each other under a lattice
/// symmetry followed by a translation.
pub fn congruent(a: &[Cell], b: &[Cell]) -> bool {
    a.len() == b.len() && canonical_form(a) == canonical_form(b)
}

/// All congruent copies of `shape` lying inside `target`, sorted and
/// deduplicated.
pub fn placements(shape: &[Cell], target: &[Cell]) -> Vec<Vec<Cell>> {
    let target_set: BTreeSet<Cell> = target.iter().copied().collect();
    let mut found = BTreeSet::new();
    for g in LatticeSymmetry::all() {
        let img: Vec<Cell> = shape.iter().map(|&c| g.apply(c)).collect();
        let Some(&anchor) = img.iter().min() else {
            continue;
        };
        for &t in &target_set {
            let (dq, dr) = (t.q - anchor.q, t.r - anchor.r);
            let mut placed: Vec<Cell> = img.iter().map(|c| c.offset(dq, dr)).collect();
            if placed.iter().all(|c| target_set.contains(c)) {
                placed.sort_unstable();
                found.insert(placed);
            }
        }
    }
    found.into_iter().collect()
}

/// Precomputed slide geometry for one ordered pair of adjacent cells: the
/// cells adjacent to both (at most two on any board).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Link {
    pub to: u8,
    pub common: [u8; 2],
    pub n_common: u8,
}

impl Link {
    pub fn common(&self) -> &[u8] {
        &self.common[..self.n_common as usize]
    }
}

/// A finite connected set of hex cells with adjacency. Immutable after
/// construction.
#[derive(Debug, Clone)]
pub struct BoardSpec {
    shape: Shape,
    cells: Vec<Cell>,
    index: HashMap<Cell, usize>,
    links: Vec<Vec<Link>>,
}

impl PartialEq for BoardSpec {
    fn eq(&self, other: &Self) -> bool {
        self.cells == other.cells
    }
}

impl Eq for BoardSpec {}

impl BoardSpec {
    /// Builds a board from a shape descriptor.
    pub fn build(shape: Shape) -> Result<BoardSpec, BoardError> {
        let cells = match &shape {
            Shape::Parallelogram { m1, m2 } => {
                check_positive("m1", *m1, 1)?;
                check_positive("m2", *m2, 1)?;
                parallelogram_cells(*m1, *m2)
            }
            Shape::Triangle { m } => {
                check_positive("m", *m, 2)?;
                triangle_cells(*m)
            }
            Shape::Flower { m } => {
                check_positive("m", *m, 1)?;
                flower_cells(*m)
            }
            Shape::TrimmedParallelogram { m1, m2 } => {
                check_positive("m1", *m1, 1)?;
                check_positive("m2", *m2, 1)?;
                trimmed(parallelogram_cells(*m1, *m2))?
            }
            Shape::TrimmedTriangle { m } => {
                check_positive("m", *m, 2)?;
                trimmed(triangle_cells(*m))?
            }
            Shape::Explicit { cells } => cells.clone(),
        };
        Self::from_cells(shape, cells)
    }

    pub fn parallelogram(m1: u32, m2: u32) -> Result<BoardSpec, BoardError> {
        Self::build(Shape::Parallelogram { m1, m2 })
    }

    pub fn triangle(m: u32) -> Result<BoardSpec, BoardError> {
        Self::build(Shape::Triangle { m })
    }

    pub fn flower(m: u32) -> Result<BoardSpec, BoardError> {
        Self::build(Shape::Flower { m })
    }

    pub fn trimmed_parallelogram(m1: u32, m2: u32) -> Result<BoardSpec, BoardError> {
        Self::build(Shape::TrimmedParallelogram { m1, m2 })
    }

    pub fn trimmed_triangle(m: u32) -> Result<BoardSpec, BoardError> {
        Self::build(Shape::TrimmedTriangle { m })
    }

    pub fn explicit(cells: impl IntoIterator<Item = Cell>) -> Result<BoardSpec, BoardError> {
        let mut cells: Vec<Cell> = cells.into_iter().collect();
        cells.sort_unstable();
        Self::build(Shape::Explicit { cells })
    }

    fn from_cells(shape: Shape, mut cells: Vec<Cell>) -> Result<BoardSpec, BoardError> {
        if cells.is_empty() {
            return Err(BoardError::Empty);
        }
        cells.sort_unstable();
        if let Some(w) = cells.windows(2).find(|w| w[0] == w[1]) {
            return Err(BoardError::DuplicateCell(w[0]));
        }
        if cells.len() > MAX_CELLS {
            return Err(BoardError::TooLarge(cells.len()));
        }
        if !cells_connected(&cells) {
            return Err(BoardError::Disconnected);
        }
        let shape = match shape {
            Shape::Explicit { .. } => Shape::Explicit {
                cells: cells.clone(),
            },
            other => other,
        };
        let index: HashMap<Cell, usize> = cells.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let links = cells
            .iter()
            .map(|&c| {
                let mut out: Vec<Link> = c
                    .lattice_neighbors()
                    .iter()
                    .filter_map(|n| index.get(n))
                    .map(|&j| {
                        let other = cells[j];
                        let mut common = [0u8; 2];
                        let mut n_common = 0u8;
                        let mut shared: Vec<usize> = c
                            .lattice_neighbors()
                            .iter()
                            .filter(|x| x.is_adjacent(other))
                            .filter_map(|x| index.get(x).copied())
                            .collect();
                        shared.sort_unstable();
                        for k in shared {
                            common[n_common as usize] = k as u8;
                            n_common += 1;
                        }
                        Link {
                            to: j as u8,
                            common,
                            n_common,
                        }
                    })
                    .collect();
                out.sort_by_key(|l| l.to);
                out
            })
            .collect();
        Ok(BoardSpec {
            shape,
            cells,
            index,
            links,
        })
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    /// Cells in canonical (lexicographic `(q, r)`) order.
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, c: Cell) -> bool {
        self.index.contains_key(&c)
    }

    pub fn index_of(&self, c: Cell) -> Option<usize> {
        self.index.get(&c).copied()
    }

    pub fn cell(&self, i: usize) -> Cell {
        self.cells[i]
    }

    pub(crate) fn links(&self, i: usize) -> &[Link] {
        &self.links[i]
    }

    pub(crate) fn link(&self, i: usize, j: usize) -> Option<&Link> {
        self.links[i].iter().find(|l| l.to as usize == j)
    }

    pub fn neighbor_indices(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.links[i].iter().map(|l| l.to as usize)
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.link(i, j).is_some()
    }

    /// Board cells adjacent to `c`, in canonical order.
    pub fn neighbors(&self, c: Cell) -> Result<Vec<Cell>, BoardError> {
        let i = self.index_of(c).ok_or(BoardError::CellNotOnBoard(c))?;
        Ok(self.neighbor_indices(i).map(|j| self.cells[j]).collect())
    }

    /// Cells with exactly two neighbours that are adjacent to each other.
    pub fn tight_corners(&self) -> Vec<Cell> {
        self.tight_corner_indices()
            .into_iter()
            .map(|i| self.cells[i])
            .collect()
    }

    pub fn tight_corner_indices(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| {
                let links = &self.links[i];
                links.len() == 2 && self.adjacent(links[0].to as usize, links[1].to as usize)
            })
            .collect()
    }

    /// Removes this board's tight corners (one pass). The result may itself
    /// have tight corners on small shapes.
    pub fn trim(&self) -> Result<BoardSpec, BoardError> {
        let shape = match &self.shape {
            Shape::Parallelogram { m1, m2 } => Shape::TrimmedParallelogram { m1: *m1, m2: *m2 },
            Shape::Triangle { m } => Shape::TrimmedTriangle { m: *m },
            Shape::Flower { m } if self.tight_corner_indices().is_empty() => {
                Shape::Flower { m: *m }
            }
            _ => Shape::Explicit { cells: Vec::new() },
        };
        let cells = trimmed(self.cells.clone())?;
        Self::from_cells(shape, cells)
    }

    /// Display name such as `P(3,4)`, `T^tr(5)` or `explicit[12]`.
    pub fn name(&self) -> String {
        match &self.shape {
            Shape::Parallelogram { m1, m2 } => format!("P({m1},{m2})"),
            Shape::Triangle { m } => format!("T({m})"),
            Shape::Flower { m } => format!("F({m})"),
            Shape::TrimmedParallelogram { m1, m2 } => format!("P^tr({m1},{m2})"),
            Shape::TrimmedTriangle { m } => format!("T^tr({m})"),
            Shape::Explicit { cells } => format!("explicit[{}]", cells.len()),
        }
    }

    pub fn is_congruent_to(&self, other: &BoardSpec) -> bool {
        congruent(&self.cells, &other.cells)
    }

    /// Lattice symmetries mapping the board onto itself, as permutations of
    /// cell indices. The identity is always first.
    pub fn symmetries(&self) -> Vec<Vec<usize>> {
        let base = normalized_image(&self.cells, LatticeSymmetry::identity());
        let min_q = self.cells.iter().map(|c| c.q).min().unwrap_or(0);
        let min_r = self.cells.iter().map(|c| c.r).min().unwrap_or(0);
        let mut out = Vec::new();
        for g in LatticeSymmetry::all() {
            if normalized_image(&self.cells, g) != base {
                continue;
            }
            let img: Vec<Cell> = self.cells.iter().map(|&c| g.apply(c)).collect();
            let img_min_q = img.iter().map(|c| c.q).min().unwrap_or(0);
            let img_min_r = img.iter().map(|c| c.r).min().unwrap_or(0);
            let perm = img
                .iter()
                .map(|c| self.index[&c.offset(min_q - img_min_q, min_r - img_min_r)])
                .collect();
            out.push(perm);
        }
        out
    }
}

impl fmt::Display for BoardSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl Serialize for BoardSpec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.shape.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BoardSpec {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let shape = Shape::deserialize(deserializer)?;
        BoardSpec::build(shape).map_err(serde::de::Error::custom)
    }
}

fn trimmed(cells: Vec<Cell>) -> Result<Vec<Cell>, BoardError> {
    let board = BoardSpec::from_cells(Shape::Explicit { cells: Vec::new() }, cells)?;
    let corners: BTreeSet<usize> = board.tight_corner_indices().into_iter().collect();
    let rest: Vec<Cell> = (0..board.len())
        .filter(|i| !corners.contains(i))
        .map(|i| board.cells[i])
        .collect();
    if rest.is_empty() || !cells_connected(&rest) {
        return Err(BoardError::DisconnectedAfterTrim);
    }
    Ok(rest)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_neighbors(board: &BoardSpec, c: Cell) -> BTreeSet<Cell> {
        let mut out = BTreeSet::new();
        for dq in -1..=1 {
            for dr in -1..=1 {
                let n = c.offset(dq, dr);
                // Hex neighbours are exactly the unit offsets except (1,1) and (-1,-1).
                if (dq, dr) != (0, 0) && dq != dr && board.contains(n) {
                    out.insert(n);
                }
            }
        }
        out
    }

    #[test]
    fn shape_cell_counts() {
        assert_eq!(BoardSpec::flower(2).unwrap().len(), 7);
        assert_eq!(BoardSpec::parallelogram(3, 4).unwrap().len(), 12);
        assert_eq!(BoardSpec::trimmed_triangle(5).unwrap().len(), 12);
        for m in 1..=8u32 {
            assert_eq!(
                BoardSpec::flower(m).unwrap().len() as u32,
                3 * m * (m - 1) + 1
            );
            for m2 in 1..=8u32 {
                assert_eq!(
                    BoardSpec::parallelogram(m, m2).unwrap().len() as u32,
                    m * m2
                );
            }
            if m >= 2 {
                assert_eq!(
                    BoardSpec::triangle(m).unwrap().len() as u32,
                    m * (m + 1) / 2
                );
            }
        }
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(matches!(
            BoardSpec::parallelogram(0, 3),
            Err(BoardError::InvalidParams(_))
        ));
        assert!(matches!(
            BoardSpec::triangle(1),
            Err(BoardError::InvalidParams(_))
        ));
        assert!(matches!(
            BoardSpec::flower(0),
            Err(BoardError::InvalidParams(_))
        ));
        assert_eq!(
            BoardSpec::trimmed_triangle(2).unwrap_err(),
            BoardError::DisconnectedAfterTrim
        );
        assert_eq!(
            BoardSpec::explicit([Cell::new(0, 0), Cell::new(2, 0)]).unwrap_err(),
            BoardError::Disconnected
        );
        assert_eq!(
            BoardSpec::build(Shape::Explicit {
                cells: vec![Cell::new(0, 0), Cell::new(0, 0)]
            })
            .unwrap_err(),
            BoardError::DuplicateCell(Cell::new(0, 0))
        );
    }

    #[test]
    fn neighbors_examples() {
        let p = BoardSpec::parallelogram(3, 3).unwrap();
        assert_eq!(
            p.neighbors(Cell::new(0, 0)).unwrap(),
            vec![Cell::new(0, 1), Cell::new(1, 0)]
        );
        let f = BoardSpec::flower(2).unwrap();
        assert_eq!(f.neighbors(Cell::new(0, 0)).unwrap().len(), 6);
        let t = BoardSpec::triangle(3).unwrap();
        let got: BTreeSet<Cell> = t.neighbors(Cell::new(1, 1)).unwrap().into_iter().collect();
        assert_eq!(got, brute_neighbors(&t, Cell::new(1, 1)));
        assert_eq!(
            got,
            BTreeSet::from([
                Cell::new(0, 1),
                Cell::new(1, 0),
                Cell::new(0, 2),
                Cell::new(2, 0)
            ])
        );
        assert_eq!(
            p.neighbors(Cell::new(5, 5)),
            Err(BoardError::CellNotOnBoard(Cell::new(5, 5)))
        );
    }

    #[test]
    fn adjacency_symmetric_irreflexive() {
        for board in [
            BoardSpec::parallelogram(4, 3).unwrap(),
            BoardSpec::triangle(5).unwrap(),
            BoardSpec::flower(3).unwrap(),
            BoardSpec::trimmed_parallelogram(3, 4).unwrap(),
        ] {
            for (i, &c) in board.cells().iter().enumerate() {
                assert_eq!(
                    board
                        .neighbors(c)
                        .unwrap()
                        .into_iter()
                        .collect::<BTreeSet<_>>(),
                    brute_neighbors(&board, c)
                );
                assert!(!board.adjacent(i, i));
                for j in board.neighbor_indices(i) {
                    assert!(board.adjacent(j, i));
                }
            }
        }
    }

    #[test]
    fn tight_corner_examples() {
        assert_eq!(
            BoardSpec::parallelogram(3, 4).unwrap().tight_corners(),
            vec![Cell::new(0, 0), Cell::new(2, 3)]
        );
        assert_eq!(BoardSpec::triangle(5).unwrap().tight_corners().len(), 3);
        assert!(BoardSpec::flower(3).unwrap().tight_corners().is_empty());
        for board in [
            BoardSpec::triangle(6).unwrap(),
            BoardSpec::parallelogram(5, 2).unwrap(),
        ] {
            for c in board.tight_corners() {
                let n = board.neighbors(c).unwrap();
                assert_eq!(n.len(), 2);
                assert!(n[0].is_adjacent(n[1]));
            }
        }
    }

    #[test]
    fn trim_examples() {
        let p = BoardSpec::parallelogram(3, 4).unwrap();
        let t = p.trim().unwrap();
        assert_eq!(t.len(), 10);
        assert_eq!(t, BoardSpec::trimmed_parallelogram(3, 4).unwrap());
        assert_eq!(t.name(), "P^tr(3,4)");
        let f = BoardSpec::flower(3).unwrap();
        assert_eq!(f.trim().unwrap(), f);
        assert!(BoardSpec::triangle(5)
            .unwrap()
            .trim()
            .unwrap()
            .tight_corners()
            .is_empty());
        // T(4) minus its corners is the seven-cell flower.
        assert!(BoardSpec::triangle(4)
            .unwrap()
            .trim()
            .unwrap()
            .is_congruent_to(&BoardSpec::flower(2).unwrap()));
    }

    #[test]
    fn trim_idempotent_on_large_trimmed_shapes() {
        for m1 in 3..=6 {
            for m2 in 3..=6 {
                let b = BoardSpec::trimmed_parallelogram(m1, m2).unwrap();
                assert!(b.tight_corners().is_empty(), "P^tr({m1},{m2})");
                assert_eq!(b.trim().unwrap(), b);
            }
        }
        for m in 4..=8 {
            let b = BoardSpec::trimmed_triangle(m).unwrap();
            assert!(b.tight_corners().is_empty(), "T^tr({m})");
            assert_eq!(b.trim().unwrap(), b);
        }
    }

    #[test]
    fn congruence_and_symmetries() {
        let a = BoardSpec::parallelogram(3, 4).unwrap();
        let b = BoardSpec::parallelogram(4, 3).unwrap();
        assert!(a.is_congruent_to(&b));
        assert!(!a.is_congruent_to(&BoardSpec::trimmed_parallelogram(3, 4).unwrap()));
        assert_eq!(BoardSpec::flower(3).unwrap().symmetries().len(), 12);
        assert_eq!(BoardSpec::triangle(4).unwrap().symmetries().len(), 6);
        assert_eq!(
            BoardSpec::parallelogram(3, 3).unwrap().symmetries().len(),
            4
        );
        assert_eq!(
            BoardSpec::parallelogram(3, 4).unwrap().symmetries().len(),
            2
        );
        for perm in BoardSpec::triangle(5).unwrap().symmetries() {
            let mut sorted = perm.clone();
            sorted.sort_unstable();
            assert_eq!(sorted, (0..15).collect::<Vec<_>>());
        }
    }

    #[test]
    fn placements_of_parallelogram_in_flower() {
        let f = BoardSpec::flower(3).unwrap();
        let p = BoardSpec::parallelogram(3, 3).unwrap();
        let found = placements(p.cells(), f.cells());
        // Three orientations, three positions each.
        assert_eq!(found.len(), 9);
        for pl in &found {
            assert!(congruent(pl, p.cells()));
        }
    }

    #[test]
    fn board_json_round_trip() {
        let b: BoardSpec =
            serde_json::from_str(r#"{"family":"parallelogram","m1":3,"m2":4}"#).unwrap();
        assert_eq!(b.len(), 12);
        let json = serde_json::to_string(&b).unwrap();
        assert_eq!(json, r#"{"family":"parallelogram","m1":3,"m2":4}"#);
        let e: BoardSpec =
            serde_json::from_str(r#"{"family":"explicit","cells":[[1,0],[0,0],[0,1]]}"#).unwrap();
        assert_eq!(
            serde_json::to_string(&e).unwrap(),
            r#"{"family":"explicit","cells":[[0,0],[0,1],[1,0]]}"#
        );
        assert!(serde_json::from_str::<BoardSpec>(r#"{"family":"triangle","m":0}"#).is_err());
    }

    #[test]
    fn shapes_from_loose_parts() {
        assert_eq!(
            Shape::from_parts("flower", Some(2), None, None, None).unwrap(),
            Shape::Flower { m: 2 }
        );
        assert_eq!(
            Shape::from_parts("trimmed-parallelogram", None, Some(3), Some(4), None).unwrap(),
            Shape::TrimmedParallelogram { m1: 3, m2: 4 }
        );
        assert!(Shape::from_parts("parallelogram", Some(3), None, None, None).is_err());
        assert!(Shape::from_parts("square", Some(3), None, None, None).is_err());
        let cells = parse_cell_list("0,0; 1,0;0,1").unwrap();
        assert_eq!(
            cells,
            vec![Cell::new(0, 0), Cell::new(1, 0), Cell::new(0, 1)]
        );
        assert!(parse_cell_list("0,0;1").is_err());
    }
}
