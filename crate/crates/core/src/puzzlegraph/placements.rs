//! The projected graph on hole placements.
//!
//! Whether a slide is legal depends only on where the holes are, so forgetting
//! tile labels maps the puzzle graph onto a graph whose vertices are sets of
//! `h` hole cells. This graph has at most `C(cells, h)` vertices.

use std::collections::VecDeque;

use itertools::Itertools;
use rustc_hash::FxHashMap;

use crate::configuration::{holes_admit_move, IndexMove};
use crate::hexboard::BoardSpec;

/// Sorted hole cell indices.
pub type Placement = Vec<usize>;

pub fn is_non_isolated(board: &BoardSpec, placement: &[usize]) -> bool {
    holes_admit_move(board, |i| placement.contains(&i))
}

/// Non-isolated placements of `h` holes, in lexicographic order.
pub fn non_isolated_placements(board: &BoardSpec, h: usize) -> Vec<Placement> {
    (0..board.len())
        .combinations(h)
        .filter(|p| is_non_isolated(board, p))
        .collect()
}

/// Hole slides out of `placement` with the resulting placements: a tile on
/// `from` moves into the hole `to`, so `from` becomes a hole.
pub fn placement_moves(board: &BoardSpec, placement: &[usize]) -> Vec<(IndexMove, Placement)> {
    let is_hole = |i: usize| placement.contains(&i);
    let mut out = Vec::new();
    for from in (0..board.len()).filter(|&i| !is_hole(i)) {
        for link in board.links(from) {
            let to = link.to as usize;
            if !is_hole(to) {
                continue;
            }
            if let Some(&w) = link.common().iter().find(|&&w| is_hole(w as usize)) {
                let mut next: Placement = placement
                    .iter()
                    .map(|&i| if i == to { from } else { i })
                    .collect();
                next.sort_unstable();
                out.push((
                    IndexMove {
                        from,
                        to,
                        witness: w as usize,
                    },
                    next,
                ));
            }
        }
    }
    out
}

/// Non-isolated placements with their slide edges and connected components.
#[derive(Debug, Clone)]
pub struct PlacementGraph {
    pub placements: Vec<Placement>,
    pub edges: Vec<Vec<(IndexMove, usize)>>,
    pub component: Vec<usize>,
    pub n_components: usize,
    index: FxHashMap<Placement, usize>,
}

impl PlacementGraph {
    pub fn build(board: &BoardSpec, h: usize) -> PlacementGraph {
        let placements = non_isolated_placements(board, h);
        let index: FxHashMap<Placement, usize> = placements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        let edges: Vec<Vec<(IndexMove, usize)>> = placements
            .iter()
            .map(|p| {
                placement_moves(board, p)
                    .into_iter()
                    .map(|(m, q)| (m, index[&q]))
                    .collect()
            })
            .collect();
        let mut component = vec![usize::MAX; placements.len()];
        let mut n_components = 0;
        for s in 0..placements.len() {
            if component[s] != usize::MAX {
                continue;
            }
            component[s] = n_components;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &(_, v) in &edges[u] {
                    if component[v] == usize::MAX {
                        component[v] = n_components;
                        queue.push_back(v);
                    }
                }
            }
            n_components += 1;
        }
        PlacementGraph {
            placements,
            edges,
            component,
            n_components,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.placements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.placements.is_empty()
    }

    pub fn index_of(&self, placement: &[usize]) -> Option<usize> {
        self.index.get(placement).copied()
    }

    /// Placement indices in component `comp`, ascending.
    pub fn members(&self, comp: usize) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.component[i] == comp)
            .collect()
    }

    /// First placement of each component.
    pub fn representatives(&self) -> Vec<usize> {
        let mut reps = vec![usize::MAX; self.n_components];
        for (i, &c) in self.component.iter().enumerate() {
            if reps[c] == usize::MAX {
                reps[c] = i;
            }
        }
        reps
    }
}

/// Shortest sequence of slides carrying the holes from `from` to `to`,
/// ignoring labels. `None` if `to` is unreachable.
pub fn hole_path(board: &BoardSpec, from: &[usize], to: &[usize]) -> Option<Vec<IndexMove>> {
    if from == to {
        return Some(Vec::new());
    }
    let mut parent: FxHashMap<Placement, (Placement, IndexMove)> = FxHashMap::default();
    let start: Placement = from.to_vec();
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(p) = queue.pop_front() {
        for (m, q) in placement_moves(board, &p) {
            if q == start || parent.contains_key(&q) {
                continue;
            }
            parent.insert(q.clone(), (p.clone(), m));
            if q == to {
                let mut moves = Vec::new();
                let mut cur = q;
                while cur != start {
                    let (prev, m) = parent.remove(&cur).expect("parent recorded");
                    moves.push(m);
                    cur = prev;
                }
                moves.reverse();
                return Some(moves);
            }
            queue.push_back(q);
        }
    }
    None
}
