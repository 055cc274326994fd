//! Component counting through permutation groups, for boards whose state
//! space is far too large to enumerate.
//!
//! Fix a hole placement `H0`. Label the tile cells of every placement by
//! rank. Walking a closed path in the hole-placement graph from `H0` back to
//! `H0` permutes the tile slots of `H0`; the set of all such permutations is
//! a group `G`, and the configurations with holes `H0` reachable from any one
//! of them are exactly its `G`-orbit. Hence every puzzle-graph component over
//! this placement class has `|G|` configurations with holes `H0`, and the
//! class holds `t! / |G|` components. `G` is generated by one Schreier
//! generator per non-tree edge of a spanning tree, and its order is found
//! with Knuth's incremental Schreier–Sims algorithm.

use std::collections::VecDeque;

use crate::hexboard::BoardSpec;

use super::placements::{Placement, PlacementGraph};
use super::{factorial, GraphError};

type Perm = Vec<u8>;

fn identity(n: usize) -> Perm {
    (0..n as u8).collect()
}

/// `a` after `b`.
fn compose(a: &Perm, b: &Perm) -> Perm {
    b.iter().map(|&x| a[x as usize]).collect()
}

fn inverse(a: &Perm) -> Perm {
    let mut out = vec![0u8; a.len()];
    for (i, &x) in a.iter().enumerate() {
        out[x as usize] = i as u8;
    }
    out
}

/// Stabilizer chain over the base `0, 1, ..., n-1`.
pub struct SchreierSims {
    n: usize,
    /// `trans[k][j]`: an element fixing `0..k` pointwise and sending `k` to `j`.
    trans: Vec<Vec<Option<Perm>>>,
    gens: Vec<Vec<Perm>>,
}

impl SchreierSims {
    pub fn new(n: usize) -> Self {
        let mut trans = vec![vec![None; n]; n];
        for (k, row) in trans.iter_mut().enumerate() {
            row[k] = Some(identity(n));
        }
        SchreierSims {
            n,
            trans,
            gens: vec![Vec::new(); n],
        }
    }

    /// Whether `g`, an element fixing `0..k`, lies in the group at level `k`.
    fn contains_from(&self, k: usize, g: &Perm) -> bool {
        let mut g = g.clone();
        for level in k..self.n {
            let j = g[level] as usize;
            match &self.trans[level][j] {
                Some(u) => g = compose(&inverse(u), &g),
                None => return false,
            }
        }
        true
    }

    pub fn contains(&self, g: &Perm) -> bool {
        self.contains_from(0, g)
    }

    pub fn insert(&mut self, g: Perm) {
        assert_eq!(g.len(), self.n);
        if !self.contains(&g) {
            self.add(0, g);
        }
    }

    fn add(&mut self, k: usize, g: Perm) {
        self.gens[k].push(g.clone());
        let defined: Vec<Perm> = self.trans[k].iter().flatten().cloned().collect();
        for t in defined {
            self.update(k, compose(&g, &t));
        }
    }

    fn update(&mut self, k: usize, t: Perm) {
        let j = t[k] as usize;
        match &self.trans[k][j] {
            None => {
                self.trans[k][j] = Some(t.clone());
                let mut i = 0;
                while i < self.gens[k].len() {
                    let s = self.gens[k][i].clone();
                    self.update(k, compose(&s, &t));
                    i += 1;
                }
            }
            Some(u) => {
                let h = compose(&inverse(u), &t);
                if k + 1 < self.n && !self.contains_from(k + 1, &h) {
                    self.add(k + 1, h);
                }
            }
        }
    }

    /// Group order, the product of the basic orbit sizes.
    pub fn order(&self) -> Option<u128> {
        self.trans
            .iter()
            .map(|row| row.iter().flatten().count() as u128)
            .try_fold(1u128, |acc, s| acc.checked_mul(s))
    }
}

/// The label-permutation group and component count for one class of the
/// hole-placement graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlacementClassGroup {
    pub base: Placement,
    pub placements: usize,
    pub group_order: u128,
    pub components: u128,
}

impl PlacementClassGroup {
    /// Configurations per component.
    pub fn component_size(&self) -> Option<u128> {
        self.group_order.checked_mul(self.placements as u128)
    }
}

/// Tile cells of a placement, ascending.
fn tile_cells(n: usize, placement: &[usize]) -> Vec<usize> {
    (0..n).filter(|i| !placement.contains(i)).collect()
}

/// Slot map induced by one hole slide: slot in `p` to slot in `q`.
fn slide_map(n: usize, p: &[usize], q: &[usize], from: usize, to: usize) -> Perm {
    let target = tile_cells(n, q);
    tile_cells(n, p)
        .into_iter()
        .map(|c| {
            let dest = if c == from { to } else { c };
            target.binary_search(&dest).expect("tile cell in successor") as u8
        })
        .collect()
}

/// One group per component of the hole-placement graph of `(board, h)`.
pub fn placement_class_groups(
    board: &BoardSpec,
    h: usize,
) -> Result<Vec<PlacementClassGroup>, GraphError> {
    let graph = PlacementGraph::build(board, h);
    if graph.is_empty() {
        return Err(GraphError::NoNonIsolated { h });
    }
    let n = board.len();
    let t = n - h;
    let total = factorial(t).ok_or(GraphError::Overflow)?;
    let mut out = Vec::new();
    for rep in graph.representatives() {
        // tree[v]: slot map from the representative's slots to v's slots.
        let mut tree: Vec<Option<Perm>> = vec![None; graph.len()];
        tree[rep] = Some(identity(t));
        let mut queue = VecDeque::from([rep]);
        let mut chain = SchreierSims::new(t);
        let mut members = 0usize;
        while let Some(u) = queue.pop_front() {
            members += 1;
            let tu = tree[u].clone().expect("visited");
            for &(m, v) in &graph.edges[u] {
                let phi = slide_map(n, &graph.placements[u], &graph.placements[v], m.from, m.to);
                let image = compose(&phi, &tu);
                match &tree[v] {
                    None => {
                        tree[v] = Some(image);
                        queue.push_back(v);
                    }
                    Some(tv) => {
                        let g = compose(&inverse(tv), &image);
                        chain.insert(g);
                    }
                }
            }
        }
        let order = chain.order().ok_or(GraphError::Overflow)?;
        if total % order != 0 {
            return Err(GraphError::Overflow);
        }
        out.push(PlacementClassGroup {
            base: graph.placements[rep].clone(),
            placements: members,
            group_order: order,
            components: total / order,
        });
    }
    Ok(out)
}

/// Number of components containing non-isolated configurations, by group
/// orders instead of state enumeration.
pub fn count_components_algebraic(board: &BoardSpec, h: usize) -> Result<u128, GraphError> {
    placement_class_groups(board, h)?
        .iter()
        .try_fold(0u128, |acc, g| {
            acc.checked_add(g.components).ok_or(GraphError::Overflow)
        })
}
