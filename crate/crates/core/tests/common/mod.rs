//! Independent reference implementation used as a test oracle: its own
//! adjacency, a brute-force triangle scan for moves and a plain queue BFS.
#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};

use hexslide_core::BoardSpec;

const OFFSETS: [(i32, i32); 6] = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)];

pub struct Oracle {
    pub n: usize,
    adj: Vec<Vec<bool>>,
    /// Every mutually adjacent triple `a < b < c`.
    triangles: Vec<[usize; 3]>,
}

impl Oracle {
    pub fn new(board: &BoardSpec) -> Oracle {
        let cells: Vec<(i32, i32)> = board.cells().iter().map(|c| (c.q, c.r)).collect();
        let n = cells.len();
        assert!(n <= 16, "oracle packs 4 bits per cell");
        let mut adj = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                let d = (cells[j].0 - cells[i].0, cells[j].1 - cells[i].1);
                adj[i][j] = OFFSETS.contains(&d);
            }
        }
        let mut triangles = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    if adj[a][b] && adj[b][c] && adj[a][c] {
                        triangles.push([a, b, c]);
                    }
                }
            }
        }
        Oracle { n, adj, triangles }
    }

    /// All `(from, to)` slides: a tile and two holes forming a triangle.
    pub fn moves(&self, labels: &[u8]) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for t in &self.triangles {
            for k in 0..3 {
                let z = t[k];
                let x = t[(k + 1) % 3];
                let w = t[(k + 2) % 3];
                if labels[z] != 0 && labels[x] == 0 && labels[w] == 0 {
                    out.push((z, x));
                    out.push((z, w));
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn neighbors(&self, labels: &[u8]) -> Vec<Vec<u8>> {
        self.moves(labels)
            .into_iter()
            .map(|(z, x)| {
                let mut next = labels.to_vec();
                next.swap(z, x);
                next
            })
            .collect()
    }

    pub fn placement_non_isolated(&self, holes: u32) -> bool {
        self.triangles
            .iter()
            .any(|t| t.iter().filter(|&&i| holes >> i & 1 == 1).count() == 2)
    }

    /// Non-isolated configurations counted directly: non-isolated hole
    /// subsets times `t!` tile arrangements.
    pub fn non_isolated_configurations(&self, h: usize) -> u128 {
        let placements = (0u32..1 << self.n)
            .filter(|m| m.count_ones() as usize == h && self.placement_non_isolated(*m))
            .count() as u128;
        placements * (1..=(self.n - h) as u128).product::<u128>()
    }

    /// Component id of every configuration with tiles `1..=n-h`.
    pub fn label_all(&self, h: usize) -> Labeling {
        let mut labels: Vec<u8> = vec![0; h]
            .into_iter()
            .chain(1..=(self.n - h) as u8)
            .collect();
        let mut comp: HashMap<u64, u32> = HashMap::new();
        let mut sizes = Vec::new();
        loop {
            let key = encode(&labels);
            if let std::collections::hash_map::Entry::Vacant(e) = comp.entry(key) {
                let id = sizes.len() as u32;
                e.insert(id);
                let mut size = 1u64;
                let mut queue = VecDeque::from([labels.clone()]);
                while let Some(s) = queue.pop_front() {
                    for t in self.neighbors(&s) {
                        let k = encode(&t);
                        if let std::collections::hash_map::Entry::Vacant(e) = comp.entry(k) {
                            e.insert(id);
                            size += 1;
                            queue.push_back(t);
                        }
                    }
                }
                sizes.push(size);
            }
            if !next_permutation(&mut labels) {
                break;
            }
        }
        Labeling { comp, sizes }
    }

    /// Distances from `start` by plain queue BFS; stops after `limit` states.
    pub fn distances(&self, start: &[u8], limit: usize) -> Option<HashMap<u64, u32>> {
        let mut dist = HashMap::from([(encode(start), 0u32)]);
        let mut queue = VecDeque::from([start.to_vec()]);
        while let Some(s) = queue.pop_front() {
            let d = dist[&encode(&s)];
            for t in self.neighbors(&s) {
                let k = encode(&t);
                if !dist.contains_key(&k) {
                    if dist.len() >= limit {
                        return None;
                    }
                    dist.insert(k, d + 1);
                    queue.push_back(t);
                }
            }
        }
        Some(dist)
    }

    pub fn is_isolated(&self, labels: &[u8]) -> bool {
        self.moves(labels).is_empty()
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adj[i][j]
    }
}

pub struct Labeling {
    pub comp: HashMap<u64, u32>,
    pub sizes: Vec<u64>,
}

impl Labeling {
    pub fn component(&self, labels: &[u8]) -> u32 {
        self.comp[&encode(labels)]
    }

    /// Components of size greater than one, i.e. those with non-isolated
    /// configurations.
    pub fn non_trivial(&self) -> usize {
        self.sizes.iter().filter(|&&s| s > 1).count()
    }
}

pub fn encode(labels: &[u8]) -> u64 {
    labels
        .iter()
        .enumerate()
        .fold(0u64, |acc, (i, &l)| acc | (l as u64) << (4 * i))
}

pub fn decode(key: u64, n: usize) -> Vec<u8> {
    (0..n).map(|i| (key >> (4 * i) & 0xf) as u8).collect()
}

/// Lexicographic next permutation; false after the last one.
pub fn next_permutation(v: &mut [u8]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Parity of the relative order of tiles between two configurations with
/// the same holes, by inversion count. True when odd.
pub fn odd_relative(a: &[u8], b: &[u8]) -> bool {
    let inv = |v: &[u8]| {
        let tiles: Vec<u8> = v.iter().copied().filter(|&l| l != 0).collect();
        let mut count = 0usize;
        for i in 0..tiles.len() {
            for j in i + 1..tiles.len() {
                count += (tiles[i] > tiles[j]) as usize;
            }
        }
        count
    };
    (inv(a) + inv(b)) % 2 == 1
}
