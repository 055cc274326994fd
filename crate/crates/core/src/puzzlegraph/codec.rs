//! Packs a label vector into a `u128`, `bits` per cell.

use crate::configuration::IndexMove;
use crate::hexboard::BoardSpec;

use super::GraphError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StateCodec {
    cells: usize,
    bits: u32,
    mask: u128,
}

impl StateCodec {
    /// Codec for `cells` cells holding labels up to `max_label`.
    pub fn new(cells: usize, max_label: u8) -> Result<StateCodec, GraphError> {
        let bits = (u8::BITS - max_label.leading_zeros()).max(1);
        if cells as u32 * bits > 128 {
            return Err(GraphError::StateTooWide { cells, bits });
        }
        Ok(StateCodec {
            cells,
            bits,
            mask: (1u128 << bits) - 1,
        })
    }

    pub fn for_labels(labels: &[u8]) -> Result<StateCodec, GraphError> {
        Self::new(labels.len(), labels.iter().copied().max().unwrap_or(0))
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn encode(&self, labels: &[u8]) -> u128 {
        debug_assert_eq!(labels.len(), self.cells);
        labels.iter().enumerate().fold(0u128, |acc, (i, &l)| {
            acc | ((l as u128) << (i as u32 * self.bits))
        })
    }

    pub fn decode(&self, state: u128) -> Vec<u8> {
        (0..self.cells).map(|i| self.get(state, i)).collect()
    }

    #[inline]
    pub fn get(&self, state: u128, i: usize) -> u8 {
        ((state >> (i as u32 * self.bits)) & self.mask) as u8
    }

    /// Bit `i` set iff cell `i` is a hole.
    #[inline]
    pub fn hole_mask(&self, state: u128) -> u128 {
        let mut m = 0u128;
        for i in 0..self.cells {
            if self.get(state, i) == 0 {
                m |= 1 << i;
            }
        }
        m
    }

    /// Moves the tile on `from` into the hole `to`.
    #[inline]
    pub fn slide(&self, state: u128, from: usize, to: usize) -> u128 {
        let label = self.get(state, from) as u128;
        let cleared = state & !(self.mask << (from as u32 * self.bits));
        cleared | (label << (to as u32 * self.bits))
    }

    /// Calls `f` for every successor of `state`, with the slide producing it.
    /// A successor reachable through two different witnesses is reported
    /// twice.
    #[inline]
    pub fn for_each_successor(
        &self,
        board: &BoardSpec,
        state: u128,
        mut f: impl FnMut(u128, IndexMove),
    ) {
        let holes = self.hole_mask(state);
        let mut rest = holes;
        while rest != 0 {
            let x = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            for link in board.links(x) {
                let y = link.to as usize;
                if y < x || holes & (1 << y) == 0 {
                    continue;
                }
                for &z in link.common() {
                    let z = z as usize;
                    if holes & (1 << z) == 0 {
                        f(
                            self.slide(state, z, x),
                            IndexMove {
                                from: z,
                                to: x,
                                witness: y,
                            },
                        );
                        f(
                            self.slide(state, z, y),
                            IndexMove {
                                from: z,
                                to: y,
                                witness: x,
                            },
                        );
                    }
                }
            }
        }
    }

    /// Successor states, deduplicated.
    pub fn successors(&self, board: &BoardSpec, state: u128) -> Vec<u128> {
        let mut out = Vec::new();
        self.for_each_successor(board, state, |s, _| out.push(s));
        out.sort_unstable();
        out.dedup();
        out
    }
}
