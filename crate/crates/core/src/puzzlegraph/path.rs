//! Bidirectional BFS for shortest slide sequences.

use rustc_hash::FxHashMap;

use crate::configuration::{ConfigError, Configuration, SlideMove};

use super::codec::StateCodec;
use super::{Budget, GraphError};

/// A minimum-length slide sequence from `from` to `to`, or `None` when `to`
/// is not in the component of `from`.
pub fn shortest_path(
    from: &Configuration,
    to: &Configuration,
    budget: Budget,
) -> Result<Option<Vec<SlideMove>>, GraphError> {
    if from.board() != to.board() {
        return Err(ConfigError::BoardMismatch.into());
    }
    if from.tile_labels() != to.tile_labels() {
        return Err(ConfigError::LabelMismatch.into());
    }
    if from == to {
        return Ok(Some(Vec::new()));
    }
    if from.h() < 2 || from.is_isolated() || to.is_isolated() {
        return Ok(None);
    }
    let board = from.board();
    let codec = StateCodec::for_labels(from.labels())?;
    let (s, t) = (codec.encode(from.labels()), codec.encode(to.labels()));

    // parent maps: state -> predecessor towards the side's root.
    let mut parents = [FxHashMap::default(), FxHashMap::default()];
    parents[0].insert(s, s);
    parents[1].insert(t, t);
    let mut frontiers = [vec![s], vec![t]];
    let mut meet: Option<u128> = None;
    while meet.is_none() {
        if frontiers[0].is_empty() || frontiers[1].is_empty() {
            return Ok(None);
        }
        let side = if frontiers[0].len() <= frontiers[1].len() {
            0
        } else {
            1
        };
        let (mine, theirs) = if side == 0 {
            let (a, b) = parents.split_at_mut(1);
            (&mut a[0], &b[0])
        } else {
            let (a, b) = parents.split_at_mut(1);
            (&mut b[0], &a[0])
        };
        let mut next = Vec::new();
        for &u in &frontiers[side] {
            codec.for_each_successor(board, u, |v, _| {
                if mine.contains_key(&v) {
                    return;
                }
                mine.insert(v, u);
                if meet.is_none() && theirs.contains_key(&v) {
                    meet = Some(v);
                }
                next.push(v);
            });
        }
        if (parents[0].len() + parents[1].len()) as u64 > budget.0 {
            return Err(GraphError::BudgetExceeded { budget: budget.0 });
        }
        frontiers[side] = next;
    }
    // All meeting points found while expanding one full level give the same
    // total length, so the first one is optimal.
    let m = meet.expect("loop exits on meet");
    let mut states = Vec::new();
    let mut cur = m;
    while cur != s {
        states.push(cur);
        cur = parents[0][&cur];
    }
    states.push(s);
    states.reverse();
    let mut cur = m;
    while cur != t {
        cur = parents[1][&cur];
        states.push(cur);
    }
    let mut moves = Vec::with_capacity(states.len() - 1);
    let mut config = from.clone();
    for pair in states.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let from_idx = (0..codec.cells())
            .find(|&i| codec.get(a, i) != 0 && codec.get(b, i) == 0)
            .expect("tile left");
        let to_idx = (0..codec.cells())
            .find(|&i| codec.get(a, i) == 0 && codec.get(b, i) != 0)
            .expect("tile arrived");
        let mv = config
            .find_move(board.cell(from_idx), board.cell(to_idx))
            .expect("consecutive states differ by a legal slide");
        config = config.apply_move(&mv)?;
        moves.push(mv);
    }
    debug_assert_eq!(&config, to);
    Ok(Some(moves))
}
