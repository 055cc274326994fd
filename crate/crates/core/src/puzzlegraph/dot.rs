//! Graphviz export of small components.

use std::collections::VecDeque;
use std::fmt::Write;

use rustc_hash::FxHashMap;

use crate::configuration::Configuration;

use super::codec::StateCodec;
use super::GraphError;

/// Largest component `export_dot` accepts by default.
pub const DOT_LIMIT: u64 = 10_000;

/// DOT text for the component of `start`: one node per configuration,
/// labelled by its canonical label sequence, and one undirected edge per
/// adjacent pair. Fails if the component has more than `limit` states.
pub fn export_dot(start: &Configuration, limit: u64) -> Result<(String, usize, usize), GraphError> {
    if start.is_isolated() {
        return Err(GraphError::IsolatedStart);
    }
    let board = start.board();
    let codec = StateCodec::for_labels(start.labels())?;
    let s0 = codec.encode(start.labels());
    let mut ids: FxHashMap<u128, usize> = FxHashMap::default();
    let mut order = vec![s0];
    ids.insert(s0, 0);
    let mut edges = Vec::new();
    let mut queue = VecDeque::from([s0]);
    while let Some(u) = queue.pop_front() {
        let iu = ids[&u];
        for v in codec.successors(board, u) {
            let iv = match ids.get(&v) {
                Some(&i) => i,
                None => {
                    let i = order.len();
                    if i as u64 >= limit {
                        return Err(GraphError::ComponentTooLarge { limit });
                    }
                    ids.insert(v, i);
                    order.push(v);
                    queue.push_back(v);
                    i
                }
            };
            if iu < iv {
                edges.push((iu, iv));
            }
        }
    }
    let mut out = String::new();
    writeln!(out, "graph \"{}\" {{", board.name()).unwrap();
    for (i, &s) in order.iter().enumerate() {
        let label: Vec<String> = codec.decode(s).iter().map(u8::to_string).collect();
        writeln!(out, "  n{i} [label=\"{}\"];", label.join(",")).unwrap();
    }
    for (a, b) in &edges {
        writeln!(out, "  n{a} -- n{b};").unwrap();
    }
    out.push_str("}\n");
    Ok((out, order.len(), edges.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hexboard::BoardSpec;
    use std::sync::Arc;

    #[test]
    fn triangle_two_is_a_triangle() {
        let c = Configuration::default_start(Arc::new(BoardSpec::triangle(2).unwrap()), 2).unwrap();
        let (dot, nodes, edges) = export_dot(&c, DOT_LIMIT).unwrap();
        assert_eq!((nodes, edges), (3, 3));
        assert_eq!(dot.matches(" -- ").count(), 3);
        assert!(dot.starts_with("graph \"T(2)\" {"));
    }

    #[test]
    fn too_large_refused() {
        let c = Configuration::default_start(Arc::new(BoardSpec::flower(2).unwrap()), 2).unwrap();
        assert_eq!(
            export_dot(&c, 10).unwrap_err(),
            GraphError::ComponentTooLarge { limit: 10 }
        );
    }

    #[test]
    fn full_board_refused() {
        let c = Configuration::ordered(Arc::new(BoardSpec::triangle(3).unwrap()), &[]).unwrap();
        assert_eq!(
            export_dot(&c, DOT_LIMIT).unwrap_err(),
            GraphError::IsolatedStart
        );
    }
}
