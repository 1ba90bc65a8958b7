//! Mixed graphs: a node set with directed arcs and undirected edges.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Dense node index in `0..node_count`.
pub type NodeId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphError {
    NoNodes,
    NodeOutOfRange { u: NodeId, v: NodeId, node_count: usize },
    Loop(NodeId),
    DuplicateDirected(NodeId, NodeId),
    DuplicateUndirected(NodeId, NodeId),
    /// The same pair is joined by an undirected edge and a directed arc.
    MixedPair(NodeId, NodeId),
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GraphError::NoNodes => write!(f, "graph must have at least one node"),
            GraphError::NodeOutOfRange { u, v, node_count } => write!(
                f,
                "edge ({u},{v}) references a node outside 0..{node_count}"
            ),
            GraphError::Loop(u) => write!(f, "loop at node {u} is not allowed"),
            GraphError::DuplicateDirected(u, v) => {
                write!(f, "directed edge ({u},{v}) listed more than once")
            }
            GraphError::DuplicateUndirected(u, v) => {
                write!(f, "undirected edge {{{u},{v}}} listed more than once")
            }
            GraphError::MixedPair(u, v) => write!(
                f,
                "nodes {u} and {v} are joined by both an undirected and a directed edge"
            ),
        }
    }
}

impl core::error::Error for GraphError {}

/// A finite mixed graph without loops or multi-edges.
///
/// Undirected edges are stored with the smaller endpoint first. Out-neighbor
/// lists are precomputed and sorted, so iteration order is deterministic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedGraph {
    node_count: usize,
    directed: BTreeSet<(NodeId, NodeId)>,
    undirected: BTreeSet<(NodeId, NodeId)>,
    out: Vec<Vec<NodeId>>,
}

impl MixedGraph {
    pub fn new(
        node_count: usize,
        directed: impl IntoIterator<Item = (NodeId, NodeId)>,
        undirected: impl IntoIterator<Item = (NodeId, NodeId)>,
    ) -> Result<Self, GraphError> {
        if node_count == 0 {
            return Err(GraphError::NoNodes);
        }
        let check = |u: NodeId, v: NodeId| {
            if u >= node_count || v >= node_count {
                Err(GraphError::NodeOutOfRange { u, v, node_count })
            } else if u == v {
                Err(GraphError::Loop(u))
            } else {
                Ok(())
            }
        };

        let mut und = BTreeSet::new();
        for (u, v) in undirected {
            check(u, v)?;
            if !und.insert((u.min(v), u.max(v))) {
                return Err(GraphError::DuplicateUndirected(u, v));
            }
        }
        let mut dir = BTreeSet::new();
        for (u, v) in directed {
            check(u, v)?;
            if und.contains(&(u.min(v), u.max(v))) {
                return Err(GraphError::MixedPair(u, v));
            }
            if !dir.insert((u, v)) {
                return Err(GraphError::DuplicateDirected(u, v));
            }
        }

        let mut out = vec![Vec::new(); node_count];
        for &(u, v) in &dir {
            out[u].push(v);
        }
        for &(u, v) in &und {
            out[u].push(v);
            out[v].push(u);
        }
        for list in &mut out {
            list.sort_unstable();
        }
        Ok(MixedGraph {
            node_count,
            directed: dir,
            undirected: und,
            out,
        })
    }

    /// Undirected cycle `0 - 1 - ... - (n-1) - 0`.
    pub fn ring(n: usize) -> Result<Self, GraphError> {
        let edges: Vec<_> = match n {
            0 | 1 => Vec::new(),
            2 => vec![(0, 1)],
            _ => (0..n).map(|i| (i, (i + 1) % n)).collect(),
        };
        MixedGraph::new(n, [], edges)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn directed(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.directed.iter().copied()
    }

    pub fn undirected(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.undirected.iter().copied()
    }

    pub fn directed_count(&self) -> usize {
        self.directed.len()
    }

    pub fn undirected_count(&self) -> usize {
        self.undirected.len()
    }

    /// Heads of arcs leaving `v` together with the other ends of undirected
    /// edges at `v`, ascending.
    ///
    /// # Panics
    /// If `v` is not a node of the graph.
    pub fn out_neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.out[v]
    }

    /// A closed walk through every node exists, following arcs forward and
    /// undirected edges either way. Equivalent to the whole node set forming
    /// one strongly connected component.
    pub fn super_weak_computable(&self) -> bool {
        let mut rev = vec![Vec::new(); self.node_count];
        for (u, list) in self.out.iter().enumerate() {
            for &v in list {
                rev[v].push(u);
            }
        }
        all_reached(&self.out) && all_reached(&rev)
    }

    /// Every node is reachable from every other over undirected edges alone.
    pub fn weak_computable(&self) -> bool {
        let mut adj = vec![Vec::new(); self.node_count];
        for &(u, v) in &self.undirected {
            adj[u].push(v);
            adj[v].push(u);
        }
        all_reached(&adj)
    }
}

fn all_reached(adj: &[Vec<NodeId>]) -> bool {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                count += 1;
                stack.push(v);
            }
        }
    }
    count == adj.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn out_neighbors_of_ring_and_mixed_graphs() {
        let ring = MixedGraph::ring(3).unwrap();
        assert_eq!(ring.out_neighbors(0), &[1, 2]);

        let g = MixedGraph::new(2, [(0, 1)], []).unwrap();
        assert!(g.out_neighbors(1).is_empty());

        let g = MixedGraph::new(3, [(0, 1)], [(0, 2)]).unwrap();
        assert_eq!(g.out_neighbors(0), &[1, 2]);
        assert_eq!(g.out_neighbors(2), &[0]);
    }

    #[test]
    fn construction_rejects_bad_edges() {
        assert_eq!(MixedGraph::new(0, [], []), Err(GraphError::NoNodes));
        assert_eq!(
            MixedGraph::new(2, [(1, 1)], []),
            Err(GraphError::Loop(1))
        );
        assert_eq!(
            MixedGraph::new(2, [], [(0, 2)]),
            Err(GraphError::NodeOutOfRange { u: 0, v: 2, node_count: 2 })
        );
        assert_eq!(
            MixedGraph::new(2, [(0, 1), (0, 1)], []),
            Err(GraphError::DuplicateDirected(0, 1))
        );
        assert_eq!(
            MixedGraph::new(2, [], [(0, 1), (1, 0)]),
            Err(GraphError::DuplicateUndirected(1, 0))
        );
        assert_eq!(
            MixedGraph::new(2, [(1, 0)], [(0, 1)]),
            Err(GraphError::MixedPair(1, 0))
        );
    }

    #[test]
    fn opposite_arcs_are_two_distinct_directed_edges() {
        let g = MixedGraph::new(2, [(0, 1), (1, 0)], []).unwrap();
        assert_eq!(g.directed_count(), 2);
        assert!(g.super_weak_computable());
        assert!(!g.weak_computable());
    }

    #[test]
    fn computability_examples() {
        let cycle = MixedGraph::new(3, [(0, 1), (1, 2), (2, 0)], []).unwrap();
        assert!(cycle.super_weak_computable());
        assert!(!cycle.weak_computable());

        let isolated = MixedGraph::new(2, [], []).unwrap();
        assert!(!isolated.super_weak_computable());
        assert!(!isolated.weak_computable());

        let path = MixedGraph::new(3, [(0, 1), (1, 2)], []).unwrap();
        assert!(!path.super_weak_computable());

        let ring = MixedGraph::ring(5).unwrap();
        assert!(ring.weak_computable());
        assert!(ring.super_weak_computable());

        let single = MixedGraph::new(1, [], []).unwrap();
        assert!(single.weak_computable());
        assert!(single.super_weak_computable());
    }
}
