use serde::{Deserialize, Serialize};
use trine_core::MixedGraph;

use crate::error::Result;

/// `{"nodes": 3, "directed": [[0, 1]], "undirected": [[1, 2]]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub nodes: usize,
    #[serde(default)]
    pub directed: Vec<[usize; 2]>,
    #[serde(default)]
    pub undirected: Vec<[usize; 2]>,
}

impl GraphFile {
    pub fn build(&self) -> Result<MixedGraph> {
        let pair = |e: &[usize; 2]| (e[0], e[1]);
        Ok(MixedGraph::new(
            self.nodes,
            self.directed.iter().map(pair),
            self.undirected.iter().map(pair),
        )?)
    }
}

impl From<&MixedGraph> for GraphFile {
    fn from(g: &MixedGraph) -> Self {
        GraphFile {
            nodes: g.node_count(),
            directed: g.directed().map(|(u, v)| [u, v]).collect(),
            undirected: g.undirected().map(|(u, v)| [u, v]).collect(),
        }
    }
}

pub fn parse_graph(text: &str) -> Result<MixedGraph> {
    serde_json::from_str::<GraphFile>(text)?.build()
}

pub fn graph_json(g: &MixedGraph) -> String {
    serde_json::to_string(&GraphFile::from(g)).expect("graph serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn round_trip() {
        let g = parse_graph(r#"{"nodes": 3, "directed": [[0, 1]], "undirected": [[2, 1]]}"#).unwrap();
        assert_eq!(g.out_neighbors(0), [1]);
        assert_eq!(g.out_neighbors(2), [1]);
        assert_eq!(graph_json(&g), r#"{"nodes":3,"directed":[[0,1]],"undirected":[[1,2]]}"#);
        assert_eq!(parse_graph(&graph_json(&g)).unwrap(), g);
    }

    #[test]
    fn bad_graphs_are_rejected() {
        let both = r#"{"nodes": 2, "directed": [[0, 1]], "undirected": [[0, 1]]}"#;
        assert!(matches!(parse_graph(both), Err(Error::Graph(_))));
        assert!(matches!(parse_graph(r#"{"nodes": 2, "edges": []}"#), Err(Error::Json(_))));
    }
}
