use crate::error::{Error, Result};

/// Undirected multigraph with two distinguished terminals. Edges are the
/// failing components; nodes are perfect.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    node_count: usize,
    edges: Vec<(usize, usize)>,
    source: usize,
    target: usize,
}

impl Graph {
    pub fn new(node_count: usize, edges: Vec<(usize, usize)>, source: usize, target: usize) -> Result<Self> {
        if source >= node_count || target >= node_count {
            return Err(Error::InvalidArgument("terminal index out of range".into()));
        }
        if source == target {
            return Err(Error::InvalidArgument("source and target coincide".into()));
        }
        for &(u, v) in &edges {
            if u >= node_count || v >= node_count {
                return Err(Error::InvalidArgument(format!("edge ({u}, {v}) out of range")));
            }
            if u == v {
                return Err(Error::InvalidArgument(format!("self-loop at node {u}")));
            }
        }
        Ok(Graph { node_count, edges, source, target })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    /// Copy of this graph with one more edge.
    pub fn with_edge(&self, u: usize, v: usize) -> Result<Graph> {
        let mut edges = self.edges.clone();
        edges.push((u, v));
        Graph::new(self.node_count, edges, self.source, self.target)
    }

    /// True when every node is reachable from the source with all edges up.
    pub fn is_connected(&self) -> bool {
        let mut uf = crate::oracle::UnionFind::new(self.node_count);
        for &(u, v) in &self.edges {
            uf.union(u, v);
        }
        let root = uf.find(self.source);
        (0..self.node_count).all(|x| uf.find(x) == root)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(Graph::new(2, vec![(0, 1)], 0, 1).is_ok());
        assert!(Graph::new(2, vec![(0, 0)], 0, 1).is_err());
        assert!(Graph::new(2, vec![(0, 2)], 0, 1).is_err());
        assert!(Graph::new(2, vec![(0, 1)], 1, 1).is_err());
    }

    #[test]
    fn connectivity() {
        assert!(Graph::new(3, vec![(0, 1), (1, 2)], 0, 2).unwrap().is_connected());
        assert!(!Graph::new(3, vec![(0, 1)], 0, 1).unwrap().is_connected());
    }
}
