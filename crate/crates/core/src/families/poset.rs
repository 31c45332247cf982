use petgraph::unionfind::UnionFind;
use serde::Serialize;

use crate::error::{Error, Result};

/// A finite poset of dimension at most one, given by its nodes and the
/// strict relations `x < y`. One-dimensional means there are no chains
/// `x < y < z`, so the relation list is already transitively closed and
/// the realization is the graph with one edge per relation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PosetDiagram {
    nodes: Vec<String>,
    relations: Vec<(usize, usize)>,
}

impl PosetDiagram {
    pub fn new(nodes: Vec<String>, mut relations: Vec<(usize, usize)>) -> Result<Self> {
        let n = nodes.len();
        relations.sort_unstable();
        relations.dedup();
        for &(x, y) in &relations {
            if x >= n || y >= n {
                return Err(Error::NotOneDimensional(format!("relation ({x}, {y}) out of range")));
            }
            if x == y {
                return Err(Error::NotOneDimensional(format!("self relation at {}", nodes[x])));
            }
            if relations.binary_search(&(y, x)).is_ok() {
                return Err(Error::NotOneDimensional(format!("{} and {} related both ways", nodes[x], nodes[y])));
            }
        }
        for &(_, y) in &relations {
            if let Some(&(_, z)) = relations.iter().find(|(a, _)| *a == y) {
                return Err(Error::NotOneDimensional(format!("chain through {} to {}", nodes[y], nodes[z])));
            }
        }
        Ok(PosetDiagram { nodes, relations })
    }

    pub fn discrete(nodes: Vec<String>) -> Self {
        PosetDiagram { nodes, relations: vec![] }
    }

    /// Node 0 below every other node.
    pub fn star(center: String, leaves: Vec<String>) -> Self {
        let mut nodes = vec![center];
        nodes.extend(leaves);
        let relations = (1..nodes.len()).map(|y| (0, y)).collect();
        PosetDiagram { nodes, relations }
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn relations(&self) -> &[(usize, usize)] {
        &self.relations
    }

    pub fn is_discrete(&self) -> bool {
        self.relations.is_empty()
    }

    /// Full subposet on `keep` (node indices, ascending).
    pub fn induced(&self, keep: &[usize]) -> PosetDiagram {
        let pos = |x: usize| keep.iter().position(|&k| k == x);
        let nodes = keep.iter().map(|&k| self.nodes[k].clone()).collect();
        let relations =
            self.relations.iter().filter_map(|&(x, y)| Some((pos(x)?, pos(y)?))).collect();
        PosetDiagram { nodes, relations }
    }

    /// Nonempty, connected, and `#nodes - #edges = 1`, i.e. a tree.
    pub fn simply_connected(&self) -> bool {
        let n = self.nodes.len();
        if n == 0 || n != self.relations.len() + 1 {
            return false;
        }
        let mut uf = UnionFind::<usize>::new(n);
        for &(x, y) in &self.relations {
            if !uf.union(x, y) {
                return false;
            }
        }
        true
    }

    /// Empty or a disjoint union of points.
    pub fn is_points(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn describe(&self) -> String {
        let rel: Vec<String> =
            self.relations.iter().map(|&(x, y)| format!("{}<{}", self.nodes[x], self.nodes[y])).collect();
        format!("{{{}}} [{}]", self.nodes.join(","), rel.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("n{i}")).collect()
    }

    /// Independent oracle: depth-first search for connectivity and cycles.
    fn dfs_tree(n: usize, edges: &[(usize, usize)]) -> bool {
        if n == 0 {
            return false;
        }
        let mut adj = vec![vec![]; n];
        for (i, &(x, y)) in edges.iter().enumerate() {
            adj[x].push((y, i));
            adj[y].push((x, i));
        }
        let mut seen = vec![false; n];
        let mut stack = vec![(0usize, usize::MAX)];
        let mut cycle = false;
        while let Some((v, via)) = stack.pop() {
            if seen[v] {
                cycle = true;
                continue;
            }
            seen[v] = true;
            for &(w, e) in &adj[v] {
                if e != via {
                    stack.push((w, e));
                }
            }
        }
        !cycle && seen.iter().all(|&s| s)
    }

    #[test]
    fn rejects_bad_posets() {
        assert!(PosetDiagram::new(names(2), vec![(0, 0)]).is_err());
        assert!(PosetDiagram::new(names(2), vec![(0, 1), (1, 0)]).is_err());
        assert!(PosetDiagram::new(names(3), vec![(0, 1), (1, 2)]).is_err());
        assert!(PosetDiagram::new(names(3), vec![(0, 1), (0, 2)]).is_ok());
    }

    #[test]
    fn star_and_points() {
        let s = PosetDiagram::star("1".into(), names(3));
        assert!(s.simply_connected());
        assert!(s.induced(&[0, 2]).simply_connected());
        assert!(!s.induced(&[1, 2]).simply_connected());
        assert!(s.induced(&[1, 2]).is_points());
        assert!(!PosetDiagram::discrete(vec![]).simply_connected());
        assert!(PosetDiagram::discrete(names(1)).simply_connected());
    }

    proptest! {
        #[test]
        fn union_find_agrees_with_dfs(n in 1usize..8, raw in proptest::collection::vec((0usize..8, 0usize..8), 0..10)) {
            // bipartite between a lower half and an upper half keeps it one-dimensional
            let half = n.div_ceil(2);
            let mut edges: Vec<(usize, usize)> = raw
                .into_iter()
                .map(|(a, b)| (a % half, half + b % (n - half).max(1)))
                .filter(|&(_, b)| b < n)
                .collect();
            edges.sort_unstable();
            edges.dedup();
            let p = PosetDiagram::new(names(n), edges.clone()).unwrap();
            prop_assert_eq!(p.simply_connected(), dfs_tree(n, &edges));
        }
    }
}
