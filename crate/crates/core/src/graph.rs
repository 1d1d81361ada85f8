//! Finite simple connected graphs with all-pairs hop distances.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::set::VertexSet;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("graph has no vertices")]
    Empty,
    #[error("self-loop on vertex `{0}`")]
    SelfLoop(String),
    #[error("duplicate edge `{0}`-`{1}`")]
    DuplicateEdge(String, String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("edge endpoint `{0}` is not a listed vertex")]
    UnknownVertex(String),
    #[error("graph is disconnected: `{0}` is unreachable from `{1}`")]
    Disconnected(String, String),
}

/// The arena: a connected, loopless, simple undirected graph.
///
/// Vertices are addressed by their index in [`Graph::names`]. Distances are
/// computed once by breadth-first search at construction time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    names: Vec<String>,
    index: BTreeMap<String, usize>,
    adj: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    closed: Vec<VertexSet>,
    dist: Vec<u32>,
    diameter: u32,
}

impl Graph {
    /// Builds a graph from an edge list; vertex order is first appearance.
    pub fn from_edges<S: AsRef<str>>(edges: &[(S, S)]) -> Result<Graph, GraphError> {
        let mut names: Vec<String> = Vec::new();
        let mut seen = BTreeSet::new();
        for (u, v) in edges {
            for name in [u.as_ref(), v.as_ref()] {
                if seen.insert(name.to_string()) {
                    names.push(name.to_string());
                }
            }
        }
        Graph::new(names, edges)
    }

    /// Builds a graph from an explicit vertex list and an edge list.
    ///
    /// The vertex list fixes the index order and allows the one-vertex arena.
    pub fn new<S: AsRef<str>>(vertices: Vec<String>, edges: &[(S, S)]) -> Result<Graph, GraphError> {
        let mut index = BTreeMap::new();
        for (i, name) in vertices.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertex(name.clone()));
            }
        }
        let lookup = |name: &str| {
            index.get(name).copied().ok_or_else(|| GraphError::UnknownVertex(name.to_string()))
        };
        let mut indexed = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            indexed.push((lookup(u.as_ref())?, lookup(v.as_ref())?));
        }
        Graph::from_indexed(vertices, indexed)
    }

    pub(crate) fn from_indexed(names: Vec<String>, edges: Vec<(usize, usize)>) -> Result<Graph, GraphError> {
        let n = names.len();
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut adj = vec![Vec::new(); n];
        let mut seen = BTreeSet::new();
        for &(u, v) in &edges {
            if u == v {
                return Err(GraphError::SelfLoop(names[u].clone()));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(GraphError::DuplicateEdge(names[u].clone(), names[v].clone()));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }

        let mut dist = vec![u32::MAX; n * n];
        for s in 0..n {
            let row = &mut dist[s * n..(s + 1) * n];
            row[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for &y in &adj[x] {
                    if row[y] == u32::MAX {
                        row[y] = row[x] + 1;
                        queue.push_back(y);
                    }
                }
            }
            if let Some(far) = row.iter().position(|&d| d == u32::MAX) {
                return Err(GraphError::Disconnected(names[far].clone(), names[s].clone()));
            }
        }
        let diameter = dist.iter().copied().max().unwrap_or(0);

        let closed = (0..n)
            .map(|v| {
                let mut set = VertexSet::singleton(n, v);
                for &w in &adj[v] {
                    set.insert(w);
                }
                set
            })
            .collect();

        let index = names.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Ok(Graph { names, index, adj, edges, closed, dist, diameter })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn vertex(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    /// `v` together with its neighbours.
    pub fn closed_neighborhood(&self, v: usize) -> &VertexSet {
        &self.closed[v]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn are_adjacent(&self, u: usize, v: usize) -> bool {
        self.dist(u, v) == 1
    }

    #[inline]
    pub fn dist(&self, u: usize, v: usize) -> u32 {
        self.dist[u * self.names.len() + v]
    }

    pub fn diameter(&self) -> u32 {
        self.diameter
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.len())
    }

    pub fn empty_set(&self) -> VertexSet {
        VertexSet::empty(self.len())
    }

    /// Sorted vertex names joined by commas.
    pub fn canonical_string(&self, set: &VertexSet) -> String {
        let mut names: Vec<&str> = set.iter().map(|v| self.name(v)).collect();
        names.sort_unstable();
        names.join(",")
    }

    pub fn set_from_names<S: AsRef<str>>(&self, names: &[S]) -> Result<VertexSet, GraphError> {
        let mut set = self.empty_set();
        for name in names {
            let v = self.vertex(name.as_ref()).ok_or_else(|| GraphError::UnknownVertex(name.as_ref().to_string()))?;
            set.insert(v);
        }
        Ok(set)
    }
}
