//! Subdivided graphs `G^{1/m}` and thread arithmetic.
//!
//! Every edge `{u, v}` of the base graph becomes a thread of length `m`. A
//! thread is oriented from its lexicographically smaller endpoint name, and
//! interior vertices are named `low~high:k` where `k` is the offset from `low`.
//! Branch vertices keep the base vertex name.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::graph::{Graph, GraphError};
use crate::set::VertexSet;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SubdivisionError {
    #[error("subdivision parameter must be at least 1, got {0}")]
    ZeroParameter(u32),
    #[error("residue classes need interior vertices (m >= 2), got m = {0}")]
    NoInterior(u32),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A thread replacing one base edge; `low` has the smaller name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Thread {
    pub low: usize,
    pub high: usize,
    /// Interior vertices ordered by offset 1..m-1 from `low`.
    pub interior: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum VertexKind {
    Branch(usize),
    Inner { thread: usize, offset: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexClass {
    Branch,
    /// Equidistant from both thread endpoints (even `m`).
    Midpoint,
    /// Distance `(m-1)/2` to the nearer endpoint (odd `m`).
    NearMidpoint,
    InnerOther,
}

/// What a branch-vertex probe reveals about the robber's offset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResidueClass {
    AtBranch,
    AtMidpointZone,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubdividedGraph {
    base: Graph,
    m: u32,
    graph: Graph,
    kinds: Vec<VertexKind>,
    threads: Vec<Thread>,
}

impl SubdividedGraph {
    pub fn new(base: &Graph, m: u32) -> Result<SubdividedGraph, SubdivisionError> {
        if m == 0 {
            return Err(SubdivisionError::ZeroParameter(m));
        }
        let n = base.len();
        let mut names: Vec<String> = base.names().to_vec();
        let mut kinds: Vec<VertexKind> = (0..n).map(VertexKind::Branch).collect();
        let mut edges = Vec::new();
        let mut threads = Vec::with_capacity(base.edges().len());

        for (t, &(u, v)) in base.edges().iter().enumerate() {
            let (low, high) = if base.name(u) <= base.name(v) { (u, v) } else { (v, u) };
            let mut prev = low;
            let mut interior = Vec::new();
            for k in 1..m {
                let id = names.len();
                names.push(format!("{}~{}:{}", base.name(low), base.name(high), k));
                kinds.push(VertexKind::Inner { thread: t, offset: k });
                edges.push((prev, id));
                interior.push(id);
                prev = id;
            }
            edges.push((prev, high));
            threads.push(Thread { low, high, interior });
        }

        // Distances come from a fresh BFS over the constructed graph.
        let graph = Graph::from_indexed(names, edges)?;
        Ok(SubdividedGraph { base: base.clone(), m, graph, kinds, threads })
    }

    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// The subdivided arena itself.
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn kind(&self, x: usize) -> VertexKind {
        self.kinds[x]
    }

    pub fn threads(&self) -> &[Thread] {
        &self.threads
    }

    /// `v^{1/m}`: branch vertices share indices with the base graph.
    pub fn branch(&self, base_vertex: usize) -> usize {
        debug_assert!(base_vertex < self.base.len());
        base_vertex
    }

    /// `b^m` for a branch vertex.
    pub fn base_of(&self, x: usize) -> Option<usize> {
        match self.kinds[x] {
            VertexKind::Branch(v) => Some(v),
            VertexKind::Inner { .. } => None,
        }
    }

    pub fn is_branch(&self, x: usize) -> bool {
        matches!(self.kinds[x], VertexKind::Branch(_))
    }

    pub fn branch_set(&self) -> VertexSet {
        VertexSet::from_iter_in(self.graph.len(), 0..self.base.len())
    }

    /// Interior vertex of thread `{a, b}` at distance `offset` from `a`.
    pub fn vertex_on(&self, a: usize, b: usize, offset: u32) -> Option<usize> {
        if offset == 0 {
            return Some(a);
        }
        if offset == self.m {
            return Some(b);
        }
        if offset > self.m {
            return None;
        }
        let t = self.threads.iter().find(|t| (t.low, t.high) == (a, b) || (t.low, t.high) == (b, a))?;
        let k = if t.low == a { offset } else { self.m - offset };
        Some(t.interior[k as usize - 1])
    }

    pub fn classify(&self, x: usize) -> VertexClass {
        match self.kinds[x] {
            VertexKind::Branch(_) => VertexClass::Branch,
            VertexKind::Inner { offset, .. } => {
                let near = offset.min(self.m - offset);
                if 2 * offset == self.m {
                    VertexClass::Midpoint
                } else if self.m % 2 == 1 && near == (self.m - 1) / 2 {
                    VertexClass::NearMidpoint
                } else {
                    VertexClass::InnerOther
                }
            }
        }
    }

    /// Nearest branch vertices of `x`, ascending by index.
    pub fn vicinity(&self, x: usize) -> Vec<usize> {
        match self.kinds[x] {
            VertexKind::Branch(_) => alloc::vec![x],
            VertexKind::Inner { thread, offset } => {
                let t = &self.threads[thread];
                let (dl, dh) = (offset, self.m - offset);
                let mut out = match dl.cmp(&dh) {
                    core::cmp::Ordering::Less => alloc::vec![t.low],
                    core::cmp::Ordering::Greater => alloc::vec![t.high],
                    core::cmp::Ordering::Equal => alloc::vec![t.low, t.high],
                };
                out.sort_unstable();
                out
            }
        }
    }

    /// Base-graph endpoints of the thread containing `x`.
    pub fn corr_end(&self, x: usize) -> Vec<usize> {
        match self.kinds[x] {
            VertexKind::Branch(v) => alloc::vec![v],
            VertexKind::Inner { thread, .. } => {
                let t = &self.threads[thread];
                let mut out = alloc::vec![t.low, t.high];
                out.sort_unstable();
                out
            }
        }
    }

    /// Thread endpoints and offsets of `x`: `(a, b, dist to a, dist to b)`.
    ///
    /// A branch vertex reports itself as both endpoints at offset zero.
    pub fn thread_position(&self, x: usize) -> (usize, usize, u32, u32) {
        match self.kinds[x] {
            VertexKind::Branch(v) => (v, v, 0, 0),
            VertexKind::Inner { thread, offset } => {
                let t = &self.threads[thread];
                (t.low, t.high, offset, self.m - offset)
            }
        }
    }
}

/// Classifies a probe distance measured from a branch vertex.
pub fn residue_class(d: u32, m: u32) -> Result<ResidueClass, SubdivisionError> {
    if m <= 1 {
        return Err(SubdivisionError::NoInterior(m));
    }
    let r = d % m;
    let zone = if m.is_multiple_of(2) { r == m / 2 } else { r == m / 2 || r == m / 2 + 1 };
    Ok(if r == 0 {
        ResidueClass::AtBranch
    } else if zone {
        ResidueClass::AtMidpointZone
    } else {
        ResidueClass::Other
    })
}
