//! Simple undirected graphs on vertices `0..n`.
//!
//! Vertices carry no data; a graph is its vertex count plus a sorted edge
//! list. Induced subgraphs are relabelled in increasing order of the
//! original vertex ids, so a subgraph on `{1, 3, 4}` has local vertices
//! `0, 1, 2` standing for `1, 3, 4`.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::{self, VertexMask};
use crate::error::{Error, Result};

pub const MAX_VERTICES: usize = 64;

/// An undirected edge with `0 <= .0 < .1`.
pub type Edge = (usize, usize);

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adjacency: Vec<VertexMask>,
}

#[derive(Serialize, Deserialize)]
struct GraphFile {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoVertices);
        }
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices { got: n, max: MAX_VERTICES });
        }
        let mut adjacency = vec![0; n];
        let mut list = Vec::new();
        for (a, b) in edges {
            for v in [a, b] {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
            }
            if a == b {
                return Err(Error::Loop(a));
            }
            let (a, b) = (a.min(b), a.max(b));
            if adjacency[a] & bits::bit(b) != 0 {
                return Err(Error::DuplicateEdge(a, b));
            }
            adjacency[a] |= bits::bit(b);
            adjacency[b] |= bits::bit(a);
            list.push((a, b));
        }
        list.sort_unstable();
        Ok(Graph { n, edges: list, adjacency })
    }

    /// Like [`Graph::new`] but merges duplicate edges and drops loops.
    fn simplified(n: usize, edges: impl IntoIterator<Item = Edge>) -> Self {
        let mut adjacency = vec![0; n];
        for (a, b) in edges {
            if a != b {
                adjacency[a] |= bits::bit(b);
                adjacency[b] |= bits::bit(a);
            }
        }
        let edges = (0..n)
            .flat_map(|a| bits::iter(adjacency[a] >> a).map(move |d| (a, a + d)))
            .filter(|&(a, b)| a != b)
            .collect();
        Graph { n, edges, adjacency }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in ascending lexicographic order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_mask(&self) -> VertexMask {
        bits::full(self.n)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adjacency[u] & bits::bit(v) != 0
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).ok()
    }

    pub fn neighbors(&self, v: usize) -> VertexMask {
        self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].count_ones() as usize
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        } else {
            Ok(())
        }
    }

    /// `G + uv`.
    pub fn add_edge(&self, u: usize, v: usize) -> Result<Graph> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::SameVertex(u));
        }
        if self.has_edge(u, v) {
            return Err(Error::EdgeExists(u.min(v), u.max(v)));
        }
        Graph::new(self.n, self.edges.iter().copied().chain([(u, v)]))
    }

    /// Identifies the endpoints of `edge`, merging parallel edges. The merged
    /// vertex takes the smaller label; later vertices shift down by one.
    pub fn contract_edge(&self, edge: Edge) -> Result<Graph> {
        let (a, b) = (edge.0.min(edge.1), edge.0.max(edge.1));
        if !self.has_edge(a, b) {
            return Err(Error::EdgeMissing(a, b));
        }
        let relabel = |x: usize| {
            let x = if x == b { a } else { x };
            if x > b {
                x - 1
            } else {
                x
            }
        };
        Ok(Graph::simplified(
            self.n - 1,
            self.edges.iter().map(|&(x, y)| (relabel(x), relabel(y))),
        ))
    }

    pub fn delete_vertex(&self, v: usize) -> Result<Graph> {
        self.check_vertex(v)?;
        if self.n == 1 {
            return Err(Error::LastVertex);
        }
        Ok(self.induced(self.vertex_mask() & !bits::bit(v)).0)
    }

    /// Induced subgraph on `vertices`, relabelled in increasing order. Also
    /// returns the original label of each local vertex.
    pub fn induced(&self, vertices: VertexMask) -> (Graph, Vec<usize>) {
        let vertices = vertices & self.vertex_mask();
        let labels = bits::to_vec(vertices);
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in labels.iter().enumerate() {
            local[v] = i;
        }
        let edges: Vec<Edge> = self
            .edges
            .iter()
            .filter(|&&(a, b)| vertices & bits::bit(a) != 0 && vertices & bits::bit(b) != 0)
            .map(|&(a, b)| (local[a], local[b]))
            .collect();
        let g = Graph::new(labels.len().max(1), edges).expect("induced subgraph of a simple graph");
        (g, labels)
    }

    /// Vertices reachable from `start` without leaving `within`.
    pub fn reach(&self, start: usize, within: VertexMask) -> VertexMask {
        if within & bits::bit(start) == 0 {
            return 0;
        }
        let mut seen = bits::bit(start);
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for y in bits::iter(self.adjacency[x] & within & !seen) {
                seen |= bits::bit(y);
                queue.push_back(y);
            }
        }
        seen
    }

    pub fn is_connected(&self) -> bool {
        self.reach(0, self.vertex_mask()) == self.vertex_mask()
    }

    /// Connected components of the subgraph induced on `within`, ordered by
    /// their smallest vertex.
    pub fn components(&self, within: VertexMask) -> Vec<VertexMask> {
        let mut left = within & self.vertex_mask();
        let mut out = Vec::new();
        while let Some(v) = bits::lowest(left) {
            let c = self.reach(v, left);
            left &= !c;
            out.push(c);
        }
        out
    }

    /// Is there a `u`–`v` path inside `within`?
    pub fn connected_within(&self, u: usize, v: usize, within: VertexMask) -> bool {
        self.reach(u, within) & bits::bit(v) != 0
    }

    /// Smallest cut vertex, if any.
    pub fn cut_vertex(&self) -> Option<usize> {
        if self.n < 3 {
            return None;
        }
        let all = self.vertex_mask();
        (0..self.n).find(|&w| self.components(all & !bits::bit(w)).len() > 1)
    }

    pub fn parse(text: &str) -> Result<Graph> {
        let file: GraphFile = serde_json::from_str(text)?;
        Graph::new(file.n, file.edges.into_iter().map(|[a, b]| (a, b)))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph serializes")
    }
}

/// Parses the `{"n": .., "edges": [[u, v], ..]}` graph format.
pub fn parse_graph(text: &str) -> Result<Graph> {
    Graph::parse(text)
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphFile {
            n: self.n,
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let file = GraphFile::deserialize(d)?;
        Graph::new(file.n, file.edges.into_iter().map(|[a, b]| (a, b)))
            .map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges)
    }
}
