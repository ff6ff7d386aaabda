//! `K4`-minor-free recognition and series/parallel decomposition.
//!
//! Recognition repeatedly deletes vertices of degree at most one and smooths
//! vertices of degree two (replacing `a - x - b` by the edge `ab`, merging it
//! into an existing `ab`). A graph has no `K4` minor exactly when this empties
//! it; otherwise every remaining vertex has degree at least three and the
//! remainder, a minor of the input, is returned as the certificate.
//!
//! Decomposition splits at the smallest cut vertex when there is one
//! (series), and otherwise at the two neighbours of the smallest vertex of
//! degree two (parallel). For a 2-connected graph on at least four vertices
//! both parallel parts then have at least three vertices.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::bits::{self, VertexMask};
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};

/// Remaining minor when series-parallel reduction gets stuck.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StuckMinor {
    pub vertices: Vec<usize>,
    pub edges: Vec<Edge>,
}

impl From<StuckMinor> for Error {
    fn from(s: StuckMinor) -> Self {
        Error::K4Minor { vertices: s.vertices, edges: s.edges }
    }
}

/// Runs the reduction; `None` means the graph reduced completely.
pub fn reduce(g: &Graph) -> Option<StuckMinor> {
    let n = g.vertex_count();
    let mut adj: Vec<VertexMask> = (0..n).map(|v| g.neighbors(v)).collect();
    let mut alive = g.vertex_mask();
    loop {
        let pick = bits::iter(alive).find(|&x| adj[x].count_ones() <= 2);
        let Some(x) = pick else { break };
        let nbrs = bits::to_vec(adj[x]);
        for &y in &nbrs {
            adj[y] &= !bits::bit(x);
        }
        if let [a, b] = nbrs[..] {
            adj[a] |= bits::bit(b);
            adj[b] |= bits::bit(a);
        }
        adj[x] = 0;
        alive &= !bits::bit(x);
    }
    if alive == 0 {
        return None;
    }
    let vertices = bits::to_vec(alive);
    let edges = vertices
        .iter()
        .flat_map(|&a| bits::iter(adj[a]).filter(move |&b| b > a).map(move |b| (a, b)))
        .collect();
    Some(StuckMinor { vertices, edges })
}

pub fn is_k4_minor_free(g: &Graph) -> bool {
    reduce(g).is_none()
}

/// Series/parallel composition tree in the labels of the decomposed graph.
///
/// A `Series` node's children share exactly `shared`; a `Parallel` node's
/// children share exactly `{u, v}`, and `direct_edge` records whether `uv`
/// is an edge of the composed graph (held by one of the children).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SpTree {
    Leaf {
        edge: [usize; 2],
    },
    Series {
        shared: usize,
        left: Box<SpTree>,
        right: Box<SpTree>,
    },
    Parallel {
        u: usize,
        v: usize,
        direct_edge: bool,
        left: Box<SpTree>,
        right: Box<SpTree>,
    },
}

impl SpTree {
    pub fn vertices(&self) -> VertexMask {
        match self {
            SpTree::Leaf { edge } => bits::bit(edge[0]) | bits::bit(edge[1]),
            SpTree::Series { left, right, .. } | SpTree::Parallel { left, right, .. } => {
                left.vertices() | right.vertices()
            }
        }
    }

    pub fn edges(&self) -> BTreeSet<Edge> {
        match self {
            SpTree::Leaf { edge } => BTreeSet::from([(edge[0].min(edge[1]), edge[0].max(edge[1]))]),
            SpTree::Series { left, right, .. } | SpTree::Parallel { left, right, .. } => {
                let mut e = left.edges();
                e.extend(right.edges());
                e
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            SpTree::Leaf { .. } => 1,
            SpTree::Series { left, right, .. } | SpTree::Parallel { left, right, .. } => {
                left.leaf_count() + right.leaf_count()
            }
        }
    }

    /// Checks the node invariants throughout the tree.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidGluing(msg));
        match self {
            SpTree::Leaf { edge } => {
                if edge[0] == edge[1] {
                    return bad(format!("leaf loop at {}", edge[0]));
                }
            }
            SpTree::Series { shared, left, right } => {
                left.validate()?;
                right.validate()?;
                if left.vertices() & right.vertices() != bits::bit(*shared) {
                    return bad(format!("series children must share exactly vertex {shared}"));
                }
                if !left.edges().is_disjoint(&right.edges()) {
                    return bad("series children share an edge".into());
                }
            }
            SpTree::Parallel { u, v, direct_edge, left, right } => {
                left.validate()?;
                right.validate()?;
                if left.vertices() & right.vertices() != bits::bit(*u) | bits::bit(*v) || u == v {
                    return bad(format!("parallel children must share exactly {{{u}, {v}}}"));
                }
                let (le, re) = (left.edges(), right.edges());
                if !le.is_disjoint(&re) {
                    return bad("parallel children share an edge".into());
                }
                let uv = (*u.min(v), *u.max(v));
                if *direct_edge != (le.contains(&uv) || re.contains(&uv)) {
                    return bad(format!("direct edge flag wrong at {{{u}, {v}}}"));
                }
            }
        }
        Ok(())
    }

    /// The graph on `0..n` whose edges are the leaves.
    pub fn compose(&self, n: usize) -> Result<Graph> {
        Graph::new(n, self.edges())
    }
}

/// The top-level split of a connected graph with at least one edge, in the
/// graph's own labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootSplit {
    Edge(Edge),
    Series {
        left: VertexMask,
        right: VertexMask,
        shared: usize,
    },
    Parallel {
        left: VertexMask,
        right: VertexMask,
        u: usize,
        v: usize,
        /// The vertex of degree two the split was taken at; `left` is `{u, middle, v}`.
        middle: usize,
        direct_edge: bool,
    },
}

pub fn split_root(g: &Graph) -> Result<RootSplit> {
    if g.edge_count() == 0 {
        return Err(Error::NoEdges);
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if g.vertex_count() == 2 {
        return Ok(RootSplit::Edge(g.edges()[0]));
    }
    let all = g.vertex_mask();
    if let Some(w) = g.cut_vertex() {
        let comps = g.components(all & !bits::bit(w));
        let left = comps[0] | bits::bit(w);
        let right = (all & !comps[0]) | bits::bit(w);
        return Ok(RootSplit::Series { left, right, shared: w });
    }
    let Some(x) = (0..g.vertex_count()).find(|&x| g.degree(x) == 2) else {
        return Err(reduce(g).map(Error::from).unwrap_or(Error::InvalidGluing(
            "2-connected graph without a vertex of degree two".into(),
        )));
    };
    let nb = bits::to_vec(g.neighbors(x));
    let (u, v) = (nb[0], nb[1]);
    Ok(RootSplit::Parallel {
        left: bits::bit(u) | bits::bit(x) | bits::bit(v),
        right: all & !bits::bit(x),
        u,
        v,
        middle: x,
        direct_edge: g.has_edge(u, v),
    })
}

/// Series/parallel decomposition of a connected `K4`-minor-free graph.
pub fn sp_decompose(g: &Graph) -> Result<SpTree> {
    if g.edge_count() == 0 {
        return Err(Error::NoEdges);
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if let Some(stuck) = reduce(g) {
        return Err(stuck.into());
    }
    let labels: Vec<usize> = (0..g.vertex_count()).collect();
    decompose(g, &labels)
}

fn decompose(g: &Graph, labels: &[usize]) -> Result<SpTree> {
    let relabel = |local: &[usize]| -> Vec<usize> { local.iter().map(|&i| labels[i]).collect() };
    Ok(match split_root(g)? {
        RootSplit::Edge((a, b)) => SpTree::Leaf { edge: [labels[a], labels[b]] },
        RootSplit::Series { left, right, shared } => {
            let (lg, ll) = g.induced(left);
            let (rg, rl) = g.induced(right);
            SpTree::Series {
                shared: labels[shared],
                left: Box::new(decompose(&lg, &relabel(&ll))?),
                right: Box::new(decompose(&rg, &relabel(&rl))?),
            }
        }
        RootSplit::Parallel { left, right, u, v, middle, direct_edge } => {
            let path = SpTree::Series {
                shared: labels[middle],
                left: Box::new(SpTree::Leaf { edge: sorted(labels[u], labels[middle]) }),
                right: Box::new(SpTree::Leaf { edge: sorted(labels[middle], labels[v]) }),
            };
            debug_assert_eq!(left.count_ones(), 3);
            let (rg, rl) = g.induced(right);
            SpTree::Parallel {
                u: labels[u],
                v: labels[v],
                direct_edge,
                left: Box::new(path),
                right: Box::new(decompose(&rg, &relabel(&rl))?),
            }
        }
    })
}

fn sorted(a: usize, b: usize) -> [usize; 2] {
    [a.min(b), a.max(b)]
}
