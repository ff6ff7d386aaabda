//! Quadratic generating sets for `K4`-minor-free graphs, built by recursion
//! over series and parallel splits.

use std::collections::HashMap;

use serde::Serialize;

use crate::algebra::GeneratingSet;
use crate::bits::{self, VertexMask};
use crate::error::{Error, Result};
use crate::fiber::DEFAULT_FIBER_CAP;
use crate::glue::{glue_nonadjacent, lift_edge_gluing, lift_series, GluingSpec, Separation};
use crate::graph::Graph;
use crate::oracle::{generates_up_to_degree, markov_basis_up_to_degree, DEFAULT_MAX_DEGREE};
use crate::sp::{reduce, split_root, RootSplit};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConstructConfig {
    /// Degree bound for the oracle check of base cases.
    pub verify_degree: usize,
    pub fiber_cap: u128,
}

impl Default for ConstructConfig {
    fn default() -> Self {
        ConstructConfig { verify_degree: DEFAULT_MAX_DEGREE, fiber_cap: DEFAULT_FIBER_CAP }
    }
}

/// Generating set of a connected graph on at most three vertices, taken from
/// the oracle and checked at `config.verify_degree`.
pub fn base_generators(g: &Graph, config: &ConstructConfig) -> Result<GeneratingSet> {
    if g.vertex_count() > 3 {
        return Err(Error::TooManyVertices { got: g.vertex_count(), max: 3 });
    }
    let set = markov_basis_up_to_degree(g, 2, config.fiber_cap)?;
    let check = generates_up_to_degree(g, &set, config.verify_degree, config.fiber_cap)?;
    if !check.generates {
        return Err(Error::InvalidGluing(format!("base case {g:?} needs more than quadrics")));
    }
    Ok(set)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    Base,
    Series,
    EdgeGluing,
    NonadjacentGluing,
}

/// One node of the recursion, in the labels of the input graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceNode {
    pub vertices: Vec<usize>,
    /// Whether this node is `G[S] + uv` rather than the induced subgraph.
    pub added_edge: Option<[usize; 2]>,
    pub rule: Rule,
    /// Left part, right part and shared vertices for gluing rules.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub split: Option<TraceSplit>,
    pub generators: usize,
    /// Set when the same subgraph was already built earlier in the trace.
    pub reused: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceSplit {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub shared: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadraticBasis {
    #[serde(flatten)]
    pub set: GeneratingSet,
    #[serde(rename = "construction_trace")]
    pub trace: Vec<TraceNode>,
}

impl QuadraticBasis {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("basis serializes")
    }
}

const F3_NOTE: &str = "third family: generator multiples up to degree 2M-2 whose height at (u, v) drops by exactly 2 on each part, \
     right-hand product compared with the left-hand product";

/// Quadratic generating set of a connected `K4`-minor-free graph.
pub fn quadratic_basis_sp(g: &Graph) -> Result<QuadraticBasis> {
    quadratic_basis_sp_with(g, &ConstructConfig::default())
}

pub fn quadratic_basis_sp_with(g: &Graph, config: &ConstructConfig) -> Result<QuadraticBasis> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if let Some(stuck) = reduce(g) {
        return Err(stuck.into());
    }
    let mut builder = Builder { config, memo: HashMap::new(), trace: Vec::new() };
    let labels: Vec<usize> = (0..g.vertex_count()).collect();
    let set = builder.build(g, &labels, None)?;
    Ok(QuadraticBasis { set, trace: builder.trace })
}

struct Builder<'c> {
    config: &'c ConstructConfig,
    memo: HashMap<Graph, GeneratingSet>,
    trace: Vec<TraceNode>,
}

impl Builder<'_> {
    /// `labels[i]` is the input-graph label of local vertex `i`.
    fn build(&mut self, g: &Graph, labels: &[usize], added_edge: Option<[usize; 2]>) -> Result<GeneratingSet> {
        let slot = self.trace.len();
        self.trace.push(TraceNode {
            vertices: labels.to_vec(),
            added_edge,
            rule: Rule::Base,
            split: None,
            generators: 0,
            reused: false,
            note: None,
        });
        if let Some(set) = self.memo.get(g) {
            let node = &mut self.trace[slot];
            node.rule = classify(g)?;
            node.generators = set.len();
            node.reused = true;
            return Ok(set.clone());
        }
        let global = |mask: VertexMask| -> Vec<usize> { bits::iter(mask).map(|i| labels[i]).collect() };

        let (rule, split, note, set) = if g.vertex_count() <= 3 {
            (Rule::Base, None, None, base_generators(g, self.config)?)
        } else {
            match split_root(g)? {
                RootSplit::Edge(_) => unreachable!("more than two vertices"),
                RootSplit::Series { left, right, shared } => {
                    let sep = Separation::new(g.clone(), left, right)?;
                    let gl = self.build(&sep.left_graph(), &global(left), None)?;
                    let gr = self.build(&sep.right_graph(), &global(right), None)?;
                    let split = TraceSplit { left: global(left), right: global(right), shared: vec![labels[shared]] };
                    (Rule::Series, Some(split), None, lift_series(&sep, &gl, &gr)?)
                }
                RootSplit::Parallel { left, right, u, v, direct_edge: true, .. } => {
                    let sep = Separation::new(g.clone(), left, right)?;
                    let gl = self.build(&sep.left_graph(), &global(left), None)?;
                    let gr = self.build(&sep.right_graph(), &global(right), None)?;
                    let split = TraceSplit { left: global(left), right: global(right), shared: vec![labels[u], labels[v]] };
                    (Rule::EdgeGluing, Some(split), None, lift_edge_gluing(&sep, &gl, &gr)?)
                }
                RootSplit::Parallel { left, right, u, v, direct_edge: false, .. } => {
                    let spec = GluingSpec::new(g.clone(), left, right, u, v)?;
                    let edge = Some([labels[u], labels[v]]);
                    let gl = self.build(&spec.left_graph(), &global(left), None)?;
                    let gr = self.build(&spec.right_graph(), &global(right), None)?;
                    let gl_uv = self.build(&spec.left_uv_graph(), &global(left), edge)?;
                    let gr_uv = self.build(&spec.right_uv_graph(), &global(right), edge)?;
                    let glued = glue_nonadjacent(&spec, &gl, &gr, &gl_uv, &gr_uv)?;
                    let split = TraceSplit { left: global(left), right: global(right), shared: vec![labels[u], labels[v]] };
                    let m = gl.max_degree().max(gr.max_degree());
                    let note = format!("{F3_NOTE}; M = {m}, bound {}", glued.mu_bound);
                    (Rule::NonadjacentGluing, Some(split), Some(note), glued.set)
                }
            }
        };
        self.memo.insert(g.clone(), set.clone());
        let node = &mut self.trace[slot];
        node.rule = rule;
        node.split = split;
        node.note = note;
        node.generators = set.len();
        Ok(set)
    }
}

fn classify(g: &Graph) -> Result<Rule> {
    if g.vertex_count() <= 3 {
        return Ok(Rule::Base);
    }
    Ok(match split_root(g)? {
        RootSplit::Edge(_) => Rule::Base,
        RootSplit::Series { .. } => Rule::Series,
        RootSplit::Parallel { direct_edge: true, .. } => Rule::EdgeGluing,
        RootSplit::Parallel { direct_edge: false, .. } => Rule::NonadjacentGluing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::oracle::is_slow_varying_everywhere;

    fn check(g: &Graph) -> QuadraticBasis {
        let q = quadratic_basis_sp(g).unwrap();
        assert!(q.set.max_degree() <= 2, "{g:?}");
        assert_eq!(q.set.graph(), g);
        q.set.check_kernel().unwrap();
        assert!(is_slow_varying_everywhere(&q.set));
        let c = generates_up_to_degree(g, &q.set, 4, DEFAULT_FIBER_CAP).unwrap();
        assert!(c.generates, "{g:?}: {:?}", c.witness);
        q
    }

    #[test]
    fn base_cases() {
        let cfg = ConstructConfig::default();
        assert!(base_generators(&catalog::path(2), &cfg).unwrap().is_empty());
        let p3 = catalog::path(3);
        assert_eq!(base_generators(&p3, &cfg).unwrap(), markov_basis_up_to_degree(&p3, 2, DEFAULT_FIBER_CAP).unwrap());
        let k3 = catalog::complete(3);
        assert_eq!(base_generators(&k3, &cfg).unwrap(), markov_basis_up_to_degree(&k3, 2, DEFAULT_FIBER_CAP).unwrap());
        assert!(matches!(base_generators(&catalog::path(4), &cfg), Err(Error::TooManyVertices { .. })));
    }

    #[test]
    fn small_named_graphs() {
        for g in [
            catalog::path(4),
            catalog::cycle(4),
            catalog::cycle(5),
            catalog::k4_minus_edge(),
            catalog::theta(&[2, 2, 2]),
            catalog::bowtie(),
        ] {
            check(&g);
        }
    }

    #[test]
    fn trace_names_rules() {
        let q = check(&catalog::cycle(4));
        assert_eq!(q.trace[0].rule, Rule::NonadjacentGluing);
        assert!(q.trace[0].note.is_some());
        assert!(q.trace.iter().any(|n| n.added_edge.is_some()));
        let q = check(&catalog::path(4));
        assert_eq!(q.trace[0].rule, Rule::Series);
        let q = check(&catalog::k4_minus_edge());
        assert_eq!(q.trace[0].rule, Rule::EdgeGluing);
        let json: serde_json::Value = serde_json::from_str(&q.to_json()).unwrap();
        assert!(json["construction_trace"].is_array());
        assert!(json["binomials"].is_array());
        // the JSON still reads back as a generating set
        assert_eq!(GeneratingSet::from_json(&q.to_json()).unwrap(), q.set);
    }

    #[test]
    fn rejects_k4_and_disconnected() {
        let err = quadratic_basis_sp(&catalog::complete(4)).unwrap_err();
        assert!(matches!(err, Error::K4Minor { .. }));
        assert!(err.to_string().starts_with("graph has a K4 minor"));
        let g = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(quadratic_basis_sp(&g).unwrap_err(), Error::Disconnected);
    }

    #[test]
    fn single_vertex_and_edge() {
        assert!(quadratic_basis_sp(&Graph::new(1, []).unwrap()).unwrap().set.is_empty());
        assert!(quadratic_basis_sp(&catalog::path(2)).unwrap().set.is_empty());
    }
}
