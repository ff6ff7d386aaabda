//! Cut monomials, the monomial map into edge variables, heights and binomials.
//!
//! A cut monomial `q_{A1|B1} ... q_{Ak|Bk}` is a sorted multiset of cuts. Its
//! image records, for every edge `ij`, how many of the cuts separate `i` from
//! `j` (the `s_ij` exponent) and how many keep them together (`t_ij`).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cut::Cut;
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
pub struct CutMonomial(Vec<Cut>);

impl CutMonomial {
    pub fn new(mut cuts: Vec<Cut>) -> Self {
        cuts.sort_unstable();
        CutMonomial(cuts)
    }

    pub fn one() -> Self {
        CutMonomial(Vec::new())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn cuts(&self) -> &[Cut] {
        &self.0
    }

    pub fn into_cuts(self) -> Vec<Cut> {
        self.0
    }

    pub fn fits(&self, n: usize) -> bool {
        self.0.iter().all(|c| c.fits(n))
    }

    pub fn check_fits(&self, g: &Graph) -> Result<()> {
        let n = g.vertex_count();
        match self.0.iter().find(|c| !c.fits(n)) {
            None => Ok(()),
            Some(c) => Err(Error::VertexOutOfRange {
                vertex: 63 - c.side().leading_zeros() as usize,
                n,
            }),
        }
    }

    pub fn mul(&self, other: &CutMonomial) -> CutMonomial {
        let mut cuts = Vec::with_capacity(self.degree() + other.degree());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            if j == other.0.len() || (i < self.0.len() && self.0[i] <= other.0[j]) {
                cuts.push(self.0[i]);
                i += 1;
            } else {
                cuts.push(other.0[j]);
                j += 1;
            }
        }
        CutMonomial(cuts)
    }

    /// `self / other` when `other` divides `self` as a multiset.
    pub fn div(&self, other: &CutMonomial) -> Option<CutMonomial> {
        let mut rest = Vec::with_capacity(self.degree().saturating_sub(other.degree()));
        let mut j = 0;
        for &c in &self.0 {
            if j < other.0.len() && other.0[j] == c {
                j += 1;
            } else if j < other.0.len() && other.0[j] < c {
                return None;
            } else {
                rest.push(c);
            }
        }
        (j == other.0.len()).then_some(CutMonomial(rest))
    }

    pub fn divides(&self, other: &CutMonomial) -> bool {
        other.div(self).is_some()
    }
}

impl From<Vec<Cut>> for CutMonomial {
    fn from(cuts: Vec<Cut>) -> Self {
        CutMonomial::new(cuts)
    }
}

impl<'de> Deserialize<'de> for CutMonomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(CutMonomial::new(Vec::<Cut>::deserialize(d)?))
    }
}

impl fmt::Debug for CutMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{:?}", self.0)
    }
}

/// Per-edge `(s, t)` exponents of `phi_G(m)`, in the graph's edge order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeExponentVector {
    edges: Vec<Edge>,
    s: Vec<u32>,
    degree: u32,
}

#[derive(Serialize, Deserialize)]
struct EdgeExponentEntry {
    edge: [usize; 2],
    s: u32,
    t: u32,
}

impl EdgeExponentVector {
    pub fn zero(g: &Graph, degree: usize) -> Self {
        EdgeExponentVector {
            edges: g.edges().to_vec(),
            s: vec![0; g.edge_count()],
            degree: degree as u32,
        }
    }

    /// Builds a vector from explicit `(edge, s, t)` entries in the order of `g`'s edges.
    pub fn from_entries(g: &Graph, entries: &[(Edge, u32, u32)]) -> Result<Self> {
        let degree = entries.first().map_or(0, |&(_, s, t)| s + t);
        let edges: Vec<Edge> = entries.iter().map(|&(e, _, _)| (e.0.min(e.1), e.0.max(e.1))).collect();
        if edges != g.edges() || entries.iter().any(|&(_, s, t)| s + t != degree) {
            return Err(Error::InconsistentTarget(degree as usize));
        }
        Ok(EdgeExponentVector {
            edges,
            s: entries.iter().map(|&(_, s, _)| s).collect(),
            degree,
        })
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn degree(&self) -> usize {
        self.degree as usize
    }

    pub fn s(&self) -> &[u32] {
        &self.s
    }

    pub fn t(&self) -> Vec<u32> {
        self.s.iter().map(|&s| self.degree - s).collect()
    }

    pub fn s_of(&self, u: usize, v: usize) -> Option<u32> {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).ok().map(|i| self.s[i])
    }

    /// Componentwise sum; both vectors must come from the same graph.
    pub fn add(&self, other: &EdgeExponentVector) -> EdgeExponentVector {
        assert_eq!(self.edges, other.edges, "exponent vectors over different graphs");
        EdgeExponentVector {
            edges: self.edges.clone(),
            s: self.s.iter().zip(&other.s).map(|(a, b)| a + b).collect(),
            degree: self.degree + other.degree,
        }
    }

    /// Checks the vector describes monomials of degree `degree` on `g`.
    pub fn check_target(&self, g: &Graph, degree: usize) -> Result<()> {
        if self.edges != g.edges() || self.degree as usize != degree || self.s.iter().any(|&s| s > self.degree) {
            return Err(Error::InconsistentTarget(degree));
        }
        Ok(())
    }
}

impl Serialize for EdgeExponentVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries: Vec<EdgeExponentEntry> = self
            .edges
            .iter()
            .zip(&self.s)
            .map(|(&(a, b), &sv)| EdgeExponentEntry { edge: [a, b], s: sv, t: self.degree - sv })
            .collect();
        entries.serialize(s)
    }
}

impl<'de> Deserialize<'de> for EdgeExponentVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<EdgeExponentEntry>::deserialize(d)?;
        let degree = entries.first().map_or(0, |e| e.s + e.t);
        if entries.iter().any(|e| e.s + e.t != degree) {
            return Err(serde::de::Error::custom("s + t must be equal on every edge"));
        }
        let mut edges = Vec::new();
        let mut s = Vec::new();
        for e in entries {
            edges.push((e.edge[0].min(e.edge[1]), e.edge[0].max(e.edge[1])));
            s.push(e.s);
        }
        Ok(EdgeExponentVector { edges, s, degree })
    }
}

/// `phi_G(m)`: for each edge, the number of cuts of `m` separating its endpoints.
pub fn phi_image(g: &Graph, m: &CutMonomial) -> EdgeExponentVector {
    let s = g
        .edges()
        .iter()
        .map(|&(a, b)| m.cuts().iter().filter(|c| c.separates(a, b)).count() as u32)
        .collect();
    EdgeExponentVector {
        edges: g.edges().to_vec(),
        s,
        degree: m.degree() as u32,
    }
}

/// `h_{u,v}(m)`: number of cuts in `m` with `u` and `v` on different sides.
pub fn height(m: &CutMonomial, u: usize, v: usize) -> usize {
    height_of(m.cuts(), u, v)
}

pub(crate) fn height_of(cuts: &[Cut], u: usize, v: usize) -> usize {
    cuts.iter().filter(|c| c.separates(u, v)).count()
}

/// Cuts of `m` with those separating `u` and `v` first, each group in code order.
pub fn sort_by_height(m: &CutMonomial, u: usize, v: usize) -> Vec<Cut> {
    let mut cuts = m.cuts().to_vec();
    cuts.sort_by_key(|c| (!c.separates(u, v), *c));
    cuts
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn reverse(self) -> Direction {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

/// `lhs - rhs` with equal degrees, distinct sides and `lhs < rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Binomial {
    lhs: CutMonomial,
    rhs: CutMonomial,
}

#[derive(Deserialize)]
struct BinomialFile {
    lhs: CutMonomial,
    rhs: CutMonomial,
}

impl Binomial {
    pub fn new(a: CutMonomial, b: CutMonomial) -> Result<Binomial> {
        if a.degree() != b.degree() {
            return Err(Error::DegreeMismatch(a.degree(), b.degree()));
        }
        if a.degree() < 2 {
            return Err(Error::DegreeTooSmall(a.degree()));
        }
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(Binomial { lhs: a, rhs: b }),
            std::cmp::Ordering::Greater => Ok(Binomial { lhs: b, rhs: a }),
            std::cmp::Ordering::Equal => Err(Error::DegenerateBinomial),
        }
    }

    pub fn lhs(&self) -> &CutMonomial {
        &self.lhs
    }

    pub fn rhs(&self) -> &CutMonomial {
        &self.rhs
    }

    pub fn degree(&self) -> usize {
        self.lhs.degree()
    }

    /// The side a move in `dir` consumes and the side it produces.
    pub fn sides(&self, dir: Direction) -> (&CutMonomial, &CutMonomial) {
        match dir {
            Direction::Forward => (&self.lhs, &self.rhs),
            Direction::Backward => (&self.rhs, &self.lhs),
        }
    }

    pub fn height_gap(&self, u: usize, v: usize) -> usize {
        height(&self.lhs, u, v).abs_diff(height(&self.rhs, u, v))
    }

    /// `factor * self`.
    pub fn times(&self, factor: &CutMonomial) -> Binomial {
        Binomial::new(self.lhs.mul(factor), self.rhs.mul(factor)).expect("multiple of a binomial")
    }

    pub fn fits(&self, n: usize) -> bool {
        self.lhs.fits(n) && self.rhs.fits(n)
    }
}

impl<'de> Deserialize<'de> for Binomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let f = BinomialFile::deserialize(d)?;
        Binomial::new(f.lhs, f.rhs).map_err(serde::de::Error::custom)
    }
}

/// `phi_G(lhs) == phi_G(rhs)`.
pub fn binomial_in_kernel(g: &Graph, b: &Binomial) -> bool {
    phi_image(g, &b.lhs) == phi_image(g, &b.rhs)
}

/// A set of kernel binomials for the cut ideal of `graph`, sorted and
/// deduplicated. `max_degree` is the largest binomial degree (0 when empty).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratingSet {
    graph: Graph,
    binomials: Vec<Binomial>,
    #[serde(rename = "max_degree_needed")]
    max_degree: usize,
}

#[derive(Deserialize)]
struct GeneratingSetFile {
    graph: Graph,
    binomials: Vec<Binomial>,
    #[serde(rename = "max_degree_needed")]
    _max_degree: Option<usize>,
}

impl GeneratingSet {
    /// Collects binomials without checking kernel membership.
    pub fn new(graph: Graph, binomials: impl IntoIterator<Item = Binomial>) -> Self {
        let mut binomials: Vec<Binomial> = binomials.into_iter().collect();
        binomials.sort_unstable();
        binomials.dedup();
        let max_degree = binomials.iter().map(Binomial::degree).max().unwrap_or(0);
        GeneratingSet { graph, binomials, max_degree }
    }

    /// Collects binomials, rejecting any outside the kernel of `phi_graph`.
    pub fn checked(graph: Graph, binomials: impl IntoIterator<Item = Binomial>) -> Result<Self> {
        let set = GeneratingSet::new(graph, binomials);
        set.check_kernel()?;
        Ok(set)
    }

    pub fn empty(graph: Graph) -> Self {
        GeneratingSet::new(graph, [])
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn binomials(&self) -> &[Binomial] {
        &self.binomials
    }

    pub fn len(&self) -> usize {
        self.binomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.binomials.is_empty()
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Number of binomials of each degree, ascending.
    pub fn degree_counts(&self) -> std::collections::BTreeMap<usize, usize> {
        let mut out = std::collections::BTreeMap::new();
        for b in &self.binomials {
            *out.entry(b.degree()).or_insert(0) += 1;
        }
        out
    }

    pub fn check_kernel(&self) -> Result<()> {
        let n = self.graph.vertex_count();
        for b in &self.binomials {
            if !b.fits(n) || !binomial_in_kernel(&self.graph, b) {
                return Err(Error::NotInKernel(format!("{:?} - {:?}", b.lhs, b.rhs)));
            }
        }
        Ok(())
    }

    pub fn union(&self, other: &GeneratingSet) -> GeneratingSet {
        assert_eq!(self.graph, other.graph, "union of sets over different graphs");
        GeneratingSet::new(
            self.graph.clone(),
            self.binomials.iter().chain(&other.binomials).cloned(),
        )
    }

    /// The same binomials regarded as elements of the ideal of `graph`.
    pub fn with_graph(&self, graph: Graph) -> GeneratingSet {
        GeneratingSet::new(graph, self.binomials.clone())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("generating set serializes")
    }

    pub fn from_json(text: &str) -> Result<GeneratingSet> {
        let f: GeneratingSetFile = serde_json::from_str(text)?;
        let n = f.graph.vertex_count();
        if let Some(b) = f.binomials.iter().find(|b| !b.fits(n)) {
            return Err(Error::Parse(format!("binomial {b:?} uses vertices outside the graph")));
        }
        Ok(GeneratingSet::new(f.graph, f.binomials))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn q(sides: &[&[usize]], n: usize) -> CutMonomial {
        // 1-based labels as printed in the cut table of the path 1-2-3-4
        CutMonomial::new(
            sides
                .iter()
                .map(|s| Cut::from_vertices(&s.iter().map(|v| v - 1).collect::<Vec<_>>(), n).unwrap())
                .collect(),
        )
    }

    #[test]
    fn phi_of_single_cut_matches_table_row() {
        let p4 = catalog::path(4);
        let img = phi_image(&p4, &q(&[&[1, 2]], 4));
        assert_eq!(img.s(), &[0, 1, 0]);
        assert_eq!(img.t(), vec![1, 0, 1]);
    }

    #[test]
    fn phi_of_empty_monomial_is_zero() {
        let g = catalog::cycle(5);
        assert_eq!(phi_image(&g, &CutMonomial::one()), EdgeExponentVector::zero(&g, 0));
    }

    #[test]
    fn phi_of_product_balances_every_edge() {
        let p4 = catalog::path(4);
        let img = phi_image(&p4, &q(&[&[1, 3, 4], &[1, 2, 3]], 4));
        assert_eq!(img.s(), &[1, 1, 1]);
        assert_eq!(img.t(), vec![1, 1, 1]);
    }

    #[test]
    fn height_examples() {
        // h_{1,4} in paper labels is h_{0,3} here
        assert_eq!(height(&q(&[&[1, 2, 3, 4]], 4), 0, 3), 0);
        assert_eq!(height(&q(&[&[1, 3], &[1, 4]], 4), 0, 3), 1);
    }

    #[test]
    fn height_is_s_exponent_after_adding_the_pair() {
        let p4 = catalog::path(4);
        let c4 = p4.add_edge(0, 3).unwrap();
        let m = q(&[&[1, 3], &[1, 4], &[1], &[1, 2, 3]], 4);
        assert_eq!(phi_image(&c4, &m).s_of(0, 3), Some(height(&m, 0, 3) as u32));
    }

    #[test]
    fn kernel_examples() {
        let p4 = catalog::path(4);
        let first = Binomial::new(q(&[&[1, 3, 4], &[1, 2, 3]], 4), q(&[&[1, 4], &[1, 2]], 4)).unwrap();
        assert!(binomial_in_kernel(&p4, &first));

        assert_eq!(
            Binomial::new(q(&[&[1], &[1, 2]], 4), q(&[&[1, 2], &[1]], 4)),
            Err(Error::DegenerateBinomial)
        );
        assert_eq!(
            Binomial::new(q(&[&[1, 2, 3, 4]], 4), q(&[&[1]], 4)),
            Err(Error::DegreeTooSmall(1))
        );
        assert_eq!(
            Binomial::new(q(&[&[1, 2, 3, 4], &[1]], 4), q(&[&[1]], 4)),
            Err(Error::DegreeMismatch(2, 1))
        );
        let bad = Binomial::new(q(&[&[1, 2, 3, 4], &[1, 2]], 4), q(&[&[1], &[1, 2]], 4)).unwrap();
        assert!(!binomial_in_kernel(&p4, &bad));
    }

    #[test]
    fn sort_by_height_puts_separating_cuts_first() {
        let m = q(&[&[1, 2], &[1, 3]], 4);
        let (c12, c13) = (m.cuts()[0], m.cuts()[1]);
        // only {1,3}|{2,4} separates 1 from 2
        assert_eq!(sort_by_height(&m, 0, 1), vec![c13, c12]);
        // both separate 1 from 4, so code order decides
        assert_eq!(sort_by_height(&m, 0, 3), vec![c12, c13]);
        let all_sep = q(&[&[1], &[1, 3], &[1, 2, 3]], 4);
        assert_eq!(sort_by_height(&all_sep, 0, 3), all_sep.cuts().to_vec());
        assert!(sort_by_height(&CutMonomial::one(), 0, 1).is_empty());
    }

    #[test]
    fn multiset_arithmetic() {
        let a = q(&[&[1], &[1, 2], &[1, 2]], 4);
        let b = q(&[&[1, 2]], 4);
        assert_eq!(a.div(&b).unwrap(), q(&[&[1], &[1, 2]], 4));
        assert_eq!(a.div(&b).unwrap().mul(&b), a);
        assert!(a.div(&q(&[&[1, 3]], 4)).is_none());
        assert!(q(&[&[1, 2], &[1, 2]], 4).divides(&a));
        assert!(!q(&[&[1], &[1]], 4).divides(&a));
    }

    #[test]
    fn generating_set_json_roundtrip() {
        let p4 = catalog::path(4);
        let b = Binomial::new(q(&[&[1, 3, 4], &[1, 2, 3]], 4), q(&[&[1, 4], &[1, 2]], 4)).unwrap();
        let set = GeneratingSet::checked(p4, [b.clone(), b]).unwrap();
        assert_eq!(set.len(), 1);
        let text = set.to_json();
        assert!(text.contains("\"max_degree_needed\":2"));
        assert_eq!(GeneratingSet::from_json(&text).unwrap(), set);
    }

    #[test]
    fn exponent_vector_json() {
        let p4 = catalog::path(4);
        let img = phi_image(&p4, &q(&[&[1, 2]], 4));
        let text = serde_json::to_string(&img).unwrap();
        assert_eq!(
            text,
            r#"[{"edge":[0,1],"s":0,"t":1},{"edge":[1,2],"s":1,"t":0},{"edge":[2,3],"s":0,"t":1}]"#
        );
        let back: EdgeExponentVector = serde_json::from_str(&text).unwrap();
        assert_eq!(back, img);
    }
}
