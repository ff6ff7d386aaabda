//! Generating sets of glued graphs from generating sets of the pieces.
//!
//! A graph `G` is split into vertex sets `L` and `R` so that every edge lies
//! inside one of them. A cut of `G` is then the same thing as a cut of `G[L]`
//! and a cut of `G[R]` that agree on `L ∩ R`. Generators of the pieces are
//! given in the local labels of the induced subgraphs (vertices of `L` in
//! increasing order become `0, 1, ...`).
//!
//! * overlap of one vertex: lifts of both sides plus sorting quadrics;
//! * overlap `{u, v}` with `uv` an edge: the same, with positions matched by
//!   height at `(u, v)`;
//! * overlap `{u, v}` without the edge: the four families built by
//!   [`build_f1_f2`], [`build_f3`] and [`build_f4`], combined in
//!   [`glue_nonadjacent`].

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::algebra::{height_of, sort_by_height, Binomial, CutMonomial, GeneratingSet};
use crate::bits::{self, VertexMask};
use crate::cut::{enumerate_cuts, glue_cuts, Cut};
use crate::error::{Error, Result};
use crate::fiber::CutSpace;
use crate::graph::Graph;
use crate::oracle::is_slow_varying;

/// `G` with a vertex split `L ∪ R = V(G)` such that `E(G) = E(G[L]) ∪ E(G[R])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separation {
    graph: Graph,
    left: VertexMask,
    right: VertexMask,
}

impl Separation {
    pub fn new(graph: Graph, left: VertexMask, right: VertexMask) -> Result<Self> {
        let all = graph.vertex_mask();
        if left == 0 || right == 0 {
            return Err(Error::InvalidGluing("both parts need vertices".into()));
        }
        if (left | right) != all || (left | right) & !all != 0 {
            return Err(Error::InvalidGluing("parts must cover exactly the vertex set".into()));
        }
        for &(a, b) in graph.edges() {
            let e = bits::bit(a) | bits::bit(b);
            if e & !left != 0 && e & !right != 0 {
                return Err(Error::InvalidGluing(format!("edge {a}-{b} lies in neither part")));
            }
        }
        Ok(Separation { graph, left, right })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn left(&self) -> VertexMask {
        self.left
    }

    pub fn right(&self) -> VertexMask {
        self.right
    }

    pub fn overlap(&self) -> VertexMask {
        self.left & self.right
    }

    pub fn left_graph(&self) -> Graph {
        self.graph.induced(self.left).0
    }

    pub fn right_graph(&self) -> Graph {
        self.graph.induced(self.right).0
    }

    fn part(&self, side: Side) -> VertexMask {
        match side {
            Side::Left => self.left,
            Side::Right => self.right,
        }
    }

    fn glue(&self, side: Side, own: Cut, other: Cut) -> Option<Cut> {
        let n = self.graph.vertex_count();
        match side {
            Side::Left => glue_cuts(own, self.left, other, self.right, n),
            Side::Right => glue_cuts(other, self.left, own, self.right, n),
        }
    }

    fn check_gens(&self, gens: &GeneratingSet, expected: &Graph, what: &str) -> Result<()> {
        if gens.graph() != expected {
            return Err(Error::InvalidGluing(format!(
                "{what} generators are for {:?}, expected {:?}",
                gens.graph(),
                expected
            )));
        }
        gens.check_kernel()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    Left,
    Right,
}

impl Side {
    fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// Position of global vertex `v` inside `mask`.
fn local_index(mask: VertexMask, v: usize) -> usize {
    (mask & (bits::bit(v) - 1)).count_ones() as usize
}

/// A separation whose overlap is two non-adjacent vertices `u`, `v`, each
/// side containing a `u`–`v` path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingSpec {
    sep: Separation,
    u: usize,
    v: usize,
}

impl GluingSpec {
    pub fn new(graph: Graph, left: VertexMask, right: VertexMask, u: usize, v: usize) -> Result<Self> {
        graph.check_vertex(u)?;
        graph.check_vertex(v)?;
        if u == v {
            return Err(Error::SameVertex(u));
        }
        let sep = Separation::new(graph, left, right)?;
        if sep.overlap() != bits::bit(u) | bits::bit(v) {
            return Err(Error::InvalidGluing(format!("parts must meet exactly in {{{u}, {v}}}")));
        }
        if sep.graph.has_edge(u, v) {
            return Err(Error::InvalidGluing(format!("{u} and {v} are adjacent")));
        }
        if !sep.graph.connected_within(u, v, left) || !sep.graph.connected_within(u, v, right) {
            return Err(Error::InvalidGluing(format!("each part needs a path from {u} to {v}")));
        }
        Ok(GluingSpec { sep, u: u.min(v), v: u.max(v) })
    }

    pub fn separation(&self) -> &Separation {
        &self.sep
    }

    pub fn graph(&self) -> &Graph {
        &self.sep.graph
    }

    pub fn pair(&self) -> (usize, usize) {
        (self.u, self.v)
    }

    /// `(u, v)` in the local labels of one part.
    fn local_pair(&self, side: Side) -> (usize, usize) {
        let m = self.sep.part(side);
        (local_index(m, self.u), local_index(m, self.v))
    }

    pub fn left_graph(&self) -> Graph {
        self.sep.left_graph()
    }

    pub fn right_graph(&self) -> Graph {
        self.sep.right_graph()
    }

    /// `G[L] + uv`.
    pub fn left_uv_graph(&self) -> Graph {
        let (a, b) = self.local_pair(Side::Left);
        self.left_graph().add_edge(a, b).expect("u, v non-adjacent")
    }

    /// `G[R] + uv`.
    pub fn right_uv_graph(&self) -> Graph {
        let (a, b) = self.local_pair(Side::Right);
        self.right_graph().add_edge(a, b).expect("u, v non-adjacent")
    }
}

/// Positions of a binomial's two sides, sorted by height at `pair` (or by
/// code when there is no pair) so that equal positions have equal status.
fn positions(b: &Binomial, pair: Option<(usize, usize)>) -> (Vec<Cut>, Vec<Cut>) {
    match pair {
        Some((u, v)) => (sort_by_height(b.lhs(), u, v), sort_by_height(b.rhs(), u, v)),
        None => (b.lhs().cuts().to_vec(), b.rhs().cuts().to_vec()),
    }
}

/// Lifts every generator of one side: position `i` of both sides receives
/// the same other-side cut, ranging over all cuts compatible with it.
fn lift_side(sep: &Separation, gens: &GeneratingSet, side: Side, pair: Option<(usize, usize)>) -> Vec<Binomial> {
    let other_part = sep.part(side.other());
    let other_cuts = enumerate_cuts(&sep.graph.induced(other_part).0);
    let local_pair = pair.map(|(u, v)| {
        let m = sep.part(side);
        (local_index(m, u), local_index(m, v))
    });
    let mut out = Vec::new();
    for b in gens.binomials() {
        let (lhs, rhs) = positions(b, local_pair);
        // per position, the compatible extensions as (lhs cut, rhs cut)
        let choices: Vec<Vec<(Cut, Cut)>> = lhs
            .iter()
            .zip(&rhs)
            .map(|(&a, &a2)| {
                other_cuts
                    .iter()
                    .filter_map(|&r| Some((sep.glue(side, a, r)?, sep.glue(side, a2, r)?)))
                    .collect()
            })
            .collect();
        for_each_product(&choices, |picked| {
            let l = CutMonomial::new(picked.iter().map(|p| p.0).collect());
            let r = CutMonomial::new(picked.iter().map(|p| p.1).collect());
            if let Ok(bin) = Binomial::new(l, r) {
                out.push(bin);
            }
        });
    }
    out
}

fn for_each_product<T: Copy>(choices: &[Vec<T>], mut f: impl FnMut(&[T])) {
    fn rec<T: Copy>(choices: &[Vec<T>], cur: &mut Vec<T>, f: &mut impl FnMut(&[T])) {
        if cur.len() == choices.len() {
            f(cur);
            return;
        }
        for &c in &choices[cur.len()] {
            cur.push(c);
            rec(choices, cur, f);
            cur.pop();
        }
    }
    rec(choices, &mut Vec::with_capacity(choices.len()), &mut f);
}

/// `q_{(a1,r1)} q_{(a2,r2)} - q_{(a1,r2)} q_{(a2,r1)}` for every pair of
/// left parts and pair of right parts whose four gluings exist.
fn sorting_quadrics(sep: &Separation) -> Vec<Binomial> {
    let lc = enumerate_cuts(&sep.left_graph());
    let rc = enumerate_cuts(&sep.right_graph());
    let mut out = Vec::new();
    for (i, &a1) in lc.iter().enumerate() {
        for &a2 in &lc[i + 1..] {
            for (j, &r1) in rc.iter().enumerate() {
                for &r2 in &rc[j + 1..] {
                    let glued = (
                        sep.glue(Side::Left, a1, r1),
                        sep.glue(Side::Left, a2, r2),
                        sep.glue(Side::Left, a1, r2),
                        sep.glue(Side::Left, a2, r1),
                    );
                    if let (Some(x1), Some(x2), Some(y1), Some(y2)) = glued {
                        let b = Binomial::new(CutMonomial::new(vec![x1, x2]), CutMonomial::new(vec![y1, y2]))
                            .expect("sorting quadric is non-degenerate");
                        out.push(b);
                    }
                }
            }
        }
    }
    out
}

/// Gluing over one shared vertex.
pub fn lift_series(sep: &Separation, gens_left: &GeneratingSet, gens_right: &GeneratingSet) -> Result<GeneratingSet> {
    if sep.overlap().count_ones() != 1 {
        return Err(Error::InvalidGluing("series gluing needs exactly one shared vertex".into()));
    }
    sep.check_gens(gens_left, &sep.left_graph(), "left")?;
    sep.check_gens(gens_right, &sep.right_graph(), "right")?;
    let mut all = lift_side(sep, gens_left, Side::Left, None);
    all.extend(lift_side(sep, gens_right, Side::Right, None));
    all.extend(sorting_quadrics(sep));
    GeneratingSet::checked(sep.graph.clone(), all)
}

/// Gluing over an edge `uv` present in both parts.
pub fn lift_edge_gluing(sep: &Separation, gens_left: &GeneratingSet, gens_right: &GeneratingSet) -> Result<GeneratingSet> {
    let shared = bits::to_vec(sep.overlap());
    let [u, v] = shared[..] else {
        return Err(Error::InvalidGluing("edge gluing needs exactly two shared vertices".into()));
    };
    if !sep.graph.has_edge(u, v) {
        return Err(Error::EdgeMissing(u, v));
    }
    sep.check_gens(gens_left, &sep.left_graph(), "left")?;
    sep.check_gens(gens_right, &sep.right_graph(), "right")?;
    let mut all = lift_side(sep, gens_left, Side::Left, Some((u, v)));
    all.extend(lift_side(sep, gens_right, Side::Right, Some((u, v))));
    all.extend(sorting_quadrics(sep));
    GeneratingSet::checked(sep.graph.clone(), all)
}

/// Lifts of generators of `G[L]+uv` (first family) and of `G[R]+uv`
/// (second family): positions sorted by height at `(u, v)`, other-side
/// parts identical on both sides of each binomial.
pub fn build_f1_f2(spec: &GluingSpec, gens_left_uv: &GeneratingSet, gens_right_uv: &GeneratingSet) -> Result<GeneratingSet> {
    let sep = &spec.sep;
    sep.check_gens(gens_left_uv, &spec.left_uv_graph(), "left + uv")?;
    sep.check_gens(gens_right_uv, &spec.right_uv_graph(), "right + uv")?;
    let mut all = lift_side(sep, gens_left_uv, Side::Left, Some(spec.pair()));
    all.extend(lift_side(sep, gens_right_uv, Side::Right, Some(spec.pair())));
    GeneratingSet::checked(sep.graph.clone(), all)
}

/// A generator multiple `high - low` with `h(high) = h(low) + 2`.
struct Drop {
    high: Vec<Cut>,
    low: Vec<Cut>,
}

/// Multiples `q1 (q2 - q3)` with `deg(q1 q2) <= 2M - 2` of the generators
/// whose height gap at `(u, v)` is exactly 2, oriented high side first and
/// grouped by `(degree, high height, low height)`.
fn height_drops(gens: &GeneratingSet, max_input_degree: usize, u: usize, v: usize) -> HashMap<(usize, usize, usize), Vec<Drop>> {
    let limit = (2 * max_input_degree).saturating_sub(2);
    let space = CutSpace::new(gens.graph());
    let mut multipliers: Vec<Vec<CutMonomial>> = Vec::new();
    let mut seen = BTreeSet::new();
    let mut out: HashMap<(usize, usize, usize), Vec<Drop>> = HashMap::new();
    for b in gens.binomials() {
        if b.height_gap(u, v) != 2 || b.degree() > limit {
            continue;
        }
        for k in 0..=(limit - b.degree()) {
            while multipliers.len() <= k {
                multipliers.push(space.monomials(multipliers.len()));
            }
            for q1 in &multipliers[k] {
                let ext = b.times(q1);
                if !seen.insert(ext.clone()) {
                    continue;
                }
                let (hl, hr) = (height_of(ext.lhs().cuts(), u, v), height_of(ext.rhs().cuts(), u, v));
                let (high, low) = if hl > hr { (ext.lhs(), ext.rhs()) } else { (ext.rhs(), ext.lhs()) };
                let key = (ext.degree(), hl.max(hr), hl.min(hr));
                out.entry(key).or_default().push(Drop {
                    high: high.cuts().to_vec(),
                    low: low.cuts().to_vec(),
                });
            }
        }
    }
    out
}

/// All cut multisets obtained by pairing left parts with right parts
/// one-to-one where they agree on the overlap.
fn matchings(sep: &Separation, left: &[Cut], right: &[Cut]) -> BTreeSet<CutMonomial> {
    fn rec(
        sep: &Separation,
        left: &[Cut],
        right: &[Cut],
        used: &mut [bool],
        cur: &mut Vec<Cut>,
        out: &mut BTreeSet<CutMonomial>,
    ) {
        let i = cur.len();
        if i == left.len() {
            out.insert(CutMonomial::new(cur.clone()));
            return;
        }
        let mut tried = BTreeSet::new();
        for j in 0..right.len() {
            if used[j] || !tried.insert(right[j]) {
                continue;
            }
            if let Some(c) = sep.glue(Side::Left, left[i], right[j]) {
                used[j] = true;
                cur.push(c);
                rec(sep, left, right, used, cur, out);
                cur.pop();
                used[j] = false;
            }
        }
    }
    let mut out = BTreeSet::new();
    rec(sep, left, right, &mut vec![false; right.len()], &mut Vec::new(), &mut out);
    out
}

/// Joins of height-changing generators of `G[L]` and `G[R]`: binomials of
/// `G` whose restriction to each part is a multiple (up to total degree
/// `2M - 2`) of a generator changing the height at `(u, v)` by exactly 2.
pub fn build_f3(spec: &GluingSpec, gens_left: &GeneratingSet, gens_right: &GeneratingSet, max_input_degree: usize) -> Result<GeneratingSet> {
    let sep = &spec.sep;
    sep.check_gens(gens_left, &spec.left_graph(), "left")?;
    sep.check_gens(gens_right, &spec.right_graph(), "right")?;
    let (lu, lv) = spec.local_pair(Side::Left);
    let (ru, rv) = spec.local_pair(Side::Right);
    if !is_slow_varying(gens_left, lu, lv) || !is_slow_varying(gens_right, ru, rv) {
        return Err(Error::NotSlowVarying(spec.u, spec.v));
    }
    let left_drops = height_drops(gens_left, max_input_degree, lu, lv);
    let right_drops = height_drops(gens_right, max_input_degree, ru, rv);
    let mut out = Vec::new();
    for (key, ls) in &left_drops {
        let Some(rs) = right_drops.get(key) else { continue };
        for l in ls {
            for r in rs {
                let highs = matchings(sep, &l.high, &r.high);
                let lows = matchings(sep, &l.low, &r.low);
                for h in &highs {
                    for lo in &lows {
                        out.push(Binomial::new(h.clone(), lo.clone())?);
                    }
                }
            }
        }
    }
    GeneratingSet::checked(sep.graph.clone(), out)
}

/// Sorting quadrics: left parts fixed, right parts exchanged.
pub fn build_f4(spec: &GluingSpec) -> Result<GeneratingSet> {
    GeneratingSet::checked(spec.sep.graph.clone(), sorting_quadrics(&spec.sep))
}

/// Output of [`glue_nonadjacent`].
#[derive(Clone, Debug, Serialize)]
pub struct GluedBasis {
    pub set: GeneratingSet,
    /// `max{2 mu_L - 2, 2 mu_R - 2, mu_{L+uv}, mu_{R+uv}}` from the input degrees.
    pub mu_bound: usize,
    pub family_sizes: [usize; 4],
}

pub fn mu_bound(left: usize, right: usize, left_uv: usize, right_uv: usize) -> usize {
    (2 * left)
        .saturating_sub(2)
        .max((2 * right).saturating_sub(2))
        .max(left_uv)
        .max(right_uv)
}

/// Generating set of `G` glued from `G[L]` and `G[R]` along the non-adjacent
/// pair `{u, v}`: the union of the four families.
pub fn glue_nonadjacent(
    spec: &GluingSpec,
    gens_left: &GeneratingSet,
    gens_right: &GeneratingSet,
    gens_left_uv: &GeneratingSet,
    gens_right_uv: &GeneratingSet,
) -> Result<GluedBasis> {
    let max_input = gens_left.max_degree().max(gens_right.max_degree());
    let f12 = build_f1_f2(spec, gens_left_uv, gens_right_uv)?;
    let f3 = build_f3(spec, gens_left, gens_right, max_input)?;
    let f4 = build_f4(spec)?;
    let (f1_len, f2_len) = {
        let sep = &spec.sep;
        (
            GeneratingSet::new(sep.graph.clone(), lift_side(sep, gens_left_uv, Side::Left, Some(spec.pair()))).len(),
            GeneratingSet::new(sep.graph.clone(), lift_side(sep, gens_right_uv, Side::Right, Some(spec.pair()))).len(),
        )
    };
    let set = f12.union(&f3).union(&f4);
    Ok(GluedBasis {
        set,
        mu_bound: mu_bound(
            gens_left.max_degree(),
            gens_right.max_degree(),
            gens_left_uv.max_degree(),
            gens_right_uv.max_degree(),
        ),
        family_sizes: [f1_len, f2_len, f3.len(), f4.len()],
    })
}
