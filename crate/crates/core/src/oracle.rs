//! Brute-force ground truth for generation questions.
//!
//! Every question here is answered by listing whole fibers and checking
//! connectivity of the graph whose edges are single move applications. Only
//! degrees up to a caller-supplied bound are examined.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::algebra::{Binomial, CutMonomial, Direction, EdgeExponentVector, GeneratingSet};
use crate::error::{Error, Result};
use crate::fiber::{key_to_vector, CutSpace, Level};
use crate::graph::Graph;

/// Default degree bound for oracle checks.
pub const DEFAULT_MAX_DEGREE: usize = 4;

/// Applies `b` in direction `dir` to `m`, or `None` if the consumed side does not divide `m`.
pub fn apply_move(m: &CutMonomial, b: &Binomial, dir: Direction) -> Option<CutMonomial> {
    let (from, to) = b.sides(dir);
    m.div(from).map(|rest| rest.mul(to))
}

/// Lookup from a binomial side to the moves that consume it.
pub struct MoveIndex<'a> {
    binomials: &'a [Binomial],
    by_side: HashMap<&'a CutMonomial, Vec<(usize, Direction)>>,
    degrees: BTreeSet<usize>,
}

impl<'a> MoveIndex<'a> {
    pub fn new(binomials: &'a [Binomial]) -> Self {
        let mut by_side: HashMap<&CutMonomial, Vec<(usize, Direction)>> = HashMap::new();
        let mut degrees = BTreeSet::new();
        for (i, b) in binomials.iter().enumerate() {
            by_side.entry(b.lhs()).or_default().push((i, Direction::Forward));
            by_side.entry(b.rhs()).or_default().push((i, Direction::Backward));
            degrees.insert(b.degree());
        }
        MoveIndex { binomials, by_side, degrees }
    }

    pub fn binomial(&self, i: usize) -> &'a Binomial {
        &self.binomials[i]
    }

    /// Every single-move neighbour of `m` as `(binomial index, direction, result)`.
    pub fn neighbors(&self, m: &CutMonomial) -> Vec<(usize, Direction, CutMonomial)> {
        let mut out = Vec::new();
        for &k in self.degrees.range(..=m.degree()) {
            for side in sub_multisets(m.cuts(), k) {
                if let Some(moves) = self.by_side.get(&side) {
                    let rest = m.div(&side).expect("sub-multiset divides");
                    for &(i, dir) in moves {
                        let (_, to) = self.binomials[i].sides(dir);
                        out.push((i, dir, rest.mul(to)));
                    }
                }
            }
        }
        out
    }
}

/// Distinct sub-multisets of size `k` of a sorted cut list.
fn sub_multisets(cuts: &[crate::cut::Cut], k: usize) -> Vec<CutMonomial> {
    fn rec(
        cuts: &[crate::cut::Cut],
        start: usize,
        k: usize,
        cur: &mut Vec<crate::cut::Cut>,
        out: &mut Vec<CutMonomial>,
    ) {
        if cur.len() == k {
            out.push(CutMonomial::new(cur.clone()));
            return;
        }
        let mut i = start;
        while i < cuts.len() {
            if cuts.len() - i < k - cur.len() {
                break;
            }
            cur.push(cuts[i]);
            rec(cuts, i + 1, k, cur, out);
            cur.pop();
            let c = cuts[i];
            while i < cuts.len() && cuts[i] == c {
                i += 1;
            }
        }
    }
    let mut out = Vec::new();
    rec(cuts, 0, k, &mut Vec::with_capacity(k), &mut out);
    out
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        // keep the smaller index as root so roots are the least members
        if ra < rb {
            self.parent[rb] = ra;
        } else if rb < ra {
            self.parent[ra] = rb;
        }
    }
}

/// Splits `members` (ascending indices into `monomials`) into move-connected
/// components, each ascending, ordered by least member.
fn components_of(
    monomials: &[CutMonomial],
    members: &[usize],
    index: &HashMap<&CutMonomial, usize>,
    moves: &MoveIndex<'_>,
) -> Vec<Vec<usize>> {
    let local: HashMap<usize, usize> = members.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let mut uf = UnionFind::new(members.len());
    for (i, &m) in members.iter().enumerate() {
        for (_, _, next) in moves.neighbors(&monomials[m]) {
            if let Some(j) = index.get(&next).and_then(|g| local.get(g)) {
                uf.union(i, *j);
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = std::collections::BTreeMap::new();
    for (i, &m) in members.iter().enumerate() {
        groups.entry(uf.find(i)).or_default().push(m);
    }
    groups.into_values().collect()
}

/// A fiber that is not connected under a move set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberWitness {
    pub degree: usize,
    pub target: EdgeExponentVector,
    pub components: Vec<Vec<CutMonomial>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Connectivity {
    pub connected: bool,
    pub components: Vec<Vec<CutMonomial>>,
}

/// Connectivity of one fiber under the moves of `moves`.
pub fn fiber_graph_connected(fiber: &[CutMonomial], moves: &GeneratingSet) -> Result<Connectivity> {
    let g = moves.graph();
    let Some(first) = fiber.first() else {
        return Err(Error::MixedFiber);
    };
    let image = crate::algebra::phi_image(g, first);
    if fiber.iter().any(|m| m.degree() != first.degree() || crate::algebra::phi_image(g, m) != image) {
        return Err(Error::MixedFiber);
    }
    let mut sorted = fiber.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let index: HashMap<&CutMonomial, usize> = sorted.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let members: Vec<usize> = (0..sorted.len()).collect();
    let mi = MoveIndex::new(moves.binomials());
    let comps = components_of(&sorted, &members, &index, &mi);
    Ok(Connectivity {
        connected: comps.len() == 1,
        components: comps
            .into_iter()
            .map(|c| c.into_iter().map(|i| sorted[i].clone()).collect())
            .collect(),
    })
}

fn require_connected(g: &Graph) -> Result<()> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(())
}

struct LevelScan<'l> {
    level: &'l Level,
    index: HashMap<&'l CutMonomial, usize>,
}

impl<'l> LevelScan<'l> {
    fn new(level: &'l Level) -> Self {
        let index = level.monomials.iter().enumerate().map(|(i, m)| (m, i)).collect();
        LevelScan { level, index }
    }

    /// Disconnected fibers, in key order, as component lists.
    fn split_fibers(&self, moves: &MoveIndex<'_>) -> Vec<(&'l crate::fiber::PhiKey, Vec<Vec<usize>>)> {
        self.level
            .groups
            .iter()
            .filter(|(_, members)| members.len() > 1)
            .filter_map(|(key, members)| {
                let comps = components_of(&self.level.monomials, members, &self.index, moves);
                (comps.len() > 1).then_some((key, comps))
            })
            .collect()
    }
}

/// Brute-force generating set of the cut ideal up to degree `max_degree`.
///
/// Degrees are processed in increasing order. A fiber left disconnected by
/// the binomials collected so far gets one new binomial per extra component,
/// joining its least member to the least member of that component. The
/// result's `max_degree` is therefore the largest degree at which new
/// generators were needed.
pub fn markov_basis_up_to_degree(g: &Graph, max_degree: usize, cap: u128) -> Result<GeneratingSet> {
    require_connected(g)?;
    if max_degree < 2 {
        return Err(Error::DegreeTooSmall(max_degree));
    }
    let space = CutSpace::new(g);
    for d in 2..=max_degree {
        space.check_cap(d, cap)?;
    }
    let mut collected: Vec<Binomial> = Vec::new();
    for d in 2..=max_degree {
        let level = space.fibers(d, cap)?;
        let scan = LevelScan::new(&level);
        let moves = MoveIndex::new(&collected);
        let mut fresh = Vec::new();
        for (_, comps) in scan.split_fibers(&moves) {
            let root = &level.monomials[comps[0][0]];
            for c in &comps[1..] {
                fresh.push(Binomial::new(root.clone(), level.monomials[c[0]].clone())?);
            }
        }
        collected.extend(fresh);
    }
    Ok(GeneratingSet::new(g.clone(), collected))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenerationCheck {
    pub generates: bool,
    pub max_degree: usize,
    pub witness: Option<FiberWitness>,
}

/// Do the moves of `set` connect every fiber of degree `1..=max_degree`?
/// On failure the first disconnected fiber found is returned as witness.
pub fn generates_up_to_degree(g: &Graph, set: &GeneratingSet, max_degree: usize, cap: u128) -> Result<GenerationCheck> {
    require_connected(g)?;
    let bound_set = set.with_graph(g.clone());
    bound_set.check_kernel()?;
    let space = CutSpace::new(g);
    for d in 1..=max_degree {
        space.check_cap(d, cap)?;
    }
    let moves = MoveIndex::new(bound_set.binomials());
    for d in 1..=max_degree {
        let level = space.fibers(d, cap)?;
        let scan = LevelScan::new(&level);
        if let Some((key, comps)) = scan.split_fibers(&moves).into_iter().next() {
            return Ok(GenerationCheck {
                generates: false,
                max_degree,
                witness: Some(FiberWitness {
                    degree: d,
                    target: key_to_vector(g, key, d),
                    components: comps
                        .into_iter()
                        .map(|c| c.into_iter().map(|i| level.monomials[i].clone()).collect())
                        .collect(),
                }),
            });
        }
    }
    Ok(GenerationCheck { generates: true, max_degree, witness: None })
}

/// Every binomial changes `h_{u,v}` by at most 2.
pub fn is_slow_varying(set: &GeneratingSet, u: usize, v: usize) -> bool {
    set.binomials().iter().all(|b| b.height_gap(u, v) <= 2)
}

/// Slow-varying with respect to every vertex pair of the set's graph.
pub fn is_slow_varying_everywhere(set: &GeneratingSet) -> bool {
    let n = set.graph().vertex_count();
    (0..n).all(|u| (u + 1..n).all(|v| is_slow_varying(set, u, v)))
}

/// Every degree-2 kernel binomial of `g` (all pairs inside each degree-2 fiber).
pub fn all_kernel_quadrics(g: &Graph, cap: u128) -> Result<GeneratingSet> {
    let space = CutSpace::new(g);
    let level = space.fibers(2, cap)?;
    let mut out = Vec::new();
    for members in level.groups.values() {
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                out.push(Binomial::new(level.monomials[a].clone(), level.monomials[b].clone())?);
            }
        }
    }
    Ok(GeneratingSet::new(g.clone(), out))
}

/// Greedily drops binomials whose removal keeps every fiber up to
/// `max_degree` connected. Binomials are tried from the highest degree down
/// and, within a degree, in reverse order.
pub fn prune_redundant(g: &Graph, set: &GeneratingSet, max_degree: usize, cap: u128) -> Result<GeneratingSet> {
    let mut kept: Vec<Binomial> = set.binomials().to_vec();
    if !generates_up_to_degree(g, set, max_degree, cap)?.generates {
        return Ok(set.clone());
    }
    let mut order: Vec<usize> = (0..kept.len()).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(kept[i].degree()), std::cmp::Reverse(i)));
    let mut removed = vec![false; kept.len()];
    for i in order {
        removed[i] = true;
        let trial = GeneratingSet::new(
            g.clone(),
            kept.iter().enumerate().filter(|(j, _)| !removed[*j]).map(|(_, b)| b.clone()),
        );
        if !generates_up_to_degree(g, &trial, max_degree, cap)?.generates {
            removed[i] = false;
        }
    }
    let mut j = 0;
    kept.retain(|_| {
        j += 1;
        !removed[j - 1]
    });
    Ok(GeneratingSet::new(g.clone(), kept))
}
