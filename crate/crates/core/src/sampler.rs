//! Random walks on tables of cut counts with fixed edge-cut marginals.

use std::collections::BTreeMap;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{Binomial, CutMonomial, Direction, GeneratingSet};
use crate::cut::{cut_from_listed_side, Cut};
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};

/// Observed counts of cuts. Zero counts are not stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutTable {
    graph: Graph,
    counts: BTreeMap<Cut, u64>,
}

impl CutTable {
    pub fn new(graph: Graph, counts: impl IntoIterator<Item = (Cut, u64)>) -> Result<Self> {
        let n = graph.vertex_count();
        let mut map = BTreeMap::new();
        for (c, k) in counts {
            if !c.fits(n) {
                return Err(Error::Parse(format!("cut {c:?} does not fit a graph on {n} vertices")));
            }
            if k > 0 {
                *map.entry(c).or_insert(0) += k;
            }
        }
        Ok(CutTable { graph, counts: map })
    }

    /// The table whose entries are the cuts of `m`.
    pub fn from_monomial(graph: Graph, m: &CutMonomial) -> Result<Self> {
        CutTable::new(graph, m.cuts().iter().map(|&c| (c, 1)))
    }

    /// Parses `{"[0]": 9, "[0,1]": 6, ...}`.
    pub fn from_json(graph: Graph, text: &str) -> Result<Self> {
        let raw: BTreeMap<String, u64> = serde_json::from_str(text)?;
        let mut counts = Vec::with_capacity(raw.len());
        for (key, k) in raw {
            let side: Vec<usize> = serde_json::from_str(&key)
                .map_err(|e| Error::Parse(format!("cut key {key:?}: {e}")))?;
            counts.push((cut_from_listed_side(&side)?, k));
        }
        CutTable::new(graph, counts)
    }

    /// Keys in ascending cut order, zero counts omitted.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.json_map()).expect("table serializes")
    }

    fn json_map(&self) -> BTreeMap<String, u64> {
        self.counts.iter().map(|(c, &k)| (cut_key(*c), k)).collect()
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn counts(&self) -> &BTreeMap<Cut, u64> {
        &self.counts
    }

    pub fn count(&self, c: Cut) -> u64 {
        self.counts.get(&c).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// The table as a cut monomial (one factor per observation).
    pub fn to_monomial(&self) -> CutMonomial {
        CutMonomial::new(
            self.counts
                .iter()
                .flat_map(|(&c, &k)| std::iter::repeat_n(c, k as usize))
                .collect(),
        )
    }

    /// Replaces one copy of the consumed side of `b` by the other side.
    /// Returns false, leaving the table alone, when a needed cut is missing.
    pub fn apply_move(&mut self, b: &Binomial, dir: Direction) -> bool {
        let (from, to) = b.sides(dir);
        if !self.can_remove(from) {
            return false;
        }
        self.swap(from, to);
        true
    }

    fn can_remove(&self, side: &CutMonomial) -> bool {
        runs(side.cuts()).all(|(c, k)| self.count(c) >= k)
    }

    fn swap(&mut self, from: &CutMonomial, to: &CutMonomial) {
        for (c, k) in runs(from.cuts()) {
            let e = self.counts.get_mut(&c).expect("checked");
            *e -= k;
            if *e == 0 {
                self.counts.remove(&c);
            }
        }
        for (c, k) in runs(to.cuts()) {
            *self.counts.entry(c).or_insert(0) += k;
        }
    }
}

fn cut_key(c: Cut) -> String {
    serde_json::to_string(&c).expect("cut serializes")
}

/// `(cut, multiplicity)` for a sorted cut list.
fn runs(cuts: &[Cut]) -> impl Iterator<Item = (Cut, u64)> + '_ {
    cuts.chunk_by(|a, b| a == b).map(|r| (r[0], r.len() as u64))
}

/// For each edge, the number of observations cutting it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarginalVector {
    pub edges: Vec<Edge>,
    pub cut_counts: Vec<u64>,
}

pub fn marginals(t: &CutTable, g: &Graph) -> Result<MarginalVector> {
    let n = g.vertex_count();
    if let Some(c) = t.counts.keys().find(|c| !c.fits(n)) {
        return Err(Error::Parse(format!("cut {c:?} does not fit a graph on {n} vertices")));
    }
    let cut_counts = g
        .edges()
        .iter()
        .map(|&(a, b)| t.counts.iter().filter(|(c, _)| c.separates(a, b)).map(|(_, &k)| k).sum())
        .collect();
    Ok(MarginalVector { edges: g.edges().to_vec(), cut_counts })
}

/// One step: a uniformly chosen move and direction, applied when the table
/// holds enough of the cuts it removes.
pub fn markov_step<R: Rng + ?Sized>(t: &CutTable, moves: &GeneratingSet, rng: &mut R) -> CutTable {
    let mut next = t.clone();
    markov_step_in_place(&mut next, moves.binomials(), rng);
    next
}

/// [`markov_step`] on a table in place; returns the applied move, if any.
pub fn markov_step_in_place<'b, R: Rng + ?Sized>(
    t: &mut CutTable,
    moves: &'b [Binomial],
    rng: &mut R,
) -> Option<(&'b Binomial, Direction)> {
    if moves.is_empty() {
        return None;
    }
    let pick = rng.random_range(0..2 * moves.len());
    let b = &moves[pick / 2];
    let dir = if pick % 2 == 0 { Direction::Forward } else { Direction::Backward };
    t.apply_move(b, dir).then_some((b, dir))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleParams {
    pub steps: u64,
    pub burn_in: u64,
    pub thin: u64,
    pub seed: u64,
}

impl SampleParams {
    pub fn validate(&self) -> Result<()> {
        if self.thin == 0 {
            return Err(Error::InvalidParameter("thin must be at least 1".into()));
        }
        if self.steps <= self.burn_in {
            return Err(Error::InvalidParameter(format!(
                "steps ({}) must exceed burn-in ({})",
                self.steps, self.burn_in
            )));
        }
        Ok(())
    }

    /// Number of tables a run emits.
    pub fn sample_count(&self) -> u64 {
        (self.steps - self.burn_in) / self.thin
    }
}

/// Runs `params.steps` steps from `t0`; after the first `burn_in` steps,
/// every `thin`-th table is kept.
pub fn sample_fiber(g: &Graph, t0: &CutTable, moves: &GeneratingSet, params: &SampleParams) -> Result<Vec<CutTable>> {
    params.validate()?;
    if t0.graph() != g {
        return Err(Error::InvalidParameter("table belongs to a different graph".into()));
    }
    marginals(t0, g)?;
    moves.with_graph(g.clone()).check_kernel()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut t = t0.clone();
    let mut out = Vec::with_capacity(params.sample_count() as usize);
    for step in 1..=params.steps {
        markov_step_in_place(&mut t, moves.binomials(), &mut rng);
        if step > params.burn_in && (step - params.burn_in).is_multiple_of(params.thin) {
            out.push(t.clone());
        }
    }
    Ok(out)
}

/// Independent chains, one per seed, run in parallel.
pub fn sample_chains(
    g: &Graph,
    t0: &CutTable,
    moves: &GeneratingSet,
    params: &SampleParams,
    seeds: &[u64],
) -> Result<Vec<Vec<CutTable>>> {
    seeds
        .par_iter()
        .map(|&seed| sample_fiber(g, t0, moves, &SampleParams { seed, ..*params }))
        .collect()
}

/// JSON lines: a header with the run parameters, then one table per line.
pub fn write_samples<W: Write>(mut w: W, params: &SampleParams, samples: &[CutTable]) -> std::io::Result<()> {
    writeln!(w, "{}", serde_json::to_string(params).expect("params serialize"))?;
    for t in samples {
        writeln!(w, "{}", t.to_json())?;
    }
    Ok(())
}

/// Inverse of [`write_samples`].
pub fn read_samples(g: &Graph, text: &str) -> Result<(SampleParams, Vec<CutTable>)> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| Error::Parse("missing header line".into()))?;
    let params: SampleParams = serde_json::from_str(header)?;
    let tables = lines.map(|l| CutTable::from_json(g.clone(), l)).collect::<Result<_>>()?;
    Ok((params, tables))
}
