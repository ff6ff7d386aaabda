//! Fibers of the monomial map: all cut monomials of one degree sharing an image.
//!
//! Two enumerators are available behind [`FiberEnumerator`]. `hash-group`
//! lists every monomial of the degree and keeps those hitting the target;
//! `backtrack` chooses cut multiplicities one cut at a time while tracking the
//! remaining per-edge `s`/`t` budget.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::algebra::{CutMonomial, EdgeExponentVector};
use crate::cut::{cut_count, Cut};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Default cap on the number of monomials materialized at one degree.
pub const DEFAULT_FIBER_CAP: u128 = 1_000_000;

/// Per-edge separation counts; the degree is implied by context.
pub type PhiKey = Box<[u16]>;

/// Precomputed cut/edge incidence of a graph.
#[derive(Clone, Debug)]
pub struct CutSpace {
    cut_count: usize,
    edge_count: usize,
    separated: Vec<u64>,
}

impl CutSpace {
    pub fn new(g: &Graph) -> Self {
        assert!(g.edge_count() <= 64, "at most 64 edges supported by the fiber engine");
        let cut_count = cut_count(g.vertex_count());
        let separated = (0..cut_count)
            .map(|i| {
                let c = Cut::from_index(i);
                g.edges()
                    .iter()
                    .enumerate()
                    .filter(|(_, &(a, b))| c.separates(a, b))
                    .fold(0u64, |m, (e, _)| m | (1 << e))
            })
            .collect();
        CutSpace { cut_count, edge_count: g.edge_count(), separated }
    }

    pub fn cut_count(&self) -> usize {
        self.cut_count
    }

    pub fn key(&self, m: &CutMonomial) -> PhiKey {
        let mut key = vec![0u16; self.edge_count];
        for c in m.cuts() {
            let mut mask = self.separated[c.index()];
            while mask != 0 {
                key[mask.trailing_zeros() as usize] += 1;
                mask &= mask - 1;
            }
        }
        key.into_boxed_slice()
    }

    /// `C(cuts + d - 1, d)`, saturating.
    pub fn monomial_count(&self, degree: usize) -> u128 {
        multichoose(self.cut_count as u128, degree as u128)
    }

    pub fn check_cap(&self, degree: usize, cap: u128) -> Result<()> {
        let needed = self.monomial_count(degree);
        if needed > cap {
            return Err(Error::ResourceCap { degree, needed, cap });
        }
        Ok(())
    }

    /// All monomials of `degree`, in ascending order.
    pub fn monomials(&self, degree: usize) -> Vec<CutMonomial> {
        let mut out = Vec::new();
        let mut idx = vec![0usize; degree];
        if self.cut_count == 0 {
            return out;
        }
        loop {
            out.push(CutMonomial::new(idx.iter().map(|&i| Cut::from_index(i)).collect()));
            // advance to the next non-decreasing sequence
            let mut pos = degree;
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                if idx[pos] + 1 < self.cut_count {
                    let next = idx[pos] + 1;
                    for slot in &mut idx[pos..] {
                        *slot = next;
                    }
                    break;
                }
            }
        }
    }

    /// All monomials of `degree` grouped by image; groups in key order and
    /// members ascending.
    pub fn fibers(&self, degree: usize, cap: u128) -> Result<Level> {
        self.check_cap(degree, cap)?;
        let monomials = self.monomials(degree);
        let keys: Vec<PhiKey> = monomials.par_iter().map(|m| self.key(m)).collect();
        let mut groups: BTreeMap<PhiKey, Vec<usize>> = BTreeMap::new();
        for (i, k) in keys.into_iter().enumerate() {
            groups.entry(k).or_default().push(i);
        }
        Ok(Level { degree, monomials, groups })
    }
}

fn multichoose(n: u128, k: u128) -> u128 {
    if n == 0 {
        return u128::from(k == 0);
    }
    // C(n + k - 1, k)
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n + i) / (i + 1);
    }
    acc
}

/// Every monomial of one degree, partitioned into fibers.
#[derive(Clone, Debug)]
pub struct Level {
    pub degree: usize,
    pub monomials: Vec<CutMonomial>,
    pub groups: BTreeMap<PhiKey, Vec<usize>>,
}

pub fn key_to_vector(g: &Graph, key: &PhiKey, degree: usize) -> EdgeExponentVector {
    let entries: Vec<_> = g
        .edges()
        .iter()
        .zip(key.iter())
        .map(|(&e, &s)| (e, s as u32, degree as u32 - s as u32))
        .collect();
    if entries.is_empty() {
        return EdgeExponentVector::zero(g, degree);
    }
    EdgeExponentVector::from_entries(g, &entries).expect("key from the same graph")
}

pub trait FiberEnumerator: Send + Sync {
    fn name(&self) -> &'static str;

    /// All degree-`degree` monomials with image `target`, ascending.
    fn enumerate(
        &self,
        g: &Graph,
        target: &EdgeExponentVector,
        degree: usize,
        cap: u128,
    ) -> Result<Vec<CutMonomial>>;
}

pub struct HashGroup;

impl FiberEnumerator for HashGroup {
    fn name(&self) -> &'static str {
        "hash-group"
    }

    fn enumerate(
        &self,
        g: &Graph,
        target: &EdgeExponentVector,
        degree: usize,
        cap: u128,
    ) -> Result<Vec<CutMonomial>> {
        target.check_target(g, degree)?;
        let space = CutSpace::new(g);
        space.check_cap(degree, cap)?;
        let want: Vec<u16> = target.s().iter().map(|&s| s as u16).collect();
        Ok(space
            .monomials(degree)
            .into_par_iter()
            .filter(|m| *space.key(m) == want[..])
            .collect())
    }
}

pub struct Backtrack;

impl FiberEnumerator for Backtrack {
    fn name(&self) -> &'static str {
        "backtrack"
    }

    fn enumerate(
        &self,
        g: &Graph,
        target: &EdgeExponentVector,
        degree: usize,
        cap: u128,
    ) -> Result<Vec<CutMonomial>> {
        target.check_target(g, degree)?;
        let space = CutSpace::new(g);
        let mut s_left: Vec<u32> = target.s().to_vec();
        let mut t_left: Vec<u32> = target.t();
        let mut chosen = Vec::with_capacity(degree);
        let mut out = Vec::new();
        backtrack(&space, 0, degree, &mut s_left, &mut t_left, &mut chosen, &mut out, cap)?;
        out.sort_unstable();
        Ok(out)
    }
}

#[allow(clippy::too_many_arguments)]
fn backtrack(
    space: &CutSpace,
    cut: usize,
    left: usize,
    s_left: &mut [u32],
    t_left: &mut [u32],
    chosen: &mut Vec<Cut>,
    out: &mut Vec<CutMonomial>,
    cap: u128,
) -> Result<()> {
    if left == 0 {
        if s_left.iter().all(|&s| s == 0) {
            if out.len() as u128 >= cap {
                return Err(Error::ResourceCap { degree: chosen.len(), needed: cap + 1, cap });
            }
            out.push(CutMonomial::new(chosen.clone()));
        }
        return Ok(());
    }
    if cut == space.cut_count {
        return Ok(());
    }
    let sep = space.separated[cut];
    // largest multiplicity this cut can take within the budgets
    let mut max_k = left as u32;
    for e in 0..s_left.len() {
        let budget = if sep & (1 << e) != 0 { s_left[e] } else { t_left[e] };
        max_k = max_k.min(budget);
    }
    for k in (0..=max_k).rev() {
        for e in 0..s_left.len() {
            if sep & (1 << e) != 0 {
                s_left[e] -= k;
            } else {
                t_left[e] -= k;
            }
        }
        for _ in 0..k {
            chosen.push(Cut::from_index(cut));
        }
        let r = backtrack(space, cut + 1, left - k as usize, s_left, t_left, chosen, out, cap);
        for _ in 0..k {
            chosen.pop();
        }
        for e in 0..s_left.len() {
            if sep & (1 << e) != 0 {
                s_left[e] += k;
            } else {
                t_left[e] += k;
            }
        }
        r?;
    }
    Ok(())
}

/// Name-keyed set of fiber enumerators.
pub struct EnumeratorRegistry {
    entries: Vec<Box<dyn FiberEnumerator>>,
}

impl EnumeratorRegistry {
    pub fn new() -> Self {
        EnumeratorRegistry { entries: Vec::new() }
    }

    pub fn register(&mut self, e: Box<dyn FiberEnumerator>) {
        self.entries.retain(|x| x.name() != e.name());
        self.entries.push(e);
    }

    pub fn get(&self, name: &str) -> Result<&dyn FiberEnumerator> {
        self.entries
            .iter()
            .find(|e| e.name() == name)
            .map(|e| e.as_ref())
            .ok_or_else(|| Error::UnknownStrategy(name.to_string()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }

    /// Hash grouping for small degrees and cut counts, backtracking otherwise.
    pub fn auto(&self, g: &Graph, degree: usize) -> &dyn FiberEnumerator {
        let name = if degree <= 3 && cut_count(g.vertex_count()) <= 64 { "hash-group" } else { "backtrack" };
        self.get(name).expect("built-in enumerators registered")
    }
}

impl Default for EnumeratorRegistry {
    fn default() -> Self {
        let mut r = EnumeratorRegistry::new();
        r.register(Box::new(HashGroup));
        r.register(Box::new(Backtrack));
        r
    }
}

/// All degree-`degree` cut monomials of `g` whose image is `target`.
pub fn enumerate_fiber(g: &Graph, target: &EdgeExponentVector, degree: usize) -> Result<Vec<CutMonomial>> {
    let registry = EnumeratorRegistry::default();
    registry.auto(g, degree).enumerate(g, target, degree, DEFAULT_FIBER_CAP)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::phi_image;
    use crate::catalog;
    use crate::cut::enumerate_cuts;

    fn paper(side: &[usize], n: usize) -> Cut {
        Cut::from_vertices(&side.iter().map(|v| v - 1).collect::<Vec<_>>(), n).unwrap()
    }

    #[test]
    fn multichoose_values() {
        assert_eq!(multichoose(8, 2), 36);
        assert_eq!(multichoose(32, 4), 52_360);
        assert_eq!(multichoose(0, 0), 1);
        assert_eq!(CutSpace::new(&catalog::path(4)).monomials(2).len(), 36);
    }

    #[test]
    fn p4_balanced_fiber_has_four_members() {
        // Frozen from a brute-force scan of the 36 degree-2 monomials on 8 cuts.
        let p4 = catalog::path(4);
        let target = EdgeExponentVector::from_entries(&p4, &[((0, 1), 1, 1), ((1, 2), 1, 1), ((2, 3), 1, 1)]).unwrap();
        let expected: Vec<CutMonomial> = {
            let mut v = vec![
                CutMonomial::new(vec![paper(&[1, 2, 3, 4], 4), paper(&[1, 3], 4)]),
                CutMonomial::new(vec![paper(&[1, 2, 3], 4), paper(&[1, 3, 4], 4)]),
                CutMonomial::new(vec![paper(&[1, 2, 4], 4), paper(&[1], 4)]),
                CutMonomial::new(vec![paper(&[1, 2], 4), paper(&[1, 4], 4)]),
            ];
            v.sort();
            v
        };
        let reg = EnumeratorRegistry::default();
        for name in reg.names() {
            let got = reg.get(name).unwrap().enumerate(&p4, &target, 2, DEFAULT_FIBER_CAP).unwrap();
            assert_eq!(got, expected, "enumerator {name}");
        }
        // brute force over pairs of cuts
        let cuts = enumerate_cuts(&p4);
        let mut brute = Vec::new();
        for i in 0..cuts.len() {
            for j in i..cuts.len() {
                let m = CutMonomial::new(vec![cuts[i], cuts[j]]);
                if phi_image(&p4, &m) == target {
                    brute.push(m);
                }
            }
        }
        assert_eq!(brute, expected);
    }

    #[test]
    fn single_cut_fibers_are_singletons_on_connected_graphs() {
        for g in [catalog::path(4), catalog::cycle(5), catalog::bowtie(), catalog::complete(4)] {
            for c in enumerate_cuts(&g) {
                let m = CutMonomial::new(vec![c]);
                let fiber = enumerate_fiber(&g, &phi_image(&g, &m), 1).unwrap();
                assert_eq!(fiber, vec![m]);
            }
        }
    }

    #[test]
    fn degree_zero_fiber() {
        let g = catalog::path(3);
        let fiber = enumerate_fiber(&g, &EdgeExponentVector::zero(&g, 0), 0).unwrap();
        assert_eq!(fiber, vec![CutMonomial::one()]);
    }

    #[test]
    fn inconsistent_target_is_rejected() {
        let g = catalog::path(3);
        let t = EdgeExponentVector::zero(&g, 2);
        assert_eq!(enumerate_fiber(&g, &t, 3), Err(Error::InconsistentTarget(3)));
        let other = EdgeExponentVector::zero(&catalog::path(4), 2);
        assert!(enumerate_fiber(&g, &other, 2).is_err());
    }

    #[test]
    fn enumerators_agree_and_stay_in_fiber() {
        let reg = EnumeratorRegistry::default();
        for g in [catalog::path(4), catalog::k4_minus_edge(), catalog::cycle(5)] {
            let space = CutSpace::new(&g);
            let level = space.fibers(3, DEFAULT_FIBER_CAP).unwrap();
            for (key, members) in level.groups.iter().take(40) {
                let target = key_to_vector(&g, key, 3);
                let want: Vec<CutMonomial> = members.iter().map(|&i| level.monomials[i].clone()).collect();
                let a = reg.get("hash-group").unwrap().enumerate(&g, &target, 3, DEFAULT_FIBER_CAP).unwrap();
                let b = reg.get("backtrack").unwrap().enumerate(&g, &target, 3, DEFAULT_FIBER_CAP).unwrap();
                assert_eq!(a, want);
                assert_eq!(b, want);
                for m in &a {
                    assert_eq!(phi_image(&g, m), target);
                }
                let mut dedup = a.clone();
                dedup.dedup();
                assert_eq!(dedup.len(), a.len());
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let space = CutSpace::new(&catalog::path(6));
        assert!(matches!(space.fibers(4, 1000), Err(Error::ResourceCap { .. })));
        assert!(EnumeratorRegistry::default().get("nope").is_err());
    }
}
