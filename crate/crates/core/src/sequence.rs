//! Explicit move sequences inside a fiber, and their rearrangement into a
//! sequence whose height at a vertex pair never increases.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::algebra::{height, phi_image, Binomial, CutMonomial, Direction, GeneratingSet};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::oracle::{apply_move, MoveIndex};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveApplication {
    pub binomial: Binomial,
    pub direction: Direction,
    pub result: CutMonomial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveSequence {
    pub start: CutMonomial,
    pub steps: Vec<MoveApplication>,
}

impl MoveSequence {
    pub fn empty(start: CutMonomial) -> Self {
        MoveSequence { start, steps: Vec::new() }
    }

    pub fn end(&self) -> &CutMonomial {
        self.steps.last().map_or(&self.start, |s| &s.result)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Start followed by every intermediate result.
    pub fn monomials(&self) -> impl Iterator<Item = &CutMonomial> {
        std::iter::once(&self.start).chain(self.steps.iter().map(|s| &s.result))
    }

    pub fn heights(&self, u: usize, v: usize) -> Vec<usize> {
        self.monomials().map(|m| height(m, u, v)).collect()
    }

    /// Each step applies its binomial to the previous monomial, and every
    /// binomial lies in the kernel for `g`.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let mut cur = &self.start;
        for (i, s) in self.steps.iter().enumerate() {
            if !crate::algebra::binomial_in_kernel(g, &s.binomial) {
                return Err(Error::Sequence(format!("step {i} uses a binomial outside the kernel")));
            }
            if apply_move(cur, &s.binomial, s.direction).as_ref() != Some(&s.result) {
                return Err(Error::Sequence(format!("step {i} does not follow from its source")));
            }
            cur = &s.result;
        }
        Ok(())
    }

    fn push(&mut self, binomial: &Binomial, direction: Direction, result: CutMonomial) {
        self.steps.push(MoveApplication { binomial: binomial.clone(), direction, result });
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum SearchOutcome {
    Found(MoveSequence),
    /// `to` is not reachable; `reachable` monomials were visited from `from`.
    Disconnected { reachable: usize },
}

/// Shortest move sequence from `from` to `to` under the moves of `moves`.
pub fn find_move_sequence(g: &Graph, moves: &GeneratingSet, from: &CutMonomial, to: &CutMonomial) -> Result<SearchOutcome> {
    from.check_fits(g)?;
    to.check_fits(g)?;
    if from.degree() != to.degree() || phi_image(g, from) != phi_image(g, to) {
        return Err(Error::Sequence("endpoints lie in different fibers".into()));
    }
    let index = MoveIndex::new(moves.binomials());
    Ok(match bfs(&index, from, |m| m == to) {
        Some(seq) => SearchOutcome::Found(seq),
        None => SearchOutcome::Disconnected { reachable: reachable_count(&index, from) },
    })
}

fn bfs(index: &MoveIndex<'_>, from: &CutMonomial, is_goal: impl Fn(&CutMonomial) -> bool) -> Option<MoveSequence> {
    let mut parent: HashMap<CutMonomial, Option<(CutMonomial, usize, Direction)>> = HashMap::new();
    parent.insert(from.clone(), None);
    let mut queue = VecDeque::from([from.clone()]);
    let mut goal = None;
    while let Some(m) = queue.pop_front() {
        if is_goal(&m) {
            goal = Some(m);
            break;
        }
        for (i, dir, next) in index.neighbors(&m) {
            if !parent.contains_key(&next) {
                parent.insert(next.clone(), Some((m.clone(), i, dir)));
                queue.push_back(next);
            }
        }
    }
    let mut cur = goal?;
    let mut rev = Vec::new();
    while let Some(Some((prev, i, dir))) = parent.get(&cur) {
        rev.push((*i, *dir, cur.clone()));
        cur = prev.clone();
    }
    let mut seq = MoveSequence::empty(from.clone());
    for (i, dir, result) in rev.into_iter().rev() {
        seq.push(index.binomial(i), dir, result);
    }
    Some(seq)
}

fn reachable_count(index: &MoveIndex<'_>, from: &CutMonomial) -> usize {
    let mut seen = HashSet::from([from.clone()]);
    let mut stack = vec![from.clone()];
    while let Some(m) = stack.pop() {
        for (_, _, next) in index.neighbors(&m) {
            if seen.insert(next.clone()) {
                stack.push(next);
            }
        }
    }
    seen.len()
}

/// Rewrites `seq` so that its height at `(u, v)` never increases.
///
/// Heights along `seq` must change by 0 or 2 per step. For each height `h`
/// from the start height down to the end height, the last monomial of height
/// `h` is kept together with the original move leaving it; the stretch
/// between the first monomial reached at height `h` and that last one is
/// kept if it already consists of `aux` moves at constant height, and
/// otherwise replaced by a shortest path of `aux` moves, which preserve the
/// height.
pub fn normalize_sequence(seq: &MoveSequence, u: usize, v: usize, aux: &GeneratingSet) -> Result<MoveSequence> {
    let heights = seq.heights(u, v);
    let (first, last) = (heights[0], *heights.last().expect("non-empty"));
    if first < last {
        return Err(Error::Sequence(format!("end height {last} exceeds start height {first}")));
    }
    if let Some(i) = heights.windows(2).position(|w| w[0].abs_diff(w[1]) > 2) {
        return Err(Error::Sequence(format!("step {i} changes the height by more than 2")));
    }
    if heights.iter().any(|h| h % 2 != first % 2) {
        return Err(Error::Sequence("heights along the sequence differ in parity".into()));
    }
    let aux_index = MoveIndex::new(aux.binomials());
    let aux_set: HashSet<&Binomial> = aux.binomials().iter().collect();
    let monomials: Vec<&CutMonomial> = seq.monomials().collect();

    let mut out = MoveSequence::empty(seq.start.clone());
    let mut entry = 0;
    let mut h = first;
    loop {
        let exit = heights.iter().rposition(|&x| x == h).expect("heights pass through every level");
        let plateau_is_clean = entry <= exit
            && (entry..exit).all(|i| heights[i + 1] == h && aux_set.contains(&seq.steps[i].binomial));
        if plateau_is_clean {
            out.steps.extend_from_slice(&seq.steps[entry..exit]);
        } else {
            let target = monomials[exit];
            let Some(path) = bfs(&aux_index, monomials[entry], |m| m == target) else {
                return Err(Error::Sequence(format!("auxiliary moves do not connect the plateau at height {h}")));
            };
            out.steps.extend(path.steps);
        }
        if h == last {
            break;
        }
        // the step leaving the last monomial of height h goes down by 2
        out.steps.push(seq.steps[exit].clone());
        entry = exit + 1;
        h -= 2;
    }
    debug_assert_eq!(out.end(), seq.end());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::cut::Cut;
    use crate::fiber::{CutSpace, DEFAULT_FIBER_CAP};
    use crate::oracle::markov_basis_up_to_degree;

    fn mono(sides: &[&[usize]], n: usize) -> CutMonomial {
        CutMonomial::new(sides.iter().map(|s| Cut::from_vertices(s, n).unwrap()).collect())
    }

    fn basis(g: &Graph) -> GeneratingSet {
        markov_basis_up_to_degree(g, 4, DEFAULT_FIBER_CAP).unwrap()
    }

    #[test]
    fn same_endpoints_give_empty_sequence() {
        let g = catalog::path(4);
        let m = mono(&[&[0], &[0, 1]], 4);
        let SearchOutcome::Found(seq) = find_move_sequence(&g, &basis(&g), &m, &m).unwrap() else { panic!() };
        assert!(seq.is_empty());
        assert_eq!(seq.end(), &m);
    }

    #[test]
    fn p4_balanced_fiber_pairs_are_close() {
        let g = catalog::path(4);
        let moves = basis(&g);
        let level = CutSpace::new(&g).fibers(2, DEFAULT_FIBER_CAP).unwrap();
        let big = level.groups.values().find(|m| m.len() == 4).unwrap();
        for &a in big {
            for &b in big {
                let (x, y) = (&level.monomials[a], &level.monomials[b]);
                let SearchOutcome::Found(seq) = find_move_sequence(&g, &moves, x, y).unwrap() else { panic!() };
                assert!(seq.len() <= 3);
                seq.validate(&g).unwrap();
                assert_eq!(seq.end(), y);
            }
        }
    }

    #[test]
    fn k4_witness_is_disconnected_under_quadrics() {
        let g = catalog::complete(4);
        let quadrics = crate::oracle::all_kernel_quadrics(&g, DEFAULT_FIBER_CAP).unwrap();
        let check = crate::oracle::generates_up_to_degree(&g, &quadrics, 4, DEFAULT_FIBER_CAP).unwrap();
        let w = check.witness.unwrap();
        let out = find_move_sequence(&g, &quadrics, &w.components[0][0], &w.components[1][0]).unwrap();
        assert!(matches!(out, SearchOutcome::Disconnected { reachable } if reachable >= 1));
    }

    #[test]
    fn mismatched_endpoints_are_rejected() {
        let g = catalog::path(3);
        let a = mono(&[&[0], &[0]], 3);
        let b = mono(&[&[0], &[0, 1]], 3);
        assert!(matches!(find_move_sequence(&g, &basis(&g), &a, &b), Err(Error::Sequence(_))));
    }

    #[test]
    fn p3_rise_then_fall_is_straightened() {
        // P3 cuts by (edge 01 cut, edge 12 cut): 00 = [0,1,2], 01 = [0,1], 10 = [0], 11 = [0,2]
        let g = catalog::path(3);
        let moves = basis(&g);
        let q = |s: &[&[usize]]| mono(s, 3);
        let h2 = q(&[&[0, 2], &[0], &[0, 1], &[0, 1, 2]]);
        let h4 = q(&[&[0], &[0], &[0, 1], &[0, 1]]);
        let h0 = q(&[&[0, 2], &[0, 2], &[0, 1, 2], &[0, 1, 2]]);
        let mut seq = MoveSequence::empty(h2.clone());
        for target in [&h4, &h2, &h0] {
            let SearchOutcome::Found(part) = find_move_sequence(&g, &moves, seq.end(), target).unwrap() else { panic!() };
            seq.steps.extend(part.steps);
        }
        assert_eq!(seq.heights(0, 2), vec![2, 4, 2, 0]);
        let k3 = basis(&catalog::complete(3));
        let norm = normalize_sequence(&seq, 0, 2, &k3).unwrap();
        norm.validate(&g).unwrap();
        assert_eq!(norm.heights(0, 2), vec![2, 0]);
        assert_eq!(norm.end(), &h0);
    }

    #[test]
    fn monotone_aux_sequence_is_unchanged() {
        let l = catalog::path(4);
        let aux = basis(&catalog::cycle(4));
        let level = CutSpace::new(&l).fibers(3, DEFAULT_FIBER_CAP).unwrap();
        let mut checked = 0;
        for members in level.groups.values() {
            for &a in members {
                for &b in members {
                    let (x, y) = (&level.monomials[a], &level.monomials[b]);
                    if height(x, 0, 3) != height(y, 0, 3) {
                        continue;
                    }
                    if let SearchOutcome::Found(seq) = find_move_sequence(&l, &aux, x, y).unwrap() {
                        assert_eq!(normalize_sequence(&seq, 0, 3, &aux).unwrap(), seq);
                        checked += 1;
                    }
                }
            }
        }
        assert!(checked > 0);
    }

    #[test]
    fn every_p4_sequence_normalizes() {
        // G[L] = P4 with (u, v) = (0, 3); aux moves come from the 4-cycle
        let l = catalog::path(4);
        let base = basis(&l);
        let aux = basis(&catalog::cycle(4));
        let aux_set: HashSet<&Binomial> = aux.binomials().iter().collect();
        let level = CutSpace::new(&l).fibers(3, DEFAULT_FIBER_CAP).unwrap();
        let mut replaced = 0;
        for members in level.groups.values() {
            for &a in members {
                for &b in members {
                    let (x, y) = (&level.monomials[a], &level.monomials[b]);
                    if height(x, 0, 3) < height(y, 0, 3) {
                        continue;
                    }
                    let SearchOutcome::Found(seq) = find_move_sequence(&l, &base, x, y).unwrap() else { panic!() };
                    let norm = normalize_sequence(&seq, 0, 3, &aux).unwrap();
                    norm.validate(&l).unwrap();
                    assert_eq!(&norm.start, x);
                    assert_eq!(norm.end(), y);
                    let hs = norm.heights(0, 3);
                    assert!(hs.windows(2).all(|w| w[0] >= w[1]), "{hs:?}");
                    for (i, s) in norm.steps.iter().enumerate() {
                        if hs[i] == hs[i + 1] {
                            assert!(aux_set.contains(&s.binomial));
                        } else {
                            assert!(base.binomials().contains(&s.binomial));
                        }
                    }
                    if norm != seq {
                        replaced += 1;
                    }
                }
            }
        }
        assert!(replaced > 0);
    }

    #[test]
    fn rising_endpoints_are_rejected() {
        let g = catalog::path(3);
        let q = |s: &[&[usize]]| mono(s, 3);
        let low = q(&[&[0, 2], &[0, 1, 2]]);
        let SearchOutcome::Found(seq) = find_move_sequence(&g, &basis(&g), &low, &q(&[&[0], &[0, 1]])).unwrap() else {
            panic!()
        };
        assert!(normalize_sequence(&seq, 0, 2, &GeneratingSet::empty(catalog::complete(3))).is_err());
    }
}
