use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cutideal::algebra::{height, phi_image, CutMonomial, Direction, GeneratingSet};
use cutideal::catalog;
use cutideal::cut::{enumerate_cuts, Cut};
use cutideal::fiber::{enumerate_fiber, CutSpace, DEFAULT_FIBER_CAP};
use cutideal::graph::Graph;
use cutideal::oracle::{all_kernel_quadrics, generates_up_to_degree, markov_basis_up_to_degree};
use cutideal::sampler::{marginals, markov_step_in_place, sample_fiber, CutTable, SampleParams};

fn connected_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n)
        .prop_flat_map(|n| (Just(n), prop::collection::vec(any::<bool>(), n * (n - 1) / 2)))
        .prop_map(|(n, picks)| {
            // a spanning path keeps it connected
            let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (v - 1, v)).collect();
            let mut k = 0;
            for a in 0..n {
                for b in a + 1..n {
                    if picks[k] && b > a + 1 {
                        edges.push((a, b));
                    }
                    k += 1;
                }
            }
            Graph::new(n, edges).unwrap()
        })
}

fn monomial(g: &Graph, picks: &[usize]) -> CutMonomial {
    let cuts = enumerate_cuts(g);
    CutMonomial::new(picks.iter().map(|&i| cuts[i % cuts.len()]).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn phi_is_additive(g in connected_graph(6), a in prop::collection::vec(0usize..64, 0..4), b in prop::collection::vec(0usize..64, 0..4)) {
        let (ma, mb) = (monomial(&g, &a), monomial(&g, &b));
        prop_assert_eq!(phi_image(&g, &ma.mul(&mb)), phi_image(&g, &ma).add(&phi_image(&g, &mb)));
    }

    #[test]
    fn height_is_the_s_exponent_after_adding_the_edge(g in connected_graph(6), picks in prop::collection::vec(0usize..64, 1..5), u in 0usize..6, v in 0usize..6) {
        let n = g.vertex_count();
        let (u, v) = (u % n, v % n);
        prop_assume!(u != v && !g.has_edge(u, v));
        let m = monomial(&g, &picks);
        let plus = g.add_edge(u, v).unwrap();
        prop_assert_eq!(phi_image(&plus, &m).s_of(u, v), Some(height(&m, u, v) as u32));
    }

    #[test]
    fn fiber_members_share_height_parity(g in connected_graph(5), picks in prop::collection::vec(0usize..64, 1..4)) {
        let m = monomial(&g, &picks);
        let fiber = enumerate_fiber(&g, &phi_image(&g, &m), m.degree()).unwrap();
        prop_assert!(fiber.contains(&m));
        let n = g.vertex_count();
        for u in 0..n {
            for v in u + 1..n {
                for f in &fiber {
                    prop_assert_eq!(height(f, u, v) % 2, height(&m, u, v) % 2);
                }
            }
        }
    }

    #[test]
    fn steps_conserve_marginals_and_reverse(seed in any::<u64>(), counts in prop::collection::vec(0u64..6, 8)) {
        let g = catalog::path(4);
        let cuts = enumerate_cuts(&g);
        let t0 = CutTable::new(g.clone(), cuts.iter().copied().zip(counts)).unwrap();
        let moves = markov_basis_up_to_degree(&g, 2, DEFAULT_FIBER_CAP).unwrap();
        let base = marginals(&t0, &g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut t = t0.clone();
        for _ in 0..200 {
            let before = t.clone();
            if let Some((b, dir)) = markov_step_in_place(&mut t, moves.binomials(), &mut rng) {
                let mut undo = t.clone();
                prop_assert!(undo.apply_move(b, dir.reverse()));
                prop_assert_eq!(&undo, &before);
            }
            prop_assert_eq!(marginals(&t, &g).unwrap(), base.clone());
            prop_assert_eq!(t.total(), t0.total());
        }
    }
}

#[test]
fn quadric_height_gaps_are_zero_or_two() {
    for n in 2..=5 {
        for g in catalog::connected_nonisomorphic_graphs(n) {
            let quadrics = all_kernel_quadrics(&g, DEFAULT_FIBER_CAP).unwrap();
            for b in quadrics.binomials() {
                for u in 0..n {
                    for v in u + 1..n {
                        assert!(matches!(b.height_gap(u, v), 0 | 2), "{g:?} {b:?}");
                    }
                }
            }
        }
    }
}

#[test]
fn single_cuts_have_distinct_images() {
    for n in 2..=5 {
        for g in catalog::connected_nonisomorphic_graphs(n) {
            let images: BTreeSet<_> = enumerate_cuts(&g)
                .into_iter()
                .map(|c| phi_image(&g, &CutMonomial::new(vec![c])).s().to_vec())
                .collect();
            assert_eq!(images.len(), 1 << (n - 1));
        }
    }
}

#[test]
fn one_observation_chain_is_constant() {
    let g = catalog::path(4);
    let moves = markov_basis_up_to_degree(&g, 2, DEFAULT_FIBER_CAP).unwrap();
    let t0 = CutTable::new(g.clone(), [(Cut::from_vertices(&[0, 2], 4).unwrap(), 1)]).unwrap();
    let p = SampleParams { steps: 1000, burn_in: 0, thin: 1, seed: 1 };
    assert!(sample_fiber(&g, &t0, &moves, &p).unwrap().iter().all(|t| *t == t0));
}

#[test]
fn chains_visit_every_small_fiber_member() {
    // totals up to 4 on graphs with up to 4 vertices, wherever the moves generate
    let graphs = [catalog::path(3), catalog::path(4), catalog::cycle(4), catalog::complete(3)];
    for g in graphs {
        let moves = markov_basis_up_to_degree(&g, 4, DEFAULT_FIBER_CAP).unwrap();
        assert!(generates_up_to_degree(&g, &moves, 4, DEFAULT_FIBER_CAP).unwrap().generates);
        let level = CutSpace::new(&g).fibers(4, DEFAULT_FIBER_CAP).unwrap();
        let (_, members) = level.groups.iter().max_by_key(|(_, m)| m.len()).unwrap();
        let start = &level.monomials[members[0]];
        let t0 = CutTable::from_monomial(g.clone(), start).unwrap();
        let p = SampleParams { steps: 50_000, burn_in: 0, thin: 1, seed: 3 };
        let seen: BTreeSet<CutMonomial> = sample_fiber(&g, &t0, &moves, &p).unwrap().iter().map(CutTable::to_monomial).collect();
        let fiber: BTreeSet<CutMonomial> = members.iter().map(|&i| level.monomials[i].clone()).collect();
        assert_eq!(seen, fiber, "{g:?}");
    }
}

#[test]
fn oracle_set_binomials_are_reversible_moves() {
    let g = catalog::cycle(4);
    let set: GeneratingSet = markov_basis_up_to_degree(&g, 2, DEFAULT_FIBER_CAP).unwrap();
    for b in set.binomials() {
        let mut t = CutTable::from_monomial(g.clone(), b.lhs()).unwrap();
        assert!(t.apply_move(b, Direction::Forward));
        assert_eq!(t.to_monomial(), *b.rhs());
        assert!(t.apply_move(b, Direction::Backward));
        assert_eq!(t.to_monomial(), *b.lhs());
    }
}
