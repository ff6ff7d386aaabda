//! Named graph families and exhaustive small-graph enumeration.

use std::collections::BTreeSet;

use crate::graph::{Edge, Graph};

pub fn path(n: usize) -> Graph {
    Graph::new(n, (1..n).map(|i| (i - 1, i))).expect("path")
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycle needs at least 3 vertices");
    Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle")
}

pub fn complete(n: usize) -> Graph {
    Graph::new(n, (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)))).expect("complete")
}

pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    Graph::new(a + b, (0..a).flat_map(|x| (a..a + b).map(move |y| (x, y)))).expect("bipartite")
}

/// Vertices 0 and 1 joined by internally disjoint paths of the given lengths.
/// At most one length may be 1.
pub fn theta(lengths: &[usize]) -> Graph {
    let mut n = 2;
    let mut edges = Vec::new();
    for &len in lengths {
        assert!(len >= 1);
        let mut prev = 0;
        for _ in 1..len {
            edges.push((prev, n));
            prev = n;
            n += 1;
        }
        edges.push((prev, 1));
    }
    Graph::new(n, edges).expect("theta")
}

/// Two triangles sharing vertex 0.
pub fn bowtie() -> Graph {
    Graph::new(5, [(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)]).expect("bowtie")
}

/// Hub 0 joined to every vertex of a rim cycle on `1..=rim`.
pub fn wheel(rim: usize) -> Graph {
    let spokes = (1..=rim).map(|i| (0, i));
    let rim_edges = (0..rim).map(|i| (1 + i, 1 + (i + 1) % rim));
    Graph::new(rim + 1, spokes.chain(rim_edges)).expect("wheel")
}

pub fn k4_minus_edge() -> Graph {
    Graph::new(4, [(0, 1), (0, 3), (1, 2), (1, 3), (2, 3)]).expect("k4 minus edge")
}

fn pair_table(n: usize) -> Vec<Edge> {
    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// One representative per isomorphism class of graphs on exactly `n`
/// vertices, each being the member with the smallest edge-pair mask.
/// Intended for `n <= 6`.
pub fn nonisomorphic_graphs(n: usize) -> Vec<Graph> {
    assert!((1..=6).contains(&n), "exhaustive enumeration supports 1..=6 vertices");
    let pairs = pair_table(n);
    let index = |a: usize, b: usize| pairs.iter().position(|&p| p == (a.min(b), a.max(b))).unwrap();
    let perm_maps: Vec<Vec<usize>> = permutations(n)
        .into_iter()
        .map(|p| pairs.iter().map(|&(a, b)| index(p[a], p[b])).collect())
        .collect();
    let m = pairs.len();
    let mut seen = vec![false; 1usize << m];
    let mut reps = BTreeSet::new();
    for mask in 0u32..(1u32 << m) {
        if seen[mask as usize] {
            continue;
        }
        let mut best = mask;
        for map in &perm_maps {
            let mut image = 0u32;
            for (i, &j) in map.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    image |= 1 << j;
                }
            }
            seen[image as usize] = true;
            best = best.min(image);
        }
        reps.insert(best);
    }
    reps.into_iter()
        .map(|mask| {
            let edges = (0..m).filter(|i| mask & (1 << i) != 0).map(|i| pairs[i]);
            Graph::new(n, edges).expect("enumerated graph")
        })
        .collect()
}

pub fn connected_nonisomorphic_graphs(n: usize) -> Vec<Graph> {
    nonisomorphic_graphs(n).into_iter().filter(Graph::is_connected).collect()
}
