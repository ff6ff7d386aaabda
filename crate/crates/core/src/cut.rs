//! Cuts `A | B` of a vertex set, stored as the side containing the lowest vertex.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::{self, VertexMask};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Unordered bipartition of `0..n`, keyed by the side that contains vertex 0.
/// Ordering is by the mask value.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cut(VertexMask);

impl Cut {
    /// Canonicalizes `side` against the vertex set `0..n`.
    pub fn from_side(side: VertexMask, n: usize) -> Cut {
        let all = bits::full(n);
        let side = side & all;
        if side & 1 != 0 {
            Cut(side)
        } else {
            Cut(all & !side)
        }
    }

    pub fn from_vertices(side: &[usize], n: usize) -> Result<Cut> {
        for &v in side {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
        }
        Ok(Cut::from_side(bits::mask_of(side), n))
    }

    /// The cut at position `index` of [`enumerate_cuts`].
    pub fn from_index(index: usize) -> Cut {
        Cut(((index as u64) << 1) | 1)
    }

    pub fn index(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn side(self) -> VertexMask {
        self.0
    }

    pub fn vertices(self) -> Vec<usize> {
        bits::to_vec(self.0)
    }

    pub fn separates(self, u: usize, v: usize) -> bool {
        ((self.0 >> u) ^ (self.0 >> v)) & 1 == 1
    }

    /// Is the cut defined on the vertex set `0..n`?
    pub fn fits(self, n: usize) -> bool {
        self.0 & !bits::full(n) == 0
    }
}

impl fmt::Debug for Cut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.vertices())
    }
}

impl Serialize for Cut {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.vertices().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cut {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let side = Vec::<usize>::deserialize(d)?;
        cut_from_listed_side(&side).map_err(serde::de::Error::custom)
    }
}

/// Parses the serialized form: the sorted vertex list of the side holding 0.
pub fn cut_from_listed_side(side: &[usize]) -> Result<Cut> {
    if !side.contains(&0) {
        return Err(Error::Parse(format!("cut side {side:?} must contain vertex 0")));
    }
    if let Some(&v) = side.iter().find(|&&v| v >= 64) {
        return Err(Error::VertexOutOfRange { vertex: v, n: 64 });
    }
    let mask = bits::mask_of(side);
    if mask.count_ones() as usize != side.len() {
        return Err(Error::Parse(format!("cut side {side:?} repeats a vertex")));
    }
    Ok(Cut(mask))
}

/// All `2^(n-1)` cuts of `g`, in ascending mask order.
pub fn enumerate_cuts(g: &Graph) -> Vec<Cut> {
    let count = 1usize << (g.vertex_count() - 1);
    (0..count).map(Cut::from_index).collect()
}

pub fn cut_count(n: usize) -> usize {
    1usize << (n - 1)
}

/// Restricts `c` to the vertex subset `s` and relabels onto `0..|s|` in
/// increasing vertex order; the result is canonical for `G[s]`.
pub fn restrict_cut(c: Cut, s: VertexMask) -> Result<Cut> {
    if s == 0 {
        return Err(Error::EmptySubset);
    }
    Ok(Cut::from_side(bits::compress(c.0, s), s.count_ones() as usize))
}

/// Embeds a cut of `G[within]` (local labels) as a side mask in global labels.
pub fn embed_side(local: Cut, within: VertexMask) -> VertexMask {
    bits::expand(local.0, within)
}

/// Combines a cut of `G[left]` and a cut of `G[right]` (both in local labels)
/// into a cut of the whole vertex set `0..n`. Returns `None` when they
/// disagree on the overlap.
pub fn glue_cuts(
    left_cut: Cut,
    left: VertexMask,
    right_cut: Cut,
    right: VertexMask,
    n: usize,
) -> Option<Cut> {
    let overlap = left & right;
    let a = embed_side(left_cut, left);
    let mut b = embed_side(right_cut, right);
    if let Some(w) = bits::lowest(overlap) {
        if (a ^ b) & bits::bit(w) != 0 {
            b = right & !b;
        }
    }
    if (a ^ b) & overlap != 0 {
        return None;
    }
    Some(Cut::from_side(a | b, n))
}
