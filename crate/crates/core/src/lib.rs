//! Cut ideals of graphs.
//!
//! The crate covers the monomial map from cut variables to edge variables,
//! a brute-force fiber oracle for generation questions, an explicit
//! construction of quadratic generating sets for graphs without a `K4`
//! minor, and a Markov-chain sampler for tables of cut counts with fixed
//! edge marginals.
//!
//! Vertices are numbered from 0. Texts that number the path `1-2-3-4` from
//! 1 correspond to vertices `0..=3` here.

pub mod algebra;
pub mod bits;
pub mod catalog;
pub mod construct;
pub mod cut;
pub mod error;
pub mod fiber;
pub mod glue;
pub mod graph;
pub mod oracle;
pub mod sampler;
pub mod sequence;
pub mod sp;
pub mod strategy;

pub use algebra::{
    binomial_in_kernel, height, phi_image, sort_by_height, Binomial, CutMonomial, Direction,
    EdgeExponentVector, GeneratingSet,
};
pub use cut::{enumerate_cuts, restrict_cut, Cut};
pub use error::{Error, Result};
pub use graph::{parse_graph, Graph};
