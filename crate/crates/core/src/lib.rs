//! Sparse decompositions of graphs obtained from sparse graphs by first-order
//! interpretations.
//!
//! The crate builds, decodes and checks four kinds of objects:
//!
//! * [`bush::Bush`]: equal-depth labeled trees with same-level info arcs,
//!   built from a weak-reachability order on a sparse graph;
//! * [`quasibush::SeparatorQuasiBush`] and [`quasibush::QuasiBush`]: trees with
//!   leaf-to-node pointers whose internal nodes carry small separators;
//! * [`kernel::Kernel`]: small monadic lifts of induced subgraphs that preserve a
//!   formula on a target set;
//! * [`covers::CoverFamily`]: low-treedepth and low-shrubdepth covers.
//!
//! Every construction is paired with a brute-force check, so outputs can be
//! certified exactly on small inputs.
//!
//! With the default `parallel` feature the per-vertex and per-pair sweeps run on
//! rayon's thread pool; without it the same code runs sequentially.

pub mod bush;
pub mod covers;
pub mod error;
pub mod gen;
pub mod graph;
pub mod kernel;
pub mod logic;
pub mod par;
pub mod quasibush;
pub mod wcol;

pub use error::{Error, Result};
pub use graph::{ColoredGraph, DirectedGraph, TreedepthForest};
pub use logic::Formula;
pub use wcol::VertexOrder;
