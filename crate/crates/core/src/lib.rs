//! Covers of sofic shifts built from labeled graph presentations.
//!
//! A presentation is a finite [`LabeledGraph`]. From it the crate derives the
//! future (Krieger) cover by two independent routes, the Fischer cover of an
//! irreducible shift, the double-subset graph and the cover G′ cut out of it,
//! plus the invariants used to compare covers across recodings.

pub mod bitset;
pub mod covers;
pub mod error;
pub mod fixtures;
pub mod gprime;
pub mod graph;
pub mod invariants;
pub mod lang;
pub mod seq;

pub use bitset::VertexSet;
pub use covers::{Cover, CoverKind, KriegerRoute};
pub use error::{Error, Result};
pub use graph::{Edge, EdgeId, LabeledGraph, Letter, Vertex};
pub use lang::Limits;
pub use seq::{EpPath, EpSeq, Point};
