//! Directed hyperbolicity, self-embeddings and monoid growth, measured on
//! finite windows of infinite digraphs.
//!
//! Every result in this crate is a claim about the window it was computed on:
//! lower bounds for constants, certificates that re-check on the window, or
//! explicit `Unknown`s.

pub mod digraph;
pub mod embedding;
pub mod error;
pub mod exec;
pub mod formats;
pub mod freeness;
pub mod gallery;
pub mod hyperbolicity;
pub mod monoid;
pub mod rays;

pub use digraph::{BallSide, DiGraph, DirectedPath, ExtDistance, GeodesicSet, RootCheck, Vertex};
pub use embedding::{Certificate, DirectionPrefix, PartialSelfEmbedding, OrbitConstants, Violation};
pub use error::{Error, Result};
pub use freeness::{AttractorKit, PingPongInstance};
pub use gallery::{Fixture, FixtureSpec};
pub use hyperbolicity::{Constants, GeodesicTriangle, ThinnessReport};
pub use monoid::{CayleyBall, GrowthTable, Presentation, RewriteSystem, Word};
pub use rays::{EquivalenceVerdict, RayKind, RayPrefix, RhoEstimate};
