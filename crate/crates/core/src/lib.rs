//! Path covers of sparse random graphs via Hamilton M-cycles.
//!
//! The pipeline samples G(n, c/n), classifies its vertices, builds the
//! auxiliary graph G* with a matching M on the neighbours of degree-1
//! vertices, grows a Hamilton M-cycle of G* from a sparse random subgraph Γ₀
//! by rotation-extension with boosters, and translates the cycle back into a
//! path cover of G.

pub mod analytics;
pub mod classifier;
pub mod cover;
pub mod error;
pub mod expander;
pub mod graph;
pub mod hamilton;
pub mod matching;
pub mod pipeline;
pub mod reducer;
pub mod rng;

pub use error::{Error, Result};
pub use graph::{Graph, SampleParams, VertexSet};
pub use matching::Matching;
