//! Small-world torus graphs: a `(2n+1)×(2n+1)` torus plus random long-range
//! edges whose probability decays as a power of torus distance.
//!
//! The crate samples such graphs, evolves the lazy random walk exactly,
//! measures mixing times and spectral gaps, and analyses conductance and
//! expansion of vertex sets. The [`harness`] module drives parameter sweeps
//! and writes tidy CSV or JSON.

pub mod error;
pub mod expansion;
pub mod generator;
pub mod graph;
pub mod harness;
pub mod torus;
pub mod vertex_set;
pub mod walk;

pub use error::{Error, Result};
pub use generator::{compute_z, sample_graph, sample_graph_naive, ModelParams};
pub use graph::SmallWorldGraph;
pub use torus::{LPartition, Torus, TorusCoord};
pub use vertex_set::VertexSet;
