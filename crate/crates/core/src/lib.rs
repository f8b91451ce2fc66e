//! Constructive nowhere-zero 8-flows for 3-edge-connected, flow-admissible
//! signed graphs.
//!
//! The pipeline reduces an instance to a cubic core, selects an ordered list
//! of disjoint cycles covering the core, builds a `Z3` preflow along that list,
//! lifts it to an integer preflow through a perfect matching of an auxiliary
//! graph, and assembles the final flow as `2 * psi + tau`. Every stage can be
//! checked independently; brute-force oracles in [`oracle`] back the tests.

pub mod certificate;
pub mod error;
pub mod lift;
pub mod oracle;
pub mod pipeline;
pub mod preflow;
pub mod reduce;
pub mod select;
pub mod sigraph;
pub mod structure;

pub use error::{Error, Result};
pub use sigraph::{
    Dir, EdgeId, EdgeMap, EdgeRecord, IntFlow, Orientation, Sign, SignedGraph, VertexId,
    Z3Assignment, Z3,
};
