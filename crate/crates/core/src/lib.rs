//! Balanced sparse cuts via expander embedding.
//!
//! The pipeline: embed a random or explicit expander `H` into the input graph
//! `G` with multiplicative weights over an APSP oracle; if too many edges of
//! `H` cannot be routed on short paths, the final weights separate some pair
//! of far-apart vertices and ball growing extracts a thin, sparse layer.
//! Otherwise the routed part of `H` certifies that `G` expands.

pub mod apsp;
pub mod cut_extract;
pub mod embed;
pub mod error;
pub mod expander;
pub mod gen;
pub mod graph;
pub mod io;
pub mod reductions;
pub mod report;
pub mod thin_layer;
pub mod verify;

pub use apsp::{ApspOracle, DijkstraFactory, DijkstraOracle, OracleFactory, OracleStats};
pub use embed::{separate_or_certify, EmbedResult, EmbedRun, Embedding, MwuConfig};
pub use error::{Error, Result};
pub use expander::{ExpanderMode, ExpanderSpec};
pub use graph::{conductance, sparsity, Cut, EdgeId, EdgeWeights, Graph, VertexId};
pub use thin_layer::{find_thin_layer, ThinLayer};
pub use cut_extract::{certificate_lower_bound, sparse_cut_or_certify, CutOrCert, SparseCutConfig, SparseCutRun};
pub use reductions::{conductance_to_sparsity_graph, low_conductance_cut_or_certify, transform_cut, GadgetMap};
pub use report::{verify_report, Report};
