//! Topological analysis of payment-channel networks.
//!
//! * [`graph`]: immutable simple graph, components, bridges, distances.
//! * [`ingest`]: snapshot and edge-list parsers, synthetic generators.
//! * [`metrics`]: summary statistics, centralities and clustering.
//! * [`powerlaw`]: discrete power-law fitting with KS-based goodness of fit.
//! * [`robustness`]: percolation under random failures and targeted attacks.

pub mod error;
pub mod format;
pub mod graph;
pub mod ingest;
pub mod metrics;
pub mod powerlaw;
pub mod robustness;
pub mod rng;

pub use error::{Error, Result};
pub use graph::{DistanceSummary, Edge, Graph, NodeId};
