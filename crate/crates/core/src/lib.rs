//! Layered feed-forward networks under random forward-edge rewiring.
//!
//! - [`topology`] builds the fully inter-layer-connected network and rewires it.
//! - [`metrics`] measures global and local efficiency under two neighborhood
//!   definitions.
//! - [`learning`] trains the rewired DAG with online back-propagation.
//! - [`harness`] runs seeded ensemble sweeps and aggregates them into CSV rows.

pub mod error;
pub mod harness;
pub mod learning;
pub mod metrics;
pub mod topology;

pub use error::{Error, Result};
pub use harness::{Statistic, SweepRecord};
pub use learning::{Pattern, TrainingConfig, TrainingResult, TrainingSet, WeightedNetwork};
pub use metrics::{EfficiencyReport, NeighborhoodSubgraph, SubgraphDefinition};
pub use topology::{Edge, LayeredShape, NodeRef, RewiredGraph};
