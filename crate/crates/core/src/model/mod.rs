//! Domain types for belief networks and influence diagrams.

mod diagram;
mod evidence;
pub(crate) mod graph;
mod network;
mod node;
mod validate;

pub use diagram::{DiagramNode, InfluenceDiagram};
pub use evidence::Evidence;
pub use network::{topological_order, BeliefNetwork};
pub(crate) use network::Structure;
pub use node::{config_count, config_index, configurations, ChanceNode, Configurations, DecisionNode, ValueNode};
pub use validate::{
    validate_bn, validate_bn_with_tolerance, validate_id, validate_id_with_tolerance, Rule,
    ValidationReport, Violation,
};
