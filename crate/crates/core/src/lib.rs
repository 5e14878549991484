//! Influence diagrams solved with belief-network inference.
//!
//! An [`InfluenceDiagram`] is compiled by [`transform::id_to_bn`] into an
//! ordinary [`BeliefNetwork`]: decisions become root chance nodes and the
//! value node becomes a binary node whose probability of `T` is an affine
//! image of the value function. Maximum expected value then reduces to
//! maximizing `P(V = T | ...)` with any inference engine, exact
//! ([`exact`]) or sampled ([`approx`]).
//!
//! Every algorithm is generic over [`Scalar`]; the aliases below fix the
//! common instantiations.

pub mod approx;
pub mod decide;
pub mod error;
pub mod exact;
pub mod fixtures;
pub mod format;
pub mod generate;
pub mod model;
pub mod scalar;
pub mod transform;

pub use error::{Error, Result};
pub use model::{BeliefNetwork, ChanceNode, DecisionNode, DiagramNode, Evidence, InfluenceDiagram, ValueNode};
pub use scalar::Scalar;
pub use transform::CompiledDecisionProblem;

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;

pub type BeliefNetworkF64 = BeliefNetwork<f64>;
pub type BeliefNetworkF32 = BeliefNetwork<f32>;
pub type BeliefNetworkExact = BeliefNetwork<Rational>;

pub type InfluenceDiagramF64 = InfluenceDiagram<f64>;
pub type InfluenceDiagramF32 = InfluenceDiagram<f32>;
pub type InfluenceDiagramExact = InfluenceDiagram<Rational>;

pub type CompiledProblemF64 = CompiledDecisionProblem<f64>;
pub type CompiledProblemF32 = CompiledDecisionProblem<f32>;
pub type CompiledProblemExact = CompiledDecisionProblem<Rational>;
