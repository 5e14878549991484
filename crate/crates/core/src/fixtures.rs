//! Bundled example documents.
//!
//! `fig1` is the three-node chain A -> B -> C, `fig2` adds the decision D1
//! (observing C) and the value node V over (D1, A), and `fig3` is the belief
//! network that `fig2` compiles into.

use crate::error::Result;
use crate::format::parse_document;
use crate::model::{BeliefNetwork, InfluenceDiagram};
use crate::scalar::Scalar;

pub const FIG1: &str = include_str!("../fixtures/fig1.bn");
pub const FIG2: &str = include_str!("../fixtures/fig2.id");
pub const FIG3: &str = include_str!("../fixtures/fig3.bn");

/// Looks up a bundled document by name (`fig1`, `fig2`, `fig3`).
pub fn bundled(name: &str) -> Option<&'static str> {
    match name {
        "fig1" => Some(FIG1),
        "fig2" => Some(FIG2),
        "fig3" => Some(FIG3),
        _ => None,
    }
}

pub fn fig1<T: Scalar>() -> Result<BeliefNetwork<T>> {
    parse_document::<T>(FIG1)?.into_network()
}

pub fn fig2<T: Scalar>() -> Result<InfluenceDiagram<T>> {
    parse_document::<T>(FIG2)?.into_diagram()
}

pub fn fig3<T: Scalar>() -> Result<BeliefNetwork<T>> {
    parse_document::<T>(FIG3)?.into_network()
}
