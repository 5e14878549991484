//! Plain-text documents for networks, diagrams and evidence.
//!
//! ```text
//! # format: 1
//! network fig2
//!
//! chance A {
//!   states: T, F;
//!   cpt {
//!     -> 0.4, 0.6;
//!   }
//! }
//!
//! decision D1 {
//!   alternatives: Action1, Action2;
//!   observes: C;
//! }
//!
//! value V {
//!   parents: D1, A;
//!   table {
//!     Action1, T -> 4;
//!     ...
//!   }
//! }
//! ```
//!
//! `#` starts a comment. Whitespace is insignificant. A document containing
//! a `decision` or `value` block is an influence diagram; otherwise it is a
//! belief network. Decision blocks appear in decision order.

mod lexer;
mod parser;
mod writer;

use std::collections::HashMap;

pub use lexer::Position;
pub use writer::{serialize_diagram, serialize_network};

use crate::error::{Error, Result};
use crate::model::{BeliefNetwork, Evidence, InfluenceDiagram};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub enum Document<T = f64> {
    Network(BeliefNetwork<T>),
    Diagram(InfluenceDiagram<T>),
}

impl<T: Scalar> Document<T> {
    pub fn into_network(self) -> Result<BeliefNetwork<T>> {
        match self {
            Document::Network(n) => Ok(n),
            Document::Diagram(d) => Err(Error::usage(format!(
                "`{}` is an influence diagram, expected a belief network",
                d.name()
            ))),
        }
    }

    pub fn into_diagram(self) -> Result<InfluenceDiagram<T>> {
        match self {
            Document::Diagram(d) => Ok(d),
            Document::Network(n) => Err(Error::usage(format!(
                "`{}` is a belief network, expected an influence diagram",
                n.name()
            ))),
        }
    }
}

/// Parsed document with its source text and node positions.
#[derive(Debug, Clone)]
pub struct DocumentSource<T = f64> {
    pub text: String,
    pub document: Document<T>,
    pub positions: HashMap<String, Position>,
}

pub fn parse_source<T: Scalar>(text: &str) -> Result<DocumentSource<T>> {
    parser::parse(text)
}

pub fn parse_document<T: Scalar>(text: &str) -> Result<Document<T>> {
    parser::parse(text).map(|s| s.document)
}

/// Canonical text: declaration order, six significant digits, one row per
/// line.
pub fn serialize_document<T: Scalar>(document: &Document<T>) -> String {
    match document {
        Document::Network(n) => serialize_network(n),
        Document::Diagram(d) => serialize_diagram(d),
    }
}

/// Parses `Name = state` lines; a node bound twice is an error.
pub fn parse_evidence(text: &str) -> Result<Evidence> {
    let mut evidence = Evidence::new();
    for (i, line) in text.lines().enumerate() {
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let at = Position {
            line: i + 1,
            column: 1,
        };
        let (node, state) = Evidence::parse_binding(content).map_err(|e| at.error(e.to_string()))?;
        evidence.bind(node, state).map_err(|e| at.error(e.to_string()))?;
    }
    Ok(evidence)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate_bn, DiagramNode};

    const SMALL: &str = "
        # format: 1
        network small
        chance A { states: T, F; cpt { -> 0.4, 0.6; } }
        chance B {
          states: T, F; parents: A;
          cpt { F -> 0.1, 0.9; T -> 0.8, 0.2; }
        }
    ";

    fn parse_err(text: &str) -> String {
        match parse_document::<f64>(text) {
            Err(Error::Parse { message, .. }) => message,
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn rows_may_come_in_any_order() {
        let net = parse_document::<f64>(SMALL).unwrap().into_network().unwrap();
        assert_eq!(net.name(), "small");
        assert_eq!(net.node("B").unwrap().cpt, vec![vec![0.8, 0.2], vec![0.1, 0.9]]);
        assert!(validate_bn(&net).is_ok());
    }

    #[test]
    fn arity_error_for_short_row() {
        let msg = parse_err("chance X { states: a, b, c; cpt { -> 0.7, 0.2; } }");
        assert!(msg.contains("has 2 entries, expected 3"), "{msg}");
    }

    #[test]
    fn missing_and_duplicate_rows() {
        let msg = parse_err(
            "chance A { states: T, F; cpt { -> 0.5, 0.5; } }
             chance B { states: T, F; parents: A; cpt { T -> 0.5, 0.5; } }",
        );
        assert!(msg.contains("missing row"), "{msg}");
        let msg = parse_err(
            "chance A { states: T, F; cpt { -> 0.5, 0.5; -> 0.5, 0.5; } }",
        );
        assert!(msg.contains("duplicate row"), "{msg}");
    }

    #[test]
    fn unknown_references() {
        let msg = parse_err("chance B { states: T, F; parents: Q; cpt { T -> 0.5, 0.5; } }");
        assert!(msg.contains("unknown node `Q`"), "{msg}");
        let msg = parse_err(
            "chance A { states: T, F; cpt { -> 0.5, 0.5; } }
             chance B { states: T, F; parents: A; cpt { T -> 0.5, 0.5; X -> 0.5, 0.5; } }",
        );
        assert!(msg.contains("has no state `X`"), "{msg}");
    }

    #[test]
    fn duplicate_node_and_syntax_positions() {
        let err = parse_document::<f64>(
            "chance A { states: T, F; cpt { -> 0.5, 0.5; } }\nchance A { states: T, F; cpt { -> 0.5, 0.5; } }",
        )
        .unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 2,
                column: 8,
                message: "duplicate node `A`".into()
            }
        );
        let err = parse_document::<f64>("chance A { states T }").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, column: 19, .. }), "{err:?}");
    }

    #[test]
    fn forward_references_resolve() {
        let text = "chance B { states: T, F; parents: A; cpt { T -> 1, 0; F -> 0, 1; } }
                    chance A { states: T, F; cpt { -> 0.5, 0.5; } }";
        let net = parse_document::<f64>(text).unwrap().into_network().unwrap();
        assert_eq!(net.topological_order().unwrap(), vec!["A", "B"]);
    }

    #[test]
    fn decision_makes_a_diagram() {
        let text = "decision D { alternatives: a, b; }
                    value V { parents: D; table { a -> 1; b -> -2.5; } }";
        let d = parse_document::<f64>(text).unwrap().into_diagram().unwrap();
        assert!(matches!(&d.nodes()[0], DiagramNode::Decision(x) if x.observes.is_empty()));
        assert_eq!(d.value_node().unwrap().table, vec![1.0, -2.5]);
    }

    #[test]
    fn evidence_file() {
        let e = parse_evidence("# background\nC = T\n\nA=F # note\n").unwrap();
        assert_eq!(e.to_string(), "A=F, C=T");
        let err = parse_evidence("C = T\nC = F\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn serialization_round_trip() {
        let doc = parse_document::<f64>(SMALL).unwrap();
        let text = serialize_document(&doc);
        assert_eq!(parse_document::<f64>(&text).unwrap(), doc);
        assert_eq!(serialize_document(&parse_document::<f64>(&text).unwrap()), text);
    }

    #[test]
    fn parentless_row_form_and_rounding() {
        let net = BeliefNetwork::new(
            "thirds",
            vec![crate::model::ChanceNode::root("X", &["a", "b", "c"], vec![1.0 / 3.0; 3])],
        );
        let text = serialize_network(&net);
        let row = text.lines().find(|l| l.trim_start().starts_with("->")).unwrap();
        assert_eq!(row.trim(), "-> 0.333333, 0.333333, 0.333333;");
    }
}
