use std::collections::HashMap;
use std::fmt::Write;

use crate::model::{configurations, BeliefNetwork, ChanceNode, DecisionNode, DiagramNode, InfluenceDiagram, ValueNode};
use crate::scalar::{format_significant, Scalar};

type Labels<'a> = HashMap<&'a str, &'a [String]>;

fn header(out: &mut String, name: &str) {
    out.push_str("# format: 1\n");
    let _ = writeln!(out, "network {name}");
}

fn number<T: Scalar>(value: &T) -> String {
    format_significant(value.to_f64_lossy())
}

fn rows<'a, T: Scalar + 'a>(
    out: &mut String,
    keyword: &str,
    parent_labels: &[&[String]],
    rows: impl Iterator<Item = &'a [T]>,
) {
    let cards: Vec<usize> = parent_labels.iter().map(|l| l.len()).collect();
    let _ = writeln!(out, "  {keyword} {{");
    for (config, row) in configurations(&cards).zip(rows) {
        let left: Vec<&str> = config
            .iter()
            .enumerate()
            .map(|(k, &s)| parent_labels[k][s].as_str())
            .collect();
        let right: Vec<String> = row.iter().map(number).collect();
        out.push_str("    ");
        if !left.is_empty() {
            out.push_str(&left.join(", "));
            out.push(' ');
        }
        let _ = writeln!(out, "-> {};", right.join(", "));
    }
    out.push_str("  }\n");
}

fn chance<T: Scalar>(out: &mut String, node: &ChanceNode<T>, labels: &Labels) {
    let _ = writeln!(out, "\nchance {} {{", node.name);
    let _ = writeln!(out, "  states: {};", node.states.join(", "));
    if !node.parents.is_empty() {
        let _ = writeln!(out, "  parents: {};", node.parents.join(", "));
    }
    let parent_labels: Vec<&[String]> = node.parents.iter().map(|p| labels.get(p.as_str()).copied().unwrap_or(&[])).collect();
    rows(out, "cpt", &parent_labels, node.cpt.iter().map(Vec::as_slice));
    out.push_str("}\n");
}

fn decision(out: &mut String, node: &DecisionNode) {
    let _ = writeln!(out, "\ndecision {} {{", node.name);
    let _ = writeln!(out, "  alternatives: {};", node.alternatives.join(", "));
    if !node.observes.is_empty() {
        let _ = writeln!(out, "  observes: {};", node.observes.join(", "));
    }
    out.push_str("}\n");
}

fn value<T: Scalar>(out: &mut String, node: &ValueNode<T>, labels: &Labels) {
    let _ = writeln!(out, "\nvalue {} {{", node.name);
    if !node.parents.is_empty() {
        let _ = writeln!(out, "  parents: {};", node.parents.join(", "));
    }
    let parent_labels: Vec<&[String]> = node.parents.iter().map(|p| labels.get(p.as_str()).copied().unwrap_or(&[])).collect();
    rows(out, "table", &parent_labels, node.table.chunks(1));
    out.push_str("}\n");
}

/// Canonical text for a belief network. The network must be valid.
pub fn serialize_network<T: Scalar>(network: &BeliefNetwork<T>) -> String {
    let mut out = String::new();
    header(&mut out, network.name());
    let labels: Labels = network
        .nodes()
        .iter()
        .map(|n| (n.name.as_str(), n.states.as_slice()))
        .collect();
    for node in network.nodes() {
        chance(&mut out, node, &labels);
    }
    out
}

/// Canonical text for an influence diagram. The diagram must be valid.
pub fn serialize_diagram<T: Scalar>(diagram: &InfluenceDiagram<T>) -> String {
    let mut out = String::new();
    header(&mut out, diagram.name());
    let labels: Labels = diagram
        .nodes()
        .iter()
        .filter_map(|n| Some((n.name(), n.labels()?)))
        .collect();
    for node in diagram.nodes() {
        match node {
            DiagramNode::Chance(c) => chance(&mut out, c, &labels),
            DiagramNode::Decision(d) => decision(&mut out, d),
            DiagramNode::Value(v) => value(&mut out, v, &labels),
        }
    }
    out
}
