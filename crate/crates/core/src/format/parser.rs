use std::collections::HashMap;

use super::lexer::{tokenize, Position, Tok};
use super::{Document, DocumentSource};
use crate::error::{Error, Result};
use crate::model::{
    config_count, config_index, BeliefNetwork, ChanceNode, DecisionNode, DiagramNode,
    InfluenceDiagram, ValueNode,
};
use crate::scalar::Scalar;

type Spanned = (String, Position);

struct Row {
    left: Vec<Spanned>,
    right: Vec<Spanned>,
    at: Position,
}

enum RawNode {
    Chance {
        name: Spanned,
        states: Option<Vec<Spanned>>,
        parents: Vec<Spanned>,
        rows: Vec<Row>,
    },
    Decision {
        name: Spanned,
        alternatives: Option<Vec<Spanned>>,
        observes: Vec<Spanned>,
    },
    Value {
        name: Spanned,
        parents: Vec<Spanned>,
        rows: Vec<Row>,
    },
}

impl RawNode {
    fn name(&self) -> &Spanned {
        match self {
            RawNode::Chance { name, .. } | RawNode::Decision { name, .. } | RawNode::Value { name, .. } => name,
        }
    }

    fn labels(&self) -> Option<&[Spanned]> {
        match self {
            RawNode::Chance { states, .. } => states.as_deref(),
            RawNode::Decision { alternatives, .. } => alternatives.as_deref(),
            RawNode::Value { .. } => None,
        }
    }
}

struct Parser {
    toks: Vec<(Tok, Position)>,
    at: usize,
    end: Position,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.0)
    }

    fn pos(&self) -> Position {
        self.toks.get(self.at).map_or(self.end, |t| t.1)
    }

    fn next(&mut self) -> Option<(Tok, Position)> {
        let t = self.toks.get(self.at).cloned();
        self.at += 1;
        t
    }

    fn unexpected(&self, wanted: &str) -> Error {
        match self.toks.get(self.at) {
            Some((tok, p)) => p.error(format!("expected {wanted}, found {}", tok.describe())),
            None => self.end.error(format!("expected {wanted}, found end of input")),
        }
    }

    fn expect(&mut self, tok: Tok, wanted: &str) -> Result<Position> {
        if self.peek() == Some(&tok) {
            Ok(self.next().expect("peeked").1)
        } else {
            Err(self.unexpected(wanted))
        }
    }

    fn word(&mut self, wanted: &str) -> Result<Spanned> {
        match self.peek() {
            Some(Tok::Word(_)) => match self.next() {
                Some((Tok::Word(w), p)) => Ok((w, p)),
                _ => unreachable!(),
            },
            _ => Err(self.unexpected(wanted)),
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    /// `w1, w2, ...`, possibly empty.
    fn list(&mut self) -> Result<Vec<Spanned>> {
        let mut out = Vec::new();
        if !matches!(self.peek(), Some(Tok::Word(_))) {
            return Ok(out);
        }
        out.push(self.word("identifier")?);
        while self.eat(&Tok::Comma) {
            out.push(self.word("identifier")?);
        }
        Ok(out)
    }

    fn field_list(&mut self) -> Result<Vec<Spanned>> {
        self.expect(Tok::Colon, "`:`")?;
        let items = self.list()?;
        self.eat(&Tok::Semi);
        Ok(items)
    }

    fn rows(&mut self) -> Result<Vec<Row>> {
        self.expect(Tok::Open, "`{`")?;
        let mut rows = Vec::new();
        while !self.eat(&Tok::Close) {
            let at = self.pos();
            let left = self.list()?;
            self.expect(Tok::Arrow, "`->`")?;
            let right = self.list()?;
            if right.is_empty() {
                return Err(self.unexpected("a number"));
            }
            self.eat(&Tok::Semi);
            rows.push(Row { left, right, at });
        }
        Ok(rows)
    }

    fn block(&mut self) -> Result<RawNode> {
        let (keyword, kw_at) = self.word("`chance`, `decision` or `value`")?;
        let name = self.word("node name")?;
        self.expect(Tok::Open, "`{`")?;
        let node = match keyword.as_str() {
            "chance" => {
                let (mut states, mut parents, mut rows) = (None, Vec::new(), Vec::new());
                while !self.eat(&Tok::Close) {
                    let (field, at) = self.word("`states`, `parents` or `cpt`")?;
                    match field.as_str() {
                        "states" => states = Some(self.field_list()?),
                        "parents" => parents = self.field_list()?,
                        "cpt" => rows.extend(self.rows()?),
                        other => return Err(at.error(format!("unknown field `{other}` in chance block"))),
                    }
                }
                RawNode::Chance { name, states, parents, rows }
            }
            "decision" => {
                let (mut alternatives, mut observes) = (None, Vec::new());
                while !self.eat(&Tok::Close) {
                    let (field, at) = self.word("`alternatives` or `observes`")?;
                    match field.as_str() {
                        "alternatives" => alternatives = Some(self.field_list()?),
                        "observes" => observes = self.field_list()?,
                        other => return Err(at.error(format!("unknown field `{other}` in decision block"))),
                    }
                }
                RawNode::Decision { name, alternatives, observes }
            }
            "value" => {
                let (mut parents, mut rows) = (Vec::new(), Vec::new());
                while !self.eat(&Tok::Close) {
                    let (field, at) = self.word("`parents` or `table`")?;
                    match field.as_str() {
                        "parents" => parents = self.field_list()?,
                        "table" => rows.extend(self.rows()?),
                        other => return Err(at.error(format!("unknown field `{other}` in value block"))),
                    }
                }
                RawNode::Value { name, parents, rows }
            }
            other => return Err(kw_at.error(format!("unknown block `{other}`"))),
        };
        Ok(node)
    }
}

fn number<T: Scalar>(text: &Spanned) -> Result<T> {
    T::parse_decimal(&text.0).ok_or_else(|| text.1.error(format!("`{}` is not a number", text.0)))
}

/// Lays `rows` out in configuration order, checking coverage and arity.
fn tabulate<T: Scalar>(
    owner: &Spanned,
    parents: &[Spanned],
    parent_labels: &[&[Spanned]],
    rows: &[Row],
    width: usize,
) -> Result<Vec<Vec<T>>> {
    let cards: Vec<usize> = parent_labels.iter().map(|l| l.len()).collect();
    let mut table: Vec<Option<Vec<T>>> = vec![None; config_count(&cards)];
    for row in rows {
        if row.left.len() != parents.len() {
            return Err(row.at.error(format!(
                "row of `{}` names {} parent states, expected {}",
                owner.0,
                row.left.len(),
                parents.len()
            )));
        }
        let mut config = Vec::with_capacity(parents.len());
        for (k, (label, at)) in row.left.iter().enumerate() {
            let s = parent_labels[k]
                .iter()
                .position(|l| &l.0 == label)
                .ok_or_else(|| at.error(format!("`{}` has no state `{label}`", parents[k].0)))?;
            config.push(s);
        }
        if row.right.len() != width {
            return Err(row.at.error(format!(
                "row of `{}` has {} entries, expected {width}",
                owner.0,
                row.right.len()
            )));
        }
        let values = row.right.iter().map(number).collect::<Result<Vec<T>>>()?;
        let slot = &mut table[config_index(&config, &cards)];
        if slot.is_some() {
            return Err(row.at.error(format!("duplicate row for `{}`", owner.0)));
        }
        *slot = Some(values);
    }
    table
        .into_iter()
        .enumerate()
        .map(|(i, row)| {
            row.ok_or_else(|| {
                owner.1.error(format!(
                    "`{}` is missing row {} of {}",
                    owner.0,
                    i + 1,
                    config_count(&cards)
                ))
            })
        })
        .collect()
}

fn names(list: &[Spanned]) -> Vec<String> {
    list.iter().map(|s| s.0.clone()).collect()
}

pub(super) fn parse<T: Scalar>(text: &str) -> Result<DocumentSource<T>> {
    let toks = tokenize(text);
    let end = Position {
        line: text.lines().count().max(1),
        column: text.lines().last().map_or(1, |l| l.chars().count() + 1),
    };
    let mut p = Parser { toks, at: 0, end };

    let mut name = "unnamed".to_string();
    if p.peek() == Some(&Tok::Word("network".into())) {
        p.next();
        name = p.word("network name")?.0;
    }
    let mut raw = Vec::new();
    while p.peek().is_some() {
        raw.push(p.block()?);
    }

    let mut by_name: HashMap<&str, &RawNode> = HashMap::new();
    for node in &raw {
        let (n, at) = node.name();
        if by_name.insert(n.as_str(), node).is_some() {
            return Err(at.error(format!("duplicate node `{n}`")));
        }
    }
    let labels_of = |parent: &Spanned| -> Result<&[Spanned]> {
        match by_name.get(parent.0.as_str()) {
            None => Err(parent.1.error(format!("unknown node `{}`", parent.0))),
            Some(node) => node
                .labels()
                .ok_or_else(|| parent.1.error(format!("`{}` has no states to condition on", parent.0))),
        }
    };

    let mut positions = HashMap::new();
    let mut nodes = Vec::with_capacity(raw.len());
    for node in &raw {
        positions.insert(node.name().0.clone(), node.name().1);
        nodes.push(match node {
            RawNode::Chance { name, states, parents, rows } => {
                let states = states
                    .as_ref()
                    .ok_or_else(|| name.1.error(format!("chance node `{}` declares no states", name.0)))?;
                let labels = parents.iter().map(labels_of).collect::<Result<Vec<_>>>()?;
                let cpt = tabulate(name, parents, &labels, rows, states.len())?;
                DiagramNode::Chance(ChanceNode {
                    name: name.0.clone(),
                    states: names(states),
                    parents: names(parents),
                    cpt,
                })
            }
            RawNode::Decision { name, alternatives, observes } => {
                let alternatives = alternatives.as_ref().ok_or_else(|| {
                    name.1.error(format!("decision `{}` declares no alternatives", name.0))
                })?;
                for o in observes {
                    if !by_name.contains_key(o.0.as_str()) {
                        return Err(o.1.error(format!("unknown node `{}`", o.0)));
                    }
                }
                DiagramNode::Decision(DecisionNode {
                    name: name.0.clone(),
                    alternatives: names(alternatives),
                    observes: names(observes),
                })
            }
            RawNode::Value { name, parents, rows } => {
                let labels = parents.iter().map(labels_of).collect::<Result<Vec<_>>>()?;
                let table = tabulate::<T>(name, parents, &labels, rows, 1)?;
                DiagramNode::Value(ValueNode {
                    name: name.0.clone(),
                    parents: names(parents),
                    table: table.into_iter().flatten().collect(),
                })
            }
        });
    }

    let is_diagram = nodes
        .iter()
        .any(|n| !matches!(n, DiagramNode::Chance(_)));
    let document = if is_diagram {
        Document::Diagram(InfluenceDiagram::new(name, nodes))
    } else {
        let chance = nodes
            .into_iter()
            .map(|n| match n {
                DiagramNode::Chance(c) => c,
                _ => unreachable!(),
            })
            .collect();
        Document::Network(BeliefNetwork::new(name, chance))
    };
    Ok(DocumentSource {
        text: text.to_string(),
        document,
        positions,
    })
}
