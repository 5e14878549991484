use std::io::{BufRead, Write};

use decnet::approx::{logic_sample, sample_decide, SampleDecision, SampleOptions};
use decnet::decide::{contingent_policy, mev, DecisionOutcome, Policy};
use decnet::exact::{Enumeration, InferenceEngine, VariableElimination};
use decnet::fixtures::bundled;
use decnet::format::{parse_document, parse_evidence, serialize_network, Document};
use decnet::model::{validate_bn_with_tolerance, validate_id_with_tolerance, ValidationReport};
use decnet::scalar::format_significant;
use decnet::transform::id_to_bn_with_tolerance;
use decnet::{BeliefNetwork, CompiledDecisionProblem, Error, Evidence, Result};
use serde_json::{json, Value};

use crate::output::{fixed, num, Output};
use crate::{session, Cli, Command, EngineKind, EvidenceArgs};

pub fn dispatch<R: BufRead, W: Write>(cli: &Cli, input: &mut R, out: &mut W) -> Result<i32> {
    let output = match &cli.command {
        Command::Validate { file } => validate(&read(file)?, cli.tolerance)?,
        Command::Infer {
            file,
            target,
            engine,
            evidence,
        } => {
            let network = network_of(load(cli, file)?, cli.tolerance)?;
            infer(&network, target, *engine, &gather(evidence)?)?
        }
        Command::Transform { file } => transform(&problem_of(load(cli, file)?, cli.tolerance)?),
        Command::Solve {
            file,
            evidence,
            hypothetical,
        } => {
            let problem = problem_of(load(cli, file)?, cli.tolerance)?;
            let evidence = gather(evidence)?;
            let hypotheticals = bindings(hypothetical)?;
            let outcome = mev(&problem, &evidence, &hypotheticals, &VariableElimination)?;
            Output::ok(solve_text(&outcome), solve_json(&outcome, &evidence, &hypotheticals))
        }
        Command::Policy { file, evidence } => {
            let problem = problem_of(load(cli, file)?, cli.tolerance)?;
            let policy = contingent_policy(&problem, &gather(evidence)?, &VariableElimination)?;
            Output::ok(policy.to_string(), policy_json(&policy))
        }
        Command::Sample {
            file,
            target,
            n,
            seed,
            evidence,
        } => {
            let network = network_of(load(cli, file)?, cli.tolerance)?;
            sample(&network, target, &gather(evidence)?, *n, *seed)?
        }
        Command::SampleSolve {
            file,
            max_samples,
            confidence,
            batch,
            seed,
            evidence,
        } => {
            let problem = problem_of(load(cli, file)?, cli.tolerance)?;
            let options = SampleOptions {
                batch: *batch,
                max_samples: *max_samples,
                confidence: *confidence,
                seed: *seed,
            };
            sample_solve_output(&sample_decide(&problem, &gather(evidence)?, &options)?)
        }
        Command::Session {
            file,
            seed,
            evidence,
        } => {
            let problem = problem_of(load(cli, file)?, cli.tolerance)?;
            return session::run(cli.json, problem, gather(evidence)?, *seed, input, out);
        }
    };
    Ok(output.emit(cli.json, out))
}

/// Document text for a bundled name or a path.
fn read(file: &str) -> Result<String> {
    if let Some(text) = bundled(file) {
        return Ok(text.to_string());
    }
    std::fs::read_to_string(file).map_err(|e| Error::Usage(format!("cannot read `{file}`: {e}")))
}

fn check(document: &Document, tolerance: f64) -> ValidationReport {
    match document {
        Document::Network(n) => validate_bn_with_tolerance(n, &tolerance),
        Document::Diagram(d) => validate_id_with_tolerance(d, &tolerance),
    }
}

/// Parses and validates.
fn load(cli: &Cli, file: &str) -> Result<Document> {
    let document = parse_document::<f64>(&read(file)?)?;
    let report = check(&document, cli.tolerance);
    if !report.is_ok() {
        return Err(Error::Invalid(report));
    }
    Ok(document)
}

fn network_of(document: Document, tolerance: f64) -> Result<BeliefNetwork> {
    match document {
        Document::Network(n) => Ok(n),
        Document::Diagram(d) => Ok(id_to_bn_with_tolerance(&d, &tolerance)?.network),
    }
}

pub(crate) fn problem_of(document: Document, tolerance: f64) -> Result<CompiledDecisionProblem> {
    id_to_bn_with_tolerance(&document.into_diagram()?, &tolerance)
}

pub(crate) fn bindings(items: &[String]) -> Result<Evidence> {
    let mut evidence = Evidence::new();
    for item in items {
        let (node, state) = Evidence::parse_binding(item)?;
        evidence.bind(node, state)?;
    }
    Ok(evidence)
}

fn gather(args: &EvidenceArgs) -> Result<Evidence> {
    let mut evidence = bindings(&args.evidence)?;
    if let Some(path) = &args.evidence_file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Usage(format!("cannot read `{}`: {e}", path.display())))?;
        for (node, state) in parse_evidence(&text)?.iter() {
            evidence.bind(node, state)?;
        }
    }
    Ok(evidence)
}

fn given(evidence: &Evidence) -> String {
    if evidence.is_empty() {
        String::new()
    } else {
        format!(" | {evidence}")
    }
}

fn validate(text: &str, tolerance: f64) -> Result<Output> {
    let document = parse_document::<f64>(text)?;
    let report = check(&document, tolerance);
    let kind = match document {
        Document::Network(_) => "network",
        Document::Diagram(_) => "diagram",
    };
    let mut text = format!("{kind}: {report}\n");
    if !report.is_ok() {
        text = format!("{kind}: {} violation(s)\n{report}\n", report.violations.len());
    }
    Ok(Output {
        text,
        json: json!({ "kind": kind, "valid": report.is_ok(), "violations": report.violations }),
        code: if report.is_ok() { 0 } else { 2 },
    })
}

fn infer(network: &BeliefNetwork, target: &str, engine: EngineKind, evidence: &Evidence) -> Result<Output> {
    let (node, state) = match target.split_once('=') {
        Some((n, s)) => (n.trim(), Some(s.trim())),
        None => (target.trim(), None),
    };
    let result = match engine {
        EngineKind::Ve => VariableElimination.posterior(network, node, evidence)?,
        EngineKind::Enum => Enumeration.posterior(network, node, evidence)?,
    };
    let selected: Vec<usize> = match state {
        Some(s) => vec![result
            .states
            .iter()
            .position(|x| x == s)
            .ok_or_else(|| Error::UnknownState {
                node: node.to_string(),
                state: s.to_string(),
            })?],
        None => (0..result.states.len()).collect(),
    };
    let mut text = String::new();
    for &i in &selected {
        text.push_str(&format!(
            "P({node}={}{}) = {}\n",
            result.states[i],
            given(evidence),
            fixed(result.distribution[i])
        ));
    }
    let mut json = json!({
        "target": node,
        "evidence": evidence,
        "engine": match engine { EngineKind::Ve => "ve", EngineKind::Enum => "enum" },
        "distribution": result
            .states
            .iter()
            .zip(&result.distribution)
            .map(|(s, p)| json!({ "state": s, "probability": num(*p) }))
            .collect::<Vec<_>>(),
        "evidence_probability": num(result.evidence_probability),
    });
    if let Some(s) = state {
        json["state"] = json!(s);
        json["probability"] = num(result.distribution[selected[0]]);
    }
    Ok(Output::ok(text, json))
}

fn transform(problem: &CompiledDecisionProblem) -> Output {
    let network = serialize_network(&problem.network);
    let summary = format!(
        "k1 = {}, k2 = {}, L = {}",
        format_significant(problem.k1),
        format_significant(problem.k2),
        problem.decisions
    );
    Output::ok(
        format!("{network}\n{summary}\n"),
        json!({
            "network": network,
            "k1": problem.k1,
            "k2": problem.k2,
            "decision_list": problem.decisions.to_string(),
            "value_node": problem.value_node,
        }),
    )
}

pub(crate) fn solve_text(outcome: &DecisionOutcome) -> String {
    let mut text = format!(
        "decision {} = {}, MEV = {}\n",
        outcome.decision,
        outcome.first_decision,
        fixed(outcome.mev)
    );
    for (alt, value) in &outcome.per_alternative {
        text.push_str(&format!("  {alt}: EV = {}\n", fixed(*value)));
    }
    text
}

pub(crate) fn solve_json(outcome: &DecisionOutcome, evidence: &Evidence, hypotheticals: &Evidence) -> Value {
    json!({
        "decision": outcome.decision,
        "alternative": outcome.first_decision,
        "mev": num(outcome.mev),
        "per_alternative": outcome
            .per_alternative
            .iter()
            .map(|(a, v)| json!({ "alternative": a, "expected_value": num(*v) }))
            .collect::<Vec<_>>(),
        "evidence": evidence,
        "hypotheticals": hypotheticals,
    })
}

pub(crate) fn policy_json(policy: &Policy) -> Value {
    json!({
        "rules": policy
            .rules
            .iter()
            .map(|r| json!({
                "decision": r.decision,
                "predecessors": r.predecessors,
                "entries": r
                    .entries
                    .iter()
                    .map(|(state, e)| json!({
                        "state": state,
                        "alternative": e.alternative,
                        "expected_value": num(e.expected_value),
                    }))
                    .collect::<Vec<_>>(),
            }))
            .collect::<Vec<_>>(),
    })
}

fn sample(network: &BeliefNetwork, target: &str, evidence: &Evidence, n: u64, seed: u64) -> Result<Output> {
    let (node, state) = Evidence::parse_binding(target)?;
    let e = logic_sample(network, (&node, &state), evidence, n, seed)?;
    let text = format!(
        "P({node}={state}{}) ~ {}\n  standard error {}, accepted {} of {} draws, seed {}\n",
        given(evidence),
        fixed(e.estimate),
        fixed(e.standard_error),
        e.accepted,
        e.drawn,
        e.seed
    );
    let json = json!({
        "target": node,
        "state": state,
        "evidence": evidence,
        "estimate": num(e.estimate),
        "standard_error": num(e.standard_error),
        "accepted": e.accepted,
        "drawn": e.drawn,
        "seed": e.seed,
    });
    Ok(Output::ok(text, json))
}

pub(crate) fn sample_solve_output(d: &SampleDecision) -> Output {
    let drawn = d.alternatives.iter().map(|a| a.probability.drawn).max().unwrap_or(0);
    let mut text = format!(
        "decision {} = {} ({})\n",
        d.decision,
        d.chosen,
        if d.separated {
            "separated".to_string()
        } else {
            format!("not separated after {drawn} draws per alternative")
        }
    );
    for a in &d.alternatives {
        text.push_str(&format!(
            "  {}: P(V=T) = {} (SE {}), EV = {} (SE {}), accepted {} of {}\n",
            a.alternative,
            fixed(a.probability.estimate),
            fixed(a.probability.standard_error),
            fixed(a.expected_value),
            fixed(a.expected_value_se),
            a.probability.accepted,
            a.probability.drawn
        ));
    }
    let json = json!({
        "decision": d.decision,
        "alternative": d.chosen,
        "separated": d.separated,
        "z": num(d.z),
        "per_alternative": d
            .alternatives
            .iter()
            .map(|a| json!({
                "alternative": a.alternative,
                "estimate": num(a.probability.estimate),
                "standard_error": num(a.probability.standard_error),
                "expected_value": num(a.expected_value),
                "expected_value_se": num(a.expected_value_se),
                "accepted": a.probability.accepted,
                "drawn": a.probability.drawn,
            }))
            .collect::<Vec<_>>(),
    });
    Output {
        text,
        json,
        code: if d.separated { 0 } else { 4 },
    }
}
