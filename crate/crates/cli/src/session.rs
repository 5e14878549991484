//! Line-oriented decision session.
//!
//! ```text
//! set Name=state     observe a chance node
//! unset Name         forget an observation
//! show               current evidence and the next decision
//! solve              best alternative for the next decision
//! policy             contingent policy for the remaining decisions
//! sample-solve       choose the next decision by sampling
//! commit Alt         record the next decision and move on
//! quit
//! ```
//!
//! Output depends only on the input lines and the seed, so a transcript
//! replays byte for byte.

use std::io::{BufRead, Write};

use decnet::approx::{sample_decide, SampleOptions};
use decnet::decide::{contingent_policy, mev};
use decnet::exact::VariableElimination;
use decnet::{CompiledDecisionProblem, Error, Evidence, Result};
use serde_json::json;

use crate::commands::{policy_json, sample_solve_output, solve_json, solve_text};
use crate::output::{exit_code, Output};

const HELP: &str = "commands: set Name=state, unset Name, show, solve, policy, sample-solve, commit Alternative, quit\n";

struct Session {
    problem: CompiledDecisionProblem,
    evidence: Evidence,
    seed: u64,
}

impl Session {
    fn next_decision(&self) -> Option<&str> {
        self.problem
            .decisions
            .entries
            .iter()
            .map(|e| e.decision.as_str())
            .find(|d| !self.evidence.contains(d))
    }

    fn is_decision(&self, name: &str) -> bool {
        self.problem.decisions.position(name).is_some()
    }

    fn show(&self) -> Output {
        let next = self.next_decision();
        let text = format!(
            "evidence: {}\nnext decision: {}\n",
            if self.evidence.is_empty() { "(none)".to_string() } else { self.evidence.to_string() },
            next.unwrap_or("(none)")
        );
        Output::ok(text, json!({ "evidence": self.evidence, "next_decision": next }))
    }

    fn execute(&mut self, line: &str) -> Result<Option<Output>> {
        let (command, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        let output = match command {
            "quit" | "exit" => return Ok(None),
            "help" => Output::ok(HELP.to_string(), json!({ "help": HELP.trim_end() })),
            "show" => self.show(),
            "set" => {
                let (node, state) = Evidence::parse_binding(rest)?;
                if self.is_decision(&node) {
                    return Err(Error::Usage(format!("`{node}` is a decision; use commit")));
                }
                if node == self.problem.value_node {
                    return Err(Error::Usage("the value node cannot be observed".into()));
                }
                let candidate = self.evidence.with(node.clone(), state.clone());
                let node_ref = self
                    .problem
                    .network
                    .node(&node)
                    .ok_or_else(|| Error::UnknownNode(node.clone()))?;
                if node_ref.state_index(&state).is_none() {
                    return Err(Error::UnknownState { node, state });
                }
                self.evidence = candidate;
                self.show()
            }
            "unset" => {
                if self.is_decision(rest) {
                    return Err(Error::Usage(format!("`{rest}` is a decision and stays committed")));
                }
                if self.evidence.remove(rest).is_none() {
                    return Err(Error::Usage(format!("`{rest}` is not set")));
                }
                self.show()
            }
            "solve" => {
                let outcome = mev(&self.problem, &self.evidence, &Evidence::new(), &VariableElimination)?;
                Output::ok(solve_text(&outcome), solve_json(&outcome, &self.evidence, &Evidence::new()))
            }
            "policy" => {
                let policy = contingent_policy(&self.problem, &self.evidence, &VariableElimination)?;
                Output::ok(policy.to_string(), policy_json(&policy))
            }
            "sample-solve" => {
                let options = SampleOptions {
                    seed: self.seed,
                    ..SampleOptions::default()
                };
                sample_solve_output(&sample_decide(&self.problem, &self.evidence, &options)?)
            }
            "commit" => {
                let decision = self
                    .next_decision()
                    .ok_or_else(|| Error::Usage("every decision has been made".into()))?
                    .to_string();
                let alternatives = self.problem.alternatives(&decision).unwrap_or(&[]);
                if !alternatives.iter().any(|a| a == rest) {
                    return Err(Error::UnknownState {
                        node: decision,
                        state: rest.to_string(),
                    });
                }
                self.evidence.set(decision, rest);
                self.show()
            }
            other => return Err(Error::Usage(format!("unknown command `{other}`; try help"))),
        };
        Ok(Some(output))
    }
}

pub fn run<R: BufRead, W: Write>(
    json: bool,
    problem: CompiledDecisionProblem,
    evidence: Evidence,
    seed: u64,
    input: &mut R,
    out: &mut W,
) -> Result<i32> {
    // reject bad initial evidence before the loop starts
    decnet::decide::prepare_decision(&problem, &evidence, &Evidence::new())?;
    let mut session = Session {
        problem,
        evidence,
        seed,
    };
    if !json {
        let _ = out.write_all(HELP.as_bytes());
    }
    let mut line = String::new();
    loop {
        line.clear();
        match input.read_line(&mut line) {
            Ok(0) => break,
            Ok(_) => {}
            Err(e) => return Err(Error::Usage(format!("cannot read input: {e}"))),
        }
        let command = line.split('#').next().unwrap_or("").trim();
        if command.is_empty() {
            continue;
        }
        match session.execute(command) {
            Ok(None) => break,
            Ok(Some(output)) => {
                output.emit(json, out);
            }
            Err(e) => {
                let _ = if json {
                    writeln!(out, "{}", json!({ "error": e.to_string(), "exit_code": exit_code(&e) }))
                } else {
                    writeln!(out, "error: {e}")
                };
            }
        }
        let _ = out.flush();
    }
    Ok(0)
}
