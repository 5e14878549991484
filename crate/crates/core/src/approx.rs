//! Logic sampling: forward sampling with rejection of draws that disagree
//! with the evidence.
//!
//! Each estimate carries its binomial standard error. [`sample_decide`]
//! estimates `P(V = T | alternative, E)` for every alternative of the one
//! remaining decision, in batches, until one alternative's confidence
//! interval lies wholly above all the others. The intervals use the normal
//! approximation, so separation is a statistical statement, not a bound.
//!
//! Streams are `ChaCha8Rng` seeded from the user seed, with alternative `i`
//! on stream `i`; results are reproducible bit for bit.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::decide::prepare_decision;
use crate::error::{Error, Result};
use crate::model::{config_index, BeliefNetwork, Evidence};
use crate::scalar::{argmax_with_ties, Scalar};
use crate::transform::CompiledDecisionProblem;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateWithSE {
    pub estimate: f64,
    pub standard_error: f64,
    pub drawn: u64,
    pub accepted: u64,
    pub seed: u64,
}

impl EstimateWithSE {
    fn from_counts(hits: u64, accepted: u64, drawn: u64, seed: u64) -> Result<Self> {
        if accepted == 0 {
            return Err(Error::NoAcceptedSamples { drawn });
        }
        let estimate = hits as f64 / accepted as f64;
        Ok(Self {
            estimate,
            standard_error: (estimate * (1.0 - estimate) / accepted as f64).sqrt(),
            drawn,
            accepted,
            seed,
        })
    }

    /// Normal-approximation interval `estimate ± z * SE`.
    pub fn interval(&self, z: f64) -> (f64, f64) {
        (
            self.estimate - z * self.standard_error,
            self.estimate + z * self.standard_error,
        )
    }
}

/// Two-sided standard normal quantile for `confidence`.
pub fn z_for_confidence(confidence: f64) -> Result<f64> {
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::usage(format!(
            "confidence must lie strictly between 0 and 1, got {confidence}"
        )));
    }
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    Ok(normal.inverse_cdf(0.5 + confidence / 2.0))
}

/// Precomputed forward sampler for one network and one evidence set.
struct Sampler {
    order: Vec<usize>,
    parents: Vec<Vec<usize>>,
    parent_cards: Vec<Vec<usize>>,
    /// Cumulative distribution of every CPT row.
    cumulative: Vec<Vec<Vec<f64>>>,
    evidence: Vec<Option<usize>>,
    target: (usize, usize),
}

impl Sampler {
    fn new<T: Scalar>(network: &BeliefNetwork<T>, target: (&str, &str), evidence: &Evidence) -> Result<Self> {
        let structure = network.structure()?;
        let t = network.require(target.0)?;
        if evidence.contains(target.0) {
            return Err(Error::TargetInEvidence(target.0.to_string()));
        }
        let cumulative = network
            .nodes()
            .iter()
            .map(|n| {
                n.cpt
                    .iter()
                    .map(|row| {
                        let mut acc = 0.0;
                        row.iter()
                            .map(|p| {
                                acc += p.to_f64_lossy();
                                acc
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let parent_cards = structure
            .parents
            .iter()
            .map(|ps| ps.iter().map(|&p| structure.cards[p]).collect())
            .collect();
        Ok(Self {
            target: (t, network.state_of(t, target.1)?),
            evidence: evidence.resolve(network)?,
            order: structure.order,
            parents: structure.parents,
            parent_cards,
            cumulative,
        })
    }

    /// One forward draw; `None` if it disagrees with the evidence, else
    /// whether the target took the requested state.
    fn draw(&self, rng: &mut ChaCha8Rng, values: &mut [usize]) -> Option<bool> {
        for &v in &self.order {
            let config: Vec<usize> = self.parents[v].iter().map(|&p| values[p]).collect();
            let row = &self.cumulative[v][config_index(&config, &self.parent_cards[v])];
            let u: f64 = rng.gen();
            let state = row.iter().position(|&c| u < c).unwrap_or_else(|| {
                // rounding left the row total just under u
                let last = row.len() - 1;
                (0..=last)
                    .rev()
                    .find(|&s| row[s] > if s == 0 { 0.0 } else { row[s - 1] })
                    .unwrap_or(last)
            });
            if let Some(required) = self.evidence[v] {
                if state != required {
                    return None;
                }
            }
            values[v] = state;
        }
        Some(values[self.target.0] == self.target.1)
    }
}

/// Running counts for one stream.
struct Stream {
    rng: ChaCha8Rng,
    seed: u64,
    drawn: u64,
    accepted: u64,
    hits: u64,
}

impl Stream {
    fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self {
            rng,
            seed,
            drawn: 0,
            accepted: 0,
            hits: 0,
        }
    }

    fn run(&mut self, sampler: &Sampler, n: u64, scratch: &mut [usize]) {
        for _ in 0..n {
            self.drawn += 1;
            if let Some(hit) = sampler.draw(&mut self.rng, scratch) {
                self.accepted += 1;
                self.hits += hit as u64;
            }
        }
    }

    fn estimate(&self) -> Result<EstimateWithSE> {
        EstimateWithSE::from_counts(self.hits, self.accepted, self.drawn, self.seed)
    }
}

/// Estimates `P(target.0 = target.1 | evidence)` from `n` forward draws.
pub fn logic_sample<T: Scalar>(
    network: &BeliefNetwork<T>,
    target: (&str, &str),
    evidence: &Evidence,
    n: u64,
    seed: u64,
) -> Result<EstimateWithSE> {
    if n == 0 {
        return Err(Error::usage("at least one draw is required"));
    }
    let sampler = Sampler::new(network, target, evidence)?;
    let mut stream = Stream::new(seed, 0);
    let mut scratch = vec![0; network.len()];
    stream.run(&sampler, n, &mut scratch);
    stream.estimate()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleOptions {
    pub batch: u64,
    /// Draw budget per alternative.
    pub max_samples: u64,
    pub confidence: f64,
    pub seed: u64,
}

impl Default for SampleOptions {
    fn default() -> Self {
        Self {
            batch: 1024,
            max_samples: 1_000_000,
            confidence: 0.95,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlternativeEstimate {
    pub alternative: String,
    /// Estimate of `P(V = T | alternative, E)`.
    pub probability: EstimateWithSE,
    /// `k1 * estimate - k2`.
    pub expected_value: f64,
    /// `k1 * SE`.
    pub expected_value_se: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleDecision {
    pub decision: String,
    pub chosen: String,
    pub alternatives: Vec<AlternativeEstimate>,
    pub separated: bool,
    pub z: f64,
}

impl SampleDecision {
    pub fn chosen_estimate(&self) -> &AlternativeEstimate {
        self.alternatives
            .iter()
            .find(|a| a.alternative == self.chosen)
            .expect("chosen alternative is listed")
    }
}

/// Chooses among the alternatives of the one remaining decision by logic
/// sampling.
///
/// Stops as soon as the best alternative's lower confidence limit exceeds
/// every other alternative's upper limit, or when each alternative has used
/// `max_samples` draws. A constant value function needs no separation: all
/// alternatives are worth `-k2`.
pub fn sample_decide<T: Scalar>(
    problem: &CompiledDecisionProblem<T>,
    evidence: &Evidence,
    options: &SampleOptions,
) -> Result<SampleDecision> {
    if options.batch == 0 || options.max_samples == 0 {
        return Err(Error::usage("batch and max-samples must be positive"));
    }
    let z = z_for_confidence(options.confidence)?;
    let prepared = prepare_decision(problem, evidence, &Evidence::new())?;
    if prepared.remaining.len() != 1 {
        return Err(Error::usage(format!(
            "sampling handles one remaining decision, {} remain",
            prepared.remaining.len()
        )));
    }
    let decision = prepared.first().decision.clone();
    let alternatives = problem
        .alternatives(&decision)
        .ok_or_else(|| Error::UnknownNode(decision.clone()))?;
    let samplers = alternatives
        .iter()
        .map(|alt| {
            Sampler::new(
                &problem.network,
                (&problem.value_node, "T"),
                &prepared.evidence.with(decision.clone(), alt.clone()),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let mut streams: Vec<Stream> = (0..alternatives.len())
        .map(|i| Stream::new(options.seed, i as u64))
        .collect();
    let mut scratch = vec![0; problem.network.len()];
    let k1 = problem.k1.to_f64_lossy();
    let k2 = problem.k2.to_f64_lossy();
    let constant = problem.k1.is_zero();

    let mut separated = false;
    loop {
        for (stream, sampler) in streams.iter_mut().zip(&samplers) {
            let n = options.batch.min(options.max_samples - stream.drawn);
            stream.run(sampler, n, &mut scratch);
        }
        let exhausted = streams.iter().all(|s| s.drawn >= options.max_samples);
        if streams.iter().any(|s| s.accepted == 0) {
            if exhausted {
                let stuck = streams.iter().find(|s| s.accepted == 0).expect("checked");
                return Err(Error::NoAcceptedSamples { drawn: stuck.drawn });
            }
            continue;
        }
        if constant {
            separated = true;
            break;
        }
        let estimates: Vec<f64> = streams.iter().map(|s| s.hits as f64 / s.accepted as f64).collect();
        let best = argmax_with_ties(&estimates, &0.0).expect("alternatives");
        let intervals: Vec<(f64, f64)> = streams
            .iter()
            .map(|s| s.estimate().map(|e| e.interval(z)))
            .collect::<Result<_>>()?;
        if intervals
            .iter()
            .enumerate()
            .all(|(i, iv)| i == best || intervals[best].0 > iv.1)
        {
            separated = true;
            break;
        }
        if exhausted {
            break;
        }
    }

    let estimates = streams.iter().map(Stream::estimate).collect::<Result<Vec<_>>>()?;
    let chosen = if constant {
        0
    } else {
        let points: Vec<f64> = estimates.iter().map(|e| e.estimate).collect();
        argmax_with_ties(&points, &0.0).expect("alternatives")
    };
    Ok(SampleDecision {
        decision,
        chosen: alternatives[chosen].clone(),
        alternatives: alternatives
            .iter()
            .zip(estimates)
            .map(|(alt, e)| AlternativeEstimate {
                alternative: alt.clone(),
                expected_value: k1 * e.estimate - k2,
                expected_value_se: k1 * e.standard_error,
                probability: e,
            })
            .collect(),
        separated,
        z,
    })
}
