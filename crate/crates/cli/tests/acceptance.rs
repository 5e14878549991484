//! Acceptance run: one PASS/FAIL line per criterion.

use std::process::ExitCode;
use std::time::Instant;

use decnet::approx::{logic_sample, sample_decide, SampleOptions};
use decnet::decide::{mev, oracle_decision_tree, query_count_report, solve};
use decnet::exact::{query_enumeration, query_ve, Enumeration, InferenceEngine, VariableElimination};
use decnet::format::parse_document;
use decnet::generate::{decision_chain, random_decision_evidence, random_diagram, random_evidence, random_network, DiagramShape};
use decnet::scalar::format_fixed;
use decnet::transform::id_to_bn;
use decnet::{fixtures, Evidence, InfluenceDiagram, Rational, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn ev(pairs: &[(&str, &str)]) -> Evidence {
    Evidence::from_pairs(pairs.iter().copied()).unwrap()
}

fn ensure(ok: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(message())
    }
}

fn cli(args: &[&str]) -> (i32, String) {
    let mut argv = vec!["decnet"];
    argv.extend_from_slice(args);
    let mut out = Vec::new();
    let code = decnet_cli::run(argv, &mut "".as_bytes(), &mut out, &mut Vec::new());
    (code, String::from_utf8(out).unwrap())
}

// P(A=T, C=T) = 0.4 * (0.8*0.7 + 0.2*0.2) = 0.24 and P(C=T) = 0.39
const A_GIVEN_C: f64 = 0.24 / 0.39;
// 0.7 * P(A=T | C=T) + 0.2 * P(A=F | C=T)
const V_GIVEN_ACTION1_C: f64 = 0.7 * A_GIVEN_C + 0.2 * (1.0 - A_GIVEN_C);

fn fig1_inference() -> Check {
    let net = fixtures::fig1::<f64>().map_err(|e| e.to_string())?;
    let e = ev(&[("C", "T")]);
    let ve = query_ve(&net, "A", &e).unwrap().probability_of("T").unwrap();
    let en = query_enumeration(&net, "A", &e).unwrap().probability_of("T").unwrap();
    ensure((ve - A_GIVEN_C).abs() <= 1e-9 && (en - A_GIVEN_C).abs() <= 1e-9, || format!("ve {ve}, enum {en}"))?;
    ensure(format_fixed(ve) == "0.615385", || format!("printed {}", format_fixed(ve)))?;
    Ok(format!("ve = enum = {}", format_fixed(ve)))
}

fn transform_fidelity() -> Check {
    let (code, out) = cli(&["transform", "fig2"]);
    ensure(code == 0, || format!("exit {code}"))?;
    let (network, summary) = out.rsplit_once("\n\n").ok_or("no summary line")?;
    let body = |text: &str| -> Vec<String> {
        text.lines().filter(|l| !l.starts_with("network")).map(str::to_string).collect()
    };
    ensure(body(network) == body(fixtures::FIG3.trim_end()), || "network differs from the fixture".into())?;
    let lines = network.lines().filter(|l| l.contains("->")).count();
    // nine probability lines plus the decision prior
    ensure(lines == 10, || format!("{lines} table lines"))?;
    ensure(summary == "k1 = 10, k2 = 3, L = ((D1 (C) (C)))\n", || summary.to_string())?;
    Ok("network matches, k1 = 10, k2 = 3, L = ((D1 (C) (C)))".into())
}

fn single_decision_solve() -> Check {
    let problem = id_to_bn(&fixtures::fig2::<f64>().unwrap()).unwrap();
    let e = ev(&[("C", "T")]);
    let outcome = mev(&problem, &e, &Evidence::new(), &VariableElimination).map_err(|x| x.to_string())?;
    let p = query_ve(&problem.network, "V", &e.with("D1", &outcome.first_decision))
        .unwrap()
        .probability_of("T")
        .unwrap();
    let want_mev = 10.0 * V_GIVEN_ACTION1_C - 3.0;
    ensure(outcome.first_decision == "Action1", || outcome.first_decision.clone())?;
    ensure((p - V_GIVEN_ACTION1_C).abs() <= 1e-9, || format!("P = {p}"))?;
    ensure((outcome.mev - want_mev).abs() <= 1e-9, || format!("MEV = {}", outcome.mev))?;
    ensure(format_fixed(p) == "0.507692" && format_fixed(outcome.mev) == "2.076923", || "printed values".into())?;
    Ok(format!("Action1, P = {}, MEV = {}", format_fixed(p), format_fixed(outcome.mev)))
}

fn oracle_equivalence() -> Check {
    let shape = DiagramShape::default();
    let cases = 600;
    let mut decisions = [0usize; 4];
    for seed in 0..cases {
        let d: InfluenceDiagram = random_diagram(&mut rng(seed), &shape);
        let problem = id_to_bn(&d).map_err(|e| format!("seed {seed}: {e}"))?;
        let e = random_decision_evidence(&mut rng(seed ^ 0x5eed), &problem);
        let got = mev(&problem, &e, &Evidence::new(), &VariableElimination).map_err(|x| format!("seed {seed}: {x}"))?;
        let (want, _) = oracle_decision_tree(&d, &e).map_err(|x| format!("seed {seed}: {x}"))?;
        ensure((got.mev - want.mev).abs() <= 1e-9, || format!("seed {seed}: {} vs {}", got.mev, want.mev))?;
        ensure(got.first_decision == want.first_decision, || format!("seed {seed}: argmax differs"))?;
        decisions[d.decisions().count()] += 1;
    }
    Ok(format!(
        "{cases} diagrams ({} / {} / {} with 1 / 2 / 3 decisions)",
        decisions[1], decisions[2], decisions[3]
    ))
}

fn engine_equivalence() -> Check {
    let cases = 600;
    let mut queries = 0;
    for seed in 0..cases {
        let mut r = rng(seed);
        let n = r.gen_range(1..=10);
        let net = random_network::<f64, _>(&mut r, n, 3);
        let e = random_evidence(&mut r, &net, 4);
        for node in net.nodes().iter().filter(|x| !e.contains(&x.name)) {
            let a = query_ve(&net, &node.name, &e).map_err(|x| format!("seed {seed}: {x}"))?;
            let b = query_enumeration(&net, &node.name, &e).map_err(|x| format!("seed {seed}: {x}"))?;
            for (x, y) in a.distribution.iter().zip(&b.distribution) {
                ensure((x - y).abs() <= 1e-9, || format!("seed {seed}, {}: {x} vs {y}", node.name))?;
            }
            queries += 1;
        }
    }
    Ok(format!("{cases} networks, {queries} queries"))
}

fn decimal<T: Scalar>(hundredths: i64) -> T {
    T::parse_decimal(&format!("{}", hundredths as f64 / 100.0)).unwrap()
}

fn affine_invariance() -> Check {
    let cases: u64 = 120;
    for seed in 0..cases {
        let mut r = rng(seed.wrapping_add(1 << 32));
        let (ah, bh) = (r.gen_range(1..=1000), r.gen_range(-1000..=1000));

        // exact arithmetic: identical table, exact MEV map
        let d: InfluenceDiagram<Rational> = random_diagram(&mut rng(seed), &DiagramShape::default());
        let (a, b) = (decimal::<Rational>(ah), decimal::<Rational>(bh));
        let p = id_to_bn(&d).unwrap();
        let q = id_to_bn(&d.map_values(|v| a.clone() * v.clone() + b.clone())).unwrap();
        ensure(p.network == q.network, || format!("seed {seed}: tables differ"))?;
        let e = random_decision_evidence(&mut rng(seed ^ 0x5eed), &p);
        let one = mev(&p, &e, &Evidence::new(), &VariableElimination).unwrap();
        let two = mev(&q, &e, &Evidence::new(), &VariableElimination).unwrap();
        ensure(two.mev == a.clone() * one.mev.clone() + b.clone(), || format!("seed {seed}: exact MEV"))?;
        ensure(one.first_decision == two.first_decision, || format!("seed {seed}: exact argmax"))?;

        // binary floats: same structure, MEV within 1e-9
        let d: InfluenceDiagram<f64> = random_diagram(&mut rng(seed), &DiagramShape::default());
        let (a, b) = (ah as f64 / 100.0, bh as f64 / 100.0);
        let p = id_to_bn(&d).unwrap();
        let q = id_to_bn(&d.map_values(|v| a * v + b)).unwrap();
        let one = solve(&p, &e, &Evidence::new(), &VariableElimination, true).unwrap();
        let two = solve(&q, &e, &Evidence::new(), &VariableElimination, true).unwrap();
        ensure((two.outcome.mev - (a * one.outcome.mev + b)).abs() <= 1e-9, || format!("seed {seed}: f64 MEV"))?;
        ensure(one.outcome.first_decision == two.outcome.first_decision, || format!("seed {seed}: f64 argmax"))?;
        let choices = |s: &decnet::decide::Solution| -> Vec<(Evidence, String)> {
            s.policy
                .rules
                .iter()
                .flat_map(|r| r.entries.iter().map(|(k, x)| (k.clone(), x.alternative.clone())))
                .collect()
        };
        ensure(choices(&one) == choices(&two), || format!("seed {seed}: policies differ"))?;
    }
    Ok(format!("{cases} diagrams, exact tables identical"))
}

fn prior_irrelevance() -> Check {
    let cases: u64 = 150;
    let mut worst: f64 = 0.0;
    for seed in 0..cases {
        let d: InfluenceDiagram = random_diagram(&mut rng(seed), &DiagramShape::default());
        let problem = id_to_bn(&d).unwrap();
        let mut r = rng(seed.wrapping_mul(7919));
        let mut e = random_decision_evidence(&mut r, &problem);
        let mut other = problem.clone();
        for entry in &problem.decisions.entries {
            let alternatives = problem.alternatives(&entry.decision).unwrap();
            let w: Vec<f64> = alternatives.iter().map(|_| r.gen_range(0.01..1.0)).collect();
            let total: f64 = w.iter().sum();
            other = other
                .with_decision_prior(&entry.decision, w.iter().map(|x| x / total).collect())
                .unwrap();
            if !e.contains(&entry.decision) {
                e.set(entry.decision.clone(), alternatives[r.gen_range(0..alternatives.len())].clone());
            }
        }
        let p = query_ve(&problem.network, "V", &e).unwrap().probability_of("T").unwrap();
        let q = query_ve(&other.network, "V", &e).unwrap().probability_of("T").unwrap();
        worst = worst.max((p - q).abs());
        ensure((p - q).abs() <= 1e-12, || format!("seed {seed}: {p} vs {q}"))?;
    }
    Ok(format!("{cases} problems, largest change {worst:.1e}"))
}

fn memoization() -> Check {
    let problem = id_to_bn(&decision_chain::<f64>(3)).unwrap();
    let report = query_count_report(&problem, &Evidence::new(), &VariableElimination).map_err(|e| e.to_string())?;
    ensure((report.mev_with_memo - report.mev_without_memo).abs() <= 1e-12, || "MEVs differ".into())?;
    ensure(report.with_memo < report.without_memo, || {
        format!("{} queries with memo, {} without", report.with_memo, report.without_memo)
    })?;
    Ok(format!(
        "{} queries with memo, {} without, ratio {:.2}",
        report.with_memo,
        report.without_memo,
        report.ratio()
    ))
}

fn sampling() -> Check {
    let net = fixtures::fig3::<f64>().unwrap();
    let e = ev(&[("D1", "Action1"), ("C", "T")]);
    let s = logic_sample(&net, ("V", "T"), &e, 100_000, 0).map_err(|x| x.to_string())?;
    ensure((s.estimate - V_GIVEN_ACTION1_C).abs() <= 3.0 * s.standard_error, || {
        format!("{} is more than 3 SE ({}) from the exact value", s.estimate, s.standard_error)
    })?;
    let lhs = s.standard_error.powi(2) * s.accepted as f64;
    let rhs = s.estimate * (1.0 - s.estimate);
    ensure((lhs - rhs).abs() <= 1e-12 * rhs, || format!("SE identity: {lhs} vs {rhs}"))?;
    let (code, out) = cli(&["sample-solve", "fig2", "-e", "C=T"]);
    ensure(code == 0 && out.starts_with("decision D1 = Action1 (separated)"), || out.clone())?;
    let problem = id_to_bn(&fixtures::fig2::<f64>().unwrap()).unwrap();
    let d = sample_decide(&problem, &ev(&[("C", "T")]), &SampleOptions::default()).unwrap();
    ensure(d.chosen == "Action1" && d.separated, || "sample-solve".into())?;
    Ok(format!(
        "estimate {} (SE {}, {} accepted), sample-solve Action1 separated",
        format_fixed(s.estimate),
        format_fixed(s.standard_error),
        s.accepted
    ))
}

const CONSTANT: &str = "network constant
chance C { states: T, F; cpt { -> 0.35, 0.65; } }
decision D { alternatives: hold, sell, buy; observes: C; }
value V { parents: D, C; table { hold, T -> -1.75; hold, F -> -1.75; sell, T -> -1.75; sell, F -> -1.75; buy, T -> -1.75; buy, F -> -1.75; } }
";

fn degenerate_values() -> Check {
    let f = id_to_bn(&parse_document::<f64>(CONSTANT).unwrap().into_diagram().unwrap()).unwrap();
    ensure(f.k1 == 0.0 && f.k2 == 1.75, || format!("k1 = {}, k2 = {}", f.k1, f.k2))?;
    for e in [Evidence::new(), ev(&[("C", "F")])] {
        let outcome = mev(&f, &e, &Evidence::new(), &Enumeration).unwrap();
        ensure(outcome.mev == -1.75 && outcome.first_decision == "hold", || format!("{outcome:?}"))?;
    }
    let exact = id_to_bn(&parse_document::<Rational>(CONSTANT).unwrap().into_diagram().unwrap()).unwrap();
    let outcome = mev(&exact, &Evidence::new(), &Evidence::new(), &VariableElimination).unwrap();
    ensure(outcome.mev == decimal::<Rational>(-175) && outcome.first_decision == "hold", || "exact".into())?;
    let d = sample_decide(&f, &ev(&[("C", "T")]), &SampleOptions::default()).unwrap();
    ensure(d.chosen == "hold" && d.separated, || format!("{d:?}"))?;
    ensure(d.alternatives.iter().all(|a| a.expected_value == -1.75), || "sampled EV".into())?;
    // the joint over the network is still a proper distribution
    let total: f64 = Enumeration.joint(&f.network, &["V"], &Evidence::new()).unwrap().table.iter().sum();
    ensure((total - 1.0).abs() <= 1e-12, || format!("{total}"))?;
    Ok("k1 = 0, MEV = -1.75, first alternative, exact and sampled".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("fig1 inference", fig1_inference),
        ("transform fidelity", transform_fidelity),
        ("single-decision solve", single_decision_solve),
        ("oracle equivalence", oracle_equivalence),
        ("engine equivalence", engine_equivalence),
        ("affine invariance", affine_invariance),
        ("prior irrelevance", prior_irrelevance),
        ("memoization", memoization),
        ("sampling", sampling),
        ("degenerate value function", degenerate_values),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.2}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
