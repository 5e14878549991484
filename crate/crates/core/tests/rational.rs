mod common;

use common::{ev, rng};
use decnet::decide::{mev, oracle_decision_tree, solve};
use decnet::exact::{query_enumeration, query_ve, VariableElimination};
use decnet::generate::{random_decision_evidence, random_diagram, DiagramShape};
use decnet::transform::id_to_bn;
use decnet::{fixtures, CompiledProblemExact, CompiledProblemF32, Evidence, InfluenceDiagramExact, Rational};
use num_bigint::BigInt;
use proptest::prelude::*;

fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn fig2() -> CompiledProblemExact {
    id_to_bn(&fixtures::fig2::<Rational>().unwrap()).unwrap()
}

#[test]
fn fig2_in_exact_arithmetic() {
    let problem = fig2();
    assert_eq!(problem.k1, ratio(10, 1));
    assert_eq!(problem.k2, ratio(3, 1));
    let outcome = mev(&problem, &ev(&[("C", "T")]), &Evidence::new(), &VariableElimination).unwrap();
    assert_eq!(outcome.first_decision, "Action1");
    assert_eq!(outcome.mev, ratio(27, 13));
    assert_eq!(outcome.value_of("Action2").unwrap(), &ratio(11, 13));

    let p = query_ve(&problem.network, "V", &ev(&[("C", "T"), ("D1", "Action1")])).unwrap();
    assert_eq!(p.probability_of("T").unwrap(), ratio(33, 65));

    let fig1 = fixtures::fig1::<Rational>().unwrap();
    let a = query_enumeration(&fig1, "A", &ev(&[("C", "T")])).unwrap();
    assert_eq!(a.probability_of("T").unwrap(), ratio(8, 13));
}

#[test]
fn fig2_in_single_precision() {
    let problem: CompiledProblemF32 = id_to_bn(&fixtures::fig2::<f32>().unwrap()).unwrap();
    let outcome = mev(&problem, &ev(&[("C", "T")]), &Evidence::new(), &VariableElimination).unwrap();
    assert_eq!(outcome.first_decision, "Action1");
    assert!((outcome.mev - 2.076923).abs() < 1e-5);
}

fn diagram(seed: u64) -> InfluenceDiagramExact {
    random_diagram(&mut rng(seed), &DiagramShape::default())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn affine_values_leave_the_table_untouched(seed in any::<u64>(), a in 1i64..=1000, b in -1000i64..=1000) {
        let (a, b) = (ratio(a, 100), ratio(b, 100));
        let d = diagram(seed);
        let problem = id_to_bn(&d).unwrap();
        let shifted = id_to_bn(&d.map_values(|v| a.clone() * v.clone() + b.clone())).unwrap();
        prop_assert_eq!(&shifted.network, &problem.network);
        prop_assert_eq!(&shifted.k1, &(a.clone() * problem.k1.clone()));
        prop_assert_eq!(&shifted.k2, &(a.clone() * problem.k2.clone() - b.clone()));

        let e = random_decision_evidence(&mut rng(seed ^ 0x5eed), &problem);
        let one = solve(&problem, &e, &Evidence::new(), &VariableElimination, true).unwrap();
        let two = solve(&shifted, &e, &Evidence::new(), &VariableElimination, true).unwrap();
        prop_assert_eq!(two.outcome.mev, a.clone() * one.outcome.mev + b.clone());
        prop_assert_eq!(two.outcome.first_decision, one.outcome.first_decision);
        for (r1, r2) in one.policy.rules.iter().zip(&two.policy.rules) {
            for ((k1, e1), (k2, e2)) in r1.entries.iter().zip(&r2.entries) {
                prop_assert_eq!(k1, k2);
                prop_assert_eq!(&e1.alternative, &e2.alternative);
            }
        }
    }

    #[test]
    fn exact_transform_equals_exact_tree(seed in any::<u64>()) {
        let d = diagram(seed);
        let problem = id_to_bn(&d).unwrap();
        let e = random_decision_evidence(&mut rng(seed ^ 0x5eed), &problem);
        let got = mev(&problem, &e, &Evidence::new(), &VariableElimination).unwrap();
        let (want, _) = oracle_decision_tree(&d, &e).unwrap();
        prop_assert_eq!(got.mev, want.mev);
        prop_assert_eq!(got.first_decision, want.first_decision);
    }
}
