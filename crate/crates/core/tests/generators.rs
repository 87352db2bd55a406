use facetpivot::facet::{self, FacetOptions, Status};
use facetpivot::generators::{
    cycling_fixture, klee_minty_v1, klee_minty_v2, random_instance, BoundStyle, InstanceSpec, RandomKind, RandomSpec,
    CYCLING_FIXTURES, KLEE_MINTY_V1_MAX, KLEE_MINTY_V2_MAX,
};
use facetpivot::json::{from_json, to_json};
use facetpivot::model::{default_big_m, to_standard_general, GeneralLp};
use facetpivot::reference::{brute_force_optimal, OracleOutcome, DEFAULT_ENUMERATION_CAP};
use proptest::prelude::*;

fn oracle(p: &GeneralLp<f64>) -> OracleOutcome<f64> {
    let sp = to_standard_general(p, default_big_m(p)).unwrap();
    brute_force_optimal(&sp, DEFAULT_ENUMERATION_CAP).unwrap()
}

fn facet(p: &GeneralLp<f64>) -> facetpivot::Outcome {
    let sp = to_standard_general(p, default_big_m(p)).unwrap();
    facet::solve(&sp, &FacetOptions::default()).unwrap()
}

fn corner(d: usize, value: f64) -> Vec<f64> {
    let mut x = vec![0.0; d];
    x[d - 1] = value;
    x
}

#[test]
fn klee_minty_optima_from_the_oracle() {
    for d in 2..=5 {
        let km1 = oracle(&klee_minty_v1(d).unwrap());
        let v = 5f64.powi(d as i32);
        assert_eq!((km1.objective, km1.x), (Some(-v), Some(corner(d, v))), "km1 d={d}");

        let km2 = oracle(&klee_minty_v2(d).unwrap());
        let v = ((1u64 << d) - 1) as f64;
        assert_eq!((km2.objective, km2.x), (Some(-v), Some(corner(d, v))), "km2 d={d}");
    }
}

#[test]
fn klee_minty_optima_at_every_size() {
    for d in 2..=KLEE_MINTY_V2_MAX {
        let out = facet(&klee_minty_v2(d).unwrap());
        let v = ((1u64 << d) - 1) as f64;
        assert_eq!(out.objective, Some(-v), "km2 d={d}");
        assert_eq!(out.x, Some(corner(d, v)), "km2 d={d}");
    }
    for d in 2..=KLEE_MINTY_V1_MAX {
        let out = facet(&klee_minty_v1(d).unwrap());
        let v = 5f64.powi(d as i32);
        assert!((out.objective.unwrap() + v).abs() <= 1e-12 * v, "km1 d={d}");
    }
}

#[test]
fn klee_minty_data_is_exact() {
    let p = klee_minty_v1::<f64>(KLEE_MINTY_V1_MAX).unwrap();
    assert!(p.b_ineq.iter().all(|b| b.abs() < 2f64.powi(53) && b.fract() == 0.0));
    let p = klee_minty_v2::<f64>(KLEE_MINTY_V2_MAX).unwrap();
    assert!(p.b_ineq.iter().chain(p.a_ineq.to_rows().iter().flatten()).all(|v| v.fract() == 0.0));
}

#[test]
fn planted_kinds_are_classified_by_the_oracle() {
    for seed in 0..40 {
        let infeasible: GeneralLp<f64> = RandomSpec::new(seed, 3, 1, 3).kind(RandomKind::Infeasible).build();
        assert_eq!(oracle(&infeasible).status, Status::Infeasible, "seed {seed}");

        let unbounded: GeneralLp<f64> = RandomSpec::new(seed, 3, 1, 3).kind(RandomKind::Unbounded).build();
        assert_eq!(oracle(&unbounded).status, Status::Unbounded, "seed {seed}");

        let planted: GeneralLp<f64> = RandomSpec::new(seed, 3, 1, 3).bounds(BoundStyle::Boxed).build();
        assert_eq!(oracle(&planted).status, Status::Optimal, "seed {seed}");
    }
}

#[test]
fn cycling_fixtures_have_textbook_optima() {
    let want = [-0.05, -1.25, -1.0, -2.0, -0.875];
    for (id, w) in CYCLING_FIXTURES.iter().zip(want) {
        let p = cycling_fixture::<f64>(id).unwrap();
        let o = oracle(&p).objective.unwrap();
        assert!((o - w).abs() < 1e-12, "{id}: {o}");
    }
}

#[test]
fn instance_specs_name_and_build() {
    let specs = [
        InstanceSpec::KleeMinty1(4),
        InstanceSpec::KleeMinty2(7),
        InstanceSpec::Cycling("kuhn".into()),
        InstanceSpec::Random(RandomSpec::new(3, 4, 1, 6)),
    ];
    for s in &specs {
        let p: GeneralLp<f64> = s.build().unwrap();
        assert!(p.validate().is_ok(), "{}", s.name());
    }
    assert_eq!(specs[1].name(), "km2_d7");
    assert_eq!(specs[2].name(), "cycling_kuhn");
    assert!(InstanceSpec::Cycling("nope".into()).build::<f64>().is_err());
    assert!(InstanceSpec::KleeMinty1(KLEE_MINTY_V1_MAX + 1).build::<f64>().is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generators_are_pure(seed in any::<u64>(), d in 1usize..6, m in 0usize..3, n in 0usize..6, kind in 0usize..3) {
        let kind = [RandomKind::Planted, RandomKind::Infeasible, RandomKind::Unbounded][kind];
        let spec = RandomSpec::new(seed, d, m.min(d - 1), n).kind(kind);
        let a: GeneralLp<f64> = spec.build();
        let b: GeneralLp<f64> = spec.build();
        prop_assert_eq!(&a, &b);
        let c: GeneralLp<f64> = InstanceSpec::Random(spec).build().unwrap();
        prop_assert_eq!(a, c);
    }

    #[test]
    fn random_instances_survive_json(seed in any::<u64>()) {
        let p: GeneralLp<f64> = random_instance(seed, 4, 1, 6);
        let back: GeneralLp<f64> = from_json(&to_json(&p, None)).unwrap();
        prop_assert_eq!(p, back);
    }
}
