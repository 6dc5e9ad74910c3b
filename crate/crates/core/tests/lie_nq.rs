mod common;

use std::path::PathBuf;

use common::assoc;
use derived_series::field_linalg::{is_zero_vec, Prime};
use derived_series::free_lie::{BracketExpr, Generator};
use derived_series::lie_nq::{
    alpha_presentation, liedims_search, meets_dimension_conditions, nilpotent_quotient,
    GradedLieAlgebra, LiePresentation, NqError,
};
use proptest::prelude::*;

fn prime(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

fn expr(s: &str) -> BracketExpr {
    BracketExpr::parse(s).unwrap()
}

fn shipped(name: &str) -> LiePresentation {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../presentations")
        .join(name);
    LiePresentation::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn sec5(p: u64) -> LiePresentation {
    shipped("sec5_relators.lie").with_prime(prime(p))
}

/// Quotient dimensions computed in the free associative algebra.
fn oracle_dims(pres: &LiePresentation) -> Vec<usize> {
    let p = pres.prime.get();
    let weights: Vec<usize> = pres.generators.iter().map(|g| g.weight).collect();
    let index = |n: &str| pres.generators.iter().position(|g| g.name == n).unwrap();
    let relators: Vec<_> = pres
        .relators
        .iter()
        .map(|r| assoc::eval(p, r, &index))
        .collect();
    let free_dims: Vec<usize> = (1..=pres.class)
        .map(|w| assoc::count_lyndon(&weights, w))
        .collect();
    assoc::quotient_dims(p, &weights, pres.class, &relators, &free_dims)
}

fn oracle_is_zero(pres: &LiePresentation, target: &BracketExpr) -> bool {
    let p = pres.prime.get();
    let weights: Vec<usize> = pres.generators.iter().map(|g| g.weight).collect();
    let index = |n: &str| pres.generators.iter().position(|g| g.name == n).unwrap();
    let relators: Vec<_> = pres
        .relators
        .iter()
        .map(|r| assoc::eval(p, r, &index))
        .collect();
    let mut t = assoc::eval(p, target, &index);
    t.truncate(&weights, pres.class);
    assoc::in_ideal(p, &weights, pres.class, &relators, &t)
}

#[test]
fn free_algebra_on_three_generators() {
    for p in [2, 3, 5, 7] {
        let pres = LiePresentation::unit_weights(prime(p), &["x", "y", "z"], vec![], 4);
        let q = nilpotent_quotient(&pres).unwrap();
        assert_eq!(q.dims(), vec![3, 3, 8, 18]);
        assert_eq!(q.dims(), oracle_dims(&pres));
        q.algebra().audit().unwrap();
    }
    let q = nilpotent_quotient(&shipped("free_3gen_class4.lie")).unwrap();
    assert_eq!(q.dims(), vec![3, 3, 8, 18]);
}

#[test]
fn example_over_f3() {
    let pres = shipped("sec6_example_p3.lie");
    let q = nilpotent_quotient(&pres).unwrap();
    let dims = q.dims();
    assert_eq!(&dims[..3], &[3, 3, 1]);
    assert_eq!(dims, oracle_dims(&pres));
    let alg = q.algebra();
    alg.audit().unwrap();
    assert_eq!(alg.derived_subalgebra(2).dim_at(4), 3);
    let mut witnesses = Vec::new();
    for e in &pres.evaluations {
        let v = q.evaluate(e).unwrap();
        assert!(!is_zero_vec(&v), "{e}");
        assert_eq!(alg.weight_of(&v), Some(4));
        assert!(!oracle_is_zero(&pres, e));
        witnesses.push(v);
    }
    let rank =
        derived_series::field_linalg::Subspace::spanned_by(alg.prime(), alg.dim(), witnesses).dim();
    assert_eq!(rank, 3);
    assert!(meets_dimension_conditions(&q));
    let searched =
        nilpotent_quotient(&alpha_presentation(prime(3), &[0, 0, 0, 0, 2, 0, 0])).unwrap();
    assert_eq!(searched.algebra(), alg);
}

#[test]
fn sec5_relators_force_p_two() {
    let target = expr("[[a,b],[a,c]]");
    let doubled = expr("2[[a,b],[a,c]]");
    for p in [2, 3, 5, 7] {
        let pres = sec5(p);
        let q = nilpotent_quotient(&pres).unwrap();
        q.algebra().audit().unwrap();
        assert_eq!(q.dims(), oracle_dims(&pres));
        assert!(q.is_zero(&doubled).unwrap(), "p={p}");
        let vanishes = q.is_zero(&target).unwrap();
        assert_eq!(vanishes, p != 2, "p={p}");
        assert_eq!(vanishes, oracle_is_zero(&pres, &target), "p={p}");
        let l2_4 = q.algebra().derived_subalgebra(2).dim_at(4);
        assert_eq!(l2_4 == 0, p != 2, "p={p}");
    }
    let q = nilpotent_quotient(&sec5(2)).unwrap();
    let lhs = q.evaluate(&target).unwrap();
    let rhs = q.evaluate(&expr("[a,b,c,a]")).unwrap();
    assert_eq!(lhs, rhs);
}

#[test]
fn inhomogeneous_relator_is_named() {
    let pres = LiePresentation::unit_weights(prime(3), &["x", "y"], vec![expr("[x,y]+x")], 3);
    match nilpotent_quotient(&pres) {
        Err(NqError::InhomogeneousRelator(r)) => assert_eq!(r, "[x,y]+x"),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn relators_above_the_class_vanish() {
    let pres = LiePresentation::unit_weights(prime(3), &["x", "y"], vec![expr("[x,y,y,y]")], 3);
    assert_eq!(nilpotent_quotient(&pres).unwrap().dims(), vec![2, 1, 2]);
}

#[test]
fn unknown_names_in_evaluation() {
    let q = nilpotent_quotient(&sec5(3)).unwrap();
    assert!(q.evaluate(&expr("[a,q]")).is_err());
    assert!(q.is_zero(&expr("[a,a]")).unwrap());
}

#[test]
fn subalgebras_of_the_example() {
    let q = nilpotent_quotient(&shipped("sec6_example_p3.lie")).unwrap();
    let alg = q.algebra();
    let gens: Vec<Vec<u32>> = ["x", "y", "z"]
        .iter()
        .map(|n| q.generator_image(n).unwrap())
        .collect();
    assert_eq!(alg.subalgebra_generated(&gens).dims(4), alg.dims());
    assert!(alg.subalgebra_generated(&[]).is_zero());
    let x = alg.subalgebra_generated(&gens[..1]);
    assert_eq!(x.dims(4), vec![1, 0, 0, 0]);
    assert!(x.contains(&gens[0]));
}

#[test]
fn abelian_algebra_has_trivial_derived_subalgebra() {
    let p = prime(5);
    let alg = GradedLieAlgebra::from_fn(
        p,
        2,
        vec!["u".into(), "v".into(), "w".into()],
        vec![1, 1, 2],
        |_, _| vec![0; 3],
    )
    .unwrap();
    alg.audit().unwrap();
    assert!(alg.derived_subalgebra(1).is_zero());
    assert!(alg.derived_subalgebra(2).is_zero());
}

#[test]
fn search_over_small_fields() {
    let sols = liedims_search(prime(3)).unwrap();
    assert!(sols.contains(&[0, 0, 0, 0, 2, 0, 0]));
    for s in &sols {
        assert_eq!(*s, [0, 0, 0, 0, 2, 0, 0]);
    }
    assert!(liedims_search(prime(2)).unwrap().is_empty());
    assert!(liedims_search(prime(5)).unwrap().is_empty());
}

fn relator_strategy() -> impl Strategy<Value = String> {
    let atom = prop::sample::select(vec!["x", "y", "t"]);
    (prop::collection::vec(atom, 2..5), -2i64..3).prop_map(|(names, k)| {
        let b = format!("[{}]", names.join(","));
        if k == 1 {
            b
        } else {
            format!("{k}*{b}")
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn quotients_match_associative_model(
        p in prop::sample::select(vec![2u64, 3, 5]),
        rels in prop::collection::vec(relator_strategy(), 0..4),
    ) {
        let gens = vec![Generator::new("x", 1), Generator::new("y", 1), Generator::new("t", 2)];
        let relators: Vec<BracketExpr> = rels.iter().map(|r| expr(r)).collect();
        let pres = LiePresentation::new(prime(p), gens, relators, 5);
        let q = nilpotent_quotient(&pres).unwrap();
        prop_assert_eq!(q.dims(), oracle_dims(&pres));
        q.algebra().audit().unwrap();
        let free = q.free_dims();
        for (d, f) in q.dims().iter().zip(&free) {
            prop_assert!(d <= f);
        }
        // dropping the relators of top weight leaves lower weights unchanged
        let top = pres.class;
        let weight = |r: &BracketExpr| {
            r.homogeneous_weight(&|n| pres.generators.iter().find(|g| g.name == n).map(|g| g.weight))
        };
        let mut lower = pres.clone();
        lower.relators.retain(|r| weight(r) != Some(top));
        let ql = nilpotent_quotient(&lower).unwrap();
        prop_assert_eq!(&q.dims()[..top - 1], &ql.dims()[..top - 1]);
    }
}

#[test]
fn search_over_f7_is_empty() {
    assert!(liedims_search(prime(7)).unwrap().is_empty());
}
