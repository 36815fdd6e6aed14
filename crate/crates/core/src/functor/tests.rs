use super::*;
use crate::linear::Morphism;
use crate::orbit::{OrbitSymbol, TransitiveMap};
use crate::Field;

fn mu(k: usize) -> MeasureSpec {
    MeasureSpec::single(k, Field::Rational).unwrap()
}

fn build(i: u8, k: usize, e: &str) -> TensorFunctor {
    TensorFunctor::build(i, &mu(k), &OrderExpr::parse(e).unwrap()).unwrap()
}

fn p(n: usize, i: usize) -> GSetMap {
    let m = TransitiveMap::new(
        OrbitSymbol::single(n),
        OrbitSymbol::single(n - 1),
        vec![OIInjection::omission(n, i).unwrap()],
    )
    .unwrap();
    GSetMap::from_transitive(&m)
}

#[test]
fn build_checks_the_type() {
    let f = build(2, 1, "sum(R,1)");
    assert_eq!(f.profile().kind, DelannicType::T2);
    let err = TensorFunctor::build(1, &mu(1), &OrderExpr::parse("sum(R,R)").unwrap()).unwrap_err();
    assert!(matches!(err, Error::TypeMismatch { expected: 1, ref found } if found.contains("NOT_DELANNIC")), "{err}");
    let err = TensorFunctor::build(3, &mu(1), &OrderExpr::parse("sum(R,1)").unwrap()).unwrap_err();
    assert!(matches!(err, Error::TypeMismatch { expected: 3, .. }));
}

#[test]
fn objects() {
    let f = build(2, 1, "sum(R,1)");
    let img = f.apply_object(&GSet::power(2)).unwrap();
    let mut arities: Vec<usize> = img.orbits().iter().map(|o| o.arity(0)).collect();
    arities.sort();
    assert_eq!(arities, vec![1, 2]);
    assert_eq!(f.apply_object(&GSet::power(0)).unwrap(), GSet::point(1));
    let two = GSet::new(1, vec![OrbitSymbol::single(1), OrbitSymbol::single(0)]).unwrap();
    assert_eq!(f.apply_object(&two).unwrap().len(), 3);
    assert!(f.level(7).is_err());
    assert!(build(2, 1, "sum(R,1)").with_ceiling(8).level(7).is_ok());
}

#[test]
fn push_pull_goes_to_measure() {
    let f = build(2, 1, "sum(R,1)");
    let s = mu(2);
    let to_pt = GSetMap::to_point(&GSet::power(1));
    let c = Morphism::pushforward(&s, &to_pt).unwrap().compose(&Morphism::pullback(&s, &to_pt).unwrap()).unwrap();
    assert!(c.is_zero());
    let img = f.apply_morphism(&Morphism::pushforward(&s, &to_pt).unwrap()).unwrap()
        .compose(&f.apply_morphism(&Morphism::pullback(&s, &to_pt).unwrap()).unwrap())
        .unwrap();
    assert!(img.is_zero());
    for n in 0..=3 {
        let x = GSet::power(n);
        let id = f.apply_morphism(&Morphism::identity(&s, &x).unwrap()).unwrap();
        assert_eq!(id, Morphism::identity(&mu(1), &f.apply_object(&x).unwrap()).unwrap());
    }
}

#[test]
fn rejects_foreign_morphisms() {
    let f = build(2, 1, "sum(R,1)");
    let g = Morphism::identity(&mu(3), &GSet::power(1)).unwrap();
    assert!(f.apply_morphism(&g).is_err());
}

#[test]
fn phi0_checks() {
    let f = build(2, 1, "sum(R,1)");
    for r in [f.check_functoriality(3), f.check_monoidality(3), f.check_measure_compat(3), f.check_generating_maps(), f.check_dimensions(4)] {
        assert!(r.passed(), "{r}");
        assert!(r.checked > 0);
    }
    assert!(f.faithful());
    assert_eq!(f.full(3).unwrap(), Fullness::NotFull { n: 1, orbits: 2 });
}

#[test]
fn unit_algebra_gives_the_constant_functor() {
    let f = build(4, 2, "1");
    for n in 0..=3 {
        assert_eq!(f.level(n).unwrap().gset().len(), usize::from(n <= 1));
    }
    let f = build(4, 1, "1");
    assert!(!f.faithful());
    for r in [f.check_functoriality(3), f.check_monoidality(3), f.check_measure_compat(3)] {
        assert!(r.passed(), "{r}");
    }
}

#[test]
fn identity_like_functor() {
    for k in 1..=4 {
        let f = build(k as u8, k, "R");
        assert!(f.faithful());
        assert_eq!(f.full(5).unwrap(), Fullness::FullUpTo(5));
        let r = f.check_functoriality(2);
        assert!(r.passed(), "{r}");
        let x = GSet::power(2);
        for z in hom_basis(&x, &x) {
            let m = Morphism::basis(&mu(k), &x, &x, &z).unwrap();
            assert_eq!(f.apply_morphism(&m).unwrap(), m);
        }
    }
}

#[test]
fn corrupted_level_is_caught() {
    let f = build(2, 1, "sum(R,1)");
    let bad = tuples(&f.generator().reverse(), 2);
    let f = f.with_level(2, (*bad).clone());
    let r = f.check_measure_compat(2);
    assert!(!r.passed());
    assert!(r.failures[0].contains("fibre"), "{}", r.failures[0]);
    assert!(!f.check_functoriality(2).passed());
}

#[test]
fn generator_and_full_sweep_agree() {
    for (i, k, e) in [(2, 1, "sum(R,1)"), (3, 1, "sum(1,R)"), (4, 1, "sum(1,sum(R,1))"), (4, 2, "sum(1,R)"), (4, 3, "sum(R,1)")] {
        let f = build(i, k, e);
        assert!(f.check_generating_maps().passed());
        assert!(f.check_measure_compat(4).passed(), "{e}");
        assert!(f.check_dimensions(4).passed());
    }
}

#[test]
fn apply_ordered_commutes_with_substitution() {
    let outer = build(2, 1, "sum(R,1)");
    for e in ["R", "tup(R,2)", "sum(R,tup(R,2))", "sum(1,R)"] {
        let a = OrderExpr::parse(e).unwrap();
        let img = outer.apply_ordered(&a.evaluate(1).unwrap()).unwrap();
        assert!(img.verify().is_ok());
        let direct = a.substitute(&[OrderExpr::parse("sum(R,1)").unwrap()]).evaluate(1).unwrap();
        assert!(ordered_iso(&img, &direct).is_some(), "{e}");
    }
}

#[test]
fn composites() {
    let outer = build(2, 1, "sum(R,1)");
    let inner = build(4, 2, "sum(1,R)");
    let r = check_composite(&outer, &inner, 2).unwrap();
    assert!(r.passed() && r.checked > 1, "{r}");
    assert!(check_composite(&inner, &outer, 1).is_err());
}

#[test]
fn envelope_maps() {
    let s = mu(2);
    let f = Morphism::pullback(&s, &p(2, 2)).unwrap();
    let phi0 = build(2, 1, "sum(R,1)").apply_morphism(&f).unwrap();
    let phi1 = build(2, 1, "sum(R,tup(R,2))").apply_morphism(&f).unwrap();
    assert!(matches!(crate::linear::solve_left_inverse(&phi0).unwrap(), crate::linear::LeftInverse::Infeasible(_)));
    assert!(matches!(crate::linear::solve_left_inverse(&phi1).unwrap(), crate::linear::LeftInverse::Found(_)));
}

#[test]
fn square() {
    let r = scenario_commuting_square(Field::Rational).unwrap();
    assert!(r.passed(), "{r}");
    assert!(r.witness.is_some());
}
