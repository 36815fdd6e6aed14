use delannoy_core::functor::{check_composite, Fullness, TensorFunctor};
use delannoy_core::measure::MeasureSpec;
use delannoy_core::order::OrderExpr;
use delannoy_core::Field;

fn build(i: u8, k: usize, e: &str) -> TensorFunctor {
    let target = MeasureSpec::single(k, Field::Rational).unwrap();
    TensorFunctor::build(i, &target, &OrderExpr::parse(e).unwrap()).unwrap()
}

// The functor with generator sum(R,tup(R,2)) needs tuple levels up to twice
// the bound, so it is checked separately at a smaller bound.
const FUNCTORS: [(u8, usize, &str); 5] = [
    (2, 1, "sum(R,1)"),
    (3, 1, "sum(1,R)"),
    (4, 1, "sum(1,sum(R,1))"),
    (4, 2, "sum(1,R)"),
    (4, 3, "sum(R,1)"),
];

#[test]
fn named_functors_at_three() {
    for (i, k, e) in FUNCTORS {
        let f = build(i, k, e);
        for r in [f.check_functoriality(3), f.check_monoidality(3), f.check_measure_compat(3)] {
            assert!(r.passed(), "{e}: {r}");
        }
        assert!(f.faithful(), "{e}");
    }
}

#[test]
fn quadratic_generator_at_two() {
    let f = build(2, 1, "sum(R,tup(R,2))");
    for r in [f.check_functoriality(2), f.check_monoidality(2), f.check_measure_compat(3)] {
        assert!(r.passed(), "{r}");
    }
    assert!(f.faithful());
}

#[test]
fn fullness() {
    assert_eq!(build(1, 1, "R").full(4).unwrap(), Fullness::FullUpTo(4));
    assert!(matches!(build(2, 1, "sum(R,1)").full(3).unwrap(), Fullness::NotFull { .. }));
    assert_eq!(build(4, 4, "R").full(3).unwrap(), Fullness::FullUpTo(3));
}

#[test]
fn composites_through_the_second_category() {
    let outer = build(2, 1, "sum(R,1)");
    for inner in [build(4, 2, "sum(1,R)"), build(2, 2, "R")] {
        let r = check_composite(&outer, &inner, 2).unwrap();
        assert!(r.passed(), "{r}");
    }
    let outer = build(2, 1, "sum(R,tup(R,2))");
    let r = check_composite(&outer, &build(4, 2, "sum(1,R)"), 2).unwrap();
    assert!(r.passed(), "{r}");
}
