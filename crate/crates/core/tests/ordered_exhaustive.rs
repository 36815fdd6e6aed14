//! Every constructor expression up to six nodes (one factor) or five nodes
//! (two factors) evaluates to a total order.

use delannoy_core::order::distinct_evaluations;

fn sweep(size: usize, shape: usize) -> usize {
    let objects = distinct_evaluations(size, shape).unwrap();
    for (e, o) in &objects {
        assert_eq!(o.verify(), Ok(()), "{e}");
    }
    objects.len()
}

#[test]
fn one_factor_up_to_six_nodes() {
    assert!(sweep(6, 1) > 1000);
}

#[test]
fn two_factors_up_to_five_nodes() {
    assert!(sweep(5, 2) > 1000);
}
