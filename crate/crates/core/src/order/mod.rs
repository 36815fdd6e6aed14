//! Totally ordered `G^r`-sets, their constructors and tuple powers.

mod expr;
mod ordered;

pub use expr::{distinct_evaluations, enumerate_expressions, ChainLength, OrderExpr, SUITE_MAX_ARITY};
pub use ordered::{
    finite_like, order_scheme_subobject, ordered_iso, pair_components, power_size, tuples, tuples_direct,
    FiniteLike, OrderScheme, OrderViolation, OrderedGSet, TupleLevel,
};
