//! The linear categories `C(X)` with bases indexed by orbits of products.
//!
//! For `f: Y -> X` the composite `f_* ∘ f^*` is `mu(f)` times the identity of
//! `C(X)` when `X` is transitive.

mod laws;
mod matrix;
mod morphism;

pub use laws::{check_category_laws, delannoy_number, gram_rank_profile, hom_dim, LawReport};
pub use matrix::{Matrix, Solve};
pub use morphism::{
    algebra_structure, dim, gram_matrix, hom_basis, selection, solve_left_inverse, verify_infeasibility,
    AlgebraStructure, LeftInverse, Morphism,
};
