//! Orbits of products of `Aut(R, <)^r`-sets and the maps between them.

mod component;
mod gset;
mod injection;
mod pattern;

pub use component::{fiber_product, image_factorization, product_decompose, product_gset, Component};
pub use gset::{GSet, GSetMap, OrbitSymbol, TransitiveMap};
pub use injection::{enumerate_injections, OIInjection};
pub use pattern::{constrained_merges, letter_cmp, merge_patterns, power_words, Letter, Word, B, L, MAX_SLOTS, R};
