pub mod delannic;
pub mod error;
pub mod functor;
pub mod linear;
pub mod measure;
pub mod orbit;
pub mod order;
pub mod scalar;
pub mod scenarios;
pub mod serial;

pub use error::{Error, Result};
pub use scalar::{Field, Scalar};
