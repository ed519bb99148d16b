//! Exact computations on punctual Hilbert schemes: tangent spaces, obstruction spaces and
//! certificates for elementary components.

pub mod artinian;
pub mod certify;
pub mod error;
pub mod gallery;
pub mod groebner;
pub mod homology;
pub mod io;
pub mod linalg;
pub mod poly;
pub mod ring;
pub mod scalar;
pub mod search;
pub mod series;

pub use error::{Error, Result};
pub use poly::Polynomial;
pub use ring::{GradedRing, Monomial, Ring};
pub use scalar::{Field, Scalar};
