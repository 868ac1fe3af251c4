//! Exact and numerical certificates for Liouville pairs on solvable Lie groups,
//! taming complex structures of symplectic pencils, and Giroux torsion families.

pub mod error;
pub mod exterior;
pub mod formfam;
pub mod liealg;
pub mod numfield;
pub mod poly;
pub mod scalar;
pub mod symplin;

pub use error::{Error, Result};
pub use exterior::{Coframe, Form, VectorElem};
pub use scalar::{Rational, Scalar};
