//! Exact-arithmetic kernel for skeletal multi-fusion categories.
//!
//! Everything is computed over a fixed number field `Q[x]/(p(x))` with no
//! floating point: category data (fusion rules, associator matrices, duality
//! pairings) is validated exactly, and the higher constructions (algebras and
//! their module categories, relative tensor products, Drinfeld centers, the
//! center-functor theorem suite) are built from blockwise linear algebra over
//! that field.

pub mod error;
pub mod par;
pub mod field;
pub mod poly;
pub mod matrix;
pub mod fusdata;
pub mod homspace;
pub mod algmod;
pub mod modcat;
pub mod center;
pub mod cfunctor;
pub mod oracle;
pub mod report;
pub mod io;
pub mod examples;

pub use error::{Error, Result};
pub use field::{Field, FieldElem};
pub use matrix::Matrix;
