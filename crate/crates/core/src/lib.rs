//! Wall invariants of isometry pairs and two-involution factorizations in
//! GL, O and Sp over odd prime fields and the rationals.

pub mod error;
pub mod ext;
pub mod factorize;
pub mod factor;
pub mod field;
pub mod isopair;
pub mod json;
pub mod linalg;
pub mod matrix;
pub mod oracle;
pub mod poly;
pub mod sample;
pub mod wall;

pub use error::{Error, Result};
pub use field::{seeded_rng, BaseField, Field, FieldDescriptor, PrimeField, Rationals, Rng};
pub use matrix::Matrix;
pub use poly::Poly;
