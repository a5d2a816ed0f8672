//! Weakly holomorphic modular forms for real quadratic discriminants, their
//! Borcherds lifts to Hilbert modular surfaces, and the root data of the
//! rank-2 hyperbolic Kac-Moody algebras they correct.

pub mod arith;
pub mod asympt;
pub mod borcherds;
pub mod characters;
pub mod cyclotomic;
pub mod dense;
pub mod error;
pub mod eta;
pub mod exact;
pub mod kacmoody;
pub mod qseries;
pub mod quadfield;
pub mod solver;
pub mod weilrep;

pub use error::{Error, Result};
pub use exact::Rational;
pub use qseries::QSeries;
