//! Representations of irrational numbers in (0,1) as queryable oracles, and
//! instrumented conversions between them.

pub mod convert;
pub mod error;
pub mod farey;
pub mod numeric;
pub mod reference;
pub mod reps;

pub use error::Error;
pub use numeric::{DigitString, OpenInterval, Rational};
