//! Exact arithmetic for Leonard systems: parameter arrays and their
//! classification conditions, the dihedral family of relatives, split
//! realizations with primitive idempotents, trace identities and recovery of
//! the split sequences, and the q-structured closed forms with their
//! summation relations.
//!
//! Everything is computed over an exact field — the rationals, a prime
//! field, or univariate rational functions — with no floating point and no
//! tolerances.

pub mod field;
pub mod generate;
pub mod json;
pub mod linalg;
pub mod params;
pub mod qkit;
pub mod realize;
pub mod traces;

pub use field::{parse_element, FieldDescriptor, FieldElement, FieldError};
pub use params::{validate, ParameterArray, ValidationReport};
