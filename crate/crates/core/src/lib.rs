//! Exact-arithmetic construction and verification of plane curves with
//! prescribed intersection behaviour.
//!
//! The crate builds smooth plane curves carrying prescribed divisors on
//! triples of lines (Carnot-type criteria), assembles linear systems on a
//! smooth ambient curve, and certifies their dimension, base locus,
//! speciality and (non-)triviality, all over exact fields: the rationals,
//! prime fields and their extensions.

pub mod error;
pub mod field;
pub mod matrix;
pub mod forms;
pub mod geometry;
pub mod carnot;
pub mod linsys;
pub mod construct;
pub mod io;

pub use error::{Error, Result};
pub use field::{Field, FieldElement, FieldKind};
