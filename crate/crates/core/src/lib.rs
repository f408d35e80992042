//! Relation counting, Riesz-product interpolation and certified Sidon-constant
//! bounds for finite sets of characters of discrete abelian groups.

pub mod cli;
pub mod error;
pub(crate) mod exact;
pub mod extract;
pub mod group;
pub mod polynomial;
pub mod interpolate;
pub mod relations;
pub mod sidon;

pub use error::{Error, Result};
pub use group::{DualPoint, ElementOrder, ElementSet, GroupElement, GroupSpec};
pub use polynomial::{PeakKind, PeakPolynomial, TrigPolynomial};
