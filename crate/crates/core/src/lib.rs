//! Exact toolkit for linear systems of hypersurfaces through prescribed
//! points: construction of the systems, jet-map rank stratification on a
//! smooth variety, quadric discriminants, and brute-force smoothness checks
//! over prime fields.

pub mod error;
pub mod field;
pub mod harness;
pub mod jets;
pub mod linsys;
pub mod poly;
pub mod proj;
pub mod smoothness;

pub use error::{Error, Result};
pub use field::{Field, Matrix, Scalar};
pub use jets::VarietySpec;
pub use linsys::{LinearSystem, SystemDimension};
pub use poly::{Monomial, MultiPoly};
pub use proj::{PointConfig, ProjPoint};
