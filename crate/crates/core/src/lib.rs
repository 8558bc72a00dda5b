//! Exact computations with arcs in PG(k-1, q): scaled tangent forms, the
//! tensor form F, coefficient extraction and the dual hypersurface φ.

pub mod error;
pub mod field;
pub mod forms;
pub mod geometry;
pub mod report;
pub mod sbbt;
pub mod suite;
pub mod tangents;
pub mod tensorform;

pub use error::{Error, Result};
pub use field::{Fe, Field, FieldElement, Matrix};
pub use forms::{HomogeneousForm, LinearForm, MultiIndex};
pub use geometry::{Arc, DualPoint, ProjectivePoint};
pub use report::{Check, Report};
pub use sbbt::SbbtForm;
pub use tangents::{Parity, TangentSystem};
pub use tensorform::MultiForm;
