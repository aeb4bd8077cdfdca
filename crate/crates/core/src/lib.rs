//! Generalized Roth-Lempel codes over finite fields: construction, NMDS and
//! Hermitian self-orthogonality criteria, explicit families and the quantum
//! codes they yield.

pub mod code;
pub mod combin;
pub mod error;
pub mod families;
pub mod field;
pub mod grl;
pub mod linalg;
pub mod par;
pub mod quantum;
pub mod reference;

pub use error::{Error, Result};
pub use field::{Elem, Field, FieldSpec, QuadraticExtension};
pub use linalg::Matrix;
pub use par::Exec;
