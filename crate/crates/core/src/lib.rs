//! Verification and computation engine for finite double groupoids with
//! connections.
//!
//! The crate is organised around [`double::DoubleGC`], a tabulated finite
//! double category. On top of it sit axiom validation, thin structures,
//! cube shells and the commutativity condition, a small pasting-diagram
//! language, and colimit constructions (coproducts, coequalisers, pushouts).

pub mod cli;
pub mod colimits;
pub mod double;
pub mod format;
pub mod models;
pub mod pastings;
pub mod report;
pub mod shells;
pub mod thin;
pub mod validate;

pub use colimits::{DoubleMorphism, QuotientResult, QuotientStatus};
pub use double::{Dir, DoubleGC, DoubleGCBuilder, Edge, Kind, ModelError, Obj, OpError, Side, Sign, Sq};
pub use models::FiniteCategory;
pub use report::Report;
pub use shells::{Cube3, Shell2};
pub use validate::{validate, ValidationReport};
