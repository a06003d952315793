//! Morphisms, coproducts, coequalisers and pushouts of finite models.

mod coequalise;
mod coproduct;
mod morphism;
mod search;
pub mod vk;

use thiserror::Error;

use crate::double::ModelError;

pub use coequalise::{
    coequalise, factor_through, pushout, EdgeDef, Provenance, PushoutResult, QuotientResult, QuotientStatus, SquareDef,
    Unary, DEFAULT_BUDGET,
};
pub use coproduct::coproduct;
pub use morphism::{validate_morphism, DoubleMorphism, MorphismError};
pub use search::{find_morphisms, iso_check, Partial};
pub use vk::{cover_diagram, vk_harness, CoverDiagram, VkOutcome};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColimitError {
    #[error("input mismatch: {0}")]
    InputMismatch(String),
    #[error("f does not coequalise the pair: {0}")]
    NotCoequalised(String),
    #[error("well-definedness failure: {0}")]
    WellDefinednessFailure(String),
    #[error("the quotient was not computed to a fixed point")]
    NotFinite,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
}
