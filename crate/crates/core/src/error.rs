use thiserror::Error;

use crate::set::ElementSet;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("element {0} is outside the supported range 1..=64")]
    ElementOutOfRange(usize),
    #[error("ordered tuple {0:?} repeats an entry")]
    RepeatedEntry(Vec<usize>),
    #[error("{set} is not contained in the ground set {ground}")]
    NotInGround { set: ElementSet, ground: ElementSet },
    #[error("invalid circuit family: {0}")]
    InvalidCircuits(String),
    #[error("cannot contract loop {0}")]
    ContractLoop(usize),
    #[error("{0} is dependent")]
    Dependent(ElementSet),
    #[error("{0} is not a flat")]
    NotAFlat(ElementSet),
    #[error("supports {0} and {1} overlap")]
    Overlap(ElementSet, ElementSet),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: String },
    #[error("support {support} contains the deleted element {element}")]
    SupportContainsElement { support: ElementSet, element: usize },
    #[error("not a diagonal basis: {0}")]
    NotDiagonal(String),
    #[error("invalid commutation table: {0}")]
    InvalidBeta(String),
    #[error("{0}")]
    Invalid(String),
    #[error("parse error at {context}: {message}")]
    Parse { context: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
