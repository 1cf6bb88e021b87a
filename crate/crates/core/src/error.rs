use thiserror::Error;

use crate::ring::Element;

/// Errors raised while constructing rings or addressing their elements.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("Z/nZ requires n >= 1")]
    ZeroModulus,
    #[error("matrix dimension must be at least 1")]
    ZeroDimension,
    #[error("ring of cardinality {cardinality} exceeds the size cap {cap}")]
    CapExceeded { cardinality: u128, cap: u64 },
    #[error("code {code} is not an element of {ring} (size {size})")]
    InvalidElement { code: u32, size: u32, ring: String },
    #[error("element {0} is not idempotent")]
    NotIdempotent(Element),
    #[error("element {element} lies outside the carrier of {ring}")]
    OutsideCarrier { element: Element, ring: String },
    #[error("{0} is not a matrix or product construction")]
    WrongConstruction(String),
    #[error("malformed ring tables: {0}")]
    MalformedTable(String),
}
