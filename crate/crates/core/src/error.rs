//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A textual representation does not denote an element of the monoid.
    #[error("{repr:?} is not an element of monoid {monoid}")]
    InvalidElement { monoid: String, repr: String },

    /// An element of one monoid was used under another.
    #[error("monoid mismatch: {left} vs {right}")]
    MonoidMismatch { left: String, right: String },

    /// Malformed monoid spec text.
    #[error("cannot parse monoid spec {0:?}")]
    BadMonoidSpec(String),

    /// Attribute-level problem: unknown name, duplicate, bad domain value.
    #[error("attribute error: {0}")]
    Attribute(String),

    /// A tuple does not fit the attribute set it is declared over.
    #[error("tuple error: {0}")]
    Tuple(String),

    /// Requested marginal attributes are not a subset of the relation's.
    #[error("{missing:?} is not among the attributes {attrs:?}")]
    NotASubset { missing: String, attrs: Vec<String> },

    /// A witness function returned a relation violating its contract.
    #[error("witness contract violation at {context}: {detail}")]
    WitnessContract { context: String, detail: String },

    /// Closed-form witnesses exist only for monoids with the
    /// transportation property.
    #[error("monoid {0} has no closed-form transport solver")]
    UnsupportedMonoid(String),

    /// Hypergraph-level problem: unknown node, empty hyperedge, etc.
    #[error("hypergraph error: {0}")]
    Hypergraph(String),

    /// Join expression parse failure.
    #[error("expression parse error: {0}")]
    ExprParse(String),

    /// Expression/relation arity or schema mismatch.
    #[error("expression error: {0}")]
    Expr(String),

    /// A construction precondition does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),
}
