//! Annotated relations over positive commutative monoids, consistency
//! witnesses, and hypergraph acyclicity.
//!
//! The crate has five layers:
//!
//! * [`monoid`] — pluggable positive commutative monoids, element
//!   arithmetic, and transportation-matrix solvers;
//! * [`relation`] — K-relations (tuples annotated with monoid values),
//!   marginals, and the consistency machinery built on transportation
//!   instances;
//! * [`hypergraph`] — schemas as hypergraphs and the structural
//!   acyclicity notions (alpha via GYO, beta and gamma via weak cycles);
//! * [`joinexpr`] — binary c-join expression trees evaluated under a
//!   consistency witness function, with monotonicity checking;
//! * [`lab`] — counterexample constructions, relation samplers, and
//!   randomized verification suites that cross-check the layers against
//!   each other.

pub mod error;
pub mod hypergraph;
pub mod joinexpr;
pub mod lab;
pub mod monoid;
pub mod relation;

pub use error::Error;
pub use hypergraph::{Hyperedge, Hypergraph, WeakCycle, WeakCycleKind};
pub use joinexpr::JoinExpr;
pub use monoid::{
    Budget, Feasibility, MonoidKind, MonoidSpec, TransportInstance, TransportMatrix, Value,
};
pub use relation::{Attribute, AttributeSet, Consistency, KRelation, KTuple, WitnessFn};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
