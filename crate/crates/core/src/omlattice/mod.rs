//! Abstract orthomodular lattices with states and automorphisms.
//!
//! Two families of instances are provided: powerset algebras of bit strings
//! ([`boolean_oml`]) and finite sublattices of a projection lattice
//! ([`projection_oml`]). Every table-backed lattice passes the exhaustive
//! law battery in [`laws`] before it can be constructed.

use thiserror::Error;

use crate::qcore::QcoreError;

pub mod laws;
mod lattice;
mod projection;
mod scheme;
mod state;

pub use laws::{law_battery, Law, LawReport, LawResult, LawStatus, OrthoLattice};
pub use lattice::{boolean_oml, FiniteOML, RawLattice, MAX_BOOLEAN_OUTCOMES};
pub use projection::{
    gleason_state, projection_oml, projection_oml_with_cap, unitary_automorphism, ProjectionLattice,
    COLLISION_TOLERANCE, DEDUP_TOLERANCE, DEFAULT_CLOSURE_CAP, GLEASON_ZERO_THRESHOLD,
};
pub use scheme::{generalized_equiv, generalized_leq, run_protocol, ComputationalScheme, LatticeContext};
pub use state::{
    compose_automorphisms, is_superposition, is_superposition_with, pushforward, LatticeAutomorphism, LatticeState,
    SuperpositionCheck, TABLE_TOLERANCE,
};

#[derive(Debug, Error)]
pub enum LatticeError {
    #[error("{law} fails at ({})", witness.join(", "))]
    LawViolation { law: Law, witness: Vec<String> },
    #[error("malformed lattice: {0}")]
    Malformed(String),
    #[error("cannot parse lattice data: {0}")]
    Parse(String),
    #[error("boolean lattice over {requested} bits exceeds the cap of {cap}")]
    SizeCapExceeded { requested: usize, cap: usize },
    #[error("closure exceeds {cap} elements")]
    ClosureCapExceeded { cap: usize },
    #[error("projector within {distance:e} of element {element}: too close to identify or separate")]
    ToleranceCollision { element: usize, distance: f64 },
    #[error("dimension mismatch: lattice acts on dimension {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("not a state ({reason}) at ({})", witness.join(", "))]
    NotAState { reason: String, witness: Vec<String> },
    #[error("not an automorphism: {axiom} fails at ({})", witness.join(", "))]
    NotAnAutomorphism { axiom: String, witness: Vec<String> },
    #[error("conjugating element {element} leaves the lattice")]
    NotClosedUnderConjugation { element: String },
    #[error("objects belong to different lattices")]
    LatticeMismatch,
    #[error("index {index} out of range (length {len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("operation needs a boolean powerset lattice")]
    NotBoolean,
    #[error("the fully quantified context is only defined for equivalence")]
    UnsupportedContext,
    #[error(transparent)]
    Qcore(#[from] QcoreError),
}
