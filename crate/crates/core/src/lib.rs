//! Quantum computational logic.
//!
//! Probabilistic truth values of quantum gates, the hierarchy of gate
//! equivalence and implication relations, classical Boolean and
//! Kolmogorovian computing as a special case, finite orthomodular lattices
//! with states and automorphisms, and exact runs of Deutsch-Jozsa and
//! period finding.
//!
//! Module map:
//!
//! - [`qcore`]: complex matrices, density operators, projectors, unitaries,
//!   Born rule, commutants.
//! - [`classical`]: Boolean circuits and stochastic output tables.
//! - [`gates`]: named gates, generator sets, gate words and their enumeration.
//! - [`logic`]: truth values, equivalences, implications, quotients.
//! - [`omlattice`]: orthomodular lattices, states, automorphisms, schemes.
//! - [`algorithms`]: Deutsch-Jozsa and period finding.
//! - [`parallel`]: the data-parallel execution switch used throughout.

pub mod algorithms;
pub mod classical;
pub mod gates;
pub mod logic;
pub mod omlattice;
pub mod parallel;
pub mod qcore;

pub use parallel::Execution;
