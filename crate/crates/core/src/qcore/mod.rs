//! Dense complex linear algebra with validated quantum types.
//!
//! [`ComplexMatrix`] is the substrate; [`DensityOperator`], [`Projector`] and
//! [`UnitaryGate`] are refinements that can only be obtained through
//! validation (or through constructors that are correct by construction).
//! All values are immutable once built.

mod commutant;
mod matrix;
mod validated;

use thiserror::Error;

pub use commutant::{
    boolean_projections, commutant, commutant_with_tolerance, double_commutant, sort_canonical,
    OperatorAlgebraBasis, MAX_ATOMS,
};
pub(crate) use commutant::{nullspace, orthonormal_span};
pub use matrix::{ComplexMatrix, HermitianEigen, MatrixLiteral, C64, ONE, ZERO};
pub use validated::{
    born, conjugate, pull_back, validate, DensityOperator, Invariant, Kind, Projector, UnitaryGate,
    Validated,
};

/// Default tolerance for validation and max-entry matrix equality.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Default cap on Hilbert-space dimension (ten qubits).
pub const DEFAULT_MAX_DIM: usize = 1 << 10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QcoreError {
    #[error("matrix dimension must be positive, got {dim}")]
    InvalidDimension { dim: usize },
    #[error("expected {expected} entries, found {found}")]
    EntryCount { expected: usize, found: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("validation failed: {invariant} violated by {magnitude:.3e}")]
    Validation { invariant: Invariant, magnitude: f64 },
    #[error("trace has imaginary residue {imag:.3e}")]
    NonRealTrace { imag: f64 },
    #[error("not an orthonormal rank-1 family: {reason}")]
    NotOrthonormalFamily { reason: String },
    #[error("double commutant of dimension {dimension} is not abelian")]
    NonAbelianAlgebra { dimension: usize },
    #[error("algebra has {atoms} minimal projections, cap is {cap}")]
    TooManyAtoms { atoms: usize, cap: usize },
    #[error("basis elements are linearly dependent")]
    LinearlyDependent,
    #[error("bad matrix literal: {0}")]
    Literal(String),
}

/// Product of single-qubit kets described by the characters `0`, `1`, `+`
/// and `-`, wire 0 leftmost.
pub fn product_ket(label: &str) -> Option<Vec<C64>> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut psi = vec![ONE];
    for ch in label.chars() {
        let q = match ch {
            '0' => [ONE, ZERO],
            '1' => [ZERO, ONE],
            '+' => [C64::new(s, 0.0), C64::new(s, 0.0)],
            '-' => [C64::new(s, 0.0), C64::new(-s, 0.0)],
            _ => return None,
        };
        psi = psi.iter().flat_map(|a| q.iter().map(move |b| a * b)).collect();
    }
    (!label.is_empty()).then_some(psi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_kets() {
        let psi = product_ket("01").unwrap();
        assert_eq!(psi, vec![ZERO, ONE, ZERO, ZERO]);
        let plus = product_ket("+").unwrap();
        assert!((plus[0].re - plus[1].re).abs() < 1e-15);
        assert!(product_ket("").is_none());
        assert!(product_ket("2").is_none());
    }
}
