use std::fmt;

use super::matrix::{normalize, ComplexMatrix, C64, ONE};
use super::{QcoreError, DEFAULT_TOLERANCE};

/// Which refinement of [`ComplexMatrix`] to validate against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Density,
    Projector,
    Unitary,
}

/// The invariant a matrix failed to satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Invariant {
    SelfAdjoint,
    Trace,
    PositiveSemidefinite,
    Idempotent,
    Unitary,
    Tolerance,
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Invariant::SelfAdjoint => "self-adjoint",
            Invariant::Trace => "trace",
            Invariant::PositiveSemidefinite => "positive-semidefinite",
            Invariant::Idempotent => "idempotent",
            Invariant::Unitary => "unitary",
            Invariant::Tolerance => "tolerance",
        };
        f.write_str(s)
    }
}

fn fail(invariant: Invariant, magnitude: f64) -> QcoreError {
    QcoreError::Validation {
        invariant,
        magnitude,
    }
}

fn check_tolerance(tol: f64) -> Result<(), QcoreError> {
    if tol.is_finite() && tol >= 0.0 {
        Ok(())
    } else {
        Err(fail(Invariant::Tolerance, tol))
    }
}

/// Positive, self-adjoint, trace-one operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
    tolerance: f64,
}

/// Self-adjoint idempotent operator.
#[derive(Clone, Debug, PartialEq)]
pub struct Projector {
    matrix: ComplexMatrix,
    tolerance: f64,
}

/// Operator with `UU† = U†U = 𝟙`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryGate {
    matrix: ComplexMatrix,
    tolerance: f64,
}

/// Result of [`validate`].
#[derive(Clone, Debug, PartialEq)]
pub enum Validated {
    Density(DensityOperator),
    Projector(Projector),
    Unitary(UnitaryGate),
}

/// Checks `m` against the invariants of `kind`, reporting the first violated
/// invariant with its magnitude.
pub fn validate(m: ComplexMatrix, kind: Kind, tolerance: f64) -> Result<Validated, QcoreError> {
    Ok(match kind {
        Kind::Density => Validated::Density(DensityOperator::new(m, tolerance)?),
        Kind::Projector => Validated::Projector(Projector::new(m, tolerance)?),
        Kind::Unitary => Validated::Unitary(UnitaryGate::new(m, tolerance)?),
    })
}

impl DensityOperator {
    pub fn new(matrix: ComplexMatrix, tolerance: f64) -> Result<Self, QcoreError> {
        check_tolerance(tolerance)?;
        let herm = matrix.hermiticity_defect();
        if herm > tolerance {
            return Err(fail(Invariant::SelfAdjoint, herm));
        }
        let trace_defect = (matrix.trace() - ONE).norm();
        if trace_defect > tolerance {
            return Err(fail(Invariant::Trace, trace_defect));
        }
        let min_eig = matrix.hermitian_eigen().values[0];
        if min_eig < -tolerance {
            return Err(fail(Invariant::PositiveSemidefinite, -min_eig));
        }
        Ok(Self { matrix, tolerance })
    }

    /// Pure state `|ψ⟩⟨ψ|`; `psi` is normalized first.
    pub fn pure(psi: &[C64]) -> Result<Self, QcoreError> {
        if psi.is_empty() || psi.iter().all(|z| z.norm() == 0.0) {
            return Err(fail(Invariant::Trace, 1.0));
        }
        Self::new(ComplexMatrix::outer(&normalize(psi)), DEFAULT_TOLERANCE)
    }

    /// Computational basis state `|k⟩⟨k|`.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index out of range");
        Self {
            matrix: ComplexMatrix::basis_projector(dim, k),
            tolerance: DEFAULT_TOLERANCE,
        }
    }

    /// `𝟙/dim`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale(C64::new(1.0 / dim as f64, 0.0)),
            tolerance: DEFAULT_TOLERANCE,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Result<Self, QcoreError> {
        check_tolerance(tolerance)?;
        self.tolerance = tolerance;
        Ok(self)
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            matrix: self.matrix.tensor(&other.matrix),
            tolerance: self.tolerance.max(other.tolerance),
        }
    }
}

impl Projector {
    pub fn new(matrix: ComplexMatrix, tolerance: f64) -> Result<Self, QcoreError> {
        check_tolerance(tolerance)?;
        let herm = matrix.hermiticity_defect();
        if herm > tolerance {
            return Err(fail(Invariant::SelfAdjoint, herm));
        }
        let idem = (&matrix * &matrix).max_abs_diff(&matrix);
        if idem > tolerance {
            return Err(fail(Invariant::Idempotent, idem));
        }
        Ok(Self { matrix, tolerance })
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::zeros(dim),
            tolerance: DEFAULT_TOLERANCE,
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim),
            tolerance: DEFAULT_TOLERANCE,
        }
    }

    /// `|k⟩⟨k|`.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index out of range");
        Self {
            matrix: ComplexMatrix::basis_projector(dim, k),
            tolerance: DEFAULT_TOLERANCE,
        }
    }

    /// Rank-1 projector onto `span{v}`.
    pub fn onto(v: &[C64]) -> Result<Self, QcoreError> {
        if v.is_empty() || v.iter().all(|z| z.norm() == 0.0) {
            return Err(fail(Invariant::Idempotent, 1.0));
        }
        Self::new(ComplexMatrix::outer(&normalize(v)), DEFAULT_TOLERANCE)
    }

    /// Projector onto the span of an orthonormal family (not re-checked).
    pub(crate) fn from_orthonormal(dim: usize, vectors: &[Vec<C64>], tolerance: f64) -> Self {
        let mut m = ComplexMatrix::zeros(dim);
        for v in vectors {
            m = &m + &ComplexMatrix::outer(v);
        }
        Self {
            matrix: m,
            tolerance,
        }
    }

    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix, tolerance: f64) -> Self {
        Self { matrix, tolerance }
    }

    /// `𝟙 − P`.
    pub fn complement(&self) -> Self {
        Self {
            matrix: &ComplexMatrix::identity(self.dim()) - &self.matrix,
            tolerance: self.tolerance,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Rank, read off the trace.
    pub fn rank(&self) -> usize {
        self.matrix.trace().re.round().max(0.0) as usize
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            matrix: self.matrix.tensor(&other.matrix),
            tolerance: self.tolerance.max(other.tolerance),
        }
    }
}

impl UnitaryGate {
    pub fn new(matrix: ComplexMatrix, tolerance: f64) -> Result<Self, QcoreError> {
        check_tolerance(tolerance)?;
        let id = ComplexMatrix::identity(matrix.dim());
        let adj = matrix.adjoint();
        let left = (&matrix * &adj).max_abs_diff(&id);
        let right = (&adj * &matrix).max_abs_diff(&id);
        let defect = left.max(right);
        if defect > tolerance {
            return Err(fail(Invariant::Unitary, defect));
        }
        Ok(Self { matrix, tolerance })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim),
            tolerance: DEFAULT_TOLERANCE,
        }
    }

    /// Wraps a matrix known to be unitary by construction (permutations, exact gates).
    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix, tolerance: f64) -> Self {
        Self { matrix, tolerance }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
            tolerance: self.tolerance,
        }
    }

    /// `self · other` (apply `other` first).
    pub fn then_after(&self, other: &Self) -> Result<Self, QcoreError> {
        Ok(Self {
            matrix: self.matrix.try_mul(&other.matrix)?,
            tolerance: self.tolerance.max(other.tolerance),
        })
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            matrix: self.matrix.tensor(&other.matrix),
            tolerance: self.tolerance.max(other.tolerance),
        }
    }
}

/// `UρU†`, revalidated as a density operator.
pub fn conjugate(u: &UnitaryGate, rho: &DensityOperator) -> Result<DensityOperator, QcoreError> {
    rho.matrix.check_same_dim(&u.matrix)?;
    let m = &(&u.matrix * &rho.matrix) * &u.matrix.adjoint();
    DensityOperator::new(m, rho.tolerance + u.tolerance)
}

/// `U†PU`: the event `P` pulled back through `U`.
pub fn pull_back(u: &UnitaryGate, p: &Projector) -> Result<Projector, QcoreError> {
    p.matrix.check_same_dim(&u.matrix)?;
    let m = &(&u.matrix.adjoint() * &p.matrix) * &u.matrix;
    Ok(Projector::from_matrix_unchecked(m, p.tolerance + u.tolerance))
}

/// Born probability `Tr(σP)`, clamped to `[0, 1]`.
pub fn born(sigma: &DensityOperator, p: &Projector) -> Result<f64, QcoreError> {
    sigma.matrix.check_same_dim(&p.matrix)?;
    let n = sigma.dim();
    // Tr(σP) = Σ_ij σ_ij P_ji
    let mut t = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            t += sigma.matrix[(i, j)] * p.matrix[(j, i)];
        }
    }
    let tol = sigma.tolerance.max(p.tolerance);
    if t.im.abs() > tol {
        return Err(QcoreError::NonRealTrace { imag: t.im });
    }
    Ok(t.re.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::matrix::ZERO;

    fn hadamard() -> UnitaryGate {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        UnitaryGate::new(ComplexMatrix::from_real(2, &[s, s, s, -s]).unwrap(), 1e-9).unwrap()
    }

    fn pauli_x() -> UnitaryGate {
        UnitaryGate::new(ComplexMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap(), 1e-9).unwrap()
    }

    #[test]
    fn validate_examples() {
        let ok = validate(ComplexMatrix::diag_real(&[0.5, 0.5]), Kind::Density, 1e-9);
        assert!(matches!(ok, Ok(Validated::Density(_))));

        let err = validate(ComplexMatrix::diag_real(&[1.0, 0.1]), Kind::Density, 1e-9).unwrap_err();
        match err {
            QcoreError::Validation {
                invariant,
                magnitude,
            } => {
                assert_eq!(invariant, Invariant::Trace);
                assert!((magnitude - 0.1).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }

        let h = hadamard();
        assert!(matches!(
            validate(h.matrix().clone(), Kind::Unitary, 1e-9),
            Ok(Validated::Unitary(_))
        ));
    }

    #[test]
    fn validation_failures_name_the_invariant() {
        let neg = ComplexMatrix::diag_real(&[1.5, -0.5]);
        let e = DensityOperator::new(neg, 1e-9).unwrap_err();
        assert!(matches!(
            e,
            QcoreError::Validation { invariant: Invariant::PositiveSemidefinite, magnitude } if (magnitude - 0.5).abs() < 1e-12
        ));
        let nonherm = ComplexMatrix::from_real(2, &[0.5, 1.0, 0.0, 0.5]).unwrap();
        assert!(matches!(
            DensityOperator::new(nonherm, 1e-9),
            Err(QcoreError::Validation { invariant: Invariant::SelfAdjoint, .. })
        ));
        let half = ComplexMatrix::diag_real(&[0.5, 0.0]);
        assert!(matches!(
            Projector::new(half, 1e-9),
            Err(QcoreError::Validation { invariant: Invariant::Idempotent, .. })
        ));
        let shear = ComplexMatrix::from_real(2, &[1.0, 1.0, 0.0, 1.0]).unwrap();
        assert!(matches!(
            UnitaryGate::new(shear, 1e-9),
            Err(QcoreError::Validation { invariant: Invariant::Unitary, .. })
        ));
        assert!(matches!(
            Projector::new(ComplexMatrix::zeros(2), -1.0),
            Err(QcoreError::Validation { invariant: Invariant::Tolerance, .. })
        ));
    }

    #[test]
    fn conjugate_examples() {
        let rho0 = DensityOperator::basis(2, 0);
        let same = conjugate(&UnitaryGate::identity(2), &rho0).unwrap();
        assert!(same.matrix().approx_eq(rho0.matrix(), 1e-15));

        let plus = conjugate(&hadamard(), &rho0).unwrap();
        let half = ComplexMatrix::from_real(2, &[0.5; 4]).unwrap();
        assert!(plus.matrix().approx_eq(&half, 1e-12));

        let one = conjugate(&pauli_x(), &rho0).unwrap();
        assert!(one.matrix().approx_eq(DensityOperator::basis(2, 1).matrix(), 0.0));

        assert!(matches!(
            conjugate(&UnitaryGate::identity(4), &rho0),
            Err(QcoreError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn born_examples() {
        let sigma = DensityOperator::maximally_mixed(2);
        assert_eq!(born(&sigma, &Projector::zero(2)).unwrap(), 0.0);
        let rho0 = DensityOperator::basis(2, 0);
        assert_eq!(born(&rho0, &Projector::basis(2, 0)).unwrap(), 1.0);
        let plus = conjugate(&hadamard(), &rho0).unwrap();
        assert!((born(&plus, &Projector::basis(2, 0)).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn born_rejects_imaginary_residue() {
        // σ is a valid state; P is deliberately non-Hermitian to force Im Tr(σP) ≠ 0
        let sigma = DensityOperator::maximally_mixed(2);
        let bogus = Projector::from_matrix_unchecked(
            ComplexMatrix::new(2, vec![ZERO, C64::new(0.0, 1.0), ZERO, C64::new(0.0, 0.2)]).unwrap(),
            1e-9,
        );
        assert!(matches!(born(&sigma, &bogus), Err(QcoreError::NonRealTrace { .. })));
    }

    #[test]
    fn complement_and_pure() {
        let p = Projector::onto(&[C64::new(1.0, 0.0), C64::new(1.0, 0.0)]).unwrap();
        let q = p.complement();
        let minus = Projector::onto(&[C64::new(1.0, 0.0), C64::new(-1.0, 0.0)]).unwrap();
        assert!(q.matrix().approx_eq(minus.matrix(), 1e-12));
        assert_eq!(p.rank(), 1);
        assert!(DensityOperator::pure(&[ZERO, ZERO]).is_err());
    }
}
