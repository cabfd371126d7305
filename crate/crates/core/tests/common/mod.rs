#![allow(dead_code)]

use qclogic::qcore::{ComplexMatrix, DensityOperator, Projector, UnitaryGate, C64};
use rand::Rng;

pub fn gaussian_matrix<R: Rng>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let entries: Vec<C64> = (0..dim * dim)
        .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    ComplexMatrix::new(dim, entries).expect("square")
}

pub fn hermitian<R: Rng>(dim: usize, rng: &mut R) -> ComplexMatrix {
    gaussian_matrix(dim, rng).hermitian_part()
}

/// An orthonormal basis from the eigenvectors of a random Hermitian matrix.
pub fn orthonormal_basis<R: Rng>(dim: usize, rng: &mut R) -> Vec<Vec<C64>> {
    hermitian(dim, rng).hermitian_eigen().vectors
}

/// `Σ e^{iθ_k} |v_k⟩⟨v_k|` with random phases and a random eigenbasis.
pub fn unitary<R: Rng>(dim: usize, rng: &mut R) -> UnitaryGate {
    let basis = orthonormal_basis(dim, rng);
    let phases: Vec<f64> = (0..dim).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect();
    diagonal_in(&basis, &phases)
}

/// The unitary that is diagonal with the given phases in `basis`.
pub fn diagonal_in(basis: &[Vec<C64>], phases: &[f64]) -> UnitaryGate {
    let dim = basis.len();
    let mut m = ComplexMatrix::zeros(dim);
    for (v, &t) in basis.iter().zip(phases) {
        m = &m + &ComplexMatrix::outer(v).scale(C64::from_polar(1.0, t));
    }
    UnitaryGate::new(m, 1e-9).expect("unitary by construction")
}

pub fn density<R: Rng>(dim: usize, rng: &mut R) -> DensityOperator {
    let g = gaussian_matrix(dim, rng);
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    DensityOperator::new(m.scale(C64::new(1.0 / tr, 0.0)), 1e-9).expect("density by construction")
}

/// A random pure state.
pub fn pure<R: Rng>(dim: usize, rng: &mut R) -> DensityOperator {
    let basis = orthonormal_basis(dim, rng);
    DensityOperator::pure(&basis[0]).expect("unit vector")
}

/// Projector onto the span of a random subset of `basis`.
pub fn projector_in<R: Rng>(basis: &[Vec<C64>], rng: &mut R) -> Projector {
    let dim = basis.len();
    let mut m = ComplexMatrix::zeros(dim);
    for v in basis {
        if rng.random_bool(0.5) {
            m = &m + &ComplexMatrix::outer(v);
        }
    }
    Projector::new(m, 1e-9).expect("projector by construction")
}

pub fn projector<R: Rng>(dim: usize, rng: &mut R) -> Projector {
    let basis = orthonormal_basis(dim, rng);
    projector_in(&basis, rng)
}
