//! Commutants, double commutants and the Boolean algebra of projections
//! generated by a measurement basis.
//!
//! The commutant of a set `S` of `d×d` matrices is the solution space of the
//! homogeneous linear system `XY − YX = 0` for all `Y ∈ S`, in the `d²`
//! unknown entries of `X`. The system is row-reduced with partial pivoting
//! and the nullspace is read off the free columns.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::matrix::{inner, ComplexMatrix, C64, ZERO};
use super::validated::Projector;
use super::{QcoreError, DEFAULT_TOLERANCE};

/// Upper bound on the number of minimal projections enumerated by
/// [`boolean_projections`] (the output has `2^atoms` members).
pub const MAX_ATOMS: usize = 16;

/// Basis of a linear space of `dim×dim` matrices.
#[derive(Clone, Debug)]
pub struct OperatorAlgebraBasis {
    dim: usize,
    basis: Vec<ComplexMatrix>,
    // Frobenius-orthonormal copy of `basis`, used for membership tests.
    orthonormal: Vec<Vec<C64>>,
}

impl OperatorAlgebraBasis {
    pub fn new(dim: usize, basis: Vec<ComplexMatrix>) -> Result<Self, QcoreError> {
        for b in &basis {
            if b.dim() != dim {
                return Err(QcoreError::DimensionMismatch {
                    left: dim,
                    right: b.dim(),
                });
            }
        }
        let orthonormal = gram_schmidt(basis.iter().map(|b| b.as_slice().to_vec()), 1e-10);
        if orthonormal.len() != basis.len() {
            return Err(QcoreError::LinearlyDependent);
        }
        Ok(Self {
            dim,
            basis,
            orthonormal,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Dimension of the spanned space.
    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[ComplexMatrix] {
        &self.basis
    }

    /// Distance (Frobenius norm) from `m` to the spanned space.
    pub fn residual(&self, m: &ComplexMatrix) -> f64 {
        let mut r = m.as_slice().to_vec();
        for q in &self.orthonormal {
            let c = inner(q, &r);
            for (x, y) in r.iter_mut().zip(q) {
                *x -= c * y;
            }
        }
        r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn contains(&self, m: &ComplexMatrix, tol: f64) -> bool {
        m.dim() == self.dim && self.residual(m) <= tol * (1.0 + m.max_abs() * self.dim as f64)
    }

    /// Whether every basis element of `self` lies in `other`.
    pub fn is_subspace_of(&self, other: &Self, tol: f64) -> bool {
        self.basis.iter().all(|b| other.contains(b, tol))
    }

    /// Whether all basis elements commute pairwise.
    pub fn is_abelian(&self, tol: f64) -> bool {
        self.basis.iter().enumerate().all(|(i, a)| {
            self.basis[i + 1..].iter().all(|b| {
                (&(a * b) - &(b * a)).max_abs() <= tol * (1.0 + a.max_abs() * b.max_abs())
            })
        })
    }
}

fn gram_schmidt(vectors: impl Iterator<Item = Vec<C64>>, tol: f64) -> Vec<Vec<C64>> {
    let mut out: Vec<Vec<C64>> = Vec::new();
    for mut v in vectors {
        // two passes for numerical stability
        for _ in 0..2 {
            for q in &out {
                let c = inner(q, &v);
                for (x, y) in v.iter_mut().zip(q) {
                    *x -= c * y;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > tol {
            out.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    out
}

/// Orthonormal basis of the span of `vectors`, dropping dependent ones.
pub(crate) fn orthonormal_span(vectors: impl Iterator<Item = Vec<C64>>, tol: f64) -> Vec<Vec<C64>> {
    gram_schmidt(vectors, tol)
}

/// Nullspace of a `rows × cols` row-major system via reduced row echelon
/// form. Returns one basis vector per free column.
pub(crate) fn nullspace(mut a: Vec<Vec<C64>>, cols: usize, tol: f64) -> Vec<Vec<C64>> {
    let scale = a
        .iter()
        .flat_map(|r| r.iter())
        .map(|z| z.norm())
        .fold(0.0, f64::max)
        .max(1.0);
    let threshold = tol * scale;
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == a.len() {
            break;
        }
        let (best, best_norm) = (row..a.len())
            .map(|r| (r, a[r][col].norm()))
            .fold((row, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best_norm <= threshold {
            continue;
        }
        a.swap(row, best);
        let p = a[row][col];
        for x in a[row].iter_mut() {
            *x /= p;
        }
        let pivot_row = a[row].clone();
        for (r, other) in a.iter_mut().enumerate() {
            if r == row {
                continue;
            }
            let f = other[col];
            if f.norm() == 0.0 {
                continue;
            }
            for (x, y) in other.iter_mut().zip(&pivot_row) {
                *x -= f * y;
            }
            other[col] = ZERO;
        }
        pivots.push(col);
        row += 1;
    }
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![ZERO; cols];
            v[free] = C64::new(1.0, 0.0);
            for (r, &pc) in pivots.iter().enumerate() {
                let x = -a[r][free];
                v[pc] = if x.norm() <= threshold { ZERO } else { x };
            }
            v
        })
        .collect()
}

/// Basis of `S′ = {X | [X, Y] = 0 for all Y ∈ S}`.
pub fn commutant(set: &[ComplexMatrix], dim: usize) -> Result<OperatorAlgebraBasis, QcoreError> {
    commutant_with_tolerance(set, dim, DEFAULT_TOLERANCE)
}

pub fn commutant_with_tolerance(
    set: &[ComplexMatrix],
    dim: usize,
    tol: f64,
) -> Result<OperatorAlgebraBasis, QcoreError> {
    if dim == 0 {
        return Err(QcoreError::InvalidDimension { dim });
    }
    let n2 = dim * dim;
    let mut rows: Vec<Vec<C64>> = Vec::with_capacity(set.len() * n2);
    for y in set {
        if y.dim() != dim {
            return Err(QcoreError::DimensionMismatch {
                left: dim,
                right: y.dim(),
            });
        }
        // ([X,Y])_ab = Σ_k x_ak Y_kb − Σ_k Y_ak x_kb
        for a in 0..dim {
            for b in 0..dim {
                let mut eq = vec![ZERO; n2];
                for k in 0..dim {
                    eq[a * dim + k] += y[(k, b)];
                    eq[k * dim + b] -= y[(a, k)];
                }
                if eq.iter().any(|z| z.norm() > 0.0) {
                    rows.push(eq);
                }
            }
        }
    }
    let basis = nullspace(rows, n2, tol)
        .into_iter()
        .map(|v| ComplexMatrix::from_raw(dim, v))
        .collect();
    OperatorAlgebraBasis::new(dim, basis)
}

/// `S″`, the double commutant.
pub fn double_commutant(set: &[ComplexMatrix], dim: usize) -> Result<OperatorAlgebraBasis, QcoreError> {
    let first = commutant(set, dim)?;
    commutant(first.basis(), dim)
}

/// Canonical order for projector lists: lexicographic on entries rounded to
/// 12 decimals.
pub fn sort_canonical(projectors: &mut [Projector]) {
    projectors.sort_by_cached_key(|p| p.matrix().rounded_key(12));
}

/// Enumerates every projection in the double commutant of an orthonormal
/// family of rank-1 projectors, in canonical order.
///
/// The double commutant of a maximal orthonormal family is a maximal abelian
/// algebra; its projections are exactly the sums of its minimal projections,
/// so the output is a Boolean algebra with `2^d` members.
pub fn boolean_projections(family: &[Projector]) -> Result<Vec<Projector>, QcoreError> {
    let tol = DEFAULT_TOLERANCE;
    let dim = check_orthonormal_family(family)?;
    let mats: Vec<ComplexMatrix> = family.iter().map(|p| p.matrix().clone()).collect();
    let algebra = double_commutant(&mats, dim)?;
    if !algebra.is_abelian(1e-8) {
        return Err(QcoreError::NonAbelianAlgebra {
            dimension: algebra.len(),
        });
    }
    if algebra.len() > MAX_ATOMS {
        return Err(QcoreError::TooManyAtoms {
            atoms: algebra.len(),
            cap: MAX_ATOMS,
        });
    }
    let atoms = minimal_projections(&algebra)?;
    let mut out: Vec<Projector> = (0u32..(1u32 << atoms.len()))
        .map(|mask| {
            let mut m = ComplexMatrix::zeros(dim);
            for (k, a) in atoms.iter().enumerate() {
                if mask & (1 << k) != 0 {
                    m = &m + a;
                }
            }
            Projector::from_matrix_unchecked(m, tol)
        })
        .collect();
    sort_canonical(&mut out);
    Ok(out)
}

fn check_orthonormal_family(family: &[Projector]) -> Result<usize, QcoreError> {
    let Some(first) = family.first() else {
        return Err(QcoreError::NotOrthonormalFamily {
            reason: "empty family".into(),
        });
    };
    let dim = first.dim();
    let mut sum = ComplexMatrix::zeros(dim);
    for (i, p) in family.iter().enumerate() {
        if p.dim() != dim {
            return Err(QcoreError::DimensionMismatch {
                left: dim,
                right: p.dim(),
            });
        }
        let t = p.matrix().trace();
        if (t.re - 1.0).abs() > 1e-8 || t.im.abs() > 1e-8 {
            return Err(QcoreError::NotOrthonormalFamily {
                reason: format!("member {i} has rank {:.6}, expected 1", t.re),
            });
        }
        for (j, q) in family.iter().enumerate().skip(i + 1) {
            let overlap = (p.matrix() * q.matrix()).max_abs();
            if overlap > 1e-8 {
                return Err(QcoreError::NotOrthonormalFamily {
                    reason: format!("members {i} and {j} overlap by {overlap:.3e}"),
                });
            }
        }
        sum = &sum + p.matrix();
    }
    let defect = sum.max_abs_diff(&ComplexMatrix::identity(dim));
    if defect > 1e-8 {
        return Err(QcoreError::NotOrthonormalFamily {
            reason: format!("members do not sum to the identity (defect {defect:.3e})"),
        });
    }
    Ok(dim)
}

/// Minimal projections of a finite-dimensional abelian *-algebra, found as
/// the spectral projections of a generic self-adjoint element.
fn minimal_projections(algebra: &OperatorAlgebraBasis) -> Result<Vec<ComplexMatrix>, QcoreError> {
    let dim = algebra.dim();
    let target = algebra.len();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_ab1e);
    for _attempt in 0..8 {
        let mut generic = ComplexMatrix::zeros(dim);
        for b in algebra.basis() {
            let c = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            generic = &generic + &b.scale(c);
        }
        let h = generic.hermitian_part();
        let eig = h.hermitian_eigen();
        let mut clusters: Vec<Vec<usize>> = Vec::new();
        for k in 0..dim {
            match clusters.last_mut() {
                Some(c) if (eig.values[k] - eig.values[c[0]]).abs() < 1e-6 => c.push(k),
                _ => clusters.push(vec![k]),
            }
        }
        if clusters.len() != target {
            continue;
        }
        let projs: Vec<ComplexMatrix> = clusters
            .iter()
            .map(|c| {
                let vs: Vec<Vec<C64>> = c.iter().map(|&k| eig.vectors[k].clone()).collect();
                Projector::from_orthonormal(dim, &vs, DEFAULT_TOLERANCE).matrix().clone()
            })
            .collect();
        if projs.iter().all(|p| algebra.contains(p, 1e-7)) {
            return Ok(projs);
        }
    }
    Err(QcoreError::NonAbelianAlgebra { dimension: target })
}
