use std::sync::Arc;

use crate::parallel::Execution;
use crate::qcore::{
    born, nullspace, orthonormal_span, pull_back, ComplexMatrix, DensityOperator, Projector, UnitaryGate, C64,
    DEFAULT_TOLERANCE,
};

use super::lattice::{FiniteOML, RawLattice};
use super::state::{LatticeAutomorphism, LatticeState};
use super::LatticeError;

/// Default bound on the number of elements generated by closure.
pub const DEFAULT_CLOSURE_CAP: usize = 64;
/// Projectors closer than this (max-abs entry difference) are identified.
pub const DEDUP_TOLERANCE: f64 = 1e-8;
/// Projectors in `(DEDUP_TOLERANCE, COLLISION_TOLERANCE]` are neither
/// clearly equal nor clearly distinct.
pub const COLLISION_TOLERANCE: f64 = 1e-5;
/// Threshold used by the Gleason zero test.
pub const GLEASON_ZERO_THRESHOLD: f64 = 1e-9;

/// A finite sublattice of the projection lattice of `ℂ^dim`, with the
/// projector behind each element.
#[derive(Clone, Debug)]
pub struct ProjectionLattice {
    pub lattice: Arc<FiniteOML>,
    projectors: Vec<Projector>,
}

impl ProjectionLattice {
    pub fn dim(&self) -> usize {
        self.projectors[0].dim()
    }

    pub fn projectors(&self) -> &[Projector] {
        &self.projectors
    }

    pub fn projector(&self, element: usize) -> &Projector {
        &self.projectors[element]
    }

    /// Element whose projector matches `p` at the deduplication tolerance.
    pub fn find(&self, p: &ComplexMatrix) -> Result<Option<usize>, LatticeError> {
        locate(&self.projectors, p)
    }
}

fn locate(list: &[Projector], p: &ComplexMatrix) -> Result<Option<usize>, LatticeError> {
    let mut found = None;
    for (i, q) in list.iter().enumerate() {
        let d = q.matrix().max_abs_diff(p);
        if d <= DEDUP_TOLERANCE {
            found.get_or_insert(i);
        } else if d <= COLLISION_TOLERANCE {
            return Err(LatticeError::ToleranceCollision { element: i, distance: d });
        }
    }
    Ok(found)
}

/// Projector onto `range(P) ∩ range(Q)`: the nullspace of `[(𝟙−P); (𝟙−Q)]`.
fn meet(p: &Projector, q: &Projector) -> Projector {
    let n = p.dim();
    let rows: Vec<Vec<C64>> = [p.complement(), q.complement()]
        .iter()
        .flat_map(|c| (0..n).map(|i| c.matrix().row(i).to_vec()).collect::<Vec<_>>())
        .collect();
    let span = orthonormal_span(nullspace(rows, n, DEFAULT_TOLERANCE).into_iter(), 1e-7);
    Projector::from_orthonormal(n, &span, DEFAULT_TOLERANCE)
}

/// Projector onto `range(P) + range(Q)`.
fn join(p: &Projector, q: &Projector) -> Projector {
    let n = p.dim();
    let columns = (0..n).flat_map(|j| [p.matrix().column(j), q.matrix().column(j)]);
    let span = orthonormal_span(columns, 1e-7);
    Projector::from_orthonormal(n, &span, DEFAULT_TOLERANCE)
}

fn ortho(p: &Projector) -> Projector {
    p.complement()
}

/// Closes `{0, 𝟙} ∪ generators` under meet, join and orthocomplement and
/// returns the resulting lattice, after running the law battery.
///
/// Element order: `0`, `𝟙`, the generators (deduplicated), then elements in
/// the order closure discovers them. Names are `0`, `1`, `p2`, `p3`, ….
pub fn projection_oml(dim: usize, generators: &[Projector]) -> Result<ProjectionLattice, LatticeError> {
    projection_oml_with_cap(dim, generators, DEFAULT_CLOSURE_CAP, Execution::default())
}

pub fn projection_oml_with_cap(
    dim: usize,
    generators: &[Projector],
    cap: usize,
    exec: Execution,
) -> Result<ProjectionLattice, LatticeError> {
    if let Some(p) = generators.iter().find(|p| p.dim() != dim) {
        return Err(LatticeError::DimensionMismatch {
            expected: dim,
            found: p.dim(),
        });
    }
    let mut elems: Vec<Projector> = vec![Projector::zero(dim), Projector::identity(dim)];
    let push = |elems: &mut Vec<Projector>, p: Projector| -> Result<usize, LatticeError> {
        if let Some(i) = locate(elems, p.matrix())? {
            return Ok(i);
        }
        if elems.len() == cap {
            return Err(LatticeError::ClosureCapExceeded { cap });
        }
        elems.push(p);
        Ok(elems.len() - 1)
    };
    for g in generators {
        push(&mut elems, g.clone())?;
    }

    // full passes until nothing new appears; the lattice is capped, so this is cheap
    loop {
        let before = elems.len();
        for a in 0..before {
            for b in a..before {
                let (m, j) = (meet(&elems[a], &elems[b]), join(&elems[a], &elems[b]));
                push(&mut elems, m)?;
                push(&mut elems, j)?;
            }
            let o = ortho(&elems[a]);
            push(&mut elems, o)?;
        }
        if elems.len() == before {
            break;
        }
    }

    let n = elems.len();
    let index = |p: Projector| -> Result<u32, LatticeError> {
        locate(&elems, p.matrix())?
            .map(|i| i as u32)
            .ok_or(LatticeError::ClosureCapExceeded { cap })
    };
    let mut meet_t = Vec::with_capacity(n * n);
    let mut join_t = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            meet_t.push(index(meet(&elems[a], &elems[b]))?);
            join_t.push(index(join(&elems[a], &elems[b]))?);
        }
    }
    let ortho_t = elems.iter().map(|p| index(ortho(p)).map(|i| i as usize)).collect::<Result<Vec<_>, _>>()?;
    let leq: Vec<bool> = (0..n * n).map(|k| meet_t[k] as usize == k / n).collect();
    let names = (0..n)
        .map(|i| match i {
            0 => "0".to_string(),
            1 => "1".to_string(),
            _ => format!("p{i}"),
        })
        .collect();
    let raw = RawLattice::from_tables(names, meet_t, join_t, ortho_t, leq, 0, 1);
    Ok(ProjectionLattice {
        lattice: Arc::new(FiniteOML::from_raw(raw, exec)?),
        projectors: elems,
    })
}

/// The state `P ↦ Tr(ρP)` on a projection lattice.
pub fn gleason_state(rho: &DensityOperator, l: &ProjectionLattice) -> Result<LatticeState, LatticeError> {
    if rho.dim() != l.dim() {
        return Err(LatticeError::DimensionMismatch {
            expected: l.dim(),
            found: rho.dim(),
        });
    }
    let values = l.projectors.iter().map(|p| born(rho, p)).collect::<Result<Vec<_>, _>>()?;
    LatticeState::new(l.lattice.clone(), values, GLEASON_ZERO_THRESHOLD.max(rho.tolerance()))
}

/// The automorphism `P ↦ U†PU` induced by a unitary.
///
/// Pulling events back (rather than pushing them forward) makes the
/// pushed-forward Gleason state `X ↦ Tr(ρU†XU) = Tr(UρU†X)`, i.e. the truth
/// value of `U` at `(ρ, X)`.
pub fn unitary_automorphism(u: &UnitaryGate, l: &ProjectionLattice) -> Result<LatticeAutomorphism, LatticeError> {
    if u.dim() != l.dim() {
        return Err(LatticeError::DimensionMismatch {
            expected: l.dim(),
            found: u.dim(),
        });
    }
    let map = l
        .projectors
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let q = pull_back(u, p)?;
            l.find(q.matrix())?.ok_or(LatticeError::NotClosedUnderConjugation { element: l.lattice.name(i) })
        })
        .collect::<Result<Vec<_>, _>>()?;
    LatticeAutomorphism::new(l.lattice.clone(), map)
}
