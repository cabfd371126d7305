//! Probabilistic truth values of gates and the relations they induce.
//!
//! The truth value of a gate `U` in state `ρ` and event `P` is
//! `Tr(UρU†P)`. Two gates are compared at a fixed `(ρ, P)`, for all `P`,
//! for all `ρ`, or for all `(ρ, P)`; the implication orderings replace
//! equality with `≤`.
//!
//! The quantified relations are decided exactly rather than by sampling:
//!
//! - `∀P: Tr(AP) = Tr(BP)` iff `A = B`, so `equiv_rho` compares `UρU†`
//!   with `VρV†`, and `equiv_P` compares `U†PU` with `V†PV`.
//! - `∀P: Tr(AP) ≤ Tr(BP)` iff `B − A ⪰ 0`, so the `leq_*` relations are
//!   positive-semidefiniteness tests.
//!
//! When a quantified relation fails, the witness is a rank-1 projector (or
//! pure state) built from an extremal eigenvector of the difference operator.

mod quotient;
mod recovery;
mod report;

use thiserror::Error;

use crate::classical::ClassicalError;
use crate::gates::GateError;
use crate::qcore::{
    born, conjugate, pull_back, ComplexMatrix, DensityOperator, Projector, QcoreError, UnitaryGate, C64,
    DEFAULT_TOLERANCE,
};

pub use quotient::{quotient, QuotientPartition, QuotientRelation};
pub use recovery::{boolean_truth_table, compile_reversible, ReversibleCircuit, TruthTableRow};
pub use report::{matrix_json, num, round_sig, EquivalenceReport, Relation, TruthContext, Witness};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LogicError {
    #[error(transparent)]
    Qcore(#[from] QcoreError),
    #[error(transparent)]
    Gate(#[from] GateError),
    #[error(transparent)]
    Classical(#[from] ClassicalError),
    #[error("implication chain broken: {stronger} holds but {weaker} does not")]
    HierarchyViolation {
        stronger: &'static str,
        weaker: &'static str,
    },
    #[error("relation {0} needs a {1}")]
    MissingContext(&'static str, &'static str),
    #[error("words have different widths: {0} vs {1}")]
    WidthMismatch(usize, usize),
    #[error("reversible embedding needs {needed} wires, cap is {cap}")]
    TooWide { needed: usize, cap: usize },
}

fn same_dims(u: &UnitaryGate, v: &UnitaryGate) -> Result<(), LogicError> {
    u.matrix().check_same_dim(v.matrix())?;
    Ok(())
}

/// `Tr(UρU†P)`.
pub fn truth_value(u: &UnitaryGate, rho: &DensityOperator, p: &Projector) -> Result<f64, LogicError> {
    Ok(born(&conjugate(u, rho)?, p)?)
}

/// `Tr(UρU†P) = Tr(VρV†P)` within `tol`.
pub fn equiv_rho_p(
    u: &UnitaryGate,
    v: &UnitaryGate,
    rho: &DensityOperator,
    p: &Projector,
    tol: f64,
) -> Result<EquivalenceReport, LogicError> {
    same_dims(u, v)?;
    let a = truth_value(u, rho, p)?;
    let b = truth_value(v, rho, p)?;
    let dev = (a - b).abs();
    Ok(EquivalenceReport::new(Relation::EquivRhoP, dev <= tol, tol, dev).values(a, b))
}

/// Eigenvector of `d` with the largest `|λ|`, ties going to the positive
/// eigenvalue.
fn dominant_eigenvector(d: &ComplexMatrix, tol: f64) -> (f64, Vec<C64>) {
    let eig = d.hermitian_eigen();
    let lo = eig.values[0];
    let hi = *eig.values.last().expect("non-empty spectrum");
    if hi.abs() + tol >= lo.abs() {
        (hi, eig.vectors.last().expect("non-empty spectrum").clone())
    } else {
        (lo, eig.vectors[0].clone())
    }
}

fn rank_one_projector(v: &[C64]) -> Projector {
    Projector::onto(v).expect("eigenvectors are normalized and non-zero")
}

fn pure_state(v: &[C64]) -> DensityOperator {
    DensityOperator::pure(v).expect("eigenvectors are normalized and non-zero")
}

/// `UρU† = VρV†` within `tol` (max-entry), i.e. equal truth values for every
/// event.
pub fn equiv_rho(
    u: &UnitaryGate,
    v: &UnitaryGate,
    rho: &DensityOperator,
    tol: f64,
) -> Result<EquivalenceReport, LogicError> {
    same_dims(u, v)?;
    let a = conjugate(u, rho)?;
    let b = conjugate(v, rho)?;
    let diff = a.matrix() - b.matrix();
    let dev = diff.max_abs();
    let mut report = EquivalenceReport::new(Relation::EquivRho, dev <= tol, tol, dev);
    if !report.holds {
        let (_, vec) = dominant_eigenvector(&diff, tol);
        let p = rank_one_projector(&vec);
        report = report
            .values(born(&a, &p)?, born(&b, &p)?)
            .witness(Witness::Quantum(TruthContext {
                state: None,
                event: Some(p),
            }));
    }
    Ok(report)
}

/// `U†PU = V†PV` within `tol` (max-entry), i.e. equal truth values in every
/// state.
pub fn equiv_p(u: &UnitaryGate, v: &UnitaryGate, p: &Projector, tol: f64) -> Result<EquivalenceReport, LogicError> {
    same_dims(u, v)?;
    let a = pull_back(u, p)?;
    let b = pull_back(v, p)?;
    let diff = a.matrix() - b.matrix();
    let dev = diff.max_abs();
    let mut report = EquivalenceReport::new(Relation::EquivP, dev <= tol, tol, dev);
    if !report.holds {
        let (_, vec) = dominant_eigenvector(&diff, tol);
        let rho = pure_state(&vec);
        report = report
            .values(truth_value(u, &rho, p)?, truth_value(v, &rho, p)?)
            .witness(Witness::Quantum(TruthContext {
                state: Some(rho),
                event: None,
            }));
    }
    Ok(report)
}

/// `V†U ≈ e^{iθ}𝟙`: identical truth values for every state and event. The
/// phase is read from the first diagonal entry of `V†U` with modulus above
/// `tol`; the report also says whether `U = V` holds entrywise.
pub fn equiv_total(u: &UnitaryGate, v: &UnitaryGate, tol: f64) -> Result<EquivalenceReport, LogicError> {
    same_dims(u, v)?;
    let w = &v.matrix().adjoint() * u.matrix();
    let n = w.dim();
    let theta = (0..n).map(|k| w[(k, k)]).find(|z| z.norm() > tol).map(|z| z.arg());
    let dev = match theta {
        Some(t) => {
            let phase = C64::from_polar(1.0, t);
            w.max_abs_diff(&ComplexMatrix::identity(n).scale(phase))
        }
        None => f64::INFINITY,
    };
    let mut report = EquivalenceReport::new(Relation::EquivTotal, dev <= tol, tol, dev);
    report.theta = theta.filter(|_| dev <= tol);
    report.strict_equal = Some(u.matrix().approx_eq(v.matrix(), tol));
    if !report.holds {
        let rho = separating_state(&w, tol);
        let inner = equiv_rho(u, v, &rho, tol)?;
        let event = match inner.witness {
            Some(Witness::Quantum(ctx)) => ctx.event,
            _ => None,
        };
        report.lhs = inner.lhs;
        report.rhs = inner.rhs;
        report.witness = Some(Witness::Quantum(TruthContext {
            state: Some(rho),
            event,
        }));
    }
    Ok(report)
}

/// A pure state `ρ` with `WρW† ≠ ρ` for a non-scalar unitary `W`: a basis
/// vector that `W` does not fix up to phase, or else a superposition of two
/// basis vectors whose eigenphases differ.
fn separating_state(w: &ComplexMatrix, tol: f64) -> DensityOperator {
    let n = w.dim();
    for k in 0..n {
        let off: f64 = (0..n).filter(|&i| i != k).map(|i| w[(i, k)].norm()).fold(0.0, f64::max);
        if off > tol {
            return DensityOperator::basis(n, k);
        }
    }
    let first = w[(0, 0)];
    let j = (1..n)
        .max_by(|&a, &b| (w[(a, a)] - first).norm().total_cmp(&(w[(b, b)] - first).norm()))
        .unwrap_or(0);
    let mut psi = vec![C64::new(0.0, 0.0); n];
    psi[0] = C64::new(1.0, 0.0);
    psi[j] += C64::new(1.0, 0.0);
    pure_state(&psi)
}

/// `Tr(UρU†P) ≤ Tr(VρV†P) + tol`.
pub fn leq_rho_p(
    u: &UnitaryGate,
    v: &UnitaryGate,
    rho: &DensityOperator,
    p: &Projector,
    tol: f64,
) -> Result<EquivalenceReport, LogicError> {
    same_dims(u, v)?;
    let a = truth_value(u, rho, p)?;
    let b = truth_value(v, rho, p)?;
    let dev = (a - b).max(0.0);
    Ok(EquivalenceReport::new(Relation::LeqRhoP, dev <= tol, tol, dev).values(a, b))
}

/// `Tr(UρU†P) ≤ Tr(VρV†P)` for every `P`, decided by `VρV† − UρU† ⪰ 0`.
pub fn leq_rho(
    u: &UnitaryGate,
    v: &UnitaryGate,
    rho: &DensityOperator,
    tol: f64,
) -> Result<EquivalenceReport, LogicError> {
    same_dims(u, v)?;
    let a = conjugate(u, rho)?;
    let b = conjugate(v, rho)?;
    let eig = (b.matrix() - a.matrix()).hermitian_eigen();
    let dev = (-eig.values[0]).max(0.0);
    let mut report = EquivalenceReport::new(Relation::LeqRho, dev <= tol, tol, dev);
    if !report.holds {
        let p = rank_one_projector(&eig.vectors[0]);
        report = report
            .values(born(&a, &p)?, born(&b, &p)?)
            .witness(Witness::Quantum(TruthContext {
                state: None,
                event: Some(p),
            }));
    }
    Ok(report)
}

/// `Tr(UρU†P) ≤ Tr(VρV†P)` for every `ρ`, decided by `V†PV − U†PU ⪰ 0`.
pub fn leq_p(u: &UnitaryGate, v: &UnitaryGate, p: &Projector, tol: f64) -> Result<EquivalenceReport, LogicError> {
    same_dims(u, v)?;
    let a = pull_back(u, p)?;
    let b = pull_back(v, p)?;
    let eig = (b.matrix() - a.matrix()).hermitian_eigen();
    let dev = (-eig.values[0]).max(0.0);
    let mut report = EquivalenceReport::new(Relation::LeqP, dev <= tol, tol, dev);
    if !report.holds {
        let rho = pure_state(&eig.vectors[0]);
        report = report
            .values(truth_value(u, &rho, p)?, truth_value(v, &rho, p)?)
            .witness(Witness::Quantum(TruthContext {
                state: Some(rho),
                event: None,
            }));
    }
    Ok(report)
}

/// Approximate `equiv_rho`: compares truth values only on the supplied
/// events. Agreement here does not decide the quantifier.
pub fn equiv_rho_sampled(
    u: &UnitaryGate,
    v: &UnitaryGate,
    rho: &DensityOperator,
    events: &[Projector],
    tol: f64,
) -> Result<EquivalenceReport, LogicError> {
    same_dims(u, v)?;
    let a = conjugate(u, rho)?;
    let b = conjugate(v, rho)?;
    let mut worst = (0.0f64, None);
    for p in events {
        let (x, y) = (born(&a, p)?, born(&b, p)?);
        if (x - y).abs() > worst.0 || worst.1.is_none() {
            worst = ((x - y).abs(), Some((p, x, y)));
        }
    }
    let mut report = EquivalenceReport::new(Relation::EquivRho, worst.0 <= tol, tol, worst.0);
    report.approximate = true;
    if let Some((p, x, y)) = worst.1 {
        report = report.values(x, y);
        if !report.holds {
            report = report.witness(Witness::Quantum(TruthContext {
                state: None,
                event: Some(p.clone()),
            }));
        }
    }
    Ok(report)
}

/// Verdicts of the equivalence relations on one `(U, V, ρ, P)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HierarchyReport {
    pub total: bool,
    pub rho: bool,
    pub rho_p: bool,
    /// The other branch of the chain, `≡ ⟹ ≡_P ⟹ ≡^ρ_P`.
    pub p: bool,
}

impl HierarchyReport {
    pub fn as_triple(&self) -> (bool, bool, bool) {
        (self.total, self.rho, self.rho_p)
    }
}

/// Evaluates the relations and checks `≡ ⟹ ≡^ρ ⟹ ≡^ρ_P` and
/// `≡ ⟹ ≡_P ⟹ ≡^ρ_P`. A broken chain is reported as
/// [`LogicError::HierarchyViolation`]; it can only come from a defect in the
/// relation implementations.
pub fn hierarchy_check(
    u: &UnitaryGate,
    v: &UnitaryGate,
    rho: &DensityOperator,
    p: &Projector,
    tol: f64,
) -> Result<HierarchyReport, LogicError> {
    let total = equiv_total(u, v, tol)?.holds;
    let rho_eq = equiv_rho(u, v, rho, tol)?.holds;
    let p_eq = equiv_p(u, v, p, tol)?.holds;
    let rho_p = equiv_rho_p(u, v, rho, p, tol)?.holds;
    let chain = [
        (total, rho_eq, "equiv_total", "equiv_rho"),
        (rho_eq, rho_p, "equiv_rho", "equiv_rho_P"),
        (total, p_eq, "equiv_total", "equiv_P"),
        (p_eq, rho_p, "equiv_P", "equiv_rho_P"),
    ];
    for (strong, weak, stronger, weaker) in chain {
        if strong && !weak {
            return Err(LogicError::HierarchyViolation { stronger, weaker });
        }
    }
    Ok(HierarchyReport {
        total,
        rho: rho_eq,
        rho_p,
        p: p_eq,
    })
}

/// Dispatches on `relation`, pulling the state and event it needs from
/// `ctx`.
pub fn check_relation(
    relation: Relation,
    u: &UnitaryGate,
    v: &UnitaryGate,
    ctx: &TruthContext,
    tol: f64,
) -> Result<EquivalenceReport, LogicError> {
    let state = || ctx.state.as_ref().ok_or(LogicError::MissingContext(relation.tag(), "state"));
    let event = || ctx.event.as_ref().ok_or(LogicError::MissingContext(relation.tag(), "event"));
    match relation {
        Relation::EquivRhoP => equiv_rho_p(u, v, state()?, event()?, tol),
        Relation::EquivRho => equiv_rho(u, v, state()?, tol),
        Relation::EquivP => equiv_p(u, v, event()?, tol),
        Relation::EquivTotal => equiv_total(u, v, tol),
        Relation::LeqRhoP => leq_rho_p(u, v, state()?, event()?, tol),
        Relation::LeqRho => leq_rho(u, v, state()?, tol),
        Relation::LeqP => leq_p(u, v, event()?, tol),
    }
}

/// Default tolerance for the relations.
pub const TOLERANCE: f64 = DEFAULT_TOLERANCE;
