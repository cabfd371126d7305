use std::collections::BTreeMap;
use std::sync::Arc;

use crate::logic::{EquivalenceReport, Relation, Witness};

use super::lattice::FiniteOML;
use super::state::{compose_automorphisms, pushforward, same_lattice, LatticeAutomorphism, LatticeState};
use super::LatticeError;

/// A lattice, a set of states and a set of generating automorphisms, with
/// a distinguished initial state.
#[derive(Clone, Debug)]
pub struct ComputationalScheme {
    lattice: Arc<FiniteOML>,
    states: Vec<LatticeState>,
    generators: Vec<LatticeAutomorphism>,
    initial: usize,
}

impl ComputationalScheme {
    pub fn new(
        lattice: Arc<FiniteOML>,
        states: Vec<LatticeState>,
        generators: Vec<LatticeAutomorphism>,
        initial: usize,
    ) -> Result<Self, LatticeError> {
        for s in &states {
            same_lattice(&lattice, s.lattice())?;
        }
        for g in &generators {
            same_lattice(&lattice, g.lattice())?;
        }
        if initial >= states.len() {
            return Err(LatticeError::IndexOutOfRange {
                index: initial,
                len: states.len(),
            });
        }
        Ok(Self {
            lattice,
            states,
            generators,
            initial,
        })
    }

    pub fn lattice(&self) -> &Arc<FiniteOML> {
        &self.lattice
    }

    pub fn states(&self) -> &[LatticeState] {
        &self.states
    }

    pub fn generators(&self) -> &[LatticeAutomorphism] {
        &self.generators
    }

    pub fn initial_state(&self) -> &LatticeState {
        &self.states[self.initial]
    }

    /// Composite automorphism of a word of generator indices (time order).
    pub fn compose(&self, word: &[usize]) -> Result<LatticeAutomorphism, LatticeError> {
        let gens = word
            .iter()
            .map(|&i| {
                self.generators.get(i).ok_or(LatticeError::IndexOutOfRange {
                    index: i,
                    len: self.generators.len(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        compose_automorphisms(&self.lattice, &gens)
    }
}

/// Runs a generalized protocol: start in the initial state, apply the word
/// (first generator first, so the overall action is `U_n⋯U_1`), and read
/// out `μ(X)` for each requested element.
pub fn run_protocol(
    scheme: &ComputationalScheme,
    word: &[usize],
    readout: &[usize],
) -> Result<BTreeMap<usize, f64>, LatticeError> {
    let n = scheme.lattice.len();
    if let Some(&x) = readout.iter().find(|&&x| x >= n) {
        return Err(LatticeError::IndexOutOfRange { index: x, len: n });
    }
    let mu = pushforward(&scheme.compose(word)?, scheme.initial_state())?;
    Ok(readout.iter().map(|&x| (x, mu.value(x))).collect())
}

/// What to quantify over when comparing two automorphisms.
#[derive(Clone, Copy, Debug)]
pub enum LatticeContext<'a> {
    /// One state, one element.
    Pointwise(&'a LatticeState, usize),
    /// One state, every element.
    State(&'a LatticeState),
    /// Every listed state, one element.
    Element(&'a [LatticeState], usize),
    /// Every listed state and every element.
    All(&'a [LatticeState]),
}

impl LatticeContext<'_> {
    fn states(&self) -> Vec<&LatticeState> {
        match self {
            LatticeContext::Pointwise(s, _) | LatticeContext::State(s) => vec![*s],
            LatticeContext::Element(ss, _) | LatticeContext::All(ss) => ss.iter().collect(),
        }
    }

    fn element(&self) -> Option<usize> {
        match self {
            LatticeContext::Pointwise(_, x) | LatticeContext::Element(_, x) => Some(*x),
            _ => None,
        }
    }

    fn indexes_states(&self) -> bool {
        matches!(self, LatticeContext::Element(..) | LatticeContext::All(_))
    }
}

/// `U(ν)(X) = V(ν)(X)` over the context's quantifiers.
pub fn generalized_equiv(
    u: &LatticeAutomorphism,
    v: &LatticeAutomorphism,
    ctx: LatticeContext<'_>,
    tol: f64,
) -> Result<EquivalenceReport, LatticeError> {
    let relation = match ctx {
        LatticeContext::Pointwise(..) => Relation::EquivRhoP,
        LatticeContext::State(_) => Relation::EquivRho,
        LatticeContext::Element(..) => Relation::EquivP,
        LatticeContext::All(_) => Relation::EquivTotal,
    };
    compare(u, v, ctx, tol, relation, |a, b| (a - b).abs())
}

/// `U(ν)(X) ≤ V(ν)(X)` over the context's quantifiers. The fully
/// quantified context is not a separate relation and is rejected.
pub fn generalized_leq(
    u: &LatticeAutomorphism,
    v: &LatticeAutomorphism,
    ctx: LatticeContext<'_>,
    tol: f64,
) -> Result<EquivalenceReport, LatticeError> {
    let relation = match ctx {
        LatticeContext::Pointwise(..) => Relation::LeqRhoP,
        LatticeContext::State(_) => Relation::LeqRho,
        LatticeContext::Element(..) => Relation::LeqP,
        LatticeContext::All(_) => return Err(LatticeError::UnsupportedContext),
    };
    compare(u, v, ctx, tol, relation, |a, b| (a - b).max(0.0))
}

fn compare(
    u: &LatticeAutomorphism,
    v: &LatticeAutomorphism,
    ctx: LatticeContext<'_>,
    tol: f64,
    relation: Relation,
    excess: impl Fn(f64, f64) -> f64,
) -> Result<EquivalenceReport, LatticeError> {
    same_lattice(u.lattice(), v.lattice())?;
    let lattice = u.lattice();
    let elements: Vec<usize> = match ctx.element() {
        Some(x) if x >= lattice.len() => {
            return Err(LatticeError::IndexOutOfRange {
                index: x,
                len: lattice.len(),
            })
        }
        Some(x) => vec![x],
        None => (0..lattice.len()).collect(),
    };
    // worst (state, element) pair; the first one in order wins ties
    let mut worst: Option<(f64, usize, usize, f64, f64)> = None;
    for (si, nu) in ctx.states().into_iter().enumerate() {
        let mu = pushforward(u, nu)?;
        let mu2 = pushforward(v, nu)?;
        for &x in &elements {
            let (a, b) = (mu.value(x), mu2.value(x));
            let d = excess(a, b);
            if worst.is_none_or(|w| d > w.0) {
                worst = Some((d, si, x, a, b));
            }
        }
    }
    let Some((deviation, si, x, a, b)) = worst else {
        // no states to quantify over: vacuously true
        return Ok(EquivalenceReport::new(relation, true, tol, 0.0));
    };
    let holds = deviation <= tol;
    let mut report = EquivalenceReport::new(relation, holds, tol, deviation).values(a, b);
    if !holds || ctx.element().is_none() || ctx.indexes_states() {
        report = report.witness(Witness::Lattice {
            state: ctx.indexes_states().then_some(si),
            element: Some(x),
        });
    }
    Ok(report)
}
