use std::collections::BTreeMap;
use std::sync::Arc;

use crate::parallel::{self, Execution};

use super::lattice::FiniteOML;
use super::LatticeError;

/// Validation tolerance for states given as explicit tables.
pub const TABLE_TOLERANCE: f64 = 1e-12;

/// A probability assignment on a lattice: `0 ↦ 0`, `1 ↦ 1`, additive on
/// orthogonal elements.
#[derive(Clone, Debug)]
pub struct LatticeState {
    lattice: Arc<FiniteOML>,
    values: Vec<f64>,
    tolerance: f64,
    zero_threshold: f64,
}

impl LatticeState {
    /// Validates `values` at `tolerance`, which also serves as the zero-test
    /// threshold for superposition checks.
    pub fn new(lattice: Arc<FiniteOML>, values: Vec<f64>, tolerance: f64) -> Result<Self, LatticeError> {
        let state = Self {
            lattice,
            values,
            tolerance,
            zero_threshold: tolerance,
        };
        state.validate()?;
        Ok(state)
    }

    /// A state given as an exact table: validated at [`TABLE_TOLERANCE`],
    /// zero-tested exactly.
    pub fn from_table(lattice: Arc<FiniteOML>, values: Vec<f64>) -> Result<Self, LatticeError> {
        Ok(Self::new(lattice, values, TABLE_TOLERANCE)?.with_zero_threshold(0.0))
    }

    /// Parses `{element name: value}`; every element must be listed.
    pub fn from_json(lattice: Arc<FiniteOML>, text: &str) -> Result<Self, LatticeError> {
        let map: BTreeMap<String, f64> = serde_json::from_str(text).map_err(|e| LatticeError::Parse(e.to_string()))?;
        let mut values = vec![f64::NAN; lattice.len()];
        for (name, v) in map {
            let i = lattice
                .index_of(&name)
                .ok_or_else(|| LatticeError::Parse(format!("unknown element {name:?}")))?;
            values[i] = v;
        }
        if let Some(i) = values.iter().position(|v| v.is_nan()) {
            return Err(LatticeError::Parse(format!("no value for {:?}", lattice.name(i))));
        }
        Self::from_table(lattice, values)
    }

    /// Point mass at outcome `y` on the powerset of `{0,1}^N`.
    pub fn point_mass(lattice: Arc<FiniteOML>, outcome: usize) -> Result<Self, LatticeError> {
        let n = lattice.boolean_outcomes().ok_or(LatticeError::NotBoolean)?;
        if outcome >= 1 << n {
            return Err(LatticeError::IndexOutOfRange {
                index: outcome,
                len: 1 << n,
            });
        }
        let values = (0..lattice.len()).map(|a| (a >> outcome & 1) as f64).collect();
        Self::from_table(lattice, values)
    }

    pub fn with_zero_threshold(mut self, threshold: f64) -> Self {
        self.zero_threshold = threshold;
        self
    }

    pub fn lattice(&self) -> &Arc<FiniteOML> {
        &self.lattice
    }

    pub fn value(&self, element: usize) -> f64 {
        self.values[element]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn zero_threshold(&self) -> f64 {
        self.zero_threshold
    }

    pub fn to_json(&self) -> serde_json::Value {
        let map: BTreeMap<String, serde_json::Value> = (0..self.values.len())
            .map(|i| (self.lattice.name(i), crate::logic::num(self.values[i])))
            .collect();
        serde_json::to_value(map).expect("state map serializes")
    }

    fn invalid(&self, reason: &str, elements: &[usize]) -> LatticeError {
        LatticeError::NotAState {
            reason: reason.to_string(),
            witness: elements.iter().map(|&i| self.lattice.name(i)).collect(),
        }
    }

    /// Additivity is checked on orthogonal pairs; by induction on
    /// `∨(a_1..a_k) = (∨ a_1..a_{k-1}) ∨ a_k` this covers every finite
    /// orthogonal family, which on a finite lattice is every family.
    fn validate(&self) -> Result<(), LatticeError> {
        let l = &self.lattice;
        let tol = self.tolerance;
        if self.values.len() != l.len() {
            return Err(LatticeError::Malformed(format!(
                "{} values for a lattice of {} elements",
                self.values.len(),
                l.len()
            )));
        }
        if let Some(i) = self.values.iter().position(|v| !v.is_finite() || *v < -tol || *v > 1.0 + tol) {
            return Err(self.invalid("value outside [0,1]", &[i]));
        }
        if self.values[l.zero()].abs() > tol {
            return Err(self.invalid("value at 0 is not 0", &[l.zero()]));
        }
        if (self.values[l.one()] - 1.0).abs() > tol {
            return Err(self.invalid("value at 1 is not 1", &[l.one()]));
        }
        let n = l.len();
        let bad = if let Some(outcomes) = l.boolean_outcomes() {
            // on a powerset algebra pairwise additivity is equivalent to
            // every set carrying the sum of its points' masses
            let point = |y: usize| self.values[1 << y];
            parallel::find_first(n, Execution::default(), |a| {
                let sum: f64 = (0..1usize << outcomes).filter(|y| a >> y & 1 == 1).map(point).sum();
                ((self.values[a] - sum).abs() > tol * (1 << outcomes) as f64).then(|| vec![a])
            })
        } else {
            parallel::find_first(n, Execution::default(), |a| {
                (0..n)
                    .find(|&b| {
                        l.orthogonal(a, b) && (self.values[l.join(a, b)] - self.values[a] - self.values[b]).abs() > tol
                    })
                    .map(|b| vec![a, b])
            })
        };
        match bad {
            Some(w) => Err(self.invalid("not additive on orthogonal elements", &w)),
            None => Ok(()),
        }
    }
}

/// A bijection of lattice elements preserving bounds, meets, joins and
/// orthocomplements.
#[derive(Clone, Debug)]
pub struct LatticeAutomorphism {
    lattice: Arc<FiniteOML>,
    map: Vec<usize>,
}

impl LatticeAutomorphism {
    /// Meets and joins are checked on all pairs, which by induction covers
    /// all finite families. On the bitmask powerset lattice the check is
    /// done on atoms instead: there an automorphism is exactly an atom
    /// permutation extended by unions.
    pub fn new(lattice: Arc<FiniteOML>, map: Vec<usize>) -> Result<Self, LatticeError> {
        let l = &lattice;
        let n = l.len();
        let fail = |axiom: &str, w: &[usize]| LatticeError::NotAnAutomorphism {
            axiom: axiom.to_string(),
            witness: w.iter().map(|&i| l.name(i)).collect(),
        };
        if map.len() != n {
            return Err(fail("bijection", &[]));
        }
        let mut seen = vec![false; n];
        for (a, &m) in map.iter().enumerate() {
            if m >= n || std::mem::replace(&mut seen[m], true) {
                return Err(fail("bijection", &[a]));
            }
        }
        if map[l.zero()] != l.zero() {
            return Err(fail("bounds", &[l.zero()]));
        }
        if map[l.one()] != l.one() {
            return Err(fail("bounds", &[l.one()]));
        }
        if let Some(outcomes) = l.boolean_outcomes().filter(|_| n > 256) {
            let atoms: Vec<usize> = (0..1usize << outcomes).map(|y| map[1 << y]).collect();
            if let Some(y) = atoms.iter().position(|&m| m.count_ones() != 1) {
                return Err(fail("meets and joins", &[1 << y]));
            }
            let bad = (0..n).find(|&a| {
                map[a] != (0..1usize << outcomes).filter(|y| a >> y & 1 == 1).fold(0, |acc, y| acc | atoms[y])
            });
            return match bad {
                Some(a) => Err(fail("meets and joins", &[a])),
                None => Ok(Self { lattice, map }),
            };
        }
        if let Some(w) = parallel::find_first(n, Execution::default(), |a| {
            (0..n)
                .find(|&b| map[l.meet(a, b)] != l.meet(map[a], map[b]) || map[l.join(a, b)] != l.join(map[a], map[b]))
                .map(|b| vec![a, b])
        }) {
            return Err(fail("meets and joins", &w));
        }
        if let Some(a) = (0..n).find(|&a| map[l.ortho(a)] != l.ortho(map[a])) {
            return Err(fail("orthocomplement", &[a]));
        }
        Ok(Self { lattice, map })
    }

    pub fn identity(lattice: Arc<FiniteOML>) -> Self {
        let map = (0..lattice.len()).collect();
        Self { lattice, map }
    }

    /// Automorphism of the powerset of `{0,1}^N` induced by a permutation of
    /// outcomes (`perm[y]` is the image of `y`).
    pub fn from_outcome_permutation(lattice: Arc<FiniteOML>, perm: &[usize]) -> Result<Self, LatticeError> {
        let n = lattice.boolean_outcomes().ok_or(LatticeError::NotBoolean)?;
        if perm.len() != 1 << n {
            return Err(LatticeError::Malformed(format!("permutation of length {} for {} outcomes", perm.len(), 1 << n)));
        }
        if let Some(&bad) = perm.iter().find(|&&y| y >= 1 << n) {
            return Err(LatticeError::IndexOutOfRange { index: bad, len: 1 << n });
        }
        let map = (0..lattice.len())
            .map(|a| (0..perm.len()).filter(|y| a >> y & 1 == 1).fold(0, |acc, y| acc | 1 << perm[y]))
            .collect();
        Self::new(lattice, map)
    }

    pub fn lattice(&self) -> &Arc<FiniteOML> {
        &self.lattice
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, element: usize) -> usize {
        self.map[element]
    }

    /// The automorphism for "`self`, then `next`" in time order.
    ///
    /// States transform as `U(ν) = ν ∘ U`, so applying `self` then `next`
    /// gives `ν ∘ self ∘ next`; the composite map is `X ↦ self(next(X))`.
    pub fn then(&self, next: &Self) -> Result<Self, LatticeError> {
        same_lattice(&self.lattice, &next.lattice)?;
        Ok(Self {
            lattice: self.lattice.clone(),
            map: next.map.iter().map(|&x| self.map[x]).collect(),
        })
    }
}

pub(crate) fn same_lattice(a: &Arc<FiniteOML>, b: &Arc<FiniteOML>) -> Result<(), LatticeError> {
    if Arc::ptr_eq(a, b) {
        Ok(())
    } else {
        Err(LatticeError::LatticeMismatch)
    }
}

/// Composes a word given in time order (first gate first).
pub fn compose_automorphisms(
    lattice: &Arc<FiniteOML>,
    word: &[&LatticeAutomorphism],
) -> Result<LatticeAutomorphism, LatticeError> {
    word.iter()
        .try_fold(LatticeAutomorphism::identity(lattice.clone()), |acc, g| acc.then(g))
}

/// `U(ν)(X) = ν(U(X))`.
pub fn pushforward(u: &LatticeAutomorphism, nu: &LatticeState) -> Result<LatticeState, LatticeError> {
    same_lattice(&u.lattice, &nu.lattice)?;
    let values = u.map.iter().map(|&x| nu.values[x]).collect();
    let state = LatticeState {
        lattice: nu.lattice.clone(),
        values,
        tolerance: nu.tolerance,
        zero_threshold: nu.zero_threshold,
    };
    state.validate()?;
    Ok(state)
}

/// Outcome of a superposition test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperpositionCheck {
    pub holds: bool,
    /// First element annihilated by every state of `D` but not by `ν`.
    pub violation: Option<usize>,
}

/// Whether `ν` is a superposition of `d`: every element on which all of `d`
/// vanish is also null for `ν`. Each state's own zero threshold is used.
pub fn is_superposition(nu: &LatticeState, d: &[LatticeState]) -> Result<SuperpositionCheck, LatticeError> {
    is_superposition_with(nu, d, None)
}

/// As [`is_superposition`], with one zero threshold for every state.
pub fn is_superposition_with(
    nu: &LatticeState,
    d: &[LatticeState],
    threshold: Option<f64>,
) -> Result<SuperpositionCheck, LatticeError> {
    for mu in d {
        same_lattice(&nu.lattice, &mu.lattice)?;
    }
    let zero = |s: &LatticeState, x: usize| s.values[x] <= threshold.unwrap_or(s.zero_threshold);
    let violation = (0..nu.lattice.len()).find(|&x| d.iter().all(|mu| zero(mu, x)) && !zero(nu, x));
    Ok(SuperpositionCheck {
        holds: violation.is_none(),
        violation,
    })
}
