use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::parallel::{self, Execution};

use super::laws::{law_battery, LawReport, OrthoLattice};
use super::LatticeError;

/// Largest `N` accepted by [`boolean_oml`].
pub const MAX_BOOLEAN_OUTCOMES: usize = 4;
/// Largest Boolean lattice stored as dense tables and checked exhaustively.
const MAX_DENSE_BOOLEAN: usize = 3;
const MISSING: u32 = u32::MAX;

#[derive(Clone, Debug)]
enum Repr {
    Tables {
        meet: Vec<u32>,
        join: Vec<u32>,
        ortho: Vec<u32>,
        leq: Vec<bool>,
        zero: usize,
        one: usize,
    },
    /// Powerset of `{0,1}^outcomes`; element `i` is the subset with bitmask `i`.
    Powerset { outcomes: usize },
}

/// Lattice tables that have not been validated; the input to the law
/// battery. Missing meets/joins are allowed and reported as law failures.
#[derive(Clone, Debug)]
pub struct RawLattice {
    names: Vec<String>,
    meet: Vec<u32>,
    join: Vec<u32>,
    ortho: Vec<u32>,
    leq: Vec<bool>,
    zero: usize,
    one: usize,
}

impl OrthoLattice for RawLattice {
    fn size(&self) -> usize {
        self.names.len()
    }
    fn zero(&self) -> usize {
        self.zero
    }
    fn one(&self) -> usize {
        self.one
    }
    fn meet_of(&self, a: usize, b: usize) -> Option<usize> {
        let m = self.meet[a * self.size() + b];
        (m != MISSING).then_some(m as usize)
    }
    fn join_of(&self, a: usize, b: usize) -> Option<usize> {
        let j = self.join[a * self.size() + b];
        (j != MISSING).then_some(j as usize)
    }
    fn ortho_of(&self, a: usize) -> usize {
        self.ortho[a] as usize
    }
    fn leq_of(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.size() + b]
    }
    fn element_name(&self, a: usize) -> String {
        self.names[a].clone()
    }
}

impl RawLattice {
    pub(crate) fn from_tables(
        names: Vec<String>,
        meet: Vec<u32>,
        join: Vec<u32>,
        ortho: Vec<usize>,
        leq: Vec<bool>,
        zero: usize,
        one: usize,
    ) -> Self {
        Self {
            names,
            meet,
            join,
            ortho: ortho.into_iter().map(|o| o as u32).collect(),
            leq,
            zero,
            one,
        }
    }

    /// Builds tables from an order relation; meets and joins are derived as
    /// greatest lower / least upper bounds where they exist.
    pub fn from_order(
        names: Vec<String>,
        leq: Vec<bool>,
        ortho: Vec<usize>,
        zero: usize,
        one: usize,
        exec: Execution,
    ) -> Result<Self, LatticeError> {
        let n = names.len();
        if n == 0 || leq.len() != n * n || ortho.len() != n || zero >= n || one >= n {
            return Err(LatticeError::Malformed("table sizes do not match the element count".into()));
        }
        if let Some(&bad) = ortho.iter().find(|&&o| o >= n) {
            return Err(LatticeError::Malformed(format!("ortho index {bad} out of range")));
        }
        let le = |a: usize, b: usize| leq[a * n + b];
        // bound(a, b, below): extremal element among the common lower (upper) bounds
        let bound = |a: usize, b: usize, below: bool| -> u32 {
            let ok = |c: usize| if below { le(c, a) && le(c, b) } else { le(a, c) && le(b, c) };
            let better = |x: usize, y: usize| if below { le(x, y) } else { le(y, x) };
            let mut best: Option<usize> = None;
            for c in (0..n).filter(|&c| ok(c)) {
                if best.is_none_or(|g| better(g, c)) {
                    best = Some(c);
                }
            }
            match best {
                Some(g) if (0..n).filter(|&c| ok(c)).all(|c| better(c, g)) => g as u32,
                _ => MISSING,
            }
        };
        let rows = parallel::map_range(n, exec, |a| {
            (0..n).map(|b| (bound(a, b, true), bound(a, b, false))).collect::<Vec<_>>()
        });
        let (meet, join) = rows.into_iter().flatten().unzip();
        Ok(Self {
            names,
            meet,
            join,
            ortho: ortho.into_iter().map(|o| o as u32).collect(),
            leq,
            zero,
            one,
        })
    }

    pub fn battery(&self, exec: Execution) -> LawReport {
        law_battery(self, exec)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Parses the JSON interchange format (see [`FiniteOML::to_json`]).
    ///
    /// The order is given as an adjacency list `element → elements above it`;
    /// the relation used is its reflexive-transitive closure, so listing
    /// covers (a Hasse diagram) is enough.
    pub fn from_json(text: &str, exec: Execution) -> Result<Self, LatticeError> {
        let doc: LatticeDoc = serde_json::from_str(text).map_err(|e| LatticeError::Parse(e.to_string()))?;
        let n = doc.elements.len();
        let mut index = HashMap::new();
        for (i, name) in doc.elements.iter().enumerate() {
            if index.insert(name.as_str(), i).is_some() {
                return Err(LatticeError::Parse(format!("duplicate element {name:?}")));
            }
        }
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| LatticeError::Parse(format!("unknown element {name:?}")))
        };
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for (a, uppers) in &doc.order {
            let a = lookup(a)?;
            for b in uppers {
                leq[a * n + lookup(b)?] = true;
            }
        }
        // Warshall closure
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        let mut ortho = vec![usize::MAX; n];
        for (a, b) in &doc.ortho {
            ortho[lookup(a)?] = lookup(b)?;
        }
        if let Some(i) = ortho.iter().position(|&o| o == usize::MAX) {
            return Err(LatticeError::Parse(format!("no ortho entry for {:?}", doc.elements[i])));
        }
        let zero = lookup(&doc.zero)?;
        let one = lookup(&doc.one)?;
        Self::from_order(doc.elements, leq, ortho, zero, one, exec)
    }
}

#[derive(Serialize, Deserialize)]
struct LatticeDoc {
    elements: Vec<String>,
    order: BTreeMap<String, Vec<String>>,
    ortho: BTreeMap<String, String>,
    zero: String,
    one: String,
}

/// A finite orthomodular lattice with named elements. Every instance has
/// passed the law battery (or is a powerset algebra by construction).
#[derive(Clone, Debug)]
pub struct FiniteOML {
    names: Option<Vec<String>>,
    repr: Repr,
}

impl FiniteOML {
    /// Validates `raw` against every required law.
    pub fn from_raw(raw: RawLattice, exec: Execution) -> Result<Self, LatticeError> {
        let report = raw.battery(exec);
        if let Some(v) = report.first_violation() {
            return Err(LatticeError::LawViolation {
                law: v.law,
                witness: v.witness().map(|w| w.iter().map(|&i| raw.names[i].clone()).collect()).unwrap_or_default(),
            });
        }
        Ok(Self {
            names: Some(raw.names),
            repr: Repr::Tables {
                meet: raw.meet,
                join: raw.join,
                ortho: raw.ortho,
                leq: raw.leq,
                zero: raw.zero,
                one: raw.one,
            },
        })
    }

    pub fn from_json(text: &str, exec: Execution) -> Result<Self, LatticeError> {
        Self::from_raw(RawLattice::from_json(text, exec)?, exec)
    }

    pub fn len(&self) -> usize {
        match &self.repr {
            Repr::Tables { ortho, .. } => ortho.len(),
            Repr::Powerset { outcomes } => 1 << (1 << outcomes),
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn zero(&self) -> usize {
        match &self.repr {
            Repr::Tables { zero, .. } => *zero,
            Repr::Powerset { .. } => 0,
        }
    }

    pub fn one(&self) -> usize {
        match &self.repr {
            Repr::Tables { one, .. } => *one,
            Repr::Powerset { .. } => self.len() - 1,
        }
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        match &self.repr {
            Repr::Tables { meet, .. } => meet[a * self.len() + b] as usize,
            Repr::Powerset { .. } => a & b,
        }
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        match &self.repr {
            Repr::Tables { join, .. } => join[a * self.len() + b] as usize,
            Repr::Powerset { .. } => a | b,
        }
    }

    pub fn ortho(&self, a: usize) -> usize {
        match &self.repr {
            Repr::Tables { ortho, .. } => ortho[a] as usize,
            Repr::Powerset { .. } => !a & self.one(),
        }
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        match &self.repr {
            Repr::Tables { leq, .. } => leq[a * self.len() + b],
            Repr::Powerset { .. } => a & !b == 0,
        }
    }

    /// `a ≤ b⊥`.
    pub fn orthogonal(&self, a: usize, b: usize) -> bool {
        self.leq(a, self.ortho(b))
    }

    pub fn name(&self, a: usize) -> String {
        match (&self.names, &self.repr) {
            (Some(names), _) => names[a].clone(),
            (None, Repr::Powerset { outcomes }) => powerset_name(a, *outcomes),
            (None, Repr::Tables { .. }) => a.to_string(),
        }
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        match &self.names {
            Some(names) => names.iter().position(|n| n == name),
            None => (0..self.len()).find(|&i| self.name(i) == name),
        }
    }

    /// Number of outcome bits `N` if this is the powerset of `{0,1}^N`
    /// built by [`boolean_oml`]; element `i` is then the subset with mask `i`.
    pub fn boolean_outcomes(&self) -> Option<usize> {
        match &self.repr {
            Repr::Powerset { outcomes } => Some(*outcomes),
            Repr::Tables { .. } => self.boolean_tag(),
        }
    }

    fn boolean_tag(&self) -> Option<usize> {
        let n = self.len();
        let atoms = n.trailing_zeros() as usize;
        (n.is_power_of_two()
            && atoms.is_power_of_two()
            && self.zero() == 0
            && self.one() == n - 1
            && self.names.as_ref().is_some_and(|names| {
                let outcomes = atoms.trailing_zeros() as usize;
                names.iter().enumerate().all(|(i, s)| *s == powerset_name(i, outcomes))
            }))
        .then(|| atoms.trailing_zeros() as usize)
    }

    /// Atoms: nonzero elements with nothing strictly between them and zero.
    pub fn atoms(&self) -> Vec<usize> {
        let z = self.zero();
        (0..self.len())
            .filter(|&a| a != z && (0..self.len()).all(|b| b == z || b == a || !self.leq(b, a)))
            .collect()
    }

    pub fn battery(&self, exec: Execution) -> LawReport {
        law_battery(self, exec)
    }

    /// JSON interchange form: `{elements, order, ortho, zero, one}` with the
    /// order given by its covering relation.
    pub fn to_json(&self) -> serde_json::Value {
        let n = self.len();
        let names: Vec<String> = (0..n).map(|i| self.name(i)).collect();
        let mut order = BTreeMap::new();
        for a in 0..n {
            let covers: Vec<String> = (0..n)
                .filter(|&b| {
                    a != b && self.leq(a, b) && !(0..n).any(|c| c != a && c != b && self.leq(a, c) && self.leq(c, b))
                })
                .map(|b| names[b].clone())
                .collect();
            if !covers.is_empty() {
                order.insert(names[a].clone(), covers);
            }
        }
        let doc = LatticeDoc {
            order,
            ortho: (0..n).map(|a| (names[a].clone(), names[self.ortho(a)].clone())).collect(),
            zero: names[self.zero()].clone(),
            one: names[self.one()].clone(),
            elements: names,
        };
        serde_json::to_value(doc).expect("lattice document serializes")
    }
}

impl OrthoLattice for FiniteOML {
    fn size(&self) -> usize {
        self.len()
    }
    fn zero(&self) -> usize {
        FiniteOML::zero(self)
    }
    fn one(&self) -> usize {
        FiniteOML::one(self)
    }
    fn meet_of(&self, a: usize, b: usize) -> Option<usize> {
        Some(self.meet(a, b))
    }
    fn join_of(&self, a: usize, b: usize) -> Option<usize> {
        Some(self.join(a, b))
    }
    fn ortho_of(&self, a: usize) -> usize {
        self.ortho(a)
    }
    fn leq_of(&self, a: usize, b: usize) -> bool {
        self.leq(a, b)
    }
    fn element_name(&self, a: usize) -> String {
        self.name(a)
    }
}

/// `{00,11}`-style name of the subset with bitmask `mask`.
fn powerset_name(mask: usize, outcomes: usize) -> String {
    let members: Vec<String> = (0..1usize << outcomes)
        .filter(|y| mask >> y & 1 == 1)
        .map(|y| {
            if outcomes == 0 {
                "ε".to_string()
            } else {
                format!("{y:0outcomes$b}")
            }
        })
        .collect();
    format!("{{{}}}", members.join(","))
}

/// The powerset algebra of `{0,1}^n` (`2^(2^n)` elements).
///
/// Up to `n = 3` the lattice is stored as dense tables and run through the
/// full law battery; `n = 4` (65536 elements) uses bitmask operations
/// directly, which are a Boolean algebra by construction.
pub fn boolean_oml(n: usize) -> Result<FiniteOML, LatticeError> {
    if n > MAX_BOOLEAN_OUTCOMES {
        return Err(LatticeError::SizeCapExceeded {
            requested: n,
            cap: MAX_BOOLEAN_OUTCOMES,
        });
    }
    let powerset = FiniteOML {
        names: None,
        repr: Repr::Powerset { outcomes: n },
    };
    if n > MAX_DENSE_BOOLEAN {
        return Ok(powerset);
    }
    let size = powerset.len();
    let mut meet = Vec::with_capacity(size * size);
    let mut join = Vec::with_capacity(size * size);
    let mut leq = Vec::with_capacity(size * size);
    for a in 0..size {
        for b in 0..size {
            meet.push((a & b) as u32);
            join.push((a | b) as u32);
            leq.push(a & !b == 0);
        }
    }
    let raw = RawLattice {
        names: (0..size).map(|i| powerset_name(i, n)).collect(),
        meet,
        join,
        ortho: (0..size).map(|a| powerset.ortho(a) as u32).collect(),
        leq,
        zero: 0,
        one: size - 1,
    };
    FiniteOML::from_raw(raw, Execution::default())
}
