use std::collections::HashMap;

use crate::gates::{compose_word, GateWord};
use crate::parallel::{self, Execution};
use crate::qcore::{born, conjugate, ComplexMatrix, DensityOperator, Projector};

use super::{LogicError, Relation};

/// Digits kept when keying words for the quotient.
const KEY_DIGITS: i32 = 9;

/// Which relation to quotient by, with its context.
#[derive(Clone, Debug)]
pub enum QuotientRelation {
    /// Keyed by `UρU†`.
    Rho(DensityOperator),
    /// Keyed by `Tr(UρU†P)`.
    RhoP(DensityOperator, Projector),
}

impl QuotientRelation {
    pub fn relation(&self) -> Relation {
        match self {
            QuotientRelation::Rho(_) => Relation::EquivRho,
            QuotientRelation::RhoP(..) => Relation::EquivRhoP,
        }
    }
}

/// A partition of gate words into equivalence classes.
#[derive(Clone, Debug)]
pub struct QuotientPartition {
    pub relation: Relation,
    /// Classes in order of first occurrence, members in input order.
    pub classes: Vec<Vec<GateWord>>,
    /// Input indices of each class's members.
    pub indices: Vec<Vec<usize>>,
    /// Canonical key of each class (its first member's rounded value).
    pub keys: Vec<String>,
    pub tolerance: f64,
}

impl QuotientPartition {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Class index of input word `i`.
    pub fn class_of(&self, i: usize) -> Option<usize> {
        self.indices.iter().position(|c| c.contains(&i))
    }
}

enum Value {
    Operator(ComplexMatrix),
    Scalar(f64),
}

impl Value {
    fn distance(&self, other: &Value) -> f64 {
        match (self, other) {
            (Value::Operator(a), Value::Operator(b)) => a.max_abs_diff(b),
            (Value::Scalar(a), Value::Scalar(b)) => (a - b).abs(),
            _ => f64::INFINITY,
        }
    }

    fn key(&self) -> Vec<(i64, i64)> {
        match self {
            Value::Operator(m) => m.rounded_key(KEY_DIGITS),
            Value::Scalar(x) => vec![((x * 10f64.powi(KEY_DIGITS)).round() as i64, 0)],
        }
    }

    fn key_string(&self) -> String {
        match self {
            Value::Scalar(x) => format!("{x:.9}"),
            Value::Operator(m) => m
                .as_slice()
                .iter()
                .map(|z| format!("{:.9}{:+.9}i", z.re, z.im))
                .collect::<Vec<_>>()
                .join(" "),
        }
    }
}

/// Partitions `words` by `relation` at tolerance `tol`.
///
/// Each word is keyed by its value rounded to 9 digits. A word whose key is
/// new is compared against every existing class representative before a
/// new class is opened, so values straddling a rounding boundary still
/// land together. Values are computed per word in parallel; the merge is
/// sequential and in input order.
pub fn quotient(
    words: &[GateWord],
    relation: &QuotientRelation,
    tol: f64,
    exec: Execution,
) -> Result<QuotientPartition, LogicError> {
    if let Some(first) = words.first() {
        if let Some(w) = words.iter().find(|w| w.width() != first.width()) {
            return Err(LogicError::WidthMismatch(first.width(), w.width()));
        }
    }
    let values = parallel::map(words, exec, |w| -> Result<Value, LogicError> {
        let u = compose_word(w)?;
        Ok(match relation {
            QuotientRelation::Rho(rho) => Value::Operator(conjugate(&u, rho)?.matrix().clone()),
            QuotientRelation::RhoP(rho, p) => Value::Scalar(born(&conjugate(&u, rho)?, p)?),
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;

    let mut by_key: HashMap<Vec<(i64, i64)>, usize> = HashMap::new();
    let mut reps: Vec<usize> = Vec::new();
    let mut indices: Vec<Vec<usize>> = Vec::new();
    for (i, v) in values.iter().enumerate() {
        let key = v.key();
        let class = by_key
            .get(&key)
            .copied()
            .filter(|&c| values[reps[c]].distance(v) <= tol)
            .or_else(|| reps.iter().position(|&r| values[r].distance(v) <= tol));
        match class {
            Some(c) => {
                indices[c].push(i);
                by_key.entry(key).or_insert(c);
            }
            None => {
                by_key.insert(key, reps.len());
                reps.push(i);
                indices.push(vec![i]);
            }
        }
    }
    Ok(QuotientPartition {
        relation: relation.relation(),
        classes: indices
            .iter()
            .map(|c| c.iter().map(|&i| words[i].clone()).collect())
            .collect(),
        keys: reps.iter().map(|&r| values[r].key_string()).collect(),
        indices,
        tolerance: tol,
    })
}
