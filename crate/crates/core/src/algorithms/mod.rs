//! Reference algorithms run exactly on the density-operator stack: the
//! one-bit Deutsch-Jozsa test and period finding with the Fourier transform.
//! Success probabilities are Born probabilities of the event of interest.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Value};
use thiserror::Error;

use crate::gates::{compose_word, qft_matrix, GateError, GateWord};
use crate::logic::num;
use crate::qcore::{born, conjugate, ComplexMatrix, DensityOperator, Projector, QcoreError, UnitaryGate};

mod oracle;
mod period;

pub use oracle::{build_oracle, OracleFunction};
pub use period::{conditional_states, period_find, Branch, PeriodMode, PeriodOptions, PeriodicSpec};

#[derive(Debug, Error)]
pub enum AlgorithmError {
    #[error("invalid specification: {0}")]
    InvalidSpec(String),
    #[error("width mismatch: {0}")]
    WidthMismatch(String),
    #[error("outcome {0} is not in the distribution")]
    UnknownOutcome(u64),
    #[error(transparent)]
    Qcore(#[from] QcoreError),
    #[error(transparent)]
    Gate(#[from] GateError),
}

/// The algorithm's conclusion.
#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Constant,
    Balanced,
    Period {
        /// `N / gcd(samples ∪ {N})`.
        estimate: u64,
        samples: Vec<u64>,
        seed: u64,
        /// `φ(r)/r`, the closed form of the success probability.
        expected_success: f64,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunResult {
    /// Measured register value → probability.
    pub outcome_distribution: BTreeMap<u64, f64>,
    pub success_probability: f64,
    pub verdict: Verdict,
    /// Per-`y₀` details, filled only in branching mode.
    pub branches: Vec<Branch>,
}

impl RunResult {
    /// Sorted-key JSON with 12-significant-digit floats.
    pub fn to_json(&self) -> Value {
        let dist: serde_json::Map<String, Value> = self
            .outcome_distribution
            .iter()
            .map(|(c, p)| (c.to_string(), prob(*p)))
            .collect();
        let verdict = match &self.verdict {
            Verdict::Constant => json!("constant"),
            Verdict::Balanced => json!("balanced"),
            Verdict::Period {
                estimate,
                samples,
                seed,
                expected_success,
            } => json!({
                "estimate": estimate,
                "samples": samples,
                "seed": seed,
                "expected_success": num(*expected_success),
            }),
        };
        let mut out = json!({
            "distribution": dist,
            "success_probability": prob(self.success_probability),
            "verdict": verdict,
        });
        if !self.branches.is_empty() {
            out["branches"] = self
                .branches
                .iter()
                .map(|b| {
                    json!({
                        "y0": b.y0,
                        "x0": b.x0,
                        "probability": prob(b.probability),
                        "distribution": b.distribution.iter().map(|(c, p)| (c.to_string(), prob(*p))).collect::<serde_json::Map<_, _>>(),
                    })
                })
                .collect();
        }
        out
    }
}

/// Probabilities below this are rounding residue and are written as 0.
const PROBABILITY_FLOOR: f64 = 1e-15;

fn prob(p: f64) -> Value {
    num(if p.abs() < PROBABILITY_FLOOR { 0.0 } else { p })
}

/// `F_ab = e^{2πi ab/N} / √N` as a unitary gate.
pub fn qft(n: usize) -> Result<UnitaryGate, AlgorithmError> {
    if n == 0 {
        return Err(AlgorithmError::InvalidSpec("QFT needs N ≥ 1".into()));
    }
    Ok(UnitaryGate::new(qft_matrix(n), 1e-9)?)
}

/// The stages of the Deutsch-Jozsa circuit on `|x⟩|y⟩` (x is wire 0).
pub(crate) struct DjCircuit {
    /// `H ⊗ H`.
    pub prepare: UnitaryGate,
    pub oracle: UnitaryGate,
    /// `H ⊗ 𝟙`.
    pub finish: UnitaryGate,
}

pub(crate) fn dj_circuit(f: &OracleFunction) -> Result<DjCircuit, AlgorithmError> {
    if f.domain_bits() != 1 || f.codomain_bits() != 1 {
        return Err(AlgorithmError::WidthMismatch(format!(
            "Deutsch-Jozsa takes a function of 1 bit to 1 bit, got {} → {}",
            f.domain_bits(),
            f.codomain_bits()
        )));
    }
    let word = |t: &str| compose_word(&GateWord::parse(t).expect("fixed word parses"));
    Ok(DjCircuit {
        prepare: word("width=2; H[0]; H[1]")?,
        oracle: build_oracle(f),
        finish: word("width=2; H[0]")?,
    })
}

/// Deutsch-Jozsa for a one-bit function: prepare `|0⟩|1⟩`, apply `H ⊗ H`,
/// the oracle, then `H` on the first qubit, and read off
/// `P(|0⟩⟨0| ⊗ 𝟙)` and `P(|1⟩⟨1| ⊗ 𝟙)`. The verdict is "constant" iff the
/// first is at least 1/2; the success probability is that of the correct
/// verdict.
pub fn deutsch_jozsa(f: &OracleFunction) -> Result<RunResult, AlgorithmError> {
    let c = dj_circuit(f)?;
    let u = c.finish.then_after(&c.oracle)?.then_after(&c.prepare)?;
    let sigma = conjugate(&u, &DensityOperator::basis(4, 0b01))?;
    let first = |bit: usize| {
        let d: Vec<f64> = (0..4).map(|i| if i >> 1 == bit { 1.0 } else { 0.0 }).collect();
        Projector::new(ComplexMatrix::diag_real(&d), 1e-12)
    };
    let p0 = born(&sigma, &first(0)?)?;
    let p1 = born(&sigma, &first(1)?)?;
    let verdict = if p0 >= 0.5 { Verdict::Constant } else { Verdict::Balanced };
    let success = if f.is_constant() { p0 } else { p1 };
    Ok(RunResult {
        outcome_distribution: BTreeMap::from([(0, p0), (1, p1)]),
        success_probability: success,
        verdict,
        branches: Vec::new(),
    })
}

/// Total probability of `event` under the result's distribution.
pub fn success_probability(result: &RunResult, event: &BTreeSet<u64>) -> Result<f64, AlgorithmError> {
    event
        .iter()
        .map(|c| {
            result
                .outcome_distribution
                .get(c)
                .copied()
                .ok_or(AlgorithmError::UnknownOutcome(*c))
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::C64;

    #[test]
    fn qft_small_cases() {
        assert!(qft(1).unwrap().matrix().approx_eq(&ComplexMatrix::identity(1), 0.0));
        let h = compose_word(&GateWord::parse("H").unwrap()).unwrap();
        assert!(qft(2).unwrap().matrix().approx_eq(h.matrix(), 1e-15));
        let f = qft(4).unwrap();
        assert!((f.matrix() * &f.matrix().adjoint()).approx_eq(&ComplexMatrix::identity(4), 1e-12));
        assert!(qft(0).is_err());
    }

    #[test]
    fn paper_functions_classified() {
        for (name, constant) in [("f1", false), ("f2", false), ("f3", true), ("f4", true)] {
            let r = deutsch_jozsa(&OracleFunction::named(name).unwrap()).unwrap();
            assert_eq!(r.verdict, if constant { Verdict::Constant } else { Verdict::Balanced }, "{name}");
            assert!((r.success_probability - 1.0).abs() < 1e-12);
            let sum: f64 = r.outcome_distribution.values().sum();
            assert!((sum - 1.0).abs() < 1e-12);
        }
        let f3 = deutsch_jozsa(&OracleFunction::named("f3").unwrap()).unwrap();
        assert!((f3.outcome_distribution[&0] - 1.0).abs() < 1e-12);
        let f1 = deutsch_jozsa(&OracleFunction::named("f1").unwrap()).unwrap();
        assert!((f1.outcome_distribution[&1] - 1.0).abs() < 1e-12);
    }

    /// Intermediate states against the closed forms, modulo the global
    /// phase `(−1)^{f(0)}`.
    #[test]
    fn intermediate_states_match_closed_forms() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for name in ["f1", "f2", "f3", "f4"] {
            let f = OracleFunction::named(name).unwrap();
            let c = dj_circuit(&f).unwrap();
            let start = [0.0, 1.0, 0.0, 0.0].map(|x| C64::new(x, 0.0));
            let after = c.oracle.matrix().apply(&c.prepare.matrix().apply(&start));
            let phase = if f.eval(0) == 1 { -1.0 } else { 1.0 };
            let sign = if f.eval(0) ^ f.eval(1) == 1 { -1.0 } else { 1.0 };
            // phase · ½ (|0⟩ + sign|1⟩)(|0⟩ − |1⟩)
            let expected = [0.5, -0.5, 0.5 * sign, -0.5 * sign].map(|x| C64::new(phase * x, 0.0));
            for (a, b) in after.iter().zip(&expected) {
                assert!((a - b).norm() < 1e-12, "{name}");
            }
            let fin = c.finish.matrix().apply(&after);
            // phase · ½ ((1+sign)|0⟩ + (1−sign)|1⟩)(|0⟩ − |1⟩) / √2
            let (a0, a1) = ((1.0 + sign) * 0.5, (1.0 - sign) * 0.5);
            let expected = [a0 * s, -a0 * s, a1 * s, -a1 * s].map(|x| C64::new(phase * x, 0.0));
            for (a, b) in fin.iter().zip(&expected) {
                assert!((a - b).norm() < 1e-12, "{name}");
            }
        }
    }

    #[test]
    fn wide_functions_rejected() {
        let f = OracleFunction::new(2, 1, vec![0, 1, 1, 0]).unwrap();
        assert!(matches!(deutsch_jozsa(&f), Err(AlgorithmError::WidthMismatch(_))));
    }

    #[test]
    fn event_probabilities() {
        let r = deutsch_jozsa(&OracleFunction::named("f3").unwrap()).unwrap();
        assert!((success_probability(&r, &BTreeSet::from([0, 1])).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(success_probability(&r, &BTreeSet::new()).unwrap(), 0.0);
        assert!((success_probability(&r, &BTreeSet::from([0])).unwrap() - 1.0).abs() < 1e-12);
        assert!(matches!(
            success_probability(&r, &BTreeSet::from([7])),
            Err(AlgorithmError::UnknownOutcome(7))
        ));
    }

    #[test]
    fn json_is_sorted_and_rounded() {
        let r = period_find(&PeriodicSpec::standard(4, 2).unwrap(), PeriodOptions::default()).unwrap();
        let text = r.to_json().to_string();
        assert!(text.starts_with(r#"{"distribution":{"0":0.5,"1":0.0,"2":0.5,"3":0.0}"#), "{text}");
    }
}
