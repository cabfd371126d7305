use std::collections::{BTreeMap, HashMap};

use rand::distr::{weighted::WeightedIndex, Distribution};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::gates::qft_matrix;
use crate::qcore::{born, conjugate, ComplexMatrix, DensityOperator, Projector, UnitaryGate, C64, DEFAULT_MAX_DIM};

use super::{AlgorithmError, RunResult, Verdict};

/// A periodic function on `Z_N` with declared period `r | N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicSpec {
    #[serde(rename = "N")]
    pub modulus: usize,
    pub r: usize,
    pub f: Vec<i64>,
}

impl PeriodicSpec {
    pub fn new(modulus: usize, r: usize, f: Vec<i64>) -> Result<Self, AlgorithmError> {
        let spec = Self { modulus, r, f };
        spec.validate()?;
        Ok(spec)
    }

    /// `f(x) = x mod r`.
    pub fn standard(modulus: usize, r: usize) -> Result<Self, AlgorithmError> {
        Self::new(modulus, r, (0..modulus).map(|x| (x % r.max(1)) as i64).collect())
    }

    /// `{"N":8,"r":4,"f":[...]}`.
    pub fn from_json(text: &str) -> Result<Self, AlgorithmError> {
        let spec: Self = serde_json::from_str(text).map_err(|e| AlgorithmError::InvalidSpec(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), AlgorithmError> {
        let (n, r) = (self.modulus, self.r);
        let bad = |msg: String| Err(AlgorithmError::InvalidSpec(msg));
        if n == 0 || n > DEFAULT_MAX_DIM {
            return bad(format!("N = {n} outside 1..={DEFAULT_MAX_DIM}"));
        }
        if r == 0 || n % r != 0 {
            return bad(format!("r = {r} does not divide N = {n}"));
        }
        if self.f.len() != n {
            return bad(format!("f has {} values, expected N = {n}", self.f.len()));
        }
        if let Some(x) = (0..n).find(|&x| self.f[(x + r) % n] != self.f[x]) {
            return bad(format!("f(x + r) ≠ f(x) at x = {x}"));
        }
        let mut seen = HashMap::new();
        for x in 0..r {
            if let Some(prev) = seen.insert(self.f[x], x) {
                return bad(format!("f repeats a value within one period (x = {prev} and x = {x})"));
            }
        }
        Ok(())
    }
}

/// How the measured second register is handled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PeriodMode {
    /// Trace the second register out (the mixture over all `y₀`).
    #[default]
    Trace,
    /// Condition on each `y₀` separately and report every branch.
    Branching,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PeriodOptions {
    pub mode: PeriodMode,
    /// Outcomes sampled for the gcd post-processing.
    pub samples: usize,
    pub seed: u64,
}

impl Default for PeriodOptions {
    fn default() -> Self {
        Self {
            mode: PeriodMode::Trace,
            samples: 8,
            seed: 0,
        }
    }
}

/// One measured value of the second register.
#[derive(Clone, Debug, PartialEq)]
pub struct Branch {
    pub y0: i64,
    /// Smallest `x` with `f(x) = y₀`.
    pub x0: usize,
    pub probability: f64,
    /// Normalized first-register state before the transform.
    pub pre_qft: Vec<C64>,
    /// First-register amplitudes after the transform.
    pub post_qft: Vec<C64>,
    pub distribution: BTreeMap<u64, f64>,
}

/// Conditional first-register states, one per distinct value of `f` in
/// order of first occurrence, with their probabilities.
///
/// Measuring the second register of `|f⟩ = N^{-1/2} Σ_x |x⟩|f(x)⟩` and
/// getting `y₀` leaves `K^{-1/2} Σ_k |x₀ + kr⟩`, with probability `K/N`.
pub fn conditional_states(spec: &PeriodicSpec) -> Vec<(i64, usize, f64, Vec<C64>)> {
    let n = spec.modulus;
    let amp = 1.0 / (n as f64).sqrt();
    // joint amplitudes grouped by second-register value
    let mut order: Vec<i64> = Vec::new();
    let mut columns: HashMap<i64, Vec<C64>> = HashMap::new();
    for x in 0..n {
        let y = spec.f[x];
        columns
            .entry(y)
            .or_insert_with(|| {
                order.push(y);
                vec![C64::new(0.0, 0.0); n]
            })[x] = C64::new(amp, 0.0);
    }
    order
        .into_iter()
        .map(|y| {
            let col = &columns[&y];
            let p: f64 = col.iter().map(|z| z.norm_sqr()).sum();
            let x0 = col.iter().position(|z| z.norm() > 0.0).expect("value occurs");
            let state = col.iter().map(|z| z / p.sqrt()).collect();
            (y, x0, p, state)
        })
        .collect()
}

fn euler_phi(r: u64) -> u64 {
    (1..=r).filter(|&j| gcd(j, r) == 1).count() as u64
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn distribution_of(rho: &DensityOperator, n: usize) -> Result<BTreeMap<u64, f64>, AlgorithmError> {
    (0..n)
        .map(|c| Ok((c as u64, born(rho, &Projector::basis(n, c))?)))
        .collect()
}

/// Exact period finding on `Z_N`: the outcome distribution of the first
/// register after the transform, the single-sample success probability
/// `Pr[c = jN/r with gcd(j, r) = 1]`, and an estimate
/// `r̂ = N / gcd(c_1, …, c_s, N)` from `samples` seeded draws.
pub fn period_find(spec: &PeriodicSpec, options: PeriodOptions) -> Result<RunResult, AlgorithmError> {
    spec.validate()?;
    let n = spec.modulus;
    let r = spec.r as u64;
    let f = UnitaryGate::new(qft_matrix(n), 1e-9)?;
    let branches_raw = conditional_states(spec);

    let mut branches = Vec::new();
    let distribution = match options.mode {
        PeriodMode::Trace => {
            // reduced state of the first register: Σ_y p(y) |ψ_y⟩⟨ψ_y|
            let mut m = ComplexMatrix::zeros(n);
            for (_, _, p, psi) in &branches_raw {
                m = &m + &ComplexMatrix::outer(psi).scale(C64::new(*p, 0.0));
            }
            let rho = DensityOperator::new(m, 1e-9)?;
            distribution_of(&conjugate(&f, &rho)?, n)?
        }
        PeriodMode::Branching => {
            let mut total = BTreeMap::new();
            for (y0, x0, p, psi) in branches_raw {
                let post = f.matrix().apply(&psi);
                let rho = conjugate(&f, &DensityOperator::pure(&psi)?)?;
                let dist = distribution_of(&rho, n)?;
                for (&c, &q) in &dist {
                    *total.entry(c).or_insert(0.0) += p * q;
                }
                branches.push(Branch {
                    y0,
                    x0,
                    probability: p,
                    pre_qft: psi,
                    post_qft: post,
                    distribution: dist,
                });
            }
            total
        }
    };

    let n64 = n as u64;
    let success: f64 = distribution
        .iter()
        .filter(|(&c, _)| (c * r).is_multiple_of(n64) && gcd(c * r / n64, r) == 1)
        .map(|(_, &p)| p)
        .sum();

    let outcomes: Vec<u64> = distribution.keys().copied().collect();
    // rounding noise off the support is not sampled
    let weights: Vec<f64> = distribution.values().map(|&p| if p > 1e-12 { p } else { 0.0 }).collect();
    let sampler = WeightedIndex::new(&weights).map_err(|e| AlgorithmError::InvalidSpec(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let samples: Vec<u64> = (0..options.samples).map(|_| outcomes[sampler.sample(&mut rng)]).collect();
    let g = samples.iter().fold(n64, |acc, &c| gcd(acc, c));

    Ok(RunResult {
        outcome_distribution: distribution,
        success_probability: success.clamp(0.0, 1.0),
        verdict: Verdict::Period {
            estimate: n64 / g,
            samples,
            seed: options.seed,
            expected_success: euler_phi(r) as f64 / r as f64,
        },
        branches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(n: usize, r: usize, mode: PeriodMode) -> RunResult {
        period_find(
            &PeriodicSpec::standard(n, r).unwrap(),
            PeriodOptions {
                mode,
                ..Default::default()
            },
        )
        .unwrap()
    }

    #[test]
    fn n4_r2() {
        let res = run(4, 2, PeriodMode::Trace);
        let d = &res.outcome_distribution;
        assert!((d[&0] - 0.5).abs() < 1e-12 && (d[&2] - 0.5).abs() < 1e-12);
        assert!(d[&1].abs() < 1e-12 && d[&3].abs() < 1e-12);
        assert!((res.success_probability - 0.5).abs() < 1e-12);
    }

    #[test]
    fn n8_r4_support_and_phi() {
        let res = run(8, 4, PeriodMode::Trace);
        for (&c, &p) in &res.outcome_distribution {
            let expected = if c % 2 == 0 { 0.25 } else { 0.0 };
            assert!((p - expected).abs() < 1e-12, "c = {c}");
        }
        assert!((res.success_probability - 0.5).abs() < 1e-12);
        match res.verdict {
            Verdict::Period { estimate, .. } => assert!(estimate == 4 || estimate == 2 || estimate == 1),
            _ => panic!(),
        }
    }

    #[test]
    fn constant_function_has_period_one() {
        let res = run(8, 1, PeriodMode::Trace);
        assert!((res.outcome_distribution[&0] - 1.0).abs() < 1e-12);
        assert!((res.success_probability - 1.0).abs() < 1e-12);
        assert!(matches!(res.verdict, Verdict::Period { estimate: 1, .. }));
    }

    #[test]
    fn branches_match_closed_forms() {
        for (n, r) in [(4, 2), (8, 2), (8, 4), (16, 4), (64, 8)] {
            let res = run(n, r, PeriodMode::Branching);
            let k = n / r;
            assert_eq!(res.branches.len(), r);
            let trace = run(n, r, PeriodMode::Trace);
            for b in &res.branches {
                assert!((b.probability - 1.0 / r as f64).abs() < 1e-15);
                // K^{-1/2} Σ_k |x₀ + kr⟩
                for x in 0..n {
                    let expected = if x % r == b.x0 { 1.0 / (k as f64).sqrt() } else { 0.0 };
                    assert!((b.pre_qft[x] - C64::new(expected, 0.0)).norm() < 1e-15);
                }
                // modulus r^{-1/2} on multiples of N/r, zero elsewhere
                for c in 0..n {
                    let expected = if c % k == 0 { 1.0 / (r as f64).sqrt() } else { 0.0 };
                    assert!((b.post_qft[c].norm() - expected).abs() < 1e-12, "N={n} r={r} c={c}");
                }
                // the distribution does not depend on y₀
                for (c, p) in &b.distribution {
                    assert!((p - trace.outcome_distribution[c]).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn estimate_is_seeded_and_deterministic() {
        let spec = PeriodicSpec::standard(16, 4).unwrap();
        let opts = PeriodOptions {
            samples: 20,
            seed: 7,
            ..Default::default()
        };
        let a = period_find(&spec, opts).unwrap();
        let b = period_find(&spec, opts).unwrap();
        assert_eq!(a.verdict, b.verdict);
        assert!(matches!(a.verdict, Verdict::Period { estimate: 4, .. }));
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(PeriodicSpec::standard(8, 3).is_err());
        assert!(PeriodicSpec::new(4, 2, vec![0, 0, 0, 0]).is_err());
        assert!(PeriodicSpec::new(4, 2, vec![0, 1, 1, 0]).is_err());
        assert!(PeriodicSpec::new(4, 2, vec![0, 1, 0]).is_err());
        assert!(PeriodicSpec::from_json(r#"{"N":4,"r":0,"f":[0,0,0,0]}"#).is_err());
        let s = PeriodicSpec::from_json(r#"{"N":4,"r":2,"f":[5,-1,5,-1]}"#).unwrap();
        assert_eq!(s.modulus, 4);
    }

    #[test]
    fn phi() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(4), 2);
        assert_eq!(euler_phi(9), 6);
    }
}
