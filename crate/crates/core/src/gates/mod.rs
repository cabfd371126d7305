//! Named gates, generator sets, gate words and the enumeration of quantum
//! polynomial gates `P(G)`.
//!
//! Conventions: `H = [[1,1],[1,−1]]/√2`, `T = diag(1, e^{iπ/4})`,
//! `R(φ) = diag(1, e^{iφ})`, `XX(φ) = exp(−iφ X⊗X/2)`, CNOT and Toffoli as
//! permutations with the control wires listed first. Wire 0 is the leftmost
//! tensor factor everywhere, including inside the QFT.

mod spec;
mod word;

use thiserror::Error;

use crate::parallel::{self, Execution};
use crate::qcore::{born, conjugate, DensityOperator, Projector, QcoreError};

pub use spec::{elementary, qft_matrix, GateKind, GateSpec};
pub use word::{compose_word, GateWord};

/// Largest register width accepted by gate words (`2^10`-dimensional space).
pub const MAX_WIDTH: usize = 10;

/// Default cap on the number of words produced by [`enumerate_polynomials`].
pub const DEFAULT_ENUMERATION_CAP: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GateError {
    #[error("wire {wire} is outside a register of width {width}")]
    InvalidWire { wire: usize, width: usize },
    #[error("wire {0} listed twice")]
    DuplicateWire(usize),
    #[error("{gate} acts on {expected} wires, got {found}")]
    WrongWireCount {
        gate: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("unknown gate {0:?}")]
    UnknownGate(String),
    #[error("parameter of {0} is not finite")]
    NonFiniteParameter(&'static str),
    #[error("register width {width} outside 1..={cap}")]
    WidthTooLarge { width: usize, cap: usize },
    #[error("parse error in item {item}: {message}")]
    Parse { item: usize, message: String },
    #[error("enumeration would produce {count} words, cap is {cap}")]
    EnumerationCapExceeded { count: u128, cap: usize },
    #[error("{0} needs a finite parameter grid for enumeration")]
    UnboundedParameter(&'static str),
    #[error("empty generator set")]
    EmptyGeneratorSet,
    #[error(transparent)]
    Qcore(#[from] QcoreError),
}

/// A gate shape to be instantiated on every admissible wire tuple.
#[derive(Clone, Debug, PartialEq)]
pub enum GateTemplate {
    H,
    T,
    X,
    Z,
    /// Every ordered (control, target) pair.
    Cnot,
    /// One instance per grid value and wire; `None` means unbounded.
    R(Option<Vec<f64>>),
    /// Unordered wire pairs (the gate is symmetric).
    XX(Option<Vec<f64>>),
    /// Unordered control pairs with a distinct target.
    Toffoli,
}

impl GateTemplate {
    fn name(&self) -> &'static str {
        match self {
            GateTemplate::H => "H",
            GateTemplate::T => "T",
            GateTemplate::X => "X",
            GateTemplate::Z => "Z",
            GateTemplate::Cnot => "CNOT",
            GateTemplate::R(_) => "R",
            GateTemplate::XX(_) => "XX",
            GateTemplate::Toffoli => "TOFFOLI",
        }
    }

    fn instantiate(&self, width: usize) -> Result<Vec<GateSpec>, GateError> {
        let singles = |kind: GateKind| -> Vec<GateSpec> {
            (0..width)
                .map(|w| GateSpec::new(kind, vec![w]).expect("valid single-wire gate"))
                .collect()
        };
        let grid = |g: &Option<Vec<f64>>| -> Result<Vec<f64>, GateError> {
            match g {
                Some(v) if !v.is_empty() => Ok(v.clone()),
                _ => Err(GateError::UnboundedParameter(self.name())),
            }
        };
        Ok(match self {
            GateTemplate::H => singles(GateKind::H),
            GateTemplate::T => singles(GateKind::T),
            GateTemplate::X => singles(GateKind::X),
            GateTemplate::Z => singles(GateKind::Z),
            GateTemplate::R(g) => {
                let mut out = Vec::new();
                for phi in grid(g)? {
                    out.extend(singles(GateKind::R(phi)));
                }
                out
            }
            GateTemplate::Cnot => {
                let mut out = Vec::new();
                for c in 0..width {
                    for t in (0..width).filter(|&t| t != c) {
                        out.push(GateSpec::new(GateKind::Cnot, vec![c, t])?);
                    }
                }
                out
            }
            GateTemplate::XX(g) => {
                let mut out = Vec::new();
                for phi in grid(g)? {
                    for a in 0..width {
                        for b in a + 1..width {
                            out.push(GateSpec::new(GateKind::XX(phi), vec![a, b])?);
                        }
                    }
                }
                out
            }
            GateTemplate::Toffoli => {
                let mut out = Vec::new();
                for a in 0..width {
                    for b in a + 1..width {
                        for t in (0..width).filter(|&t| t != a && t != b) {
                            out.push(GateSpec::new(GateKind::Toffoli, vec![a, b, t])?);
                        }
                    }
                }
                out
            }
        })
    }
}

/// A finite set of elementary gate templates.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSet {
    label: String,
    members: Vec<GateTemplate>,
}

impl GeneratorSet {
    pub fn custom(label: impl Into<String>, members: Vec<GateTemplate>) -> Result<Self, GateError> {
        if members.is_empty() {
            return Err(GateError::EmptyGeneratorSet);
        }
        Ok(Self {
            label: label.into(),
            members,
        })
    }

    /// `{H, T}`.
    pub fn g1() -> Self {
        Self {
            label: "G1".into(),
            members: vec![GateTemplate::H, GateTemplate::T],
        }
    }

    /// `{H, CNOT, R(φ)}` with `φ` drawn from `grid`.
    pub fn g2(grid: Option<Vec<f64>>) -> Self {
        Self {
            label: "G2".into(),
            members: vec![GateTemplate::H, GateTemplate::Cnot, GateTemplate::R(grid)],
        }
    }

    /// `{XX(φ), R(φ)}` with `φ` drawn from `grid`.
    pub fn g3(grid: Option<Vec<f64>>) -> Self {
        Self {
            label: "G3".into(),
            members: vec![GateTemplate::XX(grid.clone()), GateTemplate::R(grid)],
        }
    }

    /// Looks up `G1`, `G2` or `G3` by label.
    pub fn named(label: &str, grid: Option<Vec<f64>>) -> Option<Self> {
        match label.to_ascii_uppercase().as_str() {
            "G1" => Some(Self::g1()),
            "G2" => Some(Self::g2(grid)),
            "G3" => Some(Self::g3(grid)),
            _ => None,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn members(&self) -> &[GateTemplate] {
        &self.members
    }

    /// Every concrete gate the set offers on `width` wires, in template order.
    pub fn instantiate(&self, width: usize) -> Result<Vec<GateSpec>, GateError> {
        let mut out = Vec::new();
        for m in &self.members {
            out.extend(m.instantiate(width)?);
        }
        Ok(out)
    }
}

/// All words of length `0..=max_len` over the instantiated generators, in
/// (length, lexicographic) order. Fails when the count would exceed `cap`.
pub fn enumerate_polynomials(
    generators: &GeneratorSet,
    width: usize,
    max_len: usize,
    cap: usize,
    exec: Execution,
) -> Result<Vec<GateWord>, GateError> {
    if width == 0 || width > MAX_WIDTH {
        return Err(GateError::WidthTooLarge {
            width,
            cap: MAX_WIDTH,
        });
    }
    let alphabet = generators.instantiate(width)?;
    let k = alphabet.len() as u128;
    let mut count: u128 = 0;
    let mut layer: u128 = 1;
    for _ in 0..=max_len {
        count += layer;
        if count > cap as u128 {
            return Err(GateError::EnumerationCapExceeded { count, cap });
        }
        layer = layer.saturating_mul(k);
    }
    let by_length = parallel::map_range(max_len + 1, exec, |len| {
        let total = alphabet.len().pow(len as u32);
        (0..total)
            .map(|mut index| {
                let mut digits = vec![0usize; len];
                for d in digits.iter_mut().rev() {
                    *d = index % alphabet.len();
                    index /= alphabet.len();
                }
                GateWord::new(width, digits.into_iter().map(|d| alphabet[d].clone()).collect())
                    .expect("instantiated gates fit the width")
            })
            .collect::<Vec<_>>()
    });
    Ok(by_length.into_iter().flatten().collect())
}

/// `Tr( T (ρ⊗σ⊗|0⟩⟨0|) T† (𝟙⊗𝟙⊗|1⟩⟨1|) )` for the Toffoli gate `T`.
pub fn toffoli_truth_value(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64, GateError> {
    for d in [rho.dim(), sigma.dim()] {
        if d != 2 {
            return Err(QcoreError::DimensionMismatch { left: 2, right: d }.into());
        }
    }
    let input = rho.tensor(sigma).tensor(&DensityOperator::basis(2, 0));
    let toffoli = elementary(&GateSpec::new(GateKind::Toffoli, vec![0, 1, 2])?, 3)?;
    let out = conjugate(&toffoli, &input)?;
    let event = Projector::identity(2)
        .tensor(&Projector::identity(2))
        .tensor(&Projector::basis(2, 1));
    Ok(born(&out, &event)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{product_ket, ComplexMatrix, C64};

    fn texts(words: &[GateWord]) -> Vec<String> {
        words.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn g1_counts() {
        let w1 = enumerate_polynomials(&GeneratorSet::g1(), 1, 1, 1000, Execution::Sequential).unwrap();
        assert_eq!(texts(&w1), ["width=1", "width=1; H[0]", "width=1; T[0]"]);
        let w2 = enumerate_polynomials(&GeneratorSet::g1(), 1, 2, 1000, Execution::Sequential).unwrap();
        assert_eq!(w2.len(), 7);
        let w0 = enumerate_polynomials(&GeneratorSet::g1(), 1, 0, 1000, Execution::Sequential).unwrap();
        assert_eq!(w0.len(), 1);
    }

    #[test]
    fn g2_two_qubits_one_angle() {
        let grid = Some(vec![std::f64::consts::FRAC_PI_2]);
        let words = enumerate_polynomials(&GeneratorSet::g2(grid), 2, 1, 1000, Execution::Sequential).unwrap();
        let pi2 = std::f64::consts::FRAC_PI_2;
        let expected = [
            "width=2".to_string(),
            "width=2; H[0]".into(),
            "width=2; H[1]".into(),
            "width=2; CNOT[0,1]".into(),
            "width=2; CNOT[1,0]".into(),
            format!("width=2; R({pi2})[0]"),
            format!("width=2; R({pi2})[1]"),
        ];
        assert_eq!(texts(&words), expected);
    }

    #[test]
    fn enumeration_errors() {
        assert!(matches!(
            enumerate_polynomials(&GeneratorSet::g2(None), 2, 1, 1000, Execution::Sequential),
            Err(GateError::UnboundedParameter("R"))
        ));
        assert!(matches!(
            enumerate_polynomials(&GeneratorSet::g1(), 1, 20, 1000, Execution::Sequential),
            Err(GateError::EnumerationCapExceeded { .. })
        ));
        assert!(GeneratorSet::custom("empty", vec![]).is_err());
    }

    #[test]
    fn g3_instantiation() {
        let g3 = GeneratorSet::g3(Some(vec![0.5, 1.0]));
        // XX: 2 angles × 3 pairs; R: 2 angles × 3 wires
        assert_eq!(g3.instantiate(3).unwrap().len(), 12);
        let t = GeneratorSet::custom("toffoli", vec![GateTemplate::Toffoli]).unwrap();
        assert_eq!(t.instantiate(3).unwrap().len(), 3);
    }

    #[test]
    fn parallel_enumeration_matches() {
        let g = GeneratorSet::g2(Some(vec![0.3]));
        let seq = enumerate_polynomials(&g, 2, 3, 10_000, Execution::Sequential).unwrap();
        let par = enumerate_polynomials(&g, 2, 3, 10_000, Execution::Parallel).unwrap();
        assert_eq!(seq, par);
    }

    fn pure(label: &str) -> DensityOperator {
        DensityOperator::pure(&product_ket(label).unwrap()).unwrap()
    }

    #[test]
    fn toffoli_truth_values() {
        assert!((toffoli_truth_value(&pure("1"), &pure("1")).unwrap() - 1.0).abs() < 1e-12);
        for s in ["0", "1", "+", "-"] {
            assert!(toffoli_truth_value(&pure("0"), &pure(s)).unwrap().abs() < 1e-12);
        }
        let mixed = DensityOperator::maximally_mixed(2);
        assert!(toffoli_truth_value(&pure("0"), &mixed).unwrap().abs() < 1e-12);
        let v = toffoli_truth_value(&pure("+"), &pure("+")).unwrap();
        assert!((v - 0.25).abs() < 1e-12);
        let rho4 = DensityOperator::maximally_mixed(4);
        assert!(toffoli_truth_value(&rho4, &mixed).is_err());
    }

    #[test]
    fn toffoli_truth_value_is_product_of_ones() {
        // on product inputs the value is ⟨1|ρ|1⟩·⟨1|σ|1⟩
        let rho = DensityOperator::new(
            ComplexMatrix::new(2, vec![C64::new(0.3, 0.0), C64::new(0.1, 0.2), C64::new(0.1, -0.2), C64::new(0.7, 0.0)]).unwrap(),
            1e-9,
        )
        .unwrap();
        let v = toffoli_truth_value(&rho, &pure("+")).unwrap();
        assert!((v - 0.7 * 0.5).abs() < 1e-12);
    }
}
