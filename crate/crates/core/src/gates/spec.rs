use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use crate::qcore::{ComplexMatrix, UnitaryGate, C64, ONE, ZERO};

use super::GateError;

/// The named elementary gates. Parameters are in radians.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateKind {
    H,
    T,
    X,
    Z,
    /// Control is the first wire, target the second.
    Cnot,
    /// `diag(1, e^{iφ})`.
    R(f64),
    /// `exp(−iφ X⊗X / 2)`.
    XX(f64),
    /// Controls are the first two wires, target the third.
    Toffoli,
    /// Fourier transform on `2^k` levels, `k` = number of wires.
    Qft,
}

impl GateKind {
    pub fn name(&self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::T => "T",
            GateKind::X => "X",
            GateKind::Z => "Z",
            GateKind::Cnot => "CNOT",
            GateKind::R(_) => "R",
            GateKind::XX(_) => "XX",
            GateKind::Toffoli => "TOFFOLI",
            GateKind::Qft => "QFT",
        }
    }

    /// Number of wires, `None` for the variable-width QFT.
    pub fn wire_count(&self) -> Option<usize> {
        match self {
            GateKind::H | GateKind::T | GateKind::X | GateKind::Z | GateKind::R(_) => Some(1),
            GateKind::Cnot | GateKind::XX(_) => Some(2),
            GateKind::Toffoli => Some(3),
            GateKind::Qft => None,
        }
    }

    fn param(&self) -> Option<f64> {
        match self {
            GateKind::R(p) | GateKind::XX(p) => Some(*p),
            _ => None,
        }
    }

    /// The gate's matrix on its own wires (`2^k × 2^k`).
    pub fn local_matrix(&self, wires: usize) -> ComplexMatrix {
        let r = |x: f64| C64::new(x, 0.0);
        match self {
            GateKind::H => {
                let s = FRAC_1_SQRT_2;
                ComplexMatrix::from_real(2, &[s, s, s, -s]).expect("static matrix")
            }
            GateKind::T => ComplexMatrix::diag(&[ONE, C64::from_polar(1.0, PI / 4.0)]),
            GateKind::X => ComplexMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]).expect("static matrix"),
            GateKind::Z => ComplexMatrix::diag_real(&[1.0, -1.0]),
            GateKind::R(phi) => ComplexMatrix::diag(&[ONE, C64::from_polar(1.0, *phi)]),
            GateKind::Cnot => permutation(4, |i| if i >= 2 { i ^ 1 } else { i }),
            GateKind::Toffoli => permutation(8, |i| if i >= 6 { i ^ 1 } else { i }),
            GateKind::XX(phi) => {
                let c = r((phi / 2.0).cos());
                let s = C64::new(0.0, -(phi / 2.0).sin());
                // X⊗X is the anti-diagonal permutation
                ComplexMatrix::from_fn(4, |i, j| {
                    if i == j {
                        c
                    } else if i + j == 3 {
                        s
                    } else {
                        ZERO
                    }
                })
            }
            GateKind::Qft => qft_matrix(1 << wires),
        }
    }
}

/// `F_ab = e^{2πi ab/N} / √N`.
pub fn qft_matrix(n: usize) -> ComplexMatrix {
    let norm = 1.0 / (n as f64).sqrt();
    ComplexMatrix::from_fn(n, |a, b| {
        // reduce ab mod N before scaling to keep the phase argument small
        let k = ((a * b) % n) as f64;
        C64::from_polar(norm, 2.0 * PI * k / n as f64)
    })
}

fn permutation(dim: usize, image: impl Fn(usize) -> usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, |i, j| if image(j) == i { ONE } else { ZERO })
}

/// A gate placed on specific wires.
#[derive(Clone, Debug, PartialEq)]
pub struct GateSpec {
    kind: GateKind,
    wires: Vec<usize>,
}

impl GateSpec {
    pub fn new(kind: GateKind, wires: Vec<usize>) -> Result<Self, GateError> {
        if let Some(p) = kind.param() {
            if !p.is_finite() {
                return Err(GateError::NonFiniteParameter(kind.name()));
            }
        }
        let expected = kind.wire_count();
        match expected {
            Some(k) if k != wires.len() => {
                return Err(GateError::WrongWireCount {
                    gate: kind.name(),
                    expected: k,
                    found: wires.len(),
                })
            }
            None if wires.is_empty() => {
                return Err(GateError::WrongWireCount {
                    gate: kind.name(),
                    expected: 1,
                    found: 0,
                })
            }
            _ => {}
        }
        for (i, w) in wires.iter().enumerate() {
            if wires[..i].contains(w) {
                return Err(GateError::DuplicateWire(*w));
            }
        }
        Ok(Self { kind, wires })
    }

    pub fn kind(&self) -> &GateKind {
        &self.kind
    }

    pub fn wires(&self) -> &[usize] {
        &self.wires
    }

    pub fn max_wire(&self) -> usize {
        self.wires.iter().copied().max().unwrap_or(0)
    }

    pub fn check_width(&self, width: usize) -> Result<(), GateError> {
        match self.wires.iter().find(|&&w| w >= width) {
            Some(&wire) => Err(GateError::InvalidWire { wire, width }),
            None => Ok(()),
        }
    }
}

impl fmt::Display for GateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.name())?;
        if let Some(p) = self.kind.param() {
            write!(f, "({p})")?;
        }
        let wires: Vec<String> = self.wires.iter().map(|w| w.to_string()).collect();
        write!(f, "[{}]", wires.join(","))
    }
}

/// Embeds `local` acting on `wires` into the `2^width` space; wire 0 is the
/// leftmost tensor factor and the first listed wire is the most significant
/// bit of the local index.
pub(crate) fn embed(local: &ComplexMatrix, wires: &[usize], width: usize) -> ComplexMatrix {
    let dim = 1usize << width;
    let k = wires.len();
    let shifts: Vec<usize> = wires.iter().map(|w| width - 1 - w).collect();
    let mask: usize = shifts.iter().map(|s| 1usize << s).sum();
    let spread = |local_index: usize| -> usize {
        (0..k)
            .filter(|&b| local_index >> (k - 1 - b) & 1 == 1)
            .map(|b| 1usize << shifts[b])
            .sum()
    };
    let gather = |full: usize| -> usize {
        (0..k).fold(0, |acc, b| (acc << 1) | (full >> shifts[b] & 1))
    };
    let local_dim = 1usize << k;
    let placed: Vec<usize> = (0..local_dim).map(spread).collect();
    let mut data = vec![ZERO; dim * dim];
    for col in 0..dim {
        let li = gather(col);
        let rest = col & !mask;
        for (lo, &bits) in placed.iter().enumerate() {
            let v = local[(lo, li)];
            if v != ZERO {
                data[(rest | bits) * dim + col] = v;
            }
        }
    }
    ComplexMatrix::new(dim, data).expect("embedding preserves finiteness")
}

/// The `2^width` unitary of `spec` with identity on the other wires.
pub fn elementary(spec: &GateSpec, width: usize) -> Result<UnitaryGate, GateError> {
    spec.check_width(width)?;
    if width > super::MAX_WIDTH {
        return Err(GateError::WidthTooLarge {
            width,
            cap: super::MAX_WIDTH,
        });
    }
    let local = spec.kind.local_matrix(spec.wires.len());
    let full = embed(&local, &spec.wires, width);
    Ok(UnitaryGate::new(full, crate::qcore::DEFAULT_TOLERANCE)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn power(m: &ComplexMatrix, k: usize) -> ComplexMatrix {
        (0..k).fold(ComplexMatrix::identity(m.dim()), |acc, _| &acc * m)
    }

    #[test]
    fn hadamard_matrix() {
        let h = elementary(&GateSpec::new(GateKind::H, vec![0]).unwrap(), 1).unwrap();
        let s = FRAC_1_SQRT_2;
        let expected = ComplexMatrix::from_real(2, &[s, s, s, -s]).unwrap();
        assert!(h.matrix().approx_eq(&expected, 0.0));
        let hh = h.matrix() * &h.matrix().adjoint();
        assert!(hh.approx_eq(&ComplexMatrix::identity(2), 1e-15));
    }

    #[test]
    fn t_has_order_eight() {
        let t = GateKind::T.local_matrix(1);
        assert!(power(&t, 8).approx_eq(&ComplexMatrix::identity(2), 1e-14));
        assert!(!power(&t, 4).approx_eq(&ComplexMatrix::identity(2), 0.5));
    }

    #[test]
    fn qft2_is_hadamard() {
        let f = qft_matrix(2);
        assert!(f.approx_eq(&GateKind::H.local_matrix(1), 1e-15));
        let q = elementary(&GateSpec::new(GateKind::Qft, vec![0]).unwrap(), 1).unwrap();
        assert!(q.matrix().approx_eq(&f, 0.0));
    }

    #[test]
    fn cnot_embedding_respects_wire_order() {
        // CNOT with control on wire 1 and target on wire 0: |01⟩ ↦ |11⟩
        let g = elementary(&GateSpec::new(GateKind::Cnot, vec![1, 0]).unwrap(), 2).unwrap();
        let psi = g.matrix().apply(&[ZERO, ONE, ZERO, ZERO]);
        assert_eq!(psi, vec![ZERO, ZERO, ZERO, ONE]);
        // X on wire 0 of 2 maps |00⟩ to |10⟩ (index 2)
        let x = elementary(&GateSpec::new(GateKind::X, vec![0]).unwrap(), 2).unwrap();
        assert_eq!(x.matrix().apply(&[ONE, ZERO, ZERO, ZERO])[2], ONE);
    }

    #[test]
    fn toffoli_is_and_on_target() {
        let t = GateKind::Toffoli.local_matrix(3);
        for a in 0..2 {
            for b in 0..2 {
                let input = (a << 2) | (b << 1);
                let mut v = vec![ZERO; 8];
                v[input] = ONE;
                let out = t.apply(&v);
                let expected = input | (a & b);
                assert_eq!(out[expected], ONE);
            }
        }
    }

    #[test]
    fn xx_gate_matches_exponential() {
        let phi = 0.7;
        let m = GateKind::XX(phi).local_matrix(2);
        let xx = GateKind::X.local_matrix(1).tensor(&GateKind::X.local_matrix(1));
        // exp(−iφ/2 · XX) = cos(φ/2)𝟙 − i sin(φ/2) XX since (XX)² = 𝟙
        let expected = &ComplexMatrix::identity(4).scale(C64::new((phi / 2.0).cos(), 0.0))
            + &xx.scale(C64::new(0.0, -(phi / 2.0).sin()));
        assert!(m.approx_eq(&expected, 1e-15));
    }

    #[test]
    fn spec_validation() {
        assert!(matches!(
            GateSpec::new(GateKind::Cnot, vec![0]),
            Err(GateError::WrongWireCount { expected: 2, found: 1, .. })
        ));
        assert!(matches!(GateSpec::new(GateKind::Cnot, vec![1, 1]), Err(GateError::DuplicateWire(1))));
        assert!(matches!(
            GateSpec::new(GateKind::R(f64::NAN), vec![0]),
            Err(GateError::NonFiniteParameter(_))
        ));
        let h = GateSpec::new(GateKind::H, vec![3]).unwrap();
        assert!(matches!(elementary(&h, 2), Err(GateError::InvalidWire { wire: 3, width: 2 })));
    }
}
