//! Boolean calculus as a special case of truth values: a Boolean circuit is
//! compiled to a reversible gate word (X, CNOT, Toffoli on ancilla wires),
//! run on computational-basis inputs, and read out with a diagonal 0/1
//! projector on the output wire.

use crate::classical::{eval_circuit, Bits, BoolCircuit, Expr};
use crate::gates::{compose_word, GateKind, GateSpec, GateWord, MAX_WIDTH};
use crate::qcore::{ComplexMatrix, DensityOperator, Projector, DEFAULT_TOLERANCE};

use super::{truth_value, LogicError};

/// A reversible embedding of a Boolean circuit. Inputs occupy wires
/// `0..arity`; each gate node gets one ancilla wire initialised to `|0⟩`.
#[derive(Clone, Debug)]
pub struct ReversibleCircuit {
    pub word: GateWord,
    pub arity: usize,
    pub output_wire: usize,
}

impl ReversibleCircuit {
    pub fn width(&self) -> usize {
        self.word.width()
    }

    /// Basis state `|x, 0…0⟩`.
    pub fn input_state(&self, x: &Bits) -> DensityOperator {
        let ancillas = self.width() - self.arity;
        DensityOperator::basis(1 << self.width(), (x.value() << ancillas) as usize)
    }

    /// `𝟙 ⊗ |1⟩⟨1| ⊗ 𝟙` on the output wire.
    pub fn output_event(&self) -> Projector {
        let width = self.width();
        let shift = width - 1 - self.output_wire;
        let diag: Vec<f64> = (0..1usize << width).map(|i| (i >> shift & 1) as f64).collect();
        Projector::new(ComplexMatrix::diag_real(&diag), DEFAULT_TOLERANCE).expect("diagonal 0/1 matrix is a projector")
    }
}

/// Compiles `circuit` into X/CNOT/Toffoli gates.
///
/// `NOT a` copies `a` into a fresh ancilla and flips it; `a AND b` is a
/// Toffoli onto a fresh ancilla; `a OR b` uses De Morgan with the inputs
/// flipped and restored around the Toffoli.
pub fn compile_reversible(circuit: &BoolCircuit) -> Result<ReversibleCircuit, LogicError> {
    let arity = circuit.arity();
    let needed = arity + circuit.expr().gate_count();
    if needed > MAX_WIDTH {
        return Err(LogicError::TooWide {
            needed,
            cap: MAX_WIDTH,
        });
    }
    let mut gates = Vec::new();
    let mut next = arity;
    let output_wire = emit(circuit.expr(), &mut gates, &mut next)?;
    let word = GateWord::new(needed.max(1), gates)?;
    Ok(ReversibleCircuit {
        word,
        arity,
        output_wire,
    })
}

fn emit(expr: &Expr, gates: &mut Vec<GateSpec>, next: &mut usize) -> Result<usize, LogicError> {
    let x = |w: usize| GateSpec::new(GateKind::X, vec![w]);
    Ok(match expr {
        Expr::Input(i) => *i,
        Expr::Not(a) => {
            let a = emit(a, gates, next)?;
            let out = fresh(next);
            gates.push(GateSpec::new(GateKind::Cnot, vec![a, out])?);
            gates.push(x(out)?);
            out
        }
        Expr::And(a, b) | Expr::Or(a, b) => {
            let is_or = matches!(expr, Expr::Or(..));
            let a = emit(a, gates, next)?;
            let b = emit(b, gates, next)?;
            let out = fresh(next);
            if a == b {
                // a∧a = a∨a = a
                gates.push(GateSpec::new(GateKind::Cnot, vec![a, out])?);
                return Ok(out);
            }
            if is_or {
                gates.push(x(a)?);
                gates.push(x(b)?);
            }
            gates.push(GateSpec::new(GateKind::Toffoli, vec![a, b, out])?);
            if is_or {
                gates.push(x(a)?);
                gates.push(x(b)?);
                gates.push(x(out)?);
            }
            out
        }
    })
}

fn fresh(next: &mut usize) -> usize {
    let w = *next;
    *next += 1;
    w
}

/// One row of a side-by-side classical/quantum truth table.
#[derive(Clone, Debug, PartialEq)]
pub struct TruthTableRow {
    pub input: Bits,
    pub classical: bool,
    /// `Tr(U|x,0⟩⟨x,0|U† P_out)` for the compiled circuit.
    pub quantum: f64,
}

/// Evaluates `circuit` classically and through its reversible embedding on
/// every basis input.
pub fn boolean_truth_table(circuit: &BoolCircuit) -> Result<Vec<TruthTableRow>, LogicError> {
    let rev = compile_reversible(circuit)?;
    let u = compose_word(&rev.word)?;
    let event = rev.output_event();
    Bits::all(circuit.arity())
        .map(|x| {
            Ok(TruthTableRow {
                input: x,
                classical: eval_circuit(circuit, &x)?,
                quantum: truth_value(&u, &rev.input_state(&x), &event)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(text: &str) -> Vec<TruthTableRow> {
        boolean_truth_table(&BoolCircuit::parse(text, None).unwrap()).unwrap()
    }

    #[test]
    fn elementary_gates_recovered_exactly() {
        for text in ["x0", "(not x0)", "(and x0 x1)", "(or x0 x1)", "(and x0 x0)", "(or x1 x1)"] {
            for row in table(text) {
                let expected = if row.classical { 1.0 } else { 0.0 };
                assert_eq!(row.quantum, expected, "{text} at {}", row.input);
            }
        }
    }

    #[test]
    fn composite_circuit_recovered_exactly() {
        let rows = table("(or (and x0 (not x1)) (and (not x0) x2))");
        assert_eq!(rows.len(), 8);
        for row in rows {
            assert_eq!(row.quantum, if row.classical { 1.0 } else { 0.0 });
        }
    }

    #[test]
    fn wide_circuits_rejected() {
        let c = BoolCircuit::parse("(and (and (and x0 x1) (and x2 x3)) (and (and x4 x5) x6))", None).unwrap();
        assert!(matches!(compile_reversible(&c), Err(LogicError::TooWide { .. })));
    }
}
