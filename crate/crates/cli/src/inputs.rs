//! Parsing of command-line operands: gate words, states, events, and JSON
//! documents given inline or as file paths.

use std::fs;
use std::path::Path;

use qclogic::gates::GateWord;
use qclogic::qcore::{product_ket, ComplexMatrix, DensityOperator, Projector};

use crate::Failure;

/// Reads `arg` as a file when it names an existing file, otherwise returns
/// it unchanged as inline text.
pub fn text_or_file(arg: &str) -> Result<String, Failure> {
    let path = Path::new(arg);
    if !arg.trim_start().starts_with('{') && path.is_file() {
        fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {arg}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

pub fn word(arg: &str) -> Result<GateWord, Failure> {
    GateWord::parse(&text_or_file(arg)?).map_err(|e| Failure::usage(format!("gate word {arg:?}: {e}")))
}

fn matrix(arg: &str, what: &str) -> Result<ComplexMatrix, Failure> {
    ComplexMatrix::from_json(&text_or_file(arg)?).map_err(|e| Failure::usage(format!("{what} {arg:?}: {e}")))
}

fn is_ket(arg: &str) -> bool {
    !arg.is_empty() && arg.chars().all(|c| matches!(c, '0' | '1' | '+' | '-'))
}

/// A state: a ket label over `0 1 + -`, `mixed:D` for `𝟙/D`, or a matrix
/// literal.
pub fn state(arg: &str, tol: f64) -> Result<DensityOperator, Failure> {
    if is_ket(arg) {
        let psi = product_ket(arg).expect("checked label");
        return DensityOperator::pure(&psi).map_err(|e| Failure::usage(format!("state {arg:?}: {e}")));
    }
    if let Some(d) = arg.strip_prefix("mixed:") {
        let d: usize = d.parse().map_err(|_| Failure::usage(format!("bad dimension in {arg:?}")))?;
        if d == 0 {
            return Err(Failure::usage("mixed state needs a positive dimension"));
        }
        return Ok(DensityOperator::maximally_mixed(d));
    }
    DensityOperator::new(matrix(arg, "state")?, tol).map_err(|e| Failure::usage(format!("state {arg:?}: {e}")))
}

/// An event: a ket label (projector onto it) or a matrix literal.
pub fn event(arg: &str, tol: f64) -> Result<Projector, Failure> {
    if is_ket(arg) {
        let psi = product_ket(arg).expect("checked label");
        return Projector::onto(&psi).map_err(|e| Failure::usage(format!("event {arg:?}: {e}")));
    }
    Projector::new(matrix(arg, "event")?, tol).map_err(|e| Failure::usage(format!("event {arg:?}: {e}")))
}

/// Comma-separated list of reals.
pub fn grid(arg: &str) -> Result<Vec<f64>, Failure> {
    arg.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Failure::usage(format!("bad grid value {s:?}")))
        })
        .collect()
}
