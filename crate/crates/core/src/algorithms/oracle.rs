use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::gates::MAX_WIDTH;
use crate::qcore::{ComplexMatrix, UnitaryGate, DEFAULT_TOLERANCE, ONE, ZERO};

use super::AlgorithmError;

/// A total function `{0,1}^n → {0,1}^m`, stored as `table[x]` with bit
/// strings read most-significant bit first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleFunction {
    n: usize,
    m: usize,
    table: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct OracleDoc {
    n: usize,
    m: usize,
    table: BTreeMap<String, String>,
}

fn parse_bits(s: &str, len: usize, what: &str) -> Result<u64, AlgorithmError> {
    if s.len() != len || !s.bytes().all(|b| b == b'0' || b == b'1') {
        return Err(AlgorithmError::InvalidSpec(format!("{what} {s:?} is not a {len}-bit string")));
    }
    Ok(s.bytes().fold(0, |acc, b| acc << 1 | (b - b'0') as u64))
}

impl OracleFunction {
    pub fn new(n: usize, m: usize, table: Vec<u64>) -> Result<Self, AlgorithmError> {
        if n + m > MAX_WIDTH || m == 0 {
            return Err(AlgorithmError::InvalidSpec(format!(
                "oracle on {n}+{m} bits: need m ≥ 1 and at most {MAX_WIDTH} bits in total"
            )));
        }
        if table.len() != 1 << n {
            return Err(AlgorithmError::InvalidSpec(format!(
                "table has {} entries, expected {}",
                table.len(),
                1u64 << n
            )));
        }
        if let Some(x) = table.iter().position(|&y| y >> m != 0) {
            return Err(AlgorithmError::InvalidSpec(format!("value at input {x} exceeds {m} bits")));
        }
        Ok(Self { n, m, table })
    }

    /// The four one-bit functions `f1 … f4`: `f1 = id`, `f2 = not`,
    /// `f3 = 0`, `f4 = 1`.
    pub fn named(name: &str) -> Option<Self> {
        let table = match name {
            "f1" => vec![0, 1],
            "f2" => vec![1, 0],
            "f3" => vec![0, 0],
            "f4" => vec![1, 1],
            _ => return None,
        };
        Some(Self { n: 1, m: 1, table })
    }

    pub fn domain_bits(&self) -> usize {
        self.n
    }

    pub fn codomain_bits(&self) -> usize {
        self.m
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.table[x as usize]
    }

    pub fn table(&self) -> &[u64] {
        &self.table
    }

    pub fn is_constant(&self) -> bool {
        self.table.iter().all(|&y| y == self.table[0])
    }

    pub fn is_balanced(&self) -> bool {
        self.m == 1 && self.table.iter().filter(|&&y| y == 1).count() * 2 == self.table.len()
    }

    /// `{"n":1,"m":1,"table":{"0":"0","1":"1"}}`.
    pub fn from_json(text: &str) -> Result<Self, AlgorithmError> {
        let doc: OracleDoc = serde_json::from_str(text).map_err(|e| AlgorithmError::InvalidSpec(e.to_string()))?;
        if doc.n + doc.m > MAX_WIDTH {
            return Err(AlgorithmError::InvalidSpec(format!("more than {MAX_WIDTH} bits")));
        }
        let mut table = vec![None; 1 << doc.n];
        for (x, y) in &doc.table {
            let xi = parse_bits(x, doc.n, "input")? as usize;
            table[xi] = Some(parse_bits(y, doc.m, "output")?);
        }
        let table = table
            .into_iter()
            .enumerate()
            .map(|(x, y)| y.ok_or_else(|| AlgorithmError::InvalidSpec(format!("no value for input {x:0w$b}", w = doc.n))))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(doc.n, doc.m, table)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let table = self
            .table
            .iter()
            .enumerate()
            .map(|(x, y)| (format!("{x:0w$b}", w = self.n), format!("{y:0w$b}", w = self.m)))
            .collect();
        serde_json::to_value(OracleDoc {
            n: self.n,
            m: self.m,
            table,
        })
        .expect("oracle serializes")
    }
}

/// The permutation `|x⟩|y⟩ ↦ |x⟩|f(x) ⊕ y⟩` on `n + m` qubits.
pub fn build_oracle(f: &OracleFunction) -> UnitaryGate {
    let m = f.m;
    let dim = 1usize << (f.n + m);
    let image = |j: usize| {
        let (x, y) = (j >> m, j & ((1 << m) - 1));
        x << m | (y ^ f.table[x] as usize)
    };
    let matrix = ComplexMatrix::from_fn(dim, |i, j| if image(j) == i { ONE } else { ZERO });
    UnitaryGate::from_matrix_unchecked(matrix, DEFAULT_TOLERANCE)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{compose_word, GateWord};

    #[test]
    fn constant_zero_is_identity() {
        let u = build_oracle(&OracleFunction::named("f3").unwrap());
        assert!(u.matrix().approx_eq(&ComplexMatrix::identity(4), 0.0));
    }

    #[test]
    fn identity_function_is_cnot() {
        let u = build_oracle(&OracleFunction::named("f1").unwrap());
        let cnot = compose_word(&GateWord::parse("CNOT[0,1]").unwrap()).unwrap();
        assert!(u.matrix().approx_eq(cnot.matrix(), 0.0));
    }

    #[test]
    fn oracles_are_involutions() {
        let f = OracleFunction::new(2, 2, vec![3, 1, 0, 2]).unwrap();
        let u = build_oracle(&f);
        assert!((u.matrix() * u.matrix()).approx_eq(&ComplexMatrix::identity(16), 0.0));
        assert!(UnitaryGate::new(u.matrix().clone(), 1e-12).is_ok());
    }

    #[test]
    fn json_format() {
        let f = OracleFunction::from_json(r#"{"n":1,"m":1,"table":{"0":"0","1":"1"}}"#).unwrap();
        assert_eq!(f, OracleFunction::named("f1").unwrap());
        assert_eq!(f.to_json().to_string(), r#"{"m":1,"n":1,"table":{"0":"0","1":"1"}}"#);
        let g = OracleFunction::from_json(r#"{"n":2,"m":1,"table":{"00":"0","01":"1","10":"1","11":"0"}}"#).unwrap();
        assert!(g.is_balanced());
        assert_eq!(g.eval(0b01), 1);
    }

    #[test]
    fn malformed_tables_rejected() {
        for text in [
            r#"{"n":1,"m":1,"table":{"0":"0"}}"#,
            r#"{"n":1,"m":1,"table":{"0":"0","1":"2"}}"#,
            r#"{"n":1,"m":1,"table":{"0":"0","1":"10"}}"#,
            r#"{"n":1,"m":1,"table":{"0":"0","x":"1"}}"#,
            r#"{"n":8,"m":4,"table":{}}"#,
            r#"{"n":1}"#,
        ] {
            assert!(OracleFunction::from_json(text).is_err(), "{text}");
        }
    }
}
