use std::fmt;
use std::str::FromStr;

use crate::qcore::{UnitaryGate, DEFAULT_TOLERANCE};

use super::spec::{embed, GateKind, GateSpec};
use super::{GateError, MAX_WIDTH};

/// A finite sequence of gates on `width` qubits, stored in time order (the
/// first element acts first).
#[derive(Clone, Debug, PartialEq)]
pub struct GateWord {
    width: usize,
    gates: Vec<GateSpec>,
}

impl GateWord {
    pub fn new(width: usize, gates: Vec<GateSpec>) -> Result<Self, GateError> {
        if width == 0 || width > MAX_WIDTH {
            return Err(GateError::WidthTooLarge {
                width,
                cap: MAX_WIDTH,
            });
        }
        for g in &gates {
            g.check_width(width)?;
        }
        Ok(Self { width, gates })
    }

    pub fn empty(width: usize) -> Self {
        Self::new(width, Vec::new()).expect("width within cap")
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[GateSpec] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Same gates on a wider register.
    pub fn widened(&self, width: usize) -> Result<Self, GateError> {
        Self::new(width, self.gates.clone())
    }

    /// `self` followed in time by `other`.
    pub fn then(&self, other: &GateWord) -> Result<Self, GateError> {
        let width = self.width.max(other.width);
        let mut gates = self.gates.clone();
        gates.extend(other.gates.iter().cloned());
        Self::new(width, gates)
    }

    pub fn prefix(&self, len: usize) -> Self {
        Self {
            width: self.width,
            gates: self.gates[..len].to_vec(),
        }
    }

    /// Parses `width=2; H[0]; CNOT[0,1]; R(1.5708)[1]`.
    ///
    /// The `width=` clause is optional (defaults to one more than the largest
    /// wire used, at least 1). Wires may be omitted for fixed-arity gates, in
    /// which case they default to `0, 1, …`. `QFT(N)` takes the number of
    /// levels and defaults to the first `log2 N` wires.
    pub fn parse(text: &str) -> Result<Self, GateError> {
        let mut width = None;
        let mut gates = Vec::new();
        for (index, raw) in text.split(';').enumerate() {
            let item = raw.trim();
            if item.is_empty() {
                continue;
            }
            if let Some(w) = item.strip_prefix("width=") {
                let w = w.trim().parse::<usize>().map_err(|_| GateError::Parse {
                    item: index,
                    message: format!("bad width {w:?}"),
                })?;
                width = Some(w);
                continue;
            }
            gates.push(parse_gate(item).map_err(|e| match e {
                GateError::Parse { message, .. } => GateError::Parse { item: index, message },
                other => other,
            })?);
        }
        let width = width.unwrap_or_else(|| gates.iter().map(|g| g.max_wire() + 1).max().unwrap_or(1));
        Self::new(width, gates)
    }
}

impl FromStr for GateWord {
    type Err = GateError;
    fn from_str(s: &str) -> Result<Self, GateError> {
        Self::parse(s)
    }
}

impl fmt::Display for GateWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "width={}", self.width)?;
        for g in &self.gates {
            write!(f, "; {g}")?;
        }
        Ok(())
    }
}

fn parse_gate(item: &str) -> Result<GateSpec, GateError> {
    let perr = |message: String| GateError::Parse { item: 0, message };
    let name_end = item.find(['(', '[']).unwrap_or(item.len());
    let name = item[..name_end].trim().to_ascii_uppercase();
    let mut rest = item[name_end..].trim();

    let mut param = None;
    if let Some(stripped) = rest.strip_prefix('(') {
        let close = stripped.find(')').ok_or_else(|| perr(format!("unclosed parameter in {item:?}")))?;
        let value = stripped[..close].trim();
        param = Some(
            value
                .parse::<f64>()
                .map_err(|_| perr(format!("bad parameter {value:?}")))?,
        );
        rest = stripped[close + 1..].trim();
    }

    let mut wires = None;
    if let Some(stripped) = rest.strip_prefix('[') {
        let close = stripped.find(']').ok_or_else(|| perr(format!("unclosed wire list in {item:?}")))?;
        let list = stripped[..close]
            .split(',')
            .map(|w| w.trim().parse::<usize>().map_err(|_| perr(format!("bad wire {w:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        wires = Some(list);
        rest = stripped[close + 1..].trim();
    }
    if !rest.is_empty() {
        return Err(perr(format!("trailing text {rest:?}")));
    }

    let need_param = |p: Option<f64>| p.ok_or_else(|| perr(format!("{name} needs a parameter")));
    let no_param = |kind: GateKind| {
        if param.is_some() {
            Err(perr(format!("{name} takes no parameter")))
        } else {
            Ok(kind)
        }
    };
    let kind = match name.as_str() {
        "H" => no_param(GateKind::H)?,
        "T" => no_param(GateKind::T)?,
        "X" | "NOT" => no_param(GateKind::X)?,
        "Z" => no_param(GateKind::Z)?,
        "CNOT" | "CX" => no_param(GateKind::Cnot)?,
        "TOFFOLI" | "CCX" | "CCNOT" => no_param(GateKind::Toffoli)?,
        "R" | "RPHI" => GateKind::R(need_param(param)?),
        "XX" => GateKind::XX(need_param(param)?),
        "QFT" => GateKind::Qft,
        "" => return Err(perr(format!("missing gate name in {item:?}"))),
        other => return Err(GateError::UnknownGate(other.to_string())),
    };
    let wires = match (wires, kind) {
        (Some(w), _) => {
            if kind == GateKind::Qft {
                if let Some(levels) = param {
                    if levels != (1u64 << w.len()) as f64 {
                        return Err(perr(format!(
                            "QFT({levels}) does not match {} wires",
                            w.len()
                        )));
                    }
                }
            }
            w
        }
        (None, GateKind::Qft) => {
            let levels = need_param(param)?;
            let k = levels.log2().round();
            if levels < 2.0 || 2f64.powf(k) != levels {
                return Err(perr(format!("QFT size {levels} is not a power of two ≥ 2")));
            }
            (0..k as usize).collect()
        }
        (None, kind) => (0..kind.wire_count().expect("fixed arity")).collect(),
    };
    GateSpec::new(kind, wires)
}

/// `U = U_n ⋯ U_1` for the word `[U_1, …, U_n]` (last gate leftmost).
/// The empty word gives the identity.
pub fn compose_word(word: &GateWord) -> Result<UnitaryGate, GateError> {
    let dim = 1usize << word.width;
    let mut acc = crate::qcore::ComplexMatrix::identity(dim);
    for g in &word.gates {
        let local = g.kind().local_matrix(g.wires().len());
        let full = embed(&local, g.wires(), word.width);
        acc = &full * &acc;
    }
    Ok(UnitaryGate::new(acc, DEFAULT_TOLERANCE)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::ComplexMatrix;

    #[test]
    fn parse_and_display() {
        let w = GateWord::parse("width=2; H[0]; CNOT[0,1]; R(1.5708)[1]").unwrap();
        assert_eq!(w.width(), 2);
        assert_eq!(w.len(), 3);
        assert_eq!(w.to_string(), "width=2; H[0]; CNOT[0,1]; R(1.5708)[1]");
        assert_eq!(GateWord::parse(&w.to_string()).unwrap(), w);

        let short = GateWord::parse("H;H").unwrap();
        assert_eq!(short.width(), 1);
        assert_eq!(short.len(), 2);
        let empty = GateWord::parse("").unwrap();
        assert_eq!((empty.width(), empty.len()), (1, 0));
        let cnot = GateWord::parse("cnot").unwrap();
        assert_eq!(cnot.width(), 2);
        let qft = GateWord::parse("QFT(4)").unwrap();
        assert_eq!(qft.gates()[0].wires(), &[0, 1]);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(GateWord::parse("FOO[0]"), Err(GateError::UnknownGate(_))));
        assert!(matches!(GateWord::parse("width=1; H[1]"), Err(GateError::InvalidWire { .. })));
        assert!(matches!(GateWord::parse("H; R[0]"), Err(GateError::Parse { item: 1, .. })));
        assert!(GateWord::parse("H(0.1)").is_err());
        assert!(GateWord::parse("H[0").is_err());
        assert!(GateWord::parse("QFT(3)").is_err());
        assert!(GateWord::parse("QFT(8)[0,1]").is_err());
        assert!(GateWord::parse("width=x").is_err());
    }

    #[test]
    fn compose_examples() {
        let id = compose_word(&GateWord::empty(1)).unwrap();
        assert!(id.matrix().approx_eq(&ComplexMatrix::identity(2), 0.0));
        let hh = compose_word(&GateWord::parse("H;H").unwrap()).unwrap();
        assert!(hh.matrix().approx_eq(&ComplexMatrix::identity(2), 1e-15));
        let hth = compose_word(&GateWord::parse("H;T;H").unwrap()).unwrap();
        let t = compose_word(&GateWord::parse("T").unwrap()).unwrap();
        assert!(hth.matrix().max_abs_diff(t.matrix()) > 0.1);
    }

    #[test]
    fn composition_is_time_ordered() {
        // X then H sends |0⟩ to |−⟩, H then X sends |0⟩ to |+⟩
        let xh = compose_word(&GateWord::parse("X;H").unwrap()).unwrap();
        let hx = compose_word(&GateWord::parse("H;X").unwrap()).unwrap();
        let zero = [crate::qcore::ONE, crate::qcore::ZERO];
        assert!(xh.matrix().apply(&zero)[1].re < 0.0);
        assert!(hx.matrix().apply(&zero)[1].re > 0.0);
    }
}
