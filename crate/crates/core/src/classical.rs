//! Classical deterministic and stochastic computing.
//!
//! Boolean circuits over `{OR, AND, NOT}` written as prefix S-expressions,
//! exhaustive function equality, stochastic output tables `x ↦ F_x` and the
//! probability measure each row induces on subsets of `{0,1}^N`.
//!
//! Bitstrings are written with bit 0 leftmost: `"01"` means `x0 = 0, x1 = 1`.
//! Ascending order of bitstrings is ascending order of that binary number.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest arity accepted by [`equal_functions`].
pub const MAX_EXHAUSTIVE_INPUTS: usize = 20;

/// Tolerance for the row normalization check of [`StochasticOutput`].
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassicalError {
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("parse error at token {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("input index {index} out of range for arity {arity}")]
    InputOutOfRange { index: usize, arity: usize },
    #[error("exhaustive check over {arity} inputs exceeds the cap of {cap}")]
    TooManyInputs { arity: usize, cap: usize },
    #[error("bad bitstring {0:?}")]
    BadBits(String),
    #[error("input {0} is not in the table domain")]
    UnknownInput(String),
    #[error("event over {event} bits used with a table of {table} output bits")]
    GroundMismatch { event: usize, table: usize },
    #[error("row {input} sums to {sum}, expected 1")]
    NotNormalized { input: String, sum: f64 },
    #[error("row {input} has negative or non-finite probability {value}")]
    BadProbability { input: String, value: f64 },
    #[error("row {input} has {found} entries, expected {expected}")]
    RowLength {
        input: String,
        expected: usize,
        found: usize,
    },
    #[error("table has no row for input {0}")]
    MissingRow(String),
    #[error("duplicate event member {0}")]
    DuplicateMember(String),
    #[error("bad stochastic table: {0}")]
    Json(String),
}

/// A fixed-length bitstring, bit 0 most significant.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bits {
    len: usize,
    value: u64,
}

impl Bits {
    pub fn new(len: usize, value: u64) -> Self {
        assert!(len <= 64, "bitstrings are limited to 64 bits");
        assert!(len == 64 || value < (1u64 << len), "value does not fit");
        Self { len, value }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let value = bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64);
        Self::new(bits.len(), value)
    }

    pub fn parse(s: &str) -> Result<Self, ClassicalError> {
        if s.len() > 64 {
            return Err(ClassicalError::BadBits(s.to_string()));
        }
        let mut value = 0u64;
        for ch in s.chars() {
            value = (value << 1)
                | match ch {
                    '0' => 0,
                    '1' => 1,
                    _ => return Err(ClassicalError::BadBits(s.to_string())),
                };
        }
        Ok(Self {
            len: s.len(),
            value,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    /// Bit `i`, counting from the left.
    pub fn bit(&self, i: usize) -> bool {
        assert!(i < self.len);
        (self.value >> (self.len - 1 - i)) & 1 == 1
    }

    /// All bitstrings of length `len` in ascending order.
    pub fn all(len: usize) -> impl Iterator<Item = Bits> {
        (0..1u64 << len).map(move |v| Bits::new(len, v))
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.bit(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bits({self})")
    }
}

/// The elementary Boolean functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoolGate {
    Or,
    And,
    Not,
}

impl BoolGate {
    pub fn arity(self) -> usize {
        match self {
            BoolGate::Not => 1,
            _ => 2,
        }
    }
}

/// Truth-table value of an elementary gate.
pub fn eval_gate(gate: BoolGate, args: &[bool]) -> Result<bool, ClassicalError> {
    if args.len() != gate.arity() {
        return Err(ClassicalError::ArityMismatch {
            expected: gate.arity(),
            found: args.len(),
        });
    }
    Ok(match gate {
        BoolGate::Or => args[0] || args[1],
        BoolGate::And => args[0] && args[1],
        BoolGate::Not => !args[0],
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Input(usize),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn input(i: usize) -> Self {
        Expr::Input(i)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(e: Expr) -> Self {
        Expr::Not(Box::new(e))
    }

    pub fn and(a: Expr, b: Expr) -> Self {
        Expr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Expr, b: Expr) -> Self {
        Expr::Or(Box::new(a), Box::new(b))
    }

    fn max_input(&self) -> Option<usize> {
        match self {
            Expr::Input(i) => Some(*i),
            Expr::Not(a) => a.max_input(),
            Expr::And(a, b) | Expr::Or(a, b) => a.max_input().max(b.max_input()),
        }
    }

    /// Number of gate nodes.
    pub fn gate_count(&self) -> usize {
        match self {
            Expr::Input(_) => 0,
            Expr::Not(a) => 1 + a.gate_count(),
            Expr::And(a, b) | Expr::Or(a, b) => 1 + a.gate_count() + b.gate_count(),
        }
    }

    fn eval(&self, x: &Bits) -> bool {
        match self {
            Expr::Input(i) => x.bit(*i),
            Expr::Not(a) => !a.eval(x),
            Expr::And(a, b) => a.eval(x) && b.eval(x),
            Expr::Or(a, b) => a.eval(x) || b.eval(x),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Input(i) => write!(f, "x{i}"),
            Expr::Not(a) => write!(f, "(not {a})"),
            Expr::And(a, b) => write!(f, "(and {a} {b})"),
            Expr::Or(a, b) => write!(f, "(or {a} {b})"),
        }
    }
}

/// A Boolean function `{0,1}^N → {0,1}` given as an expression tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoolCircuit {
    arity: usize,
    expr: Expr,
}

impl BoolCircuit {
    pub fn new(arity: usize, expr: Expr) -> Result<Self, ClassicalError> {
        if arity == 0 {
            return Err(ClassicalError::ArityMismatch {
                expected: 1,
                found: 0,
            });
        }
        if let Some(i) = expr.max_input() {
            if i >= arity {
                return Err(ClassicalError::InputOutOfRange { index: i, arity });
            }
        }
        Ok(Self { arity, expr })
    }

    /// Parses `(or (not x0) (and x0 x1))`. The arity is the largest input
    /// index plus one unless given explicitly.
    pub fn parse(text: &str, arity: Option<usize>) -> Result<Self, ClassicalError> {
        let tokens = tokenize(text);
        let mut pos = 0;
        let expr = parse_expr(&tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(ClassicalError::Parse {
                position: pos,
                message: format!("unexpected trailing token {:?}", tokens[pos]),
            });
        }
        let arity = arity.unwrap_or_else(|| expr.max_input().map_or(1, |i| i + 1));
        Self::new(arity, expr)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn eval(&self, x: &Bits) -> Result<bool, ClassicalError> {
        eval_circuit(self, x)
    }
}

impl fmt::Display for BoolCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.expr.fmt(f)
    }
}

fn tokenize(text: &str) -> Vec<String> {
    text.replace('(', " ( ")
        .replace(')', " ) ")
        .split_whitespace()
        .map(str::to_string)
        .collect()
}

fn parse_expr(tokens: &[String], pos: &mut usize) -> Result<Expr, ClassicalError> {
    let err = |position: usize, message: &str| ClassicalError::Parse {
        position,
        message: message.to_string(),
    };
    let tok = tokens.get(*pos).ok_or_else(|| err(*pos, "unexpected end of input"))?;
    *pos += 1;
    if tok != "(" {
        let index = tok
            .strip_prefix('x')
            .and_then(|d| d.parse::<usize>().ok())
            .ok_or_else(|| err(*pos - 1, &format!("expected input like x0, found {tok:?}")))?;
        return Ok(Expr::Input(index));
    }
    let head_pos = *pos;
    let head = tokens
        .get(*pos)
        .ok_or_else(|| err(*pos, "unexpected end of input"))?
        .to_ascii_lowercase();
    *pos += 1;
    let gate = match head.as_str() {
        "or" => BoolGate::Or,
        "and" => BoolGate::And,
        "not" => BoolGate::Not,
        other => return Err(err(head_pos, &format!("unknown gate {other:?}"))),
    };
    let mut args = Vec::new();
    while tokens.get(*pos).map(String::as_str) != Some(")") {
        if *pos >= tokens.len() {
            return Err(err(*pos, "missing closing parenthesis"));
        }
        args.push(parse_expr(tokens, pos)?);
    }
    *pos += 1;
    if args.len() != gate.arity() {
        return Err(err(
            head_pos,
            &format!("{head} takes {} arguments, got {}", gate.arity(), args.len()),
        ));
    }
    let mut args = args.into_iter();
    let a = args.next().expect("arity checked");
    Ok(match gate {
        BoolGate::Not => Expr::not(a),
        BoolGate::And => Expr::and(a, args.next().expect("arity checked")),
        BoolGate::Or => Expr::or(a, args.next().expect("arity checked")),
    })
}

/// Evaluates the circuit on `x`.
pub fn eval_circuit(c: &BoolCircuit, x: &Bits) -> Result<bool, ClassicalError> {
    if x.len() != c.arity {
        return Err(ClassicalError::ArityMismatch {
            expected: c.arity,
            found: x.len(),
        });
    }
    Ok(c.expr.eval(x))
}

/// Exhaustive equality over all `2^N` inputs. Returns the smallest input on
/// which the circuits differ, or `None` when they are equal.
pub fn equal_functions(f: &BoolCircuit, g: &BoolCircuit) -> Result<Option<Bits>, ClassicalError> {
    if f.arity != g.arity {
        return Err(ClassicalError::ArityMismatch {
            expected: f.arity,
            found: g.arity,
        });
    }
    if f.arity > MAX_EXHAUSTIVE_INPUTS {
        return Err(ClassicalError::TooManyInputs {
            arity: f.arity,
            cap: MAX_EXHAUSTIVE_INPUTS,
        });
    }
    Ok(Bits::all(f.arity).find(|x| f.expr.eval(x) != g.expr.eval(x)))
}

/// A set of outcomes in `{0,1}^N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventSubset {
    ground_bits: usize,
    members: BTreeSet<u64>,
}

impl EventSubset {
    pub fn new(ground_bits: usize, members: &[Bits]) -> Result<Self, ClassicalError> {
        let mut set = BTreeSet::new();
        for m in members {
            if m.len() != ground_bits {
                return Err(ClassicalError::ArityMismatch {
                    expected: ground_bits,
                    found: m.len(),
                });
            }
            if !set.insert(m.value()) {
                return Err(ClassicalError::DuplicateMember(m.to_string()));
            }
        }
        Ok(Self {
            ground_bits,
            members: set,
        })
    }

    pub fn empty(ground_bits: usize) -> Self {
        Self {
            ground_bits,
            members: BTreeSet::new(),
        }
    }

    pub fn full(ground_bits: usize) -> Self {
        Self {
            ground_bits,
            members: (0..1u64 << ground_bits).collect(),
        }
    }

    /// Event whose members are the set bits of `mask` (bit `y` ↔ outcome `y`).
    pub fn from_mask(ground_bits: usize, mask: u64) -> Self {
        Self {
            ground_bits,
            members: (0..1u64 << ground_bits).filter(|y| mask >> y & 1 == 1).collect(),
        }
    }

    pub fn ground_bits(&self) -> usize {
        self.ground_bits
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, y: &Bits) -> bool {
        y.len() == self.ground_bits && self.members.contains(&y.value())
    }

    pub fn members(&self) -> impl Iterator<Item = Bits> + '_ {
        self.members.iter().map(|&v| Bits::new(self.ground_bits, v))
    }

    pub fn complement(&self) -> Self {
        Self {
            ground_bits: self.ground_bits,
            members: (0..1u64 << self.ground_bits)
                .filter(|y| !self.members.contains(y))
                .collect(),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        Self {
            ground_bits: self.ground_bits,
            members: self.members.union(&other.members).copied().collect(),
        }
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.members.is_disjoint(&other.members)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.members.is_subset(&other.members)
    }
}

/// Non-deterministic classical computation: for each input `x ∈ {0,1}^M` a
/// probability vector `F_x` over `{0,1}^N`.
#[derive(Clone, Debug, PartialEq)]
pub struct StochasticOutput {
    input_bits: usize,
    output_bits: usize,
    rows: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    #[serde(rename = "M")]
    m: usize,
    #[serde(rename = "N")]
    n: usize,
    rows: BTreeMap<String, Vec<f64>>,
}

impl StochasticOutput {
    /// `rows[x]` is `F_x`, indexed by the value of `x`. Every row must be
    /// non-negative and sum to 1.
    pub fn new(input_bits: usize, output_bits: usize, rows: Vec<Vec<f64>>) -> Result<Self, ClassicalError> {
        let width = 1usize << output_bits;
        if rows.len() != 1usize << input_bits {
            let missing = Bits::new(input_bits, rows.len().min((1 << input_bits) - 1) as u64);
            return Err(ClassicalError::MissingRow(missing.to_string()));
        }
        for (x, row) in rows.iter().enumerate() {
            let label = || Bits::new(input_bits, x as u64).to_string();
            if row.len() != width {
                return Err(ClassicalError::RowLength {
                    input: label(),
                    expected: width,
                    found: row.len(),
                });
            }
            if let Some(&bad) = row.iter().find(|p| !p.is_finite() || **p < 0.0) {
                return Err(ClassicalError::BadProbability {
                    input: label(),
                    value: bad,
                });
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
                return Err(ClassicalError::NotNormalized { input: label(), sum });
            }
        }
        Ok(Self {
            input_bits,
            output_bits,
            rows,
        })
    }

    /// Point-mass rows from deterministic circuits, one circuit per output
    /// bit (componentwise multi-output functions).
    pub fn from_circuits(circuits: &[BoolCircuit]) -> Result<Self, ClassicalError> {
        let Some(first) = circuits.first() else {
            return Err(ClassicalError::ArityMismatch {
                expected: 1,
                found: 0,
            });
        };
        let m = first.arity();
        if let Some(c) = circuits.iter().find(|c| c.arity() != m) {
            return Err(ClassicalError::ArityMismatch {
                expected: m,
                found: c.arity(),
            });
        }
        let n = circuits.len();
        let rows = Bits::all(m)
            .map(|x| {
                let out: Vec<bool> = circuits.iter().map(|c| c.expr.eval(&x)).collect();
                let y = Bits::from_bools(&out).value() as usize;
                let mut row = vec![0.0; 1 << n];
                row[y] = 1.0;
                row
            })
            .collect();
        Self::new(m, n, rows)
    }

    pub fn from_json(text: &str) -> Result<Self, ClassicalError> {
        let t: TableJson = serde_json::from_str(text).map_err(|e| ClassicalError::Json(e.to_string()))?;
        let mut rows = vec![None; 1usize << t.m];
        for (k, row) in t.rows {
            let x = Bits::parse(&k)?;
            if x.len() != t.m {
                return Err(ClassicalError::ArityMismatch {
                    expected: t.m,
                    found: x.len(),
                });
            }
            rows[x.value() as usize] = Some(row);
        }
        let rows = rows
            .into_iter()
            .enumerate()
            .map(|(x, r)| r.ok_or_else(|| ClassicalError::MissingRow(Bits::new(t.m, x as u64).to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(t.m, t.n, rows)
    }

    pub fn to_json(&self) -> String {
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(x, r)| (Bits::new(self.input_bits, x as u64).to_string(), r.clone()))
            .collect();
        serde_json::to_string(&TableJson {
            m: self.input_bits,
            n: self.output_bits,
            rows,
        })
        .expect("table serialization is infallible")
    }

    pub fn input_bits(&self) -> usize {
        self.input_bits
    }

    pub fn output_bits(&self) -> usize {
        self.output_bits
    }

    pub fn row(&self, x: &Bits) -> Result<&[f64], ClassicalError> {
        if x.len() != self.input_bits {
            return Err(ClassicalError::UnknownInput(x.to_string()));
        }
        Ok(&self.rows[x.value() as usize])
    }

    /// Draws one output for input `x`.
    pub fn sample<R: Rng>(&self, x: &Bits, rng: &mut R) -> Result<Bits, ClassicalError> {
        let row = self.row(x)?;
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (y, p) in row.iter().enumerate() {
            acc += p;
            if u < acc {
                return Ok(Bits::new(self.output_bits, y as u64));
            }
        }
        // u landed in the rounding slack above the last cumulative sum
        let last = row.iter().rposition(|&p| p > 0.0).unwrap_or(0);
        Ok(Bits::new(self.output_bits, last as u64))
    }

    /// `n` seeded draws for input `x`.
    pub fn sample_many(&self, x: &Bits, n: usize, seed: u64) -> Result<Vec<Bits>, ClassicalError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| self.sample(x, &mut rng)).collect()
    }
}

/// `μ_{F_x}(A) = Σ_{y∈A} F_x(y)`, summed in ascending order of `y`.
pub fn induced_measure(f: &StochasticOutput, x: &Bits, a: &EventSubset) -> Result<f64, ClassicalError> {
    let row = f.row(x)?;
    if a.ground_bits != f.output_bits {
        return Err(ClassicalError::GroundMismatch {
            event: a.ground_bits,
            table: f.output_bits,
        });
    }
    Ok(a.members.iter().map(|&y| row[y as usize]).sum())
}

/// Outcome of [`check_kolmogorov`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KolmogorovReport {
    pub empty_measure: f64,
    pub full_measure: f64,
    pub max_complement_violation: f64,
    pub max_additivity_violation: f64,
    pub trials: usize,
}

impl KolmogorovReport {
    pub fn max_violation(&self) -> f64 {
        self.empty_measure
            .abs()
            .max((self.full_measure - 1.0).abs())
            .max(self.max_complement_violation)
            .max(self.max_additivity_violation)
    }
}

/// Checks `μ(∅) = 0`, `μ(Ω) = 1`, `μ(Aᶜ) = 1 − μ(A)` and
/// `μ(A ∪ B) = μ(A) + μ(B)` on `trials` random disjoint pairs.
pub fn check_kolmogorov(
    f: &StochasticOutput,
    x: &Bits,
    trials: usize,
    seed: u64,
) -> Result<KolmogorovReport, ClassicalError> {
    let n = f.output_bits;
    let measure = |a: &EventSubset| induced_measure(f, x, a);
    let empty_measure = measure(&EventSubset::empty(n))?;
    let full_measure = measure(&EventSubset::full(n))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_complement_violation = 0.0f64;
    let mut max_additivity_violation = 0.0f64;
    let outcomes = 1u64 << n;
    for _ in 0..trials {
        // each outcome goes to A, B, or neither
        let (mut a, mut b) = (0u64, 0u64);
        for y in 0..outcomes {
            match rng.random_range(0..3u8) {
                0 => a |= 1 << y,
                1 => b |= 1 << y,
                _ => {}
            }
        }
        let ea = EventSubset::from_mask(n, a);
        let eb = EventSubset::from_mask(n, b);
        let ma = measure(&ea)?;
        let mb = measure(&eb)?;
        let mc = measure(&ea.complement())?;
        let mu = measure(&ea.union(&eb))?;
        max_complement_violation = max_complement_violation.max((mc - (1.0 - ma)).abs());
        max_additivity_violation = max_additivity_violation.max((mu - (ma + mb)).abs());
    }
    Ok(KolmogorovReport {
        empty_measure,
        full_measure,
        max_complement_violation,
        max_additivity_violation,
        trials,
    })
}
