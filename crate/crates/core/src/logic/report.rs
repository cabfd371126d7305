use std::fmt;

use serde_json::{json, Map, Value};

use crate::qcore::{DensityOperator, Projector};

/// The relations between gates that can be tested.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    /// Equal truth values at a fixed state and event.
    EquivRhoP,
    /// Equal truth values at a fixed state, for every event.
    EquivRho,
    /// Equal truth values at a fixed event, for every state.
    EquivP,
    /// Equal truth values everywhere.
    EquivTotal,
    LeqRhoP,
    LeqRho,
    LeqP,
}

impl Relation {
    pub fn tag(self) -> &'static str {
        match self {
            Relation::EquivRhoP => "equiv_rho_P",
            Relation::EquivRho => "equiv_rho",
            Relation::EquivP => "equiv_P",
            Relation::EquivTotal => "equiv_total",
            Relation::LeqRhoP => "leq_rho_P",
            Relation::LeqRho => "leq_rho",
            Relation::LeqP => "leq_P",
        }
    }

    /// Accepts the tags above as well as the short CLI names
    /// (`rho_P`, `rho`, `P`, `total`).
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "equiv_rho_P" | "rho_P" | "rho_p" => Relation::EquivRhoP,
            "equiv_rho" | "rho" => Relation::EquivRho,
            "equiv_P" | "P" | "p" => Relation::EquivP,
            "equiv_total" | "total" => Relation::EquivTotal,
            "leq_rho_P" => Relation::LeqRhoP,
            "leq_rho" => Relation::LeqRho,
            "leq_P" => Relation::LeqP,
            _ => return None,
        })
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A state and/or event: the context in which two gates are compared.
#[derive(Clone, Debug, PartialEq)]
pub struct TruthContext {
    pub state: Option<DensityOperator>,
    pub event: Option<Projector>,
}

/// A separating certificate.
#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    Quantum(TruthContext),
    /// Indices into a lattice's element list and a scheme's state list.
    Lattice {
        state: Option<usize>,
        element: Option<usize>,
    },
}

/// Outcome of testing one relation between two gates.
#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceReport {
    pub relation: Relation,
    pub holds: bool,
    /// Truth value of the left gate (at the witness, for quantified relations).
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    /// Relative phase `θ` with `V†U ≈ e^{iθ}𝟙` (total equivalence only).
    pub theta: Option<f64>,
    /// `U = V` entrywise, not just up to phase (total equivalence only).
    pub strict_equal: Option<bool>,
    pub witness: Option<Witness>,
    pub tolerance: f64,
    /// The quantity compared against the tolerance.
    pub deviation: f64,
    /// Set when a quantifier was checked on a sample rather than decided.
    pub approximate: bool,
}

impl EquivalenceReport {
    pub(crate) fn new(relation: Relation, holds: bool, tolerance: f64, deviation: f64) -> Self {
        Self {
            relation,
            holds,
            lhs: None,
            rhs: None,
            theta: None,
            strict_equal: None,
            witness: None,
            tolerance,
            deviation,
            approximate: false,
        }
    }

    pub(crate) fn values(mut self, lhs: f64, rhs: f64) -> Self {
        self.lhs = Some(lhs);
        self.rhs = Some(rhs);
        self
    }

    pub(crate) fn witness(mut self, witness: Witness) -> Self {
        self.witness = Some(witness);
        self
    }

    /// JSON form with sorted keys and floats rounded to 12 significant digits:
    /// `{relation, holds, lhs, rhs, theta?, witness?, tolerance}`.
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("relation".into(), json!(self.relation.tag()));
        m.insert("holds".into(), json!(self.holds));
        m.insert("lhs".into(), self.lhs.map_or(Value::Null, num));
        m.insert("rhs".into(), self.rhs.map_or(Value::Null, num));
        m.insert("tolerance".into(), num(self.tolerance));
        m.insert("deviation".into(), num(self.deviation));
        if let Some(t) = self.theta {
            m.insert("theta".into(), num(t));
        }
        if let Some(s) = self.strict_equal {
            m.insert("strict_equal".into(), json!(s));
        }
        if self.approximate {
            m.insert("approximate".into(), json!(true));
        }
        if let Some(w) = &self.witness {
            m.insert("witness".into(), witness_json(w));
        }
        Value::Object(m)
    }
}

fn witness_json(w: &Witness) -> Value {
    let mut m = Map::new();
    match w {
        Witness::Quantum(ctx) => {
            if let Some(s) = &ctx.state {
                m.insert("state".into(), matrix_json(s.matrix()));
            }
            if let Some(p) = &ctx.event {
                m.insert("event".into(), matrix_json(p.matrix()));
            }
        }
        Witness::Lattice { state, element } => {
            if let Some(s) = state {
                m.insert("state".into(), json!(s));
            }
            if let Some(e) = element {
                m.insert("element".into(), json!(e));
            }
        }
    }
    Value::Object(m)
}

/// Matrix literal with entries rounded to 12 significant digits.
pub fn matrix_json(m: &crate::qcore::ComplexMatrix) -> Value {
    let lit = m.to_literal();
    json!({
        "dim": lit.dim,
        "re": lit.re.iter().map(|&x| num(x)).collect::<Vec<_>>(),
        "im": lit.im.iter().map(|&x| num(x)).collect::<Vec<_>>(),
    })
}

/// Rounds to 12 significant digits so that output is stable across
/// platforms and summation noise. Negative zero is normalized.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    let r: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// A JSON number rounded by [`round_sig`].
pub fn num(x: f64) -> Value {
    json!(round_sig(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relation_tags_round_trip() {
        for r in [
            Relation::EquivRhoP,
            Relation::EquivRho,
            Relation::EquivP,
            Relation::EquivTotal,
            Relation::LeqRhoP,
            Relation::LeqRho,
            Relation::LeqP,
        ] {
            assert_eq!(Relation::parse(r.tag()), Some(r));
        }
        assert_eq!(Relation::parse("total"), Some(Relation::EquivTotal));
        assert_eq!(Relation::parse("nope"), None);
    }

    #[test]
    fn rounding() {
        assert_eq!(round_sig(0.1 + 0.2), 0.3);
        assert_eq!(round_sig(-0.0), 0.0);
        assert_eq!(round_sig(1.0 / 3.0), 0.333333333333);
        assert_eq!(round_sig(-1e-20), -1e-20);
    }

    #[test]
    fn json_layout() {
        let r = EquivalenceReport::new(Relation::EquivRhoP, false, 1e-9, 1.0).values(0.0, 1.0);
        let text = serde_json::to_string(&r.to_json()).unwrap();
        assert_eq!(
            text,
            r#"{"deviation":1.0,"holds":false,"lhs":0.0,"relation":"equiv_rho_P","rhs":1.0,"tolerance":1e-9}"#
        );
    }
}
