//! Exhaustive law battery for finite ortholattices.
//!
//! Pair laws are checked on all `n²` pairs and triple laws on all `n³`
//! triples, split over the first index. The first failing tuple in index
//! order is reported, whatever the execution mode.

use std::fmt;

use serde_json::{json, Value};

use crate::parallel::{self, Execution};

/// Read access to a finite lattice with orthocomplement, possibly
/// malformed (meets or joins may be missing).
pub trait OrthoLattice: Sync {
    fn size(&self) -> usize;
    fn zero(&self) -> usize;
    fn one(&self) -> usize;
    fn meet_of(&self, a: usize, b: usize) -> Option<usize>;
    fn join_of(&self, a: usize, b: usize) -> Option<usize>;
    fn ortho_of(&self, a: usize) -> usize;
    fn leq_of(&self, a: usize, b: usize) -> bool;
    fn element_name(&self, a: usize) -> String;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Law {
    OrderReflexive,
    OrderAntisymmetric,
    OrderTransitive,
    MeetExists,
    JoinExists,
    Bounds,
    MeetCommutative,
    JoinCommutative,
    MeetAssociative,
    JoinAssociative,
    Absorption,
    Idempotent,
    MeetMatchesOrder,
    OrthoInvolution,
    OrthoComplement,
    OrthoOrderReversing,
    Orthomodular,
    /// Not required of an orthomodular lattice; reported for the
    /// Boolean/quantum contrast.
    Distributive,
}

impl Law {
    pub const ALL: [Law; 18] = [
        Law::OrderReflexive,
        Law::OrderAntisymmetric,
        Law::OrderTransitive,
        Law::MeetExists,
        Law::JoinExists,
        Law::Bounds,
        Law::MeetCommutative,
        Law::JoinCommutative,
        Law::MeetAssociative,
        Law::JoinAssociative,
        Law::Absorption,
        Law::Idempotent,
        Law::MeetMatchesOrder,
        Law::OrthoInvolution,
        Law::OrthoComplement,
        Law::OrthoOrderReversing,
        Law::Orthomodular,
        Law::Distributive,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Law::OrderReflexive => "order-reflexive",
            Law::OrderAntisymmetric => "order-antisymmetric",
            Law::OrderTransitive => "order-transitive",
            Law::MeetExists => "meet-exists",
            Law::JoinExists => "join-exists",
            Law::Bounds => "bounds",
            Law::MeetCommutative => "meet-commutative",
            Law::JoinCommutative => "join-commutative",
            Law::MeetAssociative => "meet-associative",
            Law::JoinAssociative => "join-associative",
            Law::Absorption => "absorption",
            Law::Idempotent => "idempotent",
            Law::MeetMatchesOrder => "meet-matches-order",
            Law::OrthoInvolution => "ortho-involution",
            Law::OrthoComplement => "ortho-complement",
            Law::OrthoOrderReversing => "ortho-order-reversing",
            Law::Orthomodular => "orthomodular",
            Law::Distributive => "distributive",
        }
    }

    /// Whether an orthomodular lattice must satisfy this law.
    pub fn required(self) -> bool {
        self != Law::Distributive
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LawStatus {
    Pass,
    Fail { witness: Vec<usize> },
    /// Not evaluated because a prerequisite (existence of meets/joins) failed.
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawResult {
    pub law: Law,
    pub status: LawStatus,
}

impl LawResult {
    pub fn holds(&self) -> bool {
        self.status == LawStatus::Pass
    }

    pub fn witness(&self) -> Option<&[usize]> {
        match &self.status {
            LawStatus::Fail { witness } => Some(witness),
            _ => None,
        }
    }
}

/// Results of every law, in [`Law::ALL`] order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawReport {
    pub size: usize,
    pub results: Vec<LawResult>,
    names: Vec<String>,
}

impl LawReport {
    pub fn get(&self, law: Law) -> &LawResult {
        self.results.iter().find(|r| r.law == law).expect("every law is reported")
    }

    pub fn holds(&self, law: Law) -> bool {
        self.get(law).holds()
    }

    /// All orthomodular-lattice laws pass.
    pub fn is_orthomodular(&self) -> bool {
        self.results.iter().filter(|r| r.law.required()).all(LawResult::holds)
    }

    /// Orthomodular and distributive, i.e. a Boolean algebra.
    pub fn is_boolean(&self) -> bool {
        self.is_orthomodular() && self.holds(Law::Distributive)
    }

    /// First failing required law.
    pub fn first_violation(&self) -> Option<&LawResult> {
        self.results.iter().find(|r| r.law.required() && !r.holds())
    }

    pub fn to_json(&self) -> Value {
        let laws: Vec<Value> = self
            .results
            .iter()
            .map(|r| {
                let (status, witness) = match &r.status {
                    LawStatus::Pass => ("pass", Value::Null),
                    LawStatus::Fail { witness } => (
                        "fail",
                        json!(witness.iter().map(|&i| self.names[i].clone()).collect::<Vec<_>>()),
                    ),
                    LawStatus::Skipped => ("skipped", Value::Null),
                };
                json!({
                    "law": r.law.name(),
                    "required": r.law.required(),
                    "status": status,
                    "witness": witness,
                })
            })
            .collect();
        json!({
            "size": self.size,
            "orthomodular": self.is_orthomodular(),
            "boolean": self.is_boolean(),
            "laws": laws,
        })
    }
}

fn status(w: Option<Vec<usize>>) -> LawStatus {
    match w {
        None => LawStatus::Pass,
        Some(witness) => LawStatus::Fail { witness },
    }
}

fn pairs<L: OrthoLattice>(
    l: &L,
    exec: Execution,
    bad: impl Fn(usize, usize) -> bool + Sync + Send,
) -> LawStatus {
    let n = l.size();
    status(parallel::find_first(n, exec, |a| {
        (0..n).find(|&b| bad(a, b)).map(|b| vec![a, b])
    }))
}

fn triples<L: OrthoLattice>(
    l: &L,
    exec: Execution,
    bad: impl Fn(usize, usize, usize) -> bool + Sync + Send,
) -> LawStatus {
    let n = l.size();
    status(parallel::find_first(n, exec, |a| {
        for b in 0..n {
            for c in 0..n {
                if bad(a, b, c) {
                    return Some(vec![a, b, c]);
                }
            }
        }
        None
    }))
}

/// Runs every law on `l`.
pub fn law_battery<L: OrthoLattice>(l: &L, exec: Execution) -> LawReport {
    let n = l.size();
    let mut results = Vec::with_capacity(Law::ALL.len());
    let mut push = |law, status| results.push(LawResult { law, status });

    push(Law::OrderReflexive, status((0..n).find(|&a| !l.leq_of(a, a)).map(|a| vec![a])));
    push(
        Law::OrderAntisymmetric,
        pairs(l, exec, |a, b| a != b && l.leq_of(a, b) && l.leq_of(b, a)),
    );
    push(
        Law::OrderTransitive,
        triples(l, exec, |a, b, c| l.leq_of(a, b) && l.leq_of(b, c) && !l.leq_of(a, c)),
    );
    let meets = pairs(l, exec, |a, b| l.meet_of(a, b).is_none());
    let joins = pairs(l, exec, |a, b| l.join_of(a, b).is_none());
    let complete = meets == LawStatus::Pass && joins == LawStatus::Pass;
    push(Law::MeetExists, meets);
    push(Law::JoinExists, joins);
    push(
        Law::Bounds,
        status((0..n).find(|&a| !l.leq_of(l.zero(), a) || !l.leq_of(a, l.one())).map(|a| vec![a])),
    );

    let meet = |a, b| l.meet_of(a, b).expect("checked above");
    let join = |a, b| l.join_of(a, b).expect("checked above");
    let mut lattice_laws = |law, st: &dyn Fn() -> LawStatus| {
        push(law, if complete { st() } else { LawStatus::Skipped });
    };
    lattice_laws(Law::MeetCommutative, &|| pairs(l, exec, |a, b| meet(a, b) != meet(b, a)));
    lattice_laws(Law::JoinCommutative, &|| pairs(l, exec, |a, b| join(a, b) != join(b, a)));
    lattice_laws(Law::MeetAssociative, &|| {
        triples(l, exec, |a, b, c| meet(meet(a, b), c) != meet(a, meet(b, c)))
    });
    lattice_laws(Law::JoinAssociative, &|| {
        triples(l, exec, |a, b, c| join(join(a, b), c) != join(a, join(b, c)))
    });
    lattice_laws(Law::Absorption, &|| {
        pairs(l, exec, |a, b| meet(a, join(a, b)) != a || join(a, meet(a, b)) != a)
    });
    lattice_laws(Law::Idempotent, &|| {
        status((0..n).find(|&a| meet(a, a) != a || join(a, a) != a).map(|a| vec![a]))
    });
    lattice_laws(Law::MeetMatchesOrder, &|| {
        pairs(l, exec, |a, b| l.leq_of(a, b) != (meet(a, b) == a))
    });
    lattice_laws(Law::OrthoInvolution, &|| {
        status((0..n).find(|&a| l.ortho_of(l.ortho_of(a)) != a).map(|a| vec![a]))
    });
    lattice_laws(Law::OrthoComplement, &|| {
        status(
            (0..n)
                .find(|&a| meet(a, l.ortho_of(a)) != l.zero() || join(a, l.ortho_of(a)) != l.one())
                .map(|a| vec![a]),
        )
    });
    lattice_laws(Law::OrthoOrderReversing, &|| {
        pairs(l, exec, |a, b| l.leq_of(a, b) && !l.leq_of(l.ortho_of(b), l.ortho_of(a)))
    });
    lattice_laws(Law::Orthomodular, &|| {
        pairs(l, exec, |a, b| l.leq_of(a, b) && join(a, meet(l.ortho_of(a), b)) != b)
    });
    lattice_laws(Law::Distributive, &|| {
        triples(l, exec, |a, b, c| meet(a, join(b, c)) != join(meet(a, b), meet(a, c)))
    });

    LawReport {
        size: n,
        results,
        names: (0..n).map(|i| l.element_name(i)).collect(),
    }
}
