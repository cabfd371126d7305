//! `qclogic`: equivalence checks, quotients, algorithm runs and lattice
//! law batteries from the command line.
//!
//! Exit codes: 0 when the relation holds / all checks pass, 1 for a
//! definite negative answer, 2 for usage or validation errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qclogic::algorithms::{deutsch_jozsa, period_find, OracleFunction, PeriodMode, PeriodOptions, PeriodicSpec};
use qclogic::classical::BoolCircuit;
use qclogic::gates::{compose_word, enumerate_polynomials, GeneratorSet, DEFAULT_ENUMERATION_CAP};
use qclogic::logic::{
    boolean_truth_table, check_relation, num, quotient, QuotientRelation, Relation, TruthContext,
};
use qclogic::omlattice::{boolean_oml, projection_oml, FiniteOML, RawLattice};
use qclogic::qcore::{boolean_projections, product_ket, Projector};
use qclogic::Execution;

mod inputs;

/// An error that ends the run with a diagnostic.
#[derive(Debug)]
pub struct Failure {
    message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            message: message.into(),
        }
    }
}

macro_rules! impl_from_error {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure::usage(e.to_string())
            }
        }
    )*};
}

impl_from_error!(
    qclogic::qcore::QcoreError,
    qclogic::gates::GateError,
    qclogic::logic::LogicError,
    qclogic::classical::ClassicalError,
    qclogic::omlattice::LatticeError,
    qclogic::algorithms::AlgorithmError
);

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Trace,
    Branching,
}

#[derive(Parser, Debug)]
#[command(name = "qclogic", version, about = "Probabilistic truth values of quantum gates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Tolerance for numerical comparisons.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Test a relation between two gate words.
    CheckEquiv {
        /// First gate word, e.g. "H; T" or "width=2; CNOT[0,1]".
        a: String,
        /// Second gate word ("" is the identity).
        b: String,
        /// equiv_rho_P | equiv_rho | equiv_P | equiv_total | leq_rho_P | leq_rho | leq_P
        /// (short forms rho_P, rho, P, total).
        #[arg(long, default_value = "total")]
        relation: String,
        /// State: ket label over 0 1 + -, mixed:D, or a matrix literal (inline or file).
        #[arg(long)]
        state: Option<String>,
        /// Event: ket label or a matrix literal (inline or file).
        #[arg(long)]
        event: Option<String>,
    },
    /// Partition the words of a generator set up to a length by a relation.
    Quotient {
        /// G1, G2 or G3.
        #[arg(long, default_value = "G1")]
        generators: String,
        #[arg(long, default_value_t = 1)]
        width: usize,
        #[arg(long, default_value_t = 2)]
        max_len: usize,
        /// Comma-separated rotation angles for parametric generators.
        #[arg(long)]
        grid: Option<String>,
        /// rho or rho_P.
        #[arg(long, default_value = "rho_P")]
        relation: String,
        #[arg(long)]
        state: String,
        #[arg(long)]
        event: Option<String>,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: usize,
    },
    /// Run Deutsch-Jozsa on f1..f4 or an oracle table (inline JSON or file).
    RunDj { function: String },
    /// Run period finding on a spec {"N":..,"r":..,"f":[..]} (inline or file).
    RunPeriod {
        spec: String,
        #[arg(long, value_enum, default_value_t = Mode::Trace)]
        mode: Mode,
        #[arg(long, default_value_t = 8)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the lattice law battery on a lattice file, or on boolean:N / mo2.
    LatticeVerify {
        lattice: String,
        /// Also write the lattice document to this path.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Build the Boolean algebra generated by the computational basis of dimension D.
    BooleanRecover {
        #[arg(long, default_value_t = 4)]
        dim: usize,
    },
    /// Compare a Boolean circuit with its reversible quantum embedding.
    TruthTable {
        /// S-expression such as "(or (and x0 (not x1)) x2)".
        circuit: String,
        #[arg(long)]
        arity: Option<usize>,
    },
}

/// A report plus the exit code it implies.
struct Outcome {
    report: Value,
    positive: bool,
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let tol = cli.tol;
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(Failure::usage("--tol must be a finite non-negative number"));
    }
    match &cli.command {
        Command::CheckEquiv {
            a,
            b,
            relation,
            state,
            event,
        } => {
            let relation =
                Relation::parse(relation).ok_or_else(|| Failure::usage(format!("unknown relation {relation:?}")))?;
            let (wa, wb) = (inputs::word(a)?, inputs::word(b)?);
            let width = wa.width().max(wb.width());
            let (u, v) = (compose_word(&wa.widened(width)?)?, compose_word(&wb.widened(width)?)?);
            let ctx = TruthContext {
                state: state.as_deref().map(|s| inputs::state(s, tol)).transpose()?,
                event: event.as_deref().map(|e| inputs::event(e, tol)).transpose()?,
            };
            let report = check_relation(relation, &u, &v, &ctx, tol)?;
            Ok(Outcome {
                positive: report.holds,
                report: report.to_json(),
            })
        }
        Command::Quotient {
            generators,
            width,
            max_len,
            grid,
            relation,
            state,
            event,
            cap,
        } => {
            let grid = grid.as_deref().map(inputs::grid).transpose()?;
            let set = GeneratorSet::named(generators, grid)
                .ok_or_else(|| Failure::usage(format!("unknown generator set {generators:?}")))?;
            let words = enumerate_polynomials(&set, *width, *max_len, *cap, Execution::default())?;
            let rho = inputs::state(state, tol)?;
            let rel = match Relation::parse(relation) {
                Some(Relation::EquivRho) => QuotientRelation::Rho(rho),
                Some(Relation::EquivRhoP) => {
                    let e = event.as_deref().ok_or_else(|| Failure::usage("relation rho_P needs --event"))?;
                    QuotientRelation::RhoP(rho, inputs::event(e, tol)?)
                }
                _ => return Err(Failure::usage(format!("quotient supports rho and rho_P, got {relation:?}"))),
            };
            let q = quotient(&words, &rel, tol, Execution::default())?;
            let classes: Vec<Value> = q
                .classes
                .iter()
                .zip(&q.indices)
                .zip(&q.keys)
                .map(|((ws, idx), key)| {
                    json!({
                        "key": key,
                        "indices": idx,
                        "words": ws.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
                    })
                })
                .collect();
            Ok(Outcome {
                positive: true,
                report: json!({
                    "relation": q.relation.tag(),
                    "generators": set.label(),
                    "words": words.len(),
                    "class_count": q.len(),
                    "classes": classes,
                    "tolerance": num(tol),
                }),
            })
        }
        Command::RunDj { function } => {
            let f = match OracleFunction::named(function) {
                Some(f) => f,
                None => OracleFunction::from_json(&inputs::text_or_file(function)?)?,
            };
            let r = deutsch_jozsa(&f)?;
            Ok(Outcome {
                positive: true,
                report: r.to_json(),
            })
        }
        Command::RunPeriod {
            spec,
            mode,
            samples,
            seed,
        } => {
            let spec = PeriodicSpec::from_json(&inputs::text_or_file(spec)?)?;
            let options = PeriodOptions {
                mode: match mode {
                    Mode::Trace => PeriodMode::Trace,
                    Mode::Branching => PeriodMode::Branching,
                },
                samples: *samples,
                seed: *seed,
            };
            let r = period_find(&spec, options)?;
            Ok(Outcome {
                positive: true,
                report: r.to_json(),
            })
        }
        Command::LatticeVerify { lattice, export } => {
            let raw = builtin_lattice(lattice)?;
            let report = raw.battery(Execution::default());
            if let Some(path) = export {
                let lat = FiniteOML::from_raw(raw.clone(), Execution::default())?;
                write(path, &render(&lat.to_json(), Format::Json))?;
            }
            let mut out = report.to_json();
            out["elements"] = json!(raw.names());
            Ok(Outcome {
                positive: report.is_orthomodular(),
                report: out,
            })
        }
        Command::BooleanRecover { dim } => {
            if !(1..=16).contains(dim) {
                return Err(Failure::usage("--dim must be between 1 and 16"));
            }
            let family: Vec<Projector> = (0..*dim).map(|k| Projector::basis(*dim, k)).collect();
            let projections = boolean_projections(&family)?;
            let diagonals: Vec<Value> = projections
                .iter()
                .map(|p| json!((0..*dim).map(|i| num(p.matrix()[(i, i)].re)).collect::<Vec<_>>()))
                .collect();
            let expected = 1usize << dim;
            // the lattice check is exhaustive over triples, so keep it small
            let lattice = if projections.len() <= 64 {
                let l = projection_oml(*dim, &projections)?;
                let report = l.lattice.battery(Execution::default());
                Some((l.lattice.len(), report.is_orthomodular(), report.is_boolean()))
            } else {
                None
            };
            let boolean = lattice.is_none_or(|(n, _, b)| n == expected && b);
            Ok(Outcome {
                positive: projections.len() == expected && boolean,
                report: json!({
                    "dim": dim,
                    "projections": projections.len(),
                    "expected": expected,
                    "diagonals": diagonals,
                    "lattice_size": lattice.map(|l| l.0),
                    "orthomodular": lattice.map(|l| l.1),
                    "distributive": lattice.map(|l| l.2),
                }),
            })
        }
        Command::TruthTable { circuit, arity } => {
            let c = BoolCircuit::parse(circuit, *arity)?;
            let rows = boolean_truth_table(&c)?;
            let exact = rows.iter().all(|r| r.quantum == if r.classical { 1.0 } else { 0.0 });
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "input": r.input.to_string(),
                        "classical": u8::from(r.classical),
                        "quantum": num(r.quantum),
                    })
                })
                .collect();
            Ok(Outcome {
                positive: exact,
                report: json!({ "arity": c.arity(), "rows": rows, "exact": exact }),
            })
        }
    }
}

/// `boolean:N`, `mo2`, or a lattice document (inline or file).
fn builtin_lattice(arg: &str) -> Result<RawLattice, Failure> {
    let lattice: FiniteOML = if let Some(n) = arg.strip_prefix("boolean:") {
        let n: usize = n.parse().map_err(|_| Failure::usage(format!("bad size in {arg:?}")))?;
        if n > 3 {
            return Err(Failure::usage("exhaustive verification supports boolean:0 to boolean:3"));
        }
        boolean_oml(n)?
    } else if arg == "mo2" {
        let kets: Vec<Projector> = ["0", "1", "+", "-"]
            .iter()
            .map(|k| Projector::onto(&product_ket(k).expect("valid label")))
            .collect::<Result<_, _>>()?;
        Arc::unwrap_or_clone(projection_oml(2, &kets)?.lattice)
    } else {
        return Ok(RawLattice::from_json(&inputs::text_or_file(arg)?, Execution::default())?);
    };
    Ok(RawLattice::from_json(&lattice.to_json().to_string(), Execution::default())?)
}

fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(v).expect("JSON value serializes") + "\n",
        Format::Table => match v {
            Value::Object(m) => {
                let width = m.keys().map(String::len).max().unwrap_or(0);
                m.iter()
                    .map(|(k, v)| {
                        let cell = match v {
                            Value::String(s) => s.clone(),
                            other => other.to_string(),
                        };
                        format!("{k:<width$}  {cell}\n")
                    })
                    .collect()
            }
            other => format!("{other}\n"),
        },
    }
}

fn write(path: &PathBuf, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            let text = render(&outcome.report, cli.format);
            match &cli.out {
                Some(path) => {
                    if let Err(f) = write(path, &text) {
                        eprintln!("qclogic: {}", f.message);
                        return ExitCode::from(2);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::from(if outcome.positive { 0 } else { 1 })
        }
        Err(f) => {
            eprintln!("qclogic: {}", f.message);
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_rendering_aligns_keys() {
        let v = json!({"a": 1, "long": "x"});
        assert_eq!(render(&v, Format::Table), "a     1\nlong  x\n");
    }

    #[test]
    fn builtin_lattices() {
        assert_eq!(builtin_lattice("boolean:1").unwrap().names().len(), 4);
        assert_eq!(builtin_lattice("mo2").unwrap().names().len(), 6);
        assert!(builtin_lattice("boolean:9").is_err());
    }
}
