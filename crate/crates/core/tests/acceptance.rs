//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

mod common;

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use qclogic::algorithms::{deutsch_jozsa, period_find, OracleFunction, PeriodMode, PeriodOptions, PeriodicSpec, Verdict};
use qclogic::classical::{check_kolmogorov, Bits, BoolCircuit, ClassicalError, StochasticOutput};
use qclogic::gates::{compose_word, GateWord};
use qclogic::logic::{boolean_truth_table, equiv_rho, equiv_rho_p, equiv_total, hierarchy_check, truth_value};
use qclogic::omlattice::{
    boolean_oml, gleason_state, is_superposition, projection_oml, run_protocol, unitary_automorphism,
    ComputationalScheme, Law, LatticeState, ProjectionLattice,
};
use qclogic::qcore::{born, boolean_projections, product_ket, ComplexMatrix, DensityOperator, Projector, UnitaryGate};
use qclogic::Execution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn ket(label: &str) -> Projector {
    Projector::onto(&product_ket(label).unwrap()).unwrap()
}

fn ket_state(label: &str) -> DensityOperator {
    DensityOperator::pure(&product_ket(label).unwrap()).unwrap()
}

fn gate(word: &str) -> UnitaryGate {
    compose_word(&GateWord::parse(word).unwrap()).unwrap()
}

fn mo2() -> ProjectionLattice {
    projection_oml(2, &["0", "1", "+", "-"].map(ket)).unwrap()
}

fn dj_exactness() -> Outcome {
    let start = Instant::now();
    for (name, constant) in [("f1", false), ("f2", false), ("f3", true), ("f4", true)] {
        let r = deutsch_jozsa(&OracleFunction::named(name).unwrap()).map_err(err)?;
        let correct = if constant { 0 } else { 1 };
        let p = r.outcome_distribution[&correct];
        check((p - 1.0).abs() <= 1e-9, || format!("{name}: P(first qubit = {correct}) = {p}"))?;
        let expected = if constant { Verdict::Constant } else { Verdict::Balanced };
        check(r.verdict == expected, || format!("{name}: verdict {:?}", r.verdict))?;
    }
    let t = start.elapsed();
    check(t < Duration::from_secs(1), || format!("took {t:?}"))?;
    Ok(format!("f1..f4 exact, {t:.2?}"))
}

fn period_spectrum() -> Outcome {
    let start = Instant::now();
    for (n, r) in [(4u64, 2u64), (8, 2), (8, 4), (16, 4)] {
        let spec = PeriodicSpec::standard(n as usize, r as usize).map_err(err)?;
        let options = PeriodOptions {
            mode: PeriodMode::Branching,
            ..PeriodOptions::default()
        };
        let run = period_find(&spec, options).map_err(err)?;
        let expected = |c: u64| if c.is_multiple_of(n / r) { 1.0 / r as f64 } else { 0.0 };
        let spectrum_ok = |dist: &BTreeMap<u64, f64>| {
            dist.len() == n as usize
                && dist.iter().all(|(&c, &p)| {
                    let e = expected(c);
                    (p - e).abs() <= if e > 0.0 { 1e-9 } else { 1e-12 }
                })
        };
        check(spectrum_ok(&run.outcome_distribution), || {
            format!("(N={n}, r={r}): {:?}", run.outcome_distribution)
        })?;
        check(run.branches.len() == r as usize, || format!("(N={n}, r={r}): {} branches", run.branches.len()))?;
        for b in &run.branches {
            check(spectrum_ok(&b.distribution), || {
                format!("(N={n}, r={r}) y0={}: {:?}", b.y0, b.distribution)
            })?;
        }
    }
    let t = start.elapsed();
    check(t < Duration::from_secs(5), || format!("took {t:?}"))?;
    Ok(format!("4 cases, every y0, {t:.2?}"))
}

fn equivalence_hierarchy() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut counts = [0usize; 4];
    let samples = 1200;
    for i in 0..samples {
        let dim = if i % 2 == 0 { 2 } else { 4 };
        let u = common::unitary(dim, &mut rng);
        let rho_basis = common::orthonormal_basis(dim, &mut rng);
        let rho_vals: Vec<f64> = (0..dim).map(|_| rng.random_range(0.0..1.0)).collect();
        let total: f64 = rho_vals.iter().sum();
        let mut m = ComplexMatrix::zeros(dim);
        for (v, w) in rho_basis.iter().zip(&rho_vals) {
            m = &m + &ComplexMatrix::outer(v).scale((w / total).into());
        }
        let rho = DensityOperator::new(m, 1e-9).map_err(err)?;
        let p_basis = common::orthonormal_basis(dim, &mut rng);
        let p = common::projector_in(&p_basis, &mut rng);
        // Mix in the structured cases so every level of the chain is exercised.
        let v = match i % 4 {
            0 => {
                let phase = common::diagonal_in(&p_basis, &vec![rng.random_range(0.0..6.3); dim]);
                u.then_after(&phase).map_err(err)?
            }
            1 => {
                // V = U·W with W diagonal in ρ's eigenbasis: same state after V.
                let phases: Vec<f64> = (0..dim).map(|_| rng.random_range(0.0..6.3)).collect();
                u.then_after(&common::diagonal_in(&rho_basis, &phases)).map_err(err)?
            }
            2 => {
                let phases: Vec<f64> = (0..dim).map(|_| rng.random_range(0.0..6.3)).collect();
                let e = common::diagonal_in(&p_basis, &phases);
                e.then_after(&u).map_err(err)?
            }
            _ => common::unitary(dim, &mut rng),
        };
        let h = hierarchy_check(&u, &v, &rho, &p, 1e-8).map_err(|e| format!("sample {i}: {e}"))?;
        counts[0] += h.total as usize;
        counts[1] += h.rho as usize;
        counts[2] += h.rho_p as usize;
        counts[3] += 1;
    }
    check(counts[0] > 0 && counts[1] > counts[0] && counts[2] > counts[1], || {
        format!("chain levels not all exercised: {counts:?}")
    })?;

    let id = gate("");
    let z = gate("Z");
    let x = gate("X");
    let w1_rho = equiv_rho(&id, &z, &ket_state("0"), 1e-9).map_err(err)?.holds;
    let w1_total = equiv_total(&id, &z, 1e-9).map_err(err)?.holds;
    check(w1_rho && !w1_total, || format!("(1, Z, |0⟩): rho {w1_rho}, total {w1_total}"))?;
    let w2_rho_p = equiv_rho_p(&id, &x, &ket_state("0"), &ket("+"), 1e-9).map_err(err)?.holds;
    let w2_rho = equiv_rho(&id, &x, &ket_state("0"), 1e-9).map_err(err)?.holds;
    check(w2_rho_p && !w2_rho, || format!("(1, X, |0⟩, |+⟩): rho_P {w2_rho_p}, rho {w2_rho}"))?;
    Ok(format!(
        "{samples} samples, {} total / {} rho / {} rho_P equivalent, no violation; both converse witnesses",
        counts[0], counts[1], counts[2]
    ))
}

fn probability_axioms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    let samples = 1000;
    for i in 0..samples {
        let dim = 1 + i % 8;
        let sigma = common::density(dim, &mut rng);
        let p = common::projector(dim, &mut rng);
        let b = |q: &Projector| born(&sigma, q).map_err(err);
        let bp = b(&p)?;
        worst = worst.max((b(&p.complement())? - (1.0 - bp)).abs());
        worst = worst.max(b(&Projector::zero(dim))?.abs());
        worst = worst.max((b(&Projector::identity(dim))? - 1.0).abs());
        check((-1e-8..=1.0 + 1e-8).contains(&bp), || format!("P = {bp}"))?;

        // an orthogonal family of up to `dim` rank-1 events
        let basis = common::orthonormal_basis(dim, &mut rng);
        let k = rng.random_range(1..=dim);
        let mut sum = ComplexMatrix::zeros(dim);
        let mut total = 0.0;
        for v in &basis[..k] {
            let q = Projector::onto(v).map_err(err)?;
            total += b(&q)?;
            sum = &sum + q.matrix();
        }
        let joined = Projector::new(sum, 1e-9).map_err(err)?;
        worst = worst.max((b(&joined)? - total).abs());
    }
    check(worst <= 1e-8, || format!("max deviation {worst:e}"))?;
    Ok(format!("{samples} samples, families up to 8, max deviation {worst:.1e}"))
}

fn boolean_recovery() -> Outcome {
    let basis: Vec<Projector> = (0..4).map(|k| Projector::basis(4, k)).collect();
    let projections = boolean_projections(&basis).map_err(err)?;
    check(projections.len() == 16, || format!("{} projections", projections.len()))?;
    let lattice = projection_oml(4, &projections).map_err(err)?;
    check(lattice.lattice.len() == 16, || format!("closure has {} elements", lattice.lattice.len()))?;
    let report = lattice.lattice.battery(Execution::default());
    check(report.is_boolean(), || format!("{:?}", report.first_violation()))?;

    let circuits = [
        "(not x0)",
        "(and x0 x1)",
        "(or x0 x1)",
        "(and x0 (not x1))",
        "(or (and x0 x1) (not x2))",
        "(not (or (not x0) (and x1 x2)))",
    ];
    let mut rows = 0;
    for text in circuits {
        let c = BoolCircuit::parse(text, None).map_err(err)?;
        for row in boolean_truth_table(&c).map_err(err)? {
            let exact = if row.classical { 1.0 } else { 0.0 };
            check(row.quantum == exact, || format!("{text} at {}: {} vs {exact}", row.input, row.quantum))?;
            rows += 1;
        }
    }
    Ok(format!("16 projections, distributive; {rows} circuit rows exact"))
}

fn lattice_battery() -> Outcome {
    for n in 1..=3 {
        let report = boolean_oml(n).map_err(err)?.battery(Execution::default());
        check(report.results.iter().all(|r| r.holds()), || {
            format!("boolean_oml({n}): {:?}", report.first_violation())
        })?;
    }
    let l = mo2();
    let report = l.lattice.battery(Execution::default());
    check(report.is_orthomodular(), || format!("MO2: {:?}", report.first_violation()))?;
    let witness = report.get(Law::Distributive).witness().map(<[usize]>::to_vec);
    let Some(w) = witness.filter(|w| w.len() == 3) else {
        return Err("MO2 distributivity has no witness triple".into());
    };
    let names: Vec<String> = w.iter().map(|&i| l.lattice.name(i)).collect();
    Ok(format!("boolean_oml(1..3) pass all laws; MO2 orthomodular, distributivity fails at {names:?}"))
}

fn superposition() -> Outcome {
    let mut checked = 0;
    for n in 1..=3 {
        let l = Arc::new(boolean_oml(n).map_err(err)?);
        let outcomes = 1usize << n;
        let points: Vec<LatticeState> =
            (0..outcomes).map(|i| LatticeState::point_mass(l.clone(), i)).collect::<Result<_, _>>().map_err(err)?;
        for (i, nu) in points.iter().enumerate() {
            let others: Vec<usize> = (0..outcomes).filter(|&j| j != i).collect();
            for mask in 1u32..(1 << others.len()) {
                let d: Vec<LatticeState> = others
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask & (1 << k) != 0)
                    .map(|(_, &j)| points[j].clone())
                    .collect();
                let sp = is_superposition(nu, &d).map_err(err)?;
                check(!sp.holds, || format!("N={n}: point {i} is a superposition of {mask:b}"))?;
                checked += 1;
            }
        }
    }
    let l = mo2();
    let g = |label: &str| gleason_state(&ket_state(label), &l).map_err(err);
    let plus = g("+")?;
    let basis = [g("0")?, g("1")?];
    let sp = is_superposition(&plus, &basis).map_err(err)?;
    check(sp.holds, || format!("MO2 |+⟩: violation at {:?}", sp.violation))?;
    Ok(format!("{checked} Boolean point-mass cases are not superpositions; MO2 |+⟩ is"))
}

fn cross_layer() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    let cases: [(ProjectionLattice, usize, &[&str]); 2] = [
        (mo2(), 2, &["H", "X", "Z"]),
        (
            projection_oml(4, &(0..4).map(|k| Projector::basis(4, k)).collect::<Vec<_>>()).map_err(err)?,
            4,
            &["width=2; X[0]", "width=2; X[1]", "width=2; CNOT[0,1]", "width=2; CNOT[1,0]", "width=2; Z[0]"],
        ),
    ];
    let runs = 100;
    for i in 0..runs {
        let (l, dim, words) = &cases[i % 2];
        let gates: Vec<UnitaryGate> = words.iter().map(|w| gate(w)).collect();
        let autos = gates.iter().map(|u| unitary_automorphism(u, l)).collect::<Result<Vec<_>, _>>().map_err(err)?;
        let rho = common::density(*dim, &mut rng);
        let state = gleason_state(&rho, l).map_err(err)?;
        let scheme = ComputationalScheme::new(l.lattice.clone(), vec![state], autos, 0).map_err(err)?;
        let len = rng.random_range(0..=6);
        let word: Vec<usize> = (0..len).map(|_| rng.random_range(0..gates.len())).collect();
        let readout: Vec<usize> = (0..l.lattice.len()).collect();
        let out = run_protocol(&scheme, &word, &readout).map_err(err)?;
        let mut u = UnitaryGate::identity(*dim);
        for &g in &word {
            u = gates[g].then_after(&u).map_err(err)?;
        }
        for (&x, &mu) in &out {
            let tv = truth_value(&u, &rho, l.projector(x)).map_err(err)?;
            worst = worst.max((mu - tv).abs());
        }
    }
    check(worst <= 1e-9, || format!("max deviation {worst:e}"))?;
    Ok(format!("{runs} random protocols, max deviation {worst:.1e}"))
}

fn kolmogorov_layer() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0.0f64;
    let mut tables = 0;
    for m in 0..=3 {
        for n in 0..=3 {
            for _ in 0..10 {
                let rows: Vec<Vec<f64>> = (0..1 << m)
                    .map(|_| {
                        let w: Vec<f64> = (0..1 << n).map(|_| rng.random_range(0.0..1.0)).collect();
                        let s: f64 = w.iter().sum();
                        w.iter().map(|x| x / s).collect()
                    })
                    .collect();
                let f = StochasticOutput::new(m, n, rows).map_err(err)?;
                for x in Bits::all(m) {
                    let seed = rng.random();
                    let r = check_kolmogorov(&f, &x, 100, seed).map_err(err)?;
                    worst = worst.max(r.max_violation());
                }
                tables += 1;
            }
        }
    }
    check(worst <= 1e-12, || format!("max violation {worst:e}"))?;

    let bad_sum = StochasticOutput::new(1, 1, vec![vec![0.5, 0.5], vec![0.5, 0.4]]);
    check(matches!(bad_sum, Err(ClassicalError::NotNormalized { .. })), || format!("{bad_sum:?}"))?;
    let negative = StochasticOutput::new(1, 1, vec![vec![1.2, -0.2], vec![0.5, 0.5]]);
    check(matches!(negative, Err(ClassicalError::BadProbability { .. })), || format!("{negative:?}"))?;
    Ok(format!("{tables} tables, max violation {worst:.1e}; bad rows rejected"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("Deutsch-Jozsa exactness", dj_exactness),
        ("period-finding spectrum", period_spectrum),
        ("equivalence hierarchy", equivalence_hierarchy),
        ("quantum probability axioms", probability_axioms),
        ("Boolean recovery", boolean_recovery),
        ("lattice law battery", lattice_battery),
        ("superposition", superposition),
        ("cross-layer consistency", cross_layer),
        ("Kolmogorov layer", kolmogorov_layer),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
