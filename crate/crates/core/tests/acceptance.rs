//! Acceptance gate: one PASS/FAIL line per criterion. Exits non-zero if any
//! criterion fails.

mod common;

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use common::matrix::{phase_aligned_deviation, string};
use common::{all_messages, fixture, manifest_path, scheme, scheme_at, Fixture};
use qdialogue::cli::{render_printed, scan_report, Format};
use qdialogue::dense_coding::{
    check_useful, format_formula, parse_formula, summary_claims, DegeneratePair,
    EncodingScheme, FailureWitness, PrintedKind, PRINTED_TABLES,
};
use qdialogue::pauli::{enumerate_subgroups, named_group, subgroup_id, PauliString, GROUP_NAMES};
use qdialogue::protocol::{eve_guess_success, run_dialogue, EveStrategy, ProtocolConfig};
use qdialogue::smp::{charlie_knowledge, run_smp, SmpConfig};
use qdialogue::state::named_state;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn ensure(ok: bool, detail: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(detail.into())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    ensure(elapsed < limit, format!("{what} took {elapsed:.2?}, limit {limit:?}"))
}

/// Printed dense-coding tables (useful ones) and multiplication tables
/// against regeneration, term for term after canonicalization, plus the
/// checked-in golden files.
fn table_reproduction() -> Verdict {
    let start = Instant::now();
    let mut tables = 0;
    let mut formulas = 0;
    let mut repairs = 0;
    for t in PRINTED_TABLES.iter() {
        match (t.kind, fixture(t.number)) {
            (PrintedKind::Encoding { useful: true, states, positions, .. }, Fixture::Encoding { rows, .. }) => {
                let ops = t.operators();
                ensure(rows.len() == ops.len(), format!("table {:02}: row count", t.number))?;
                for (r, row) in rows.iter().enumerate() {
                    ensure(row.operator == ops[r], format!("table {:02} U{r}: operator", t.number))?;
                    for (s, name) in states.iter().enumerate() {
                        let computed = named_state(name).unwrap().apply(&ops[r], positions).unwrap();
                        let parsed = parse_formula(&row.formulas[s]).map_err(|e| e.to_string())?;
                        if !parsed.is_normalized() {
                            repairs += 1;
                        }
                        ensure(
                            parsed.state.equal_up_to_phase(&computed, 1e-12)
                                && format_formula(&parsed.state) == format_formula(&computed),
                            format!("table {:02} U{r} {name}: printed {} vs {}", t.number, row.formulas[s], format_formula(&computed)),
                        )?;
                        formulas += 1;
                    }
                }
            }
            (PrintedKind::Multiplication { .. }, Fixture::Multiplication { elements, rows }) => {
                let g = t.group().unwrap().map_err(|e| e.to_string())?;
                let listed: Vec<String> = g.elements().iter().map(ToString::to_string).collect();
                ensure(listed == elements && g.multiplication_table() == rows, format!("table {:02}", t.number))?;
                formulas += rows.len() * rows.len();
            }
            _ => continue,
        }
        for (ext, format) in [("txt", Format::Text), ("csv", Format::Csv)] {
            let rel = format!("tables/table_{:02}.{ext}", t.number);
            let stored = std::fs::read_to_string(manifest_path(&rel)).map_err(|e| format!("{rel}: {e}"))?;
            ensure(stored == render_printed(t.number, format).unwrap(), format!("{rel} differs from regeneration"))?;
        }
        tables += 1;
    }
    let elapsed = start.elapsed();
    ensure(tables == 12, format!("{tables} tables checked"))?;
    within(elapsed, Duration::from_secs(5), "table reproduction")?;
    Ok(format!("{tables} tables, {formulas} entries, {repairs} normalization repairs, {elapsed:.2?}"))
}

fn failure_cases() -> Verdict {
    let ghz = named_state("ghz").unwrap();
    let table6 = PRINTED_TABLES[5];
    let ops = table6.operators();
    let g23 = named_group("G2^3(8)").unwrap();
    ensure(
        ops.iter().collect::<BTreeSet<_>>() == g23.elements().iter().collect::<BTreeSet<_>>(),
        "table 06 rows are not G2^3(8)",
    )?;
    let pairs = match check_useful("ghz", &ghz, &ops, &[1, 2]).map_err(|e| e.to_string())?.witness() {
        Some(FailureWitness::DegenerateOutputs { pairs }) => pairs.clone(),
        other => return Err(format!("unexpected verdict {other:?}")),
    };
    let found: Vec<(usize, usize)> = pairs.iter().map(|p: &DegeneratePair| (p.left, p.right)).collect();
    ensure(found == [(0, 5), (1, 4), (2, 7), (3, 6)], format!("pairs {found:?}"))?;
    ensure(pairs.iter().all(|p| p.identical), "pairs are not identical up to phase")?;

    let table7 = PRINTED_TABLES[6];
    let state = named_state("ghz_like_bell").unwrap();
    let w = check_useful("ghz_like_bell", &state, &table7.operators(), &[1, 2]).map_err(|e| e.to_string())?;
    match w.witness() {
        Some(FailureWitness::NotAGroup { left, right, product })
            if *left == 7 && *right == 6 && product.to_string() == "YZ" => {}
        other => return Err(format!("table 07 witness {other:?}")),
    }
    Ok("G2^3(8) on GHZ: U0=U5, U1=U4, U2=U7, U3=U6; printed non-group set: U7·U6 = iY⊗Z missing".into())
}

fn oracle_equivalence() -> Verdict {
    let mut pairs = Vec::new();
    for width in 1..=2 {
        let all: Vec<PauliString> = (0..1u64 << (2 * width)).map(|c| PauliString::from_code(width, c).unwrap()).collect();
        for p in &all {
            for q in &all {
                pairs.push((*p, *q));
            }
        }
    }
    let exhaustive = pairs.len();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..1000 {
        let [a, b] = [rng.random_range(0..64u64), rng.random_range(0..64u64)];
        pairs.push((PauliString::from_code(3, a).unwrap(), PauliString::from_code(3, b).unwrap()));
    }
    let worst = pairs
        .par_iter()
        .map(|(p, q)| phase_aligned_deviation(&(string(p) * string(q)), &string(&p.mul(q).unwrap())))
        .reduce(|| 0.0, f64::max);
    ensure(worst < 1e-12, format!("max deviation {worst:e}"))?;
    Ok(format!("{exhaustive} exhaustive pairs (widths 1-2) + 1000 random width-3 pairs, max deviation {worst:e}"))
}

fn subgroup_enumeration() -> Verdict {
    let g2 = named_group("G2").unwrap();
    let found: BTreeSet<BTreeSet<u64>> = enumerate_subgroups(&g2, 8)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|s| s.elements().iter().map(|e| e.code()).collect())
        .collect();
    // closures of all generating triples
    let mut oracle = BTreeSet::new();
    for a in 1..16u64 {
        for b in a + 1..16 {
            for c in b + 1..16 {
                let set: BTreeSet<u64> = (0..8u64)
                    .map(|m| [a, b, c].iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).fold(0, |acc, (_, g)| acc ^ g))
                    .collect();
                if set.len() == 8 {
                    oracle.insert(set);
                }
            }
        }
    }
    ensure(found.len() == 15, format!("{} subgroups", found.len()))?;
    ensure(found == oracle, "differs from generating-set oracle")?;
    let ids: Vec<String> = enumerate_subgroups(&g2, 8).unwrap().iter().map(subgroup_id).collect();
    let named: Vec<&str> = GROUP_NAMES.iter().copied().filter(|n| n.starts_with("G2^")).collect();
    ensure(named.len() == 11, "catalog lists 11 order-8 groups")?;
    for n in &named {
        ensure(ids.iter().any(|id| id == n), format!("{n} missing"))?;
    }
    Ok("15 subgroups = generating-set oracle; all 11 named G2^k(8) present, 4 unnamed".into())
}

fn scan_summary() -> Verdict {
    let report = scan_report(&[]).map_err(|e| e.to_string())?;
    let mut verified = 0;
    let mut notes = Vec::new();
    for c in &report.claims {
        ensure(!c.conflicts_with_print(), format!("{} {} contradicts printed table", c.state, c.group))?;
        let row = report.rows.iter().find(|r| r.state == c.state && r.positions == c.positions).unwrap();
        if c.verified {
            ensure(row.passing.contains(&c.group), "verified claim missing from scan")?;
            verified += 1;
        } else {
            let alt: Vec<String> = c.holds_at.iter().map(|p| format!("{p:?}")).collect();
            notes.push(format!("{} {} fails at {:?}, holds at {}", c.state, c.group, c.positions, alt.join(" ")));
        }
    }
    let total: usize = summary_claims().iter().map(|c| c.groups.len()).sum();
    ensure(report.claims.len() == total, "claims missing")?;
    ensure(total - verified == notes.len(), "unreported failures")?;
    Ok(format!("{verified}/{total} claims verified; discrepancies reported: {}", notes.join("; ")))
}

/// Each summary scheme on its default qubits, or on the first qubits
/// where the scan found it working.
fn summary_schemes_with_fallback() -> Vec<EncodingScheme> {
    let report = scan_report(&[]).unwrap();
    report
        .claims
        .iter()
        .map(|c| {
            let positions = if c.verified { c.positions.clone() } else { c.holds_at[0].clone() };
            scheme_at(&c.state, &c.group, &positions)
        })
        .collect()
}

fn round_trip() -> Verdict {
    let start = Instant::now();
    let schemes = summary_schemes_with_fallback();
    let mut runs = 0usize;
    for sc in &schemes {
        let order = sc.group().order();
        let table = sc.group().multiplication_table();
        let failures: usize = (0..order * order)
            .into_par_iter()
            .map(|k| {
                let (i, j) = (k / order, k % order);
                let (bob, alice) = (sc.label_of(i), sc.label_of(j));
                let cfg = ProtocolConfig::new(sc.clone(), 1, k as u64);
                let (out, _) = run_dialogue(&cfg, &bob, &alice, EveStrategy::None).unwrap();
                let ok = !out.detected
                    && out.alice_decoded.as_deref() == Some(bob.as_str())
                    && out.bob_decoded.as_deref() == Some(alice.as_str())
                    && out.final_indices == Some(vec![table[j][i]]);
                usize::from(!ok)
            })
            .sum();
        ensure(failures == 0, format!("{} {}: {failures} failures", sc.state_label(), sc.group().label()))?;
        runs += order * order;
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(60), "round trip")?;
    Ok(format!("{} schemes, {runs} runs, all decoded, final index law holds, {elapsed:.2?}", schemes.len()))
}

fn eve_statistics() -> Verdict {
    let mut parts = Vec::new();
    for (state, group, expect) in [("bell_phi_plus", "G1", 0.25), ("ghz", "G2^1(8)", 0.125), ("brown5", "G3^7(32)", 1.0 / 32.0)] {
        let g = eve_guess_success(&scheme(state, group), 10_000, 17).map_err(|e| e.to_string())?;
        ensure((g.analytic - expect).abs() < 1e-15, "analytic rate")?;
        let z = (g.empirical - g.analytic) / g.sigma;
        ensure(z.abs() <= 3.0, format!("{state}/{group}: {} vs {} ({z:.2}σ)", g.empirical, g.analytic))?;
        parts.push(format!("{group} {:.4} ({z:+.2}σ)", g.empirical));
    }
    Ok(parts.join(", "))
}

fn decoy_detection() -> Verdict {
    let sc = scheme("bell_phi_plus", "G1");
    let copies = 48;
    let runs: Vec<(usize, bool)> = (0..1000u64)
        .into_par_iter()
        .map(|seed| {
            let mut cfg = ProtocolConfig::new(sc.clone(), copies, seed);
            cfg.error_threshold = 0.0;
            let msg = "01".repeat(copies);
            let (out, _) = run_dialogue(&cfg, &msg, &msg, EveStrategy::InterceptResend).unwrap();
            (out.leg1.matched, out.leg1.detected)
        })
        .collect();
    let kept: Vec<&(usize, bool)> = runs.iter().filter(|r| r.0 >= 20).collect();
    let k = kept.len() as f64;
    ensure(kept.len() >= 500, format!("only {} runs with ≥20 matched decoys", kept.len()))?;
    let p: Vec<f64> = kept.iter().map(|r| 1.0 - 0.75f64.powi(r.0 as i32)).collect();
    let expected = p.iter().sum::<f64>() / k;
    let sigma = p.iter().map(|x| x * (1.0 - x)).sum::<f64>().sqrt() / k;
    let observed = kept.iter().filter(|r| r.1).count() as f64 / k;
    let z = if sigma > 0.0 { (observed - expected) / sigma } else { 0.0 };
    ensure((observed - expected).abs() <= 3.0 * sigma, format!("{observed} vs {expected} (σ {sigma:e})"))?;
    Ok(format!("{} runs kept, detected {observed:.4} vs expected {expected:.6} ({z:+.2}σ)", kept.len()))
}

fn smp_correctness() -> Verdict {
    let mut cases = 0;
    for (state, group) in [("bell_phi_plus", "G1"), ("ghz", "G2^1(8)")] {
        let sc = scheme(state, group);
        let order = sc.group().order();
        let msgs = all_messages(sc.message_bits());
        for (i, a) in msgs.iter().enumerate() {
            for (j, b) in msgs.iter().enumerate() {
                let cfg = SmpConfig::new(sc.clone(), (i * order + j) as u64);
                let (out, _) = run_smp(&cfg, a, b, EveStrategy::None).map_err(|e| e.to_string())?;
                ensure(out.equal == (a == b), format!("{state}: a={a} b={b}"))?;
                cases += 1;
            }
        }
        for f in 0..order {
            for i in 0..order {
                ensure(charlie_knowledge(&sc, f, i).unwrap() == order, "knowledge count")?;
            }
        }
    }
    let brown = scheme("brown5", "G3^7(32)");
    ensure(charlie_knowledge(&brown, 3, 9).unwrap() == 32, "G3^7(32) knowledge")?;
    Ok(format!("{cases} input pairs exact; charlie_knowledge = |G| for every observation"))
}

fn determinism() -> Verdict {
    let commands: [&[&str]; 9] = [
        &["list"],
        &["table", "--table", "3"],
        &["table", "--state", "ghz", "--group", "G2^1(8)", "--positions", "1,2", "--format", "json"],
        &["check", "--state", "ghz_like", "--group", "II,XX,ZI,YI,IX,XI,IY,YX", "--positions", "1,2"],
        &["scan", "--format", "csv"],
        &["simulate", "--state", "ghz", "--group", "G2^1(8)", "--copies", "6", "--seed", "31", "--eve", "intercept-resend"],
        &["simulate", "--state", "bell_phi_plus", "--group", "G1", "--copies", "8", "--trials", "100", "--seed", "4"],
        &["smp", "--state", "brown5", "--group", "G3^7(32)", "--a", "10101", "--b", "10101", "--seed", "12"],
        &["enumerate", "--ambient", "G2", "--order", "8", "--format", "json"],
    ];
    for args in commands {
        let run = || Command::new(env!("CARGO_BIN_EXE_qdialogue")).args(args).output().unwrap();
        let (a, b) = (run(), run());
        ensure(!a.stdout.is_empty(), format!("{args:?}: no output"))?;
        ensure(a.stdout == b.stdout && a.status.code() == b.status.code(), format!("{args:?} differs"))?;
    }
    Ok(format!("{} commands byte-identical across repeated runs", commands.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("table reproduction", table_reproduction),
        ("failure-case fidelity", failure_cases),
        ("oracle equivalence", oracle_equivalence),
        ("subgroup enumeration", subgroup_enumeration),
        ("scan summary", scan_summary),
        ("protocol round trip", round_trip),
        ("eve statistics", eve_statistics),
        ("decoy detection", decoy_detection),
        ("smp correctness", smp_correctness),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (n, (name, f)) in criteria.iter().enumerate() {
        let (tag, detail) = match f() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {:>2} {tag} {name}: {detail}", n + 1);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
