//! Text, CSV and JSON renderings of tables and reports.

use serde::Serialize;

use crate::dense_coding::{ClaimCheck, FailureWitness, SummaryRow};
use crate::pauli::{OperatorGroup, PauliString};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

/// An encoding table with one formula column per initial state.
#[derive(Debug, Clone, Serialize)]
pub struct EncodingDoc {
    pub table: Option<u8>,
    pub caption: String,
    pub group: String,
    pub positions: Vec<usize>,
    pub states: Vec<String>,
    pub rows: Vec<DocRow>,
    /// Why the operator list fails as a dialogue encoding, per state.
    pub witnesses: Vec<Option<FailureWitness>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DocRow {
    pub index: usize,
    pub operator: PauliString,
    pub formulas: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MulDoc {
    pub table: Option<u8>,
    pub caption: String,
    pub group: String,
    pub elements: Vec<PauliString>,
    /// `rows[i][j]` is the index of `gᵢ·gⱼ`.
    pub rows: Vec<Vec<usize>>,
}

impl MulDoc {
    pub fn new(table: Option<u8>, caption: String, group: &OperatorGroup) -> Self {
        Self {
            table,
            caption,
            group: group.label(),
            elements: group.elements().to_vec(),
            rows: group.multiplication_table(),
        }
    }
}

fn csv_string(records: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.write_record(r).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv")
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn header(table: Option<u8>, caption: &str) -> String {
    match table {
        Some(n) => format!("# table {n:02}: {caption}\n"),
        None => format!("# {caption}\n"),
    }
}

fn join_positions(p: &[usize]) -> String {
    p.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

/// CSV columns: `table,row,operator,state,formula`.
pub fn encoding(doc: &EncodingDoc, format: Format) -> String {
    match format {
        Format::Json => json(doc),
        Format::Csv => {
            let mut records = vec![["table", "row", "operator", "state", "formula"]
                .map(String::from)
                .to_vec()];
            for row in &doc.rows {
                for (state, formula) in doc.states.iter().zip(&row.formulas) {
                    records.push(vec![
                        doc.table.map(|t| t.to_string()).unwrap_or_default(),
                        format!("U{}", row.index),
                        row.operator.to_string(),
                        state.clone(),
                        formula.clone(),
                    ]);
                }
            }
            csv_string(records)
        }
        Format::Text => {
            let mut out = header(doc.table, &doc.caption);
            out.push_str(&format!(
                "# group {} on qubits {}; states {}\n",
                doc.group,
                join_positions(&doc.positions),
                doc.states.join(", ")
            ));
            let width = doc.rows.iter().map(|r| r.operator.pretty().chars().count()).max().unwrap_or(0);
            for row in &doc.rows {
                let label = format!("U{}", row.index);
                let op = row.operator.pretty();
                let pad = width - op.chars().count();
                out.push_str(&format!("{label:<4} {op}{}", " ".repeat(pad)));
                for f in &row.formulas {
                    out.push_str("  ");
                    out.push_str(f);
                }
                out.push('\n');
            }
            for (state, w) in doc.states.iter().zip(&doc.witnesses) {
                if let Some(w) = w {
                    out.push_str(&format!("# {state}: {w}\n"));
                }
            }
            out
        }
    }
}

/// CSV columns: `row,column,product` as element labels.
pub fn multiplication(doc: &MulDoc, format: Format) -> String {
    let label = |i: usize| format!("U{i}");
    match format {
        Format::Json => json(doc),
        Format::Csv => {
            let mut records = vec![["row", "column", "product"].map(String::from).to_vec()];
            for (i, row) in doc.rows.iter().enumerate() {
                for (j, &k) in row.iter().enumerate() {
                    records.push(vec![label(i), label(j), label(k)]);
                }
            }
            csv_string(records)
        }
        Format::Text => {
            let mut out = header(doc.table, &doc.caption);
            let names: Vec<String> = doc
                .elements
                .iter()
                .enumerate()
                .map(|(i, e)| format!("U{i}={}", e.pretty()))
                .collect();
            out.push_str(&format!("# {}\n", names.join(" ")));
            let cell = doc.rows.len().saturating_sub(1).to_string().len() + 1;
            out.push_str(&" ".repeat(cell + 1));
            for j in 0..doc.rows.len() {
                out.push_str(&format!(" {:>cell$}", label(j)));
            }
            out.push('\n');
            for (i, row) in doc.rows.iter().enumerate() {
                out.push_str(&format!("{:>w$}", label(i), w = cell + 1));
                for &k in row {
                    out.push_str(&format!(" {:>cell$}", label(k)));
                }
                out.push('\n');
            }
            out
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub rows: Vec<SummaryRow>,
    pub claims: Vec<ClaimCheck>,
}

impl ScanReport {
    pub fn discrepancies(&self) -> impl Iterator<Item = &ClaimCheck> {
        self.claims.iter().filter(|c| !c.verified)
    }
}

/// CSV columns: `state,qubits,group,claimed,verified`.
pub fn scan(report: &ScanReport, format: Format) -> String {
    match format {
        Format::Json => json(report),
        Format::Csv => {
            let mut records = vec![["state", "qubits", "group", "claimed", "verified"]
                .map(String::from)
                .to_vec()];
            for row in &report.rows {
                for g in &row.passing {
                    let claimed = report
                        .claims
                        .iter()
                        .any(|c| c.state == row.state && &c.group == g);
                    records.push(vec![
                        row.state.clone(),
                        join_positions(&row.positions),
                        g.clone(),
                        claimed.to_string(),
                        "true".into(),
                    ]);
                }
            }
            for c in report.discrepancies() {
                records.push(vec![
                    c.state.clone(),
                    join_positions(&c.positions),
                    c.group.clone(),
                    "true".into(),
                    "false".into(),
                ]);
            }
            csv_string(records)
        }
        Format::Text => {
            let mut out = String::from("# useful encodings found by the scan\n");
            for row in &report.rows {
                out.push_str(&format!(
                    "{:<14} qubits {:<6} {}\n",
                    row.state,
                    join_positions(&row.positions),
                    row.passing.join(" ")
                ));
            }
            out.push_str("# published summary claims\n");
            for c in &report.claims {
                let status = if c.verified { "verified" } else { "DISCREPANCY" };
                let table = c.printed_table.map(|t| format!(" (table {t:02})")).unwrap_or_default();
                out.push_str(&format!(
                    "{:<14} {:<9} qubits {:<6} {status}{table}\n",
                    c.state,
                    c.group,
                    join_positions(&c.positions)
                ));
                if !c.verified {
                    let alt: Vec<String> = c.holds_at.iter().map(|p| join_positions(p)).collect();
                    let alt = if alt.is_empty() { "none".to_string() } else { alt.join(" ") };
                    out.push_str(&format!("{:<14} works on qubits: {alt}\n", ""));
                }
            }
            out
        }
    }
}
