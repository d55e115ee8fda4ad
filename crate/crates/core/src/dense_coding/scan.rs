use rayon::prelude::*;
use serde::Serialize;

use super::{check_useful, DenseError, PrintedKind, PRINTED_TABLES};
use crate::pauli::{enumerate_subgroups, named_group, subgroup_id, OperatorGroup, GROUP_NAMES};
use crate::state::named_state;

/// Qubits that carry the encoding for each catalog state.
pub fn default_positions(state: &str) -> Option<Vec<usize>> {
    let p: &[usize] = match state {
        "bell_phi_plus" | "phi_plus" | "phi_minus" | "psi_plus" | "psi_minus" => &[2],
        "ghz" | "ghz_like" | "ghz_like_bell" | "w4" | "q4" | "q5" => &[1, 2],
        "omega4" | "cluster4" => &[1, 3],
        "brown5" | "cluster5" => &[1, 2, 3],
        _ => return None,
    };
    Some(p.to_vec())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanTarget {
    pub state: String,
    pub positions: Vec<usize>,
}

impl ScanTarget {
    pub fn new(state: &str, positions: Vec<usize>) -> Self {
        Self {
            state: state.to_string(),
            positions,
        }
    }

    pub fn with_default_positions(state: &str) -> Option<Self> {
        default_positions(state).map(|p| Self::new(state, p))
    }
}

/// Candidate groups for an `n`-qubit state encoded on `width` qubits: every
/// subgroup of the full width-`width` group of order `2ⁿ`, plus the index-2
/// subgroups when `n = 2·width`. Catalog groups come first under their
/// names, the rest carry synthetic IDs.
pub fn scan_groups(n: usize, width: usize) -> Result<Vec<OperatorGroup>, DenseError> {
    let full = match width {
        1 => named_group("G1")?,
        2 => named_group("G2")?,
        3 => named_group("G3")?,
        _ => return Ok(Vec::new()),
    };
    let mut orders = vec![1usize << n];
    if n == 2 * width {
        orders.push(1 << (n - 1));
    }
    let mut named: Vec<OperatorGroup> = Vec::new();
    let mut synthetic: Vec<OperatorGroup> = Vec::new();
    for order in orders.into_iter().filter(|&o| o <= full.order()) {
        for g in enumerate_subgroups(&full, order)? {
            let id = subgroup_id(&g);
            if GROUP_NAMES.contains(&id.as_str()) {
                named.push(named_group(&id)?);
            } else {
                synthetic.push(g.with_name(id));
            }
        }
    }
    let rank = |g: &OperatorGroup| GROUP_NAMES.iter().position(|n| Some(*n) == g.name());
    named.sort_by_key(rank);
    named.extend(synthetic);
    Ok(named)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SummaryRow {
    pub state: String,
    pub positions: Vec<usize>,
    /// Labels of the groups that pass, in the order they were given.
    pub passing: Vec<String>,
}

/// Checks every group of matching width against every target.
pub fn scan_catalog(
    targets: &[ScanTarget],
    groups: &[OperatorGroup],
) -> Result<Vec<SummaryRow>, DenseError> {
    targets
        .par_iter()
        .map(|t| {
            let state = named_state(&t.state)?;
            let passing = groups
                .par_iter()
                .filter(|g| g.width() == t.positions.len())
                .map(|g| {
                    check_useful(&t.state, &state, g.elements(), &t.positions)
                        .map(|v| v.is_useful().then(|| g.label()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(SummaryRow {
                state: t.state.clone(),
                positions: t.positions.clone(),
                passing: passing.into_iter().flatten().collect(),
            })
        })
        .collect()
}

/// [`scan_catalog`] with each target checked against [`scan_groups`] for
/// its own qubit count. Rows follow target order.
pub fn scan_targets(targets: &[ScanTarget]) -> Result<Vec<SummaryRow>, DenseError> {
    targets
        .iter()
        .map(|t| {
            let n = named_state(&t.state)?.n();
            let groups = scan_groups(n, t.positions.len())?;
            Ok(scan_catalog(std::slice::from_ref(t), &groups)?.remove(0))
        })
        .collect()
}

/// One row of the published summary of useful states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SummaryClaim {
    pub state: &'static str,
    pub groups: &'static [&'static str],
}

pub fn summary_claims() -> &'static [SummaryClaim] {
    const CLAIMS: [SummaryClaim; 10] = [
        SummaryClaim { state: "q4", groups: &["G2^6(8)", "G2^7(8)"] },
        SummaryClaim { state: "ghz", groups: &["G2^1(8)", "G2^2(8)", "G2^4(8)", "G2^5(8)"] },
        SummaryClaim {
            state: "ghz_like",
            groups: &["G2^2(8)", "G2^3(8)", "G2^5(8)", "G2^6(8)", "G2^8(8)", "G2^9(8)"],
        },
        SummaryClaim { state: "w4", groups: &["G2^8(8)", "G2^9(8)"] },
        SummaryClaim { state: "q5", groups: &["G2^3(8)", "G2^4(8)", "G2^5(8)"] },
        SummaryClaim { state: "cluster4", groups: &["G2"] },
        SummaryClaim { state: "omega4", groups: &["G2"] },
        SummaryClaim { state: "bell_phi_plus", groups: &["G1"] },
        SummaryClaim {
            state: "brown5",
            groups: &["G3^1(32)", "G3^2(32)", "G3^4(32)", "G3^5(32)", "G3^7(32)", "G3^8(32)"],
        },
        SummaryClaim {
            state: "cluster5",
            groups: &["G3^4(32)", "G3^5(32)", "G3^7(32)", "G3^8(32)"],
        },
    ];
    &CLAIMS
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimCheck {
    pub state: String,
    pub group: String,
    pub positions: Vec<usize>,
    pub verified: bool,
    /// Printed table that tabulates this encoding, if any.
    pub printed_table: Option<u8>,
    /// For failed claims: every ordered choice of qubits where the group works.
    pub holds_at: Vec<Vec<usize>>,
}

impl ClaimCheck {
    /// A failed claim that a printed table also asserts.
    pub fn conflicts_with_print(&self) -> bool {
        !self.verified && self.printed_table.is_some()
    }
}

fn printed_backing(state: &str, group: &str) -> Option<u8> {
    PRINTED_TABLES.iter().find_map(|t| match t.kind {
        PrintedKind::Encoding {
            states,
            group: Some(g),
            useful: true,
            ..
        } if g == group && states.contains(&state) => Some(t.number),
        _ => None,
    })
}

fn ordered_choices(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in ordered_choices(n, k - 1) {
        for q in 1..=n {
            if !rest.contains(&q) {
                let mut v = rest.clone();
                v.push(q);
                out.push(v);
            }
        }
    }
    out.sort();
    out
}

/// Compares scan rows with the published claims. Claims that fail are
/// re-tested on every other choice of qubits.
pub fn verify_claims(rows: &[SummaryRow]) -> Result<Vec<ClaimCheck>, DenseError> {
    let mut out = Vec::new();
    for claim in summary_claims() {
        let positions = default_positions(claim.state).expect("claimed states have positions");
        let found = rows
            .iter()
            .find(|r| r.state == claim.state && r.positions == positions);
        for &group in claim.groups {
            let verified = found.is_some_and(|r| r.passing.iter().any(|p| p == group));
            let holds_at = if verified {
                Vec::new()
            } else {
                let state = named_state(claim.state)?;
                let g = named_group(group)?;
                let mut holds = Vec::new();
                for choice in ordered_choices(state.n(), g.width()) {
                    if check_useful(claim.state, &state, g.elements(), &choice)?.is_useful() {
                        holds.push(choice);
                    }
                }
                holds
            };
            out.push(ClaimCheck {
                state: claim.state.to_string(),
                group: group.to_string(),
                positions: positions.clone(),
                verified,
                printed_table: printed_backing(claim.state, group),
                holds_at,
            });
        }
    }
    Ok(out)
}
