//! Useful-dense-coding checks: an operator set is accepted when it is a
//! group and maps the initial state onto mutually orthogonal states.

mod formula;
mod printed;
mod scan;

use num_complex::Complex64;
use serde::Serialize;

use crate::pauli::{is_group, GroupCheck, OperatorGroup, PauliError, PauliString};
use crate::state::{StateError, StateVector, CHECK_TOL};

pub use formula::{format_formula, parse_formula, FormulaError, ParsedFormula};
pub use printed::{printed_table, PrintedKind, PrintedTable, PRINTED_TABLES};
pub use scan::{
    default_positions, scan_catalog, scan_groups, scan_targets, summary_claims, verify_claims, ClaimCheck,
    ScanTarget, SummaryClaim, SummaryRow,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DenseError {
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error("unknown printed table {0}")]
    UnknownTable(u8),
}

/// A validated encoding: `basis[i] = gᵢ|φ₀⟩`, message `i` in binary selects `gᵢ`.
#[derive(Debug, Clone)]
pub struct EncodingScheme {
    state_label: String,
    state: StateVector,
    group: OperatorGroup,
    positions: Vec<usize>,
    basis: Vec<StateVector>,
}

impl EncodingScheme {
    pub fn state_label(&self) -> &str {
        &self.state_label
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn group(&self) -> &OperatorGroup {
        &self.group
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    /// Encoded states in group element order.
    pub fn basis(&self) -> &[StateVector] {
        &self.basis
    }

    /// Classical bits carried by one encoding.
    pub fn message_bits(&self) -> usize {
        self.group.bits_per_element()
    }

    /// Binary label of element `index`.
    pub fn label_of(&self, index: usize) -> String {
        format!("{:0width$b}", index, width = self.message_bits())
    }

    /// Element index selected by a binary label.
    pub fn index_of_label(&self, label: &str) -> Option<usize> {
        if label.len() != self.message_bits() || !label.chars().all(|c| c == '0' || c == '1') {
            return None;
        }
        if label.is_empty() {
            return Some(0);
        }
        usize::from_str_radix(label, 2).ok()
    }

    /// Index of the basis state equal to `s` up to phase.
    pub fn decode(&self, s: &StateVector) -> Option<usize> {
        self.basis
            .iter()
            .position(|b| b.equal_up_to_phase(s, CHECK_TOL))
    }

    /// Orthonormal basis of the full register whose leading vectors are the
    /// encoded states. Extra vectors come from Gram-Schmidt over the
    /// computational basis.
    pub fn measurement_basis(&self) -> Vec<StateVector> {
        let dim = self.state.dim();
        let mut out: Vec<StateVector> = self.basis.clone();
        for e in 0..dim {
            if out.len() == dim {
                break;
            }
            let mut v: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); dim];
            v[e] = Complex64::new(1.0, 0.0);
            for b in &out {
                let c: Complex64 = b.amps()[e].conj();
                v.iter_mut().zip(b.amps()).for_each(|(x, y)| *x -= c * y);
            }
            let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-6 {
                out.push(StateVector::normalized(v).expect("nonzero residual"));
            }
        }
        out
    }

    pub fn rows(&self) -> Vec<TableRow> {
        encode_rows(&self.state, self.group.elements(), &self.positions)
            .expect("scheme was validated")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegeneratePair {
    pub left: usize,
    pub right: usize,
    pub overlap: f64,
    /// The two encoded states coincide up to a global phase.
    pub identical: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FailureWitness {
    /// `elements[left] · elements[right] = product` lies outside the set.
    NotAGroup {
        left: usize,
        right: usize,
        product: PauliString,
    },
    /// Every pair of encoded states that is not orthogonal.
    DegenerateOutputs { pairs: Vec<DegeneratePair> },
}

impl std::fmt::Display for FailureWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FailureWitness::NotAGroup {
                left,
                right,
                product,
            } => write!(f, "not a group: U{left}·U{right} = {} is not in the set", product.pretty()),
            FailureWitness::DegenerateOutputs { pairs } => {
                write!(f, "encoded states not orthogonal:")?;
                for p in pairs {
                    let rel = if p.identical { "=" } else { "~" };
                    write!(f, " (U{} {rel} U{}, |overlap| {:.6})", p.left, p.right, p.overlap)?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone)]
pub enum Verdict {
    Useful(Box<EncodingScheme>),
    NotUseful(FailureWitness),
}

impl Verdict {
    pub fn is_useful(&self) -> bool {
        matches!(self, Verdict::Useful(_))
    }

    pub fn scheme(self) -> Option<EncodingScheme> {
        match self {
            Verdict::Useful(s) => Some(*s),
            Verdict::NotUseful(_) => None,
        }
    }

    pub fn witness(&self) -> Option<&FailureWitness> {
        match self {
            Verdict::Useful(_) => None,
            Verdict::NotUseful(w) => Some(w),
        }
    }
}

/// Closure first, then orthogonality of the encoded states.
pub fn check_useful(
    state_label: &str,
    state: &StateVector,
    elements: &[PauliString],
    positions: &[usize],
) -> Result<Verdict, DenseError> {
    match is_group(elements)? {
        GroupCheck::Group => {}
        GroupCheck::NotClosed {
            left,
            right,
            product,
        } => {
            return Ok(Verdict::NotUseful(FailureWitness::NotAGroup {
                left,
                right,
                product,
            }))
        }
        GroupCheck::Empty => return Err(PauliError::Empty.into()),
    }
    let encoded = elements
        .iter()
        .map(|g| state.apply(g, positions))
        .collect::<Result<Vec<_>, _>>()?;
    let mut pairs = Vec::new();
    for i in 0..encoded.len() {
        for j in i + 1..encoded.len() {
            let overlap = encoded[i].inner(&encoded[j])?.norm();
            if overlap > CHECK_TOL {
                pairs.push(DegeneratePair {
                    left: i,
                    right: j,
                    overlap,
                    identical: overlap >= 1.0 - CHECK_TOL,
                });
            }
        }
    }
    if !pairs.is_empty() {
        return Ok(Verdict::NotUseful(FailureWitness::DegenerateOutputs { pairs }));
    }
    let group = OperatorGroup::new(None, elements.to_vec())?;
    Ok(Verdict::Useful(Box::new(EncodingScheme {
        state_label: state_label.to_string(),
        state: state.clone(),
        group,
        positions: positions.to_vec(),
        basis: encoded,
    })))
}

/// [`check_useful`] on a group, keeping its name on the scheme.
pub fn check_group(
    state_label: &str,
    state: &StateVector,
    group: &OperatorGroup,
    positions: &[usize],
) -> Result<Verdict, DenseError> {
    Ok(
        match check_useful(state_label, state, group.elements(), positions)? {
            Verdict::Useful(mut scheme) => {
                scheme.group = group.clone();
                Verdict::Useful(scheme)
            }
            other => other,
        },
    )
}

/// One encoding-table row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub index: usize,
    pub operator: PauliString,
    pub formula: String,
}

/// Rows `gᵢ|φ⟩` for any operator list, closed or not.
pub fn encode_rows(
    state: &StateVector,
    elements: &[PauliString],
    positions: &[usize],
) -> Result<Vec<TableRow>, DenseError> {
    elements
        .iter()
        .enumerate()
        .map(|(index, g)| {
            Ok(TableRow {
                index,
                operator: *g,
                formula: format_formula(&state.apply(g, positions)?),
            })
        })
        .collect()
}

/// Rows of a valid scheme in group element order.
pub fn emit_table(scheme: &EncodingScheme) -> Vec<TableRow> {
    scheme.rows()
}
