//! Layout of the published tables: which state, operators, qubits and row
//! order each one uses. Numbers follow document order.

use crate::pauli::{named_group, OperatorGroup, PauliError, PauliString};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrintedKind {
    /// Encoded states of one or more initial states, one row per operator.
    Encoding {
        states: &'static [&'static str],
        /// `None` when the operator list is not a group.
        group: Option<&'static str>,
        positions: &'static [usize],
        rows: &'static str,
        /// The table presents a working dialogue encoding.
        useful: bool,
    },
    /// Multiplication table of a group in the given row order.
    Multiplication {
        group: &'static str,
        rows: &'static str,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrintedTable {
    pub number: u8,
    pub caption: &'static str,
    pub kind: PrintedKind,
}

impl PrintedTable {
    /// Operators in printed row order.
    pub fn operators(&self) -> Vec<PauliString> {
        let rows = match self.kind {
            PrintedKind::Encoding { rows, .. } | PrintedKind::Multiplication { rows, .. } => rows,
        };
        rows.split_whitespace()
            .map(|s| s.parse().expect("printed rows parse"))
            .collect()
    }

    /// The named group re-listed in printed row order, when there is one.
    pub fn group(&self) -> Option<Result<OperatorGroup, PauliError>> {
        let name = match self.kind {
            PrintedKind::Encoding { group, .. } => group?,
            PrintedKind::Multiplication { group, .. } => group,
        };
        Some(named_group(name).and_then(|g| g.reordered(&self.operators())))
    }

    pub fn is_useful_encoding(&self) -> bool {
        matches!(self.kind, PrintedKind::Encoding { useful: true, .. })
    }
}

const fn encoding(
    number: u8,
    caption: &'static str,
    states: &'static [&'static str],
    group: Option<&'static str>,
    positions: &'static [usize],
    rows: &'static str,
    useful: bool,
) -> PrintedTable {
    PrintedTable {
        number,
        caption,
        kind: PrintedKind::Encoding {
            states,
            group,
            positions,
            rows,
            useful,
        },
    }
}

pub const PRINTED_TABLES: [PrintedTable; 14] = [
    PrintedTable {
        number: 1,
        caption: "multiplication table of G1",
        kind: PrintedKind::Multiplication {
            group: "G1",
            rows: "I X Y Z",
        },
    },
    encoding(
        2,
        "Omega and 4-qubit cluster states encoded by G2 on qubits 1,3",
        &["omega4", "cluster4"],
        Some("G2"),
        &[1, 3],
        "II IZ ZI ZZ IX IY ZX ZY XI XZ YI YZ XX XY YX YY",
        true,
    ),
    encoding(
        3,
        "GHZ state encoded by G2^1(8) on qubits 1,2",
        &["ghz"],
        Some("G2^1(8)"),
        &[1, 2],
        "II ZI XI YI IX ZX XX YX",
        true,
    ),
    encoding(
        4,
        "GHZ state encoded by G2^2(8) on qubits 1,2",
        &["ghz"],
        Some("G2^2(8)"),
        &[1, 2],
        "II ZI XI YI IY ZY XY YY",
        true,
    ),
    PrintedTable {
        number: 5,
        caption: "multiplication table of G2^1(8)",
        kind: PrintedKind::Multiplication {
            group: "G2^1(8)",
            rows: "II ZI XI YI IX ZX XX YX",
        },
    },
    encoding(
        6,
        "GHZ state under G2^3(8): a group whose encoded states repeat",
        &["ghz"],
        Some("G2^3(8)"),
        &[1, 2],
        "II ZI XI YI IZ ZZ XZ YZ",
        false,
    ),
    encoding(
        7,
        "Bell-pair form of a GHZ-like state: orthogonal outputs, operators not a group",
        &["ghz_like_bell"],
        None,
        &[1, 2],
        "II XX ZI YI IX XI IY YX",
        false,
    ),
    encoding(
        8,
        "GHZ-like and W4 states encoded by G2^9(8) on qubits 1,2",
        &["ghz_like", "w4"],
        Some("G2^9(8)"),
        &[1, 2],
        "II ZZ XY YX XI YZ ZX IY",
        true,
    ),
    encoding(
        9,
        "W4 state encoded by G2^8(8) on qubits 1,2",
        &["w4"],
        Some("G2^8(8)"),
        &[1, 2],
        "II ZZ XY YX IX ZY YI XZ",
        true,
    ),
    encoding(
        10,
        "GHZ-like state encoded by G2^3(8) on qubits 1,2",
        &["ghz_like"],
        Some("G2^3(8)"),
        &[1, 2],
        "II ZI XI YI IZ ZZ XZ YZ",
        true,
    ),
    encoding(
        11,
        "GHZ-like and Q4 states encoded by G2^6(8) on qubits 1,2",
        &["ghz_like", "q4"],
        Some("G2^6(8)"),
        &[1, 2],
        "II IZ IX IY ZI ZZ ZX ZY",
        true,
    ),
    encoding(
        12,
        "Q4 state encoded by G2^7(8) on qubits 1,2",
        &["q4"],
        Some("G2^7(8)"),
        &[1, 2],
        "II IZ ZI ZZ XX YX XY YY",
        true,
    ),
    encoding(
        13,
        "Q5 state encoded by G2^4(8) on qubits 1,2",
        &["q5"],
        Some("G2^4(8)"),
        &[1, 2],
        "II XI IX XX IY XY IZ XZ",
        true,
    ),
    encoding(
        14,
        "5-qubit cluster and Brown states encoded by G3^7(32) on qubits 1,2,3",
        &["cluster5", "brown5"],
        Some("G3^7(32)"),
        &[1, 2, 3],
        "III XII YII ZII IIX XIX YIX ZIX IIY XIY YIY ZIY IIZ XIZ YIZ ZIZ \
         IXI XXI YXI ZXI IXX XXX YXX ZXX IXY XXY YXY ZXY IXZ XXZ YXZ ZXZ",
        true,
    ),
];

pub fn printed_table(number: u8) -> Option<&'static PrintedTable> {
    PRINTED_TABLES.iter().find(|t| t.number == number)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_group_listing_is_a_reordering() {
        for t in &PRINTED_TABLES {
            if let Some(g) = t.group() {
                let g = g.unwrap_or_else(|e| panic!("table {}: {e}", t.number));
                assert_eq!(g.order(), t.operators().len());
            }
        }
        assert!(printed_table(7).unwrap().group().is_none());
        assert!(printed_table(15).is_none());
    }
}
