//! Shared helpers for the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;

use qdialogue::dense_coding::{check_group, default_positions, EncodingScheme};
use qdialogue::pauli::{named_group, PauliString};
use qdialogue::state::named_state;

pub fn manifest_path(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(rel)
}

pub struct FixtureRow {
    pub operator: PauliString,
    pub formulas: Vec<String>,
}

/// A transcribed printed table.
pub enum Fixture {
    Encoding {
        group: Option<String>,
        positions: Vec<usize>,
        states: Vec<&'static str>,
        rows: Vec<FixtureRow>,
    },
    Multiplication {
        elements: Vec<String>,
        rows: Vec<Vec<usize>>,
    },
}

fn leak(s: &str) -> &'static str {
    Box::leak(s.to_string().into_boxed_str())
}

fn u_index(label: &str) -> usize {
    label.strip_prefix('U').and_then(|d| d.parse().ok()).unwrap_or_else(|| panic!("bad label {label}"))
}

pub fn fixture(number: u8) -> Fixture {
    let path = manifest_path(&format!("tests/fixtures/printed/table_{number:02}.txt"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let kind = lines.next().unwrap().strip_prefix("kind ").unwrap();
    let mut header = |key: &str| -> String {
        let line = lines.next().unwrap();
        line.strip_prefix(key).unwrap_or_else(|| panic!("expected {key} in {line}")).trim().to_string()
    };
    match kind {
        "encoding" => {
            let group = header("group ");
            let positions = header("positions ").split(',').map(|p| p.parse().unwrap()).collect();
            let states = header("states ").split_whitespace().map(leak).collect();
            let rows = lines
                .enumerate()
                .map(|(r, line)| {
                    let mut parts = line.split_whitespace();
                    assert_eq!(u_index(parts.next().unwrap()), r);
                    FixtureRow {
                        operator: parts.next().unwrap().parse().unwrap(),
                        formulas: parts.map(str::to_string).collect(),
                    }
                })
                .collect();
            Fixture::Encoding {
                group: (group != "-").then_some(group),
                positions,
                states,
                rows,
            }
        }
        "multiplication" => {
            let elements = header("elements ").split_whitespace().map(str::to_string).collect();
            let rows = lines
                .enumerate()
                .map(|(r, line)| {
                    let mut cells = line.split_whitespace().map(u_index);
                    assert_eq!(cells.next(), Some(r));
                    cells.collect()
                })
                .collect();
            Fixture::Multiplication { elements, rows }
        }
        other => panic!("unknown fixture kind {other}"),
    }
}

/// A catalog scheme on its default qubits.
pub fn scheme(state: &str, group: &str) -> EncodingScheme {
    let positions = default_positions(state).unwrap();
    scheme_at(state, group, &positions)
}

pub fn scheme_at(state: &str, group: &str, positions: &[usize]) -> EncodingScheme {
    let s = named_state(state).unwrap();
    let g = named_group(group).unwrap();
    check_group(state, &s, &g, positions)
        .unwrap()
        .scheme()
        .unwrap_or_else(|| panic!("{group} is not useful for {state}"))
}

/// Every (state, group) pair of the published summary.
pub fn summary_schemes() -> Vec<EncodingScheme> {
    qdialogue::dense_coding::summary_claims()
        .iter()
        .flat_map(|c| c.groups.iter().map(move |g| (c.state, *g)))
        .filter_map(|(s, g)| {
            let positions = default_positions(s).unwrap();
            let state = named_state(s).unwrap();
            check_group(s, &state, &named_group(g).unwrap(), &positions).unwrap().scheme()
        })
        .collect()
}

/// All bit strings of length `k`.
pub fn all_messages(k: usize) -> Vec<String> {
    (0..1usize << k).map(|v| if k == 0 { String::new() } else { format!("{v:0k$b}") }).collect()
}

pub mod matrix {
    //! Dense-matrix oracle built from explicit 2×2 blocks and Kronecker
    //! products, independent of the bit-word arithmetic.
    use nalgebra::DMatrix;
    use num_complex::Complex64;
    use qdialogue::pauli::{PauliLetter, PauliString};

    pub type CMatrix = DMatrix<Complex64>;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    pub fn letter(l: PauliLetter) -> CMatrix {
        let (a, b, cc, d) = match l {
            PauliLetter::I => (1.0, 0.0, 0.0, 1.0),
            PauliLetter::X => (0.0, 1.0, 1.0, 0.0),
            // iσ_y
            PauliLetter::Y => (0.0, 1.0, -1.0, 0.0),
            PauliLetter::Z => (1.0, 0.0, 0.0, -1.0),
        };
        DMatrix::from_row_slice(2, 2, &[c(a), c(b), c(cc), c(d)])
    }

    /// Leftmost letter acts on the most significant qubit.
    pub fn string(p: &PauliString) -> CMatrix {
        p.letters().fold(DMatrix::from_element(1, 1, c(1.0)), |acc, l| acc.kronecker(&letter(l)))
    }

    /// `p` embedded on `positions` of an `n`-qubit register.
    pub fn embedded(p: &PauliString, positions: &[usize], n: usize) -> CMatrix {
        let mut m = DMatrix::from_element(1, 1, c(1.0));
        for q in 1..=n {
            let block = match positions.iter().position(|&x| x == q) {
                Some(k) => letter(p.letter(k)),
                None => letter(PauliLetter::I),
            };
            m = m.kronecker(&block);
        }
        m
    }

    /// `min_α max |a − α b|` over unit phases `α`, with `α` read from the
    /// Hilbert–Schmidt overlap.
    pub fn phase_aligned_deviation(a: &CMatrix, b: &CMatrix) -> f64 {
        let overlap: Complex64 = b.iter().zip(a.iter()).map(|(x, y)| x.conj() * y).sum();
        if overlap.norm() < 1e-12 {
            return f64::INFINITY;
        }
        let alpha = overlap / overlap.norm();
        a.iter().zip(b.iter()).map(|(x, y)| (x - alpha * y).norm()).fold(0.0, f64::max)
    }
}
