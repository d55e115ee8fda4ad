//! Dense pure-state simulation on small registers.
//!
//! Qubits are numbered from 1; qubit 1 is the most significant bit of the
//! amplitude index, so `amps[0b0110]` is the coefficient of `|0110⟩`.

mod catalog;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::pauli::PauliString;

pub use catalog::{named_state, STATE_NAMES};

/// Norm tolerance when constructing a state.
pub const BUILD_TOL: f64 = 1e-12;
/// Tolerance for orthogonality and basis checks.
pub const CHECK_TOL: f64 = 1e-9;
pub const MAX_QUBITS: usize = 16;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StateError {
    #[error("amplitude count {0} is not 2^n for 1 <= n <= {MAX_QUBITS}")]
    BadLength(usize),
    #[error("state norm is {0}, expected 1")]
    NotNormalized(f64),
    #[error("zero vector cannot be normalized")]
    ZeroVector,
    #[error("qubit count mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("operator width {width} does not match {positions} positions")]
    WidthMismatch { width: usize, positions: usize },
    #[error("bad qubit positions {positions:?} for a {n}-qubit state")]
    BadPositions { positions: Vec<usize>, n: usize },
    #[error("unknown state {0:?}")]
    UnknownState(String),
    #[error("basis has {got} vectors, expected {expected}")]
    BasisSize { expected: usize, got: usize },
    #[error("basis vectors {i} and {j} have overlap {overlap}")]
    NotOrthonormal { i: usize, j: usize, overlap: f64 },
}

/// Measurement basis of a single qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Z,
    X,
}

#[derive(Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl std::fmt::Debug for StateVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("StateVector")
            .field("n", &self.n)
            .field("amps", &self.amps)
            .finish()
    }
}

fn qubits_for_len(len: usize) -> Result<usize, StateError> {
    if len < 2 || !len.is_power_of_two() || len.trailing_zeros() as usize > MAX_QUBITS {
        return Err(StateError::BadLength(len));
    }
    Ok(len.trailing_zeros() as usize)
}

fn norm_sqr(amps: &[Complex64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum()
}

impl StateVector {
    /// Wraps amplitudes that are already unit norm within [`BUILD_TOL`].
    pub fn new(amps: Vec<Complex64>) -> Result<Self, StateError> {
        let n = qubits_for_len(amps.len())?;
        let norm = norm_sqr(&amps).sqrt();
        if (norm - 1.0).abs() > BUILD_TOL {
            return Err(StateError::NotNormalized(norm));
        }
        Ok(Self { n, amps })
    }

    /// Rescales `amps` to unit norm.
    pub fn normalized(amps: Vec<Complex64>) -> Result<Self, StateError> {
        let n = qubits_for_len(amps.len())?;
        let norm = norm_sqr(&amps).sqrt();
        if norm == 0.0 {
            return Err(StateError::ZeroVector);
        }
        let amps = amps.into_iter().map(|a| a / norm).collect();
        Ok(Self { n, amps })
    }

    /// Computational basis state `|index⟩` on `n` qubits.
    pub fn basis_state(n: usize, index: usize) -> Result<Self, StateError> {
        let dim = 1usize << n;
        if n == 0 || n > MAX_QUBITS || index >= dim {
            return Err(StateError::BadLength(dim));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    /// Normalized sum of signed computational kets, e.g. `[(1.0, "01"), (-1.0, "10")]`.
    pub fn from_kets(terms: &[(f64, &str)]) -> Result<Self, StateError> {
        let width = terms.first().map_or(0, |(_, k)| k.len());
        let dim = 1usize << width;
        let mut amps = vec![Complex64::new(0.0, 0.0); dim.max(1)];
        for (c, ket) in terms {
            if ket.len() != width {
                return Err(StateError::BadLength(1 << ket.len()));
            }
            let index = usize::from_str_radix(ket, 2).map_err(|_| StateError::BadLength(dim))?;
            amps[index] += c;
        }
        Self::normalized(amps)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        norm_sqr(&self.amps).sqrt()
    }

    /// `self ⊗ other`, with `self` on the leading qubits.
    pub fn tensor(&self, other: &StateVector) -> Result<Self, StateError> {
        let amps = self
            .amps
            .iter()
            .flat_map(|a| other.amps.iter().map(move |b| a * b))
            .collect();
        Self::normalized(amps)
    }

    fn check_positions(&self, positions: &[usize]) -> Result<(), StateError> {
        let bad = || StateError::BadPositions {
            positions: positions.to_vec(),
            n: self.n,
        };
        if positions.is_empty() {
            return Err(bad());
        }
        for (k, &p) in positions.iter().enumerate() {
            if p == 0 || p > self.n || positions[..k].contains(&p) {
                return Err(bad());
            }
        }
        Ok(())
    }

    fn bit_of(&self, qubit: usize) -> usize {
        1 << (self.n - qubit)
    }

    /// Applies `op` with its `k`-th letter acting on qubit `positions[k]`.
    pub fn apply(&self, op: &PauliString, positions: &[usize]) -> Result<Self, StateError> {
        if op.width() != positions.len() {
            return Err(StateError::WidthMismatch {
                width: op.width(),
                positions: positions.len(),
            });
        }
        self.check_positions(positions)?;
        let mut xmask = 0usize;
        let mut zmask = 0usize;
        for (k, &p) in positions.iter().enumerate() {
            let (x, z) = op.letter(k).bits();
            if x {
                xmask |= self.bit_of(p);
            }
            if z {
                zmask |= self.bit_of(p);
            }
        }
        // iY = Z·X: flip first, then the Z phase reads the flipped bits
        let mut amps = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (b, a) in self.amps.iter().enumerate() {
            let out = b ^ xmask;
            amps[out] = if (out & zmask).count_ones() % 2 == 1 { -a } else { *a };
        }
        Ok(Self { n: self.n, amps })
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64, StateError> {
        if self.n != other.n {
            return Err(StateError::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|⟨self|other⟩| ≥ 1 − tol`; false for mismatched sizes.
    pub fn equal_up_to_phase(&self, other: &StateVector, tol: f64) -> bool {
        self.inner(other).is_ok_and(|c| c.norm() >= 1.0 - tol)
    }

    /// Reduced state on `keep`, listed in the order given (first = most significant).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix, StateError> {
        self.check_positions(keep)?;
        let k = keep.len();
        let env: Vec<usize> = (1..=self.n).filter(|q| !keep.contains(q)).collect();
        let spread = |value: usize, qubits: &[usize]| {
            qubits
                .iter()
                .enumerate()
                .filter(|(i, _)| value >> (qubits.len() - 1 - i) & 1 == 1)
                .fold(0usize, |acc, (_, &q)| acc | self.bit_of(q))
        };
        let dk = 1usize << k;
        let mut rho = DMatrix::from_element(dk, dk, Complex64::new(0.0, 0.0));
        for e in 0..1usize << env.len() {
            let base = spread(e, &env);
            let column: Vec<Complex64> =
                (0..dk).map(|i| self.amps[base | spread(i, keep)]).collect();
            for i in 0..dk {
                for j in 0..dk {
                    rho[(i, j)] += column[i] * column[j].conj();
                }
            }
        }
        Ok(DensityMatrix { k, entries: rho })
    }

    /// Born probabilities of the computational-basis outcomes.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Samples an outcome of the projective measurement onto `basis`.
    pub fn measure_in_basis<R: Rng + ?Sized>(
        &self,
        basis: &[StateVector],
        rng: &mut R,
    ) -> Result<usize, StateError> {
        check_orthonormal(basis, self.dim())?;
        let probs = basis
            .iter()
            .map(|b| b.inner(self).map(|c| c.norm_sqr()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(sample(&probs, rng))
    }

    /// Measures one qubit in `basis`, returning the outcome bit and the
    /// post-measurement state. In the X basis outcome 0 is `|+⟩`.
    pub fn measure_qubit<R: Rng + ?Sized>(
        &self,
        qubit: usize,
        basis: Basis,
        rng: &mut R,
    ) -> Result<(u8, StateVector), StateError> {
        self.check_positions(&[qubit])?;
        let bit = self.bit_of(qubit);
        let projected = |outcome: u8| -> Vec<Complex64> {
            let mut out = vec![Complex64::new(0.0, 0.0); self.dim()];
            for b in (0..self.dim()).filter(|b| b & bit == 0) {
                let (a0, a1) = (self.amps[b], self.amps[b | bit]);
                match (basis, outcome) {
                    (Basis::Z, 0) => out[b] = a0,
                    (Basis::Z, _) => out[b | bit] = a1,
                    (Basis::X, 0) => {
                        let c = (a0 + a1) * 0.5;
                        out[b] = c;
                        out[b | bit] = c;
                    }
                    (Basis::X, _) => {
                        let c = (a0 - a1) * 0.5;
                        out[b] = c;
                        out[b | bit] = -c;
                    }
                }
            }
            out
        };
        let zero = projected(0);
        let p0 = norm_sqr(&zero);
        let outcome = sample(&[p0, (1.0 - p0).max(0.0)], rng) as u8;
        let amps = if outcome == 0 { zero } else { projected(1) };
        Ok((outcome, Self::normalized(amps)?))
    }

    pub fn to_json(&self) -> StateJson {
        StateJson {
            n: self.n,
            amps: self.amps.iter().map(|a| [a.re, a.im]).collect(),
        }
    }
}

fn sample<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> usize {
    match WeightedIndex::new(probs) {
        Ok(dist) => dist.sample(rng),
        Err(_) => 0,
    }
}

/// Checks that `basis` holds `dim` orthonormal vectors within [`CHECK_TOL`].
pub fn check_orthonormal(basis: &[StateVector], dim: usize) -> Result<(), StateError> {
    if basis.len() != dim {
        return Err(StateError::BasisSize {
            expected: dim,
            got: basis.len(),
        });
    }
    for i in 0..basis.len() {
        for j in i..basis.len() {
            let c = basis[i].inner(&basis[j])?;
            let target = if i == j { 1.0 } else { 0.0 };
            if (c - target).norm() > CHECK_TOL {
                return Err(StateError::NotOrthonormal {
                    i,
                    j,
                    overlap: c.norm(),
                });
            }
        }
    }
    Ok(())
}

/// Single-qubit eigenstate: outcome 0/1 of `basis` (`|0⟩,|1⟩` or `|+⟩,|−⟩`).
pub fn qubit_eigenstate(basis: Basis, outcome: u8) -> StateVector {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let amps = match (basis, outcome) {
        (Basis::Z, 0) => [1.0, 0.0],
        (Basis::Z, _) => [0.0, 1.0],
        (Basis::X, 0) => [s, s],
        (Basis::X, _) => [s, -s],
    };
    StateVector::normalized(amps.iter().map(|&a| Complex64::new(a, 0.0)).collect())
        .expect("eigenstates are nonzero")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateJson {
    pub n: usize,
    pub amps: Vec<[f64; 2]>,
}

impl TryFrom<StateJson> for StateVector {
    type Error = StateError;

    fn try_from(json: StateJson) -> Result<Self, Self::Error> {
        let s = StateVector::new(
            json.amps
                .iter()
                .map(|[re, im]| Complex64::new(*re, *im))
                .collect(),
        )?;
        if s.n != json.n {
            return Err(StateError::DimensionMismatch {
                left: json.n,
                right: s.n,
            });
        }
        Ok(s)
    }
}

/// Reduced density matrix on `k` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    k: usize,
    entries: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[(i, j)]
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    /// Largest `|ρ − ρ†|` entry.
    pub fn hermiticity_error(&self) -> f64 {
        (&self.entries - self.entries.adjoint())
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// True iff `ρ + tol·I` admits a Cholesky factorization.
    pub fn is_psd(&self, tol: f64) -> bool {
        let dim = self.entries.nrows();
        let shifted = &self.entries + DMatrix::identity(dim, dim) * Complex64::new(tol, 0.0);
        shifted.cholesky().is_some()
    }

    /// Hermitian within 1e−12, unit trace within 1e−12, PSD within 1e−9.
    pub fn is_valid(&self) -> bool {
        self.hermiticity_error() <= BUILD_TOL
            && (self.trace() - 1.0).norm() <= BUILD_TOL
            && self.is_psd(CHECK_TOL)
    }

    /// Max entrywise distance to `I/2ᵏ`.
    pub fn distance_to_maximally_mixed(&self) -> f64 {
        let dim = self.entries.nrows();
        let mixed = DMatrix::identity(dim, dim) * Complex64::new(1.0 / dim as f64, 0.0);
        (&self.entries - mixed)
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }
}
