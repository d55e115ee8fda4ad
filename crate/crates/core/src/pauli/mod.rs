//! Phase-free Pauli strings over the alphabet `{I, X, iY, Z}`.
//!
//! A string of width `m` is stored as two `m`-bit words (`x`, `z`), bit `k`
//! holding qubit `k + 1` (the leftmost letter). Multiplication discards the
//! global phase, which turns the product into an XOR of the bit words and the
//! set of all width-`m` strings into the elementary abelian group `F₂^{2m}`.

mod catalog;
mod group;
mod subgroups;

pub use catalog::{named_group, GROUP_NAMES};
pub use group::{is_group, parse_elements, tensor_groups, GroupCheck, GroupJson, OperatorGroup};
pub use subgroups::{enumerate_subgroups, gaussian_binomial, subgroup_id};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Widest string the bit words can hold.
pub const MAX_WIDTH: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PauliError {
    #[error("width mismatch: {left} vs {right}")]
    WidthMismatch { left: usize, right: usize },
    #[error("pauli string width must be in 1..={MAX_WIDTH}, got {0}")]
    BadWidth(usize),
    #[error("invalid pauli letter {0:?}")]
    BadLetter(char),
    #[error("element set is empty")]
    Empty,
    #[error("element {0} appears more than once")]
    Duplicate(String),
    #[error("first element must be the identity, found {0}")]
    IdentityNotFirst(String),
    #[error("not closed: {left} * {right} = {product} is missing")]
    NotClosed {
        left: String,
        right: String,
        product: String,
    },
    #[error("listing does not hold the same elements as {0}")]
    DifferentElements(String),
    #[error("unknown group {0:?}")]
    UnknownGroup(String),
    #[error("order {0} is not a power of two")]
    OrderNotPowerOfTwo(usize),
    #[error("order {order} does not divide the ambient order {ambient}")]
    OrderDoesNotDivide { order: usize, ambient: usize },
}

/// One single-qubit operator. `Y` stands for `iσ_y`, the real matrix
/// `[[0, 1], [-1, 0]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    pub const ALL: [PauliLetter; 4] = [PauliLetter::I, PauliLetter::X, PauliLetter::Y, PauliLetter::Z];

    /// `(x, z)` bit pair.
    pub const fn bits(self) -> (bool, bool) {
        match self {
            PauliLetter::I => (false, false),
            PauliLetter::X => (true, false),
            PauliLetter::Y => (true, true),
            PauliLetter::Z => (false, true),
        }
    }

    pub const fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => PauliLetter::I,
            (true, false) => PauliLetter::X,
            (true, true) => PauliLetter::Y,
            (false, true) => PauliLetter::Z,
        }
    }

    /// Phase-discarded product.
    pub const fn mul(self, other: Self) -> Self {
        let (ax, az) = self.bits();
        let (bx, bz) = other.bits();
        Self::from_bits(ax ^ bx, az ^ bz)
    }

    /// Position in the `I, X, iY, Z` listing; also a linear code, so
    /// `code(a * b) == code(a) ^ code(b)`.
    pub const fn code(self) -> u8 {
        match self {
            PauliLetter::I => 0,
            PauliLetter::X => 1,
            PauliLetter::Y => 2,
            PauliLetter::Z => 3,
        }
    }

    pub const fn as_char(self) -> char {
        match self {
            PauliLetter::I => 'I',
            PauliLetter::X => 'X',
            PauliLetter::Y => 'Y',
            PauliLetter::Z => 'Z',
        }
    }

    /// Label used in rendered tables.
    pub const fn label(self) -> &'static str {
        match self {
            PauliLetter::I => "I",
            PauliLetter::X => "X",
            PauliLetter::Y => "iY",
            PauliLetter::Z => "Z",
        }
    }
}

impl TryFrom<char> for PauliLetter {
    type Error = PauliError;

    fn try_from(c: char) -> Result<Self, Self::Error> {
        match c {
            'I' => Ok(PauliLetter::I),
            'X' => Ok(PauliLetter::X),
            'Y' => Ok(PauliLetter::Y),
            'Z' => Ok(PauliLetter::Z),
            other => Err(PauliError::BadLetter(other)),
        }
    }
}

impl fmt::Display for PauliLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Tensor product of `width` letters, phase discarded.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    width: u8,
    x: u32,
    z: u32,
}

impl PauliString {
    pub fn identity(width: usize) -> Result<Self, PauliError> {
        Self::from_bits(width, 0, 0)
    }

    /// Builds a string from its bit words; bit `k` is qubit `k + 1`.
    pub fn from_bits(width: usize, x: u32, z: u32) -> Result<Self, PauliError> {
        if width == 0 || width > MAX_WIDTH {
            return Err(PauliError::BadWidth(width));
        }
        let mask = Self::mask(width);
        Ok(Self {
            width: width as u8,
            x: x & mask,
            z: z & mask,
        })
    }

    pub fn from_letters(letters: &[PauliLetter]) -> Result<Self, PauliError> {
        let mut x = 0u32;
        let mut z = 0u32;
        for (k, letter) in letters.iter().enumerate() {
            let (bx, bz) = letter.bits();
            x |= (bx as u32) << k;
            z |= (bz as u32) << k;
        }
        Self::from_bits(letters.len(), x, z)
    }

    /// Inverse of [`PauliString::code`].
    pub fn from_code(width: usize, code: u64) -> Result<Self, PauliError> {
        let mut letters = Vec::with_capacity(width);
        for k in (0..width).rev() {
            let digit = (code >> (2 * k)) & 3;
            letters.push(PauliLetter::ALL[digit as usize]);
        }
        Self::from_letters(&letters)
    }

    fn mask(width: usize) -> u32 {
        if width >= 32 {
            u32::MAX
        } else {
            (1u32 << width) - 1
        }
    }

    pub fn width(&self) -> usize {
        self.width as usize
    }

    pub fn x_bits(&self) -> u32 {
        self.x
    }

    pub fn z_bits(&self) -> u32 {
        self.z
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Letter acting on qubit `k` (0-based, leftmost first).
    pub fn letter(&self, k: usize) -> PauliLetter {
        PauliLetter::from_bits((self.x >> k) & 1 == 1, (self.z >> k) & 1 == 1)
    }

    pub fn letters(&self) -> impl Iterator<Item = PauliLetter> + '_ {
        (0..self.width()).map(|k| self.letter(k))
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    /// Phase-discarded product `self · other`.
    pub fn mul(&self, other: &Self) -> Result<Self, PauliError> {
        if self.width != other.width {
            return Err(PauliError::WidthMismatch {
                left: self.width(),
                right: other.width(),
            });
        }
        Ok(Self {
            width: self.width,
            x: self.x ^ other.x,
            z: self.z ^ other.z,
        })
    }

    /// Base-4 code with the leftmost letter most significant and
    /// `I=0, X=1, iY=2, Z=3`. Linear over XOR; its numeric order is the
    /// lexicographic order used for enumerated groups.
    pub fn code(&self) -> u64 {
        self.letters()
            .fold(0u64, |acc, letter| (acc << 2) | letter.code() as u64)
    }

    /// Symplectic vector `x | z << width`, the coordinates used for
    /// subspace enumeration.
    pub fn symplectic(&self) -> u64 {
        self.x as u64 | ((self.z as u64) << self.width)
    }

    pub fn from_symplectic(width: usize, v: u64) -> Result<Self, PauliError> {
        let mask = Self::mask(width) as u64;
        Self::from_bits(width, (v & mask) as u32, ((v >> width) & mask) as u32)
    }

    /// Rearranges letters: letter `k` of the result is letter `order[k]` of
    /// `self`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self, PauliError> {
        if order.len() != self.width() {
            return Err(PauliError::WidthMismatch {
                left: self.width(),
                right: order.len(),
            });
        }
        let letters: Vec<_> = order.iter().map(|&k| self.letter(k)).collect();
        Self::from_letters(&letters)
    }

    /// Concatenation `self ⊗ other`.
    pub fn tensor(&self, other: &Self) -> Result<Self, PauliError> {
        let width = self.width() + other.width();
        Self::from_bits(
            width,
            self.x | (other.x << self.width),
            self.z | (other.z << self.width),
        )
    }

    /// `I⊗X⊗iY` style label.
    pub fn pretty(&self) -> String {
        self.letters()
            .map(PauliLetter::label)
            .collect::<Vec<_>>()
            .join("⊗")
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for letter in self.letters() {
            write!(f, "{}", letter.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

impl FromStr for PauliString {
    type Err = PauliError;

    /// Accepts `"IXYZ"` and the table form `"I⊗X⊗iY"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let cleaned: String = s
            .replace("iY", "Y")
            .chars()
            .filter(|c| !matches!(c, '⊗' | '*' | ' '))
            .collect();
        let letters = cleaned
            .chars()
            .map(PauliLetter::try_from)
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_letters(&letters)
    }
}

impl Serialize for PauliString {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PauliString {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.width, self.code()).cmp(&(other.width, other.code()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use PauliLetter::*;

    #[test]
    fn letter_bits_round_trip() {
        for letter in PauliLetter::ALL {
            let (x, z) = letter.bits();
            assert_eq!(PauliLetter::from_bits(x, z), letter);
        }
    }

    #[test]
    fn letter_products_from_g1_table() {
        assert_eq!(X.mul(X), I);
        assert_eq!(I.mul(Z), Z);
        assert_eq!(Y.mul(Z), X);
        assert_eq!(X.mul(Y), Z);
        assert_eq!(Z.mul(X), Y);
        for a in PauliLetter::ALL {
            assert_eq!(a.mul(a), I);
            for b in PauliLetter::ALL {
                assert_eq!(a.mul(b).code(), a.code() ^ b.code());
            }
        }
    }

    #[test]
    fn string_product_matches_table() {
        let zi: PauliString = "ZI".parse().unwrap();
        let xi: PauliString = "XI".parse().unwrap();
        assert_eq!(zi.mul(&xi).unwrap().to_string(), "YI");
        let id = PauliString::identity(2).unwrap();
        assert_eq!(id.mul(&zi).unwrap(), zi);
    }

    #[test]
    fn width_mismatch_is_an_error() {
        let a: PauliString = "XZ".parse().unwrap();
        let b: PauliString = "X".parse().unwrap();
        assert_eq!(
            a.mul(&b),
            Err(PauliError::WidthMismatch { left: 2, right: 1 })
        );
    }

    #[test]
    fn parses_table_labels() {
        let p: PauliString = "iY⊗I⊗X".parse().unwrap();
        assert_eq!(p.to_string(), "YIX");
        assert_eq!(p.pretty(), "iY⊗I⊗X");
        assert!("IQ".parse::<PauliString>().is_err());
        assert!("".parse::<PauliString>().is_err());
    }

    #[test]
    fn code_is_lexicographic_and_invertible() {
        let p: PauliString = "ZXI".parse().unwrap();
        assert_eq!(p.code(), 3 * 16 + 4);
        assert_eq!(PauliString::from_code(3, p.code()).unwrap(), p);
        let s = p.symplectic();
        assert_eq!(PauliString::from_symplectic(3, s).unwrap(), p);
    }

    #[test]
    fn permuting_and_tensoring() {
        let p: PauliString = "XYZ".parse().unwrap();
        assert_eq!(p.permuted(&[2, 0, 1]).unwrap().to_string(), "ZXY");
        let q: PauliString = "I".parse().unwrap();
        assert_eq!(p.tensor(&q).unwrap().to_string(), "XYZI");
        assert_eq!(p.weight(), 3);
    }
}
