//! Truth-table representations of the Boolean strategy families
//! f : {0,1}² → {0,1} and g : {0,1,2}² → {0,1}, their exhaustive enumerations,
//! and the restriction map from the 3-outcome family to the 2-outcome one.
//!
//! Tables serialize as JSON bit arrays (e.g. `[0,1,1,0]`), parse from the same
//! bracketed notation, and order by their big-endian integer encoding
//! (most significant bit = first lexicographic input).

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

fn check_bits(bits: &[u8]) -> Result<()> {
    for (index, &value) in bits.iter().enumerate() {
        if value > 1 {
            return Err(Error::InvalidBit { index, value });
        }
    }
    Ok(())
}

fn parse_bit_vector(s: &str, expected_len: usize) -> Result<Vec<u8>> {
    let trimmed = s.trim();
    let inner = trimmed
        .strip_prefix('[')
        .and_then(|rest| rest.strip_suffix(']'))
        .ok_or_else(|| Error::ParseTruthTable(s.to_string()))?;
    let bits: Vec<u8> = inner
        .split(',')
        .map(|tok| match tok.trim() {
            "0" => Ok(0),
            "1" => Ok(1),
            _ => Err(Error::ParseTruthTable(s.to_string())),
        })
        .collect::<Result<_>>()?;
    if bits.len() != expected_len {
        return Err(Error::ParseTruthTable(s.to_string()));
    }
    Ok(bits)
}

fn write_bit_vector(f: &mut fmt::Formatter<'_>, bits: &[u8]) -> fmt::Result {
    write!(f, "[")?;
    for (i, b) in bits.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{b}")?;
    }
    write!(f, "]")
}

/// A Boolean function of two bits, stored as
/// `[f(0,0), f(0,1), f(1,0), f(1,1)]`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "[u8; 4]", into = "[u8; 4]")]
pub struct TruthTable2 {
    bits: [u8; 4],
}

impl TruthTable2 {
    pub const AND: Self = Self { bits: [0, 0, 0, 1] };
    pub const XOR: Self = Self { bits: [0, 1, 1, 0] };
    pub const XNOR: Self = Self { bits: [1, 0, 0, 1] };

    pub fn new(bits: [u8; 4]) -> Result<Self> {
        check_bits(&bits)?;
        Ok(Self { bits })
    }

    /// Builds the table whose big-endian encoding is `encoding` (0..16).
    pub fn from_encoding(encoding: u8) -> Result<Self> {
        if encoding >= 16 {
            return Err(Error::InvalidEncoding(encoding as u16));
        }
        let mut bits = [0u8; 4];
        for (i, bit) in bits.iter_mut().enumerate() {
            *bit = (encoding >> (3 - i)) & 1;
        }
        Ok(Self { bits })
    }

    /// Big-endian integer encoding; `[0,1,1,0]` → 6.
    pub fn encoding(&self) -> u8 {
        self.bits.iter().fold(0, |acc, &b| (acc << 1) | b)
    }

    pub fn bits(&self) -> [u8; 4] {
        self.bits
    }

    /// Row-major cells as a borrowed slice.
    pub fn as_slice(&self) -> &[u8] {
        &self.bits
    }

    /// Table lookup f(x, y).
    ///
    /// # Panics
    /// If `x` or `y` is not 0 or 1.
    pub fn eval(&self, x: u8, y: u8) -> u8 {
        assert!(x <= 1 && y <= 1, "inputs ({x},{y}) out of domain");
        self.bits[(2 * x + y) as usize]
    }

    pub fn ones_count(&self) -> u32 {
        self.bits.iter().map(|&b| b as u32).sum()
    }

    pub fn is_constant(&self) -> bool {
        let ones = self.ones_count();
        ones == 0 || ones == 4
    }

    pub fn complement(&self) -> Self {
        let mut bits = self.bits;
        for b in &mut bits {
            *b ^= 1;
        }
        Self { bits }
    }
}

impl TryFrom<[u8; 4]> for TruthTable2 {
    type Error = Error;
    fn try_from(bits: [u8; 4]) -> Result<Self> {
        Self::new(bits)
    }
}

impl From<TruthTable2> for [u8; 4] {
    fn from(t: TruthTable2) -> Self {
        t.bits
    }
}

impl fmt::Display for TruthTable2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_bit_vector(f, &self.bits)
    }
}

impl fmt::Debug for TruthTable2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_bit_vector(f, &self.bits)
    }
}

impl FromStr for TruthTable2 {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bits = parse_bit_vector(s, 4)?;
        Self::new([bits[0], bits[1], bits[2], bits[3]])
    }
}

/// A Boolean function of two trits, stored row-major over (a, b) ∈ {0,1,2}²:
/// `[g(0,0), g(0,1), g(0,2), g(1,0), g(1,1), g(1,2), g(2,0), g(2,1), g(2,2)]`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "[u8; 9]", into = "[u8; 9]")]
pub struct TruthTable3 {
    bits: [u8; 9],
}

impl TruthTable3 {
    /// 0 on the diagonal (a = b), 1 elsewhere; restricts to XOR on {0,1}².
    pub const EMBEDDED_XOR: Self = Self {
        bits: [0, 1, 1, 1, 0, 1, 1, 1, 0],
    };

    pub fn new(bits: [u8; 9]) -> Result<Self> {
        check_bits(&bits)?;
        Ok(Self { bits })
    }

    /// Builds the table whose big-endian encoding is `encoding` (0..512).
    pub fn from_encoding(encoding: u16) -> Result<Self> {
        if encoding >= 512 {
            return Err(Error::InvalidEncoding(encoding));
        }
        let mut bits = [0u8; 9];
        for (i, bit) in bits.iter_mut().enumerate() {
            *bit = ((encoding >> (8 - i)) & 1) as u8;
        }
        Ok(Self { bits })
    }

    /// Big-endian integer encoding; `[0,1,1,1,0,1,1,1,0]` → 246.
    pub fn encoding(&self) -> u16 {
        self.bits.iter().fold(0u16, |acc, &b| (acc << 1) | b as u16)
    }

    pub fn bits(&self) -> [u8; 9] {
        self.bits
    }

    /// Row-major cells as a borrowed slice.
    pub fn as_slice(&self) -> &[u8] {
        &self.bits
    }

    /// Table lookup g(a, b).
    ///
    /// # Panics
    /// If `a` or `b` is not in {0, 1, 2}.
    pub fn eval(&self, a: u8, b: u8) -> u8 {
        assert!(a <= 2 && b <= 2, "inputs ({a},{b}) out of domain");
        self.bits[(3 * a + b) as usize]
    }

    pub fn ones_count(&self) -> u32 {
        self.bits.iter().map(|&b| b as u32).sum()
    }

    pub fn is_constant(&self) -> bool {
        let ones = self.ones_count();
        ones == 0 || ones == 9
    }

    pub fn complement(&self) -> Self {
        let mut bits = self.bits;
        for b in &mut bits {
            *b ^= 1;
        }
        Self { bits }
    }

    /// Restriction to binary inputs: `[g(0,0), g(0,1), g(1,0), g(1,1)]`.
    /// May be constant even when `self` is not.
    pub fn restrict(&self) -> TruthTable2 {
        TruthTable2 {
            bits: [self.bits[0], self.bits[1], self.bits[3], self.bits[4]],
        }
    }
}

impl TryFrom<[u8; 9]> for TruthTable3 {
    type Error = Error;
    fn try_from(bits: [u8; 9]) -> Result<Self> {
        Self::new(bits)
    }
}

impl From<TruthTable3> for [u8; 9] {
    fn from(t: TruthTable3) -> Self {
        t.bits
    }
}

impl fmt::Display for TruthTable3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_bit_vector(f, &self.bits)
    }
}

impl fmt::Debug for TruthTable3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_bit_vector(f, &self.bits)
    }
}

impl FromStr for TruthTable3 {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bits = parse_bit_vector(s, 9)?;
        let mut arr = [0u8; 9];
        arr.copy_from_slice(&bits);
        Self::new(arr)
    }
}

/// The 14 non-constant two-bit Boolean functions in ascending encoding order.
pub fn enumerate_f2() -> Vec<TruthTable2> {
    (1..15)
        .map(|e| TruthTable2::from_encoding(e).expect("encoding in range"))
        .collect()
}

/// The 510 non-constant two-trit Boolean functions in ascending encoding order.
pub fn enumerate_g3() -> Vec<TruthTable3> {
    (1..511)
        .map(|e| TruthTable3::from_encoding(e).expect("encoding in range"))
        .collect()
}
