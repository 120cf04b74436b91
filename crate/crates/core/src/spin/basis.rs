//! Computational-basis labelling.
//!
//! Energy levels are numbered from 1: `level = 1 + value(bits)` with spin 1
//! as the most significant bit, so for two spins |00> -> 1, |01> -> 2,
//! |10> -> 3, |11> -> 4.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// 1-based energy-level index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LevelIndex(usize);

impl LevelIndex {
    /// Validated constructor: `value` must lie in `1..=2^n_spins`.
    pub fn new(value: usize, n_spins: usize) -> Result<Self> {
        let dim = dim_of(n_spins)?;
        if value == 0 || value > dim {
            return Err(Error::Input(format!(
                "level {value} out of range 1..={dim} for {n_spins} spins"
            )));
        }
        Ok(Self(value))
    }

    pub fn from_zero_based(index: usize) -> Self {
        Self(index + 1)
    }

    pub fn value(self) -> usize {
        self.0
    }

    pub fn zero_based(self) -> usize {
        self.0 - 1
    }

    /// Bit of spin `spin` (1-based, spin 1 is the msb) in this level's bitstring.
    pub fn spin_bit(self, spin: usize, n_spins: usize) -> u8 {
        ((self.zero_based() >> (n_spins - spin)) & 1) as u8
    }

    pub fn bits(self, n_spins: usize) -> String {
        format!("{:0width$b}", self.zero_based(), width = n_spins)
    }

    pub fn hamming_weight(self) -> u32 {
        self.zero_based().count_ones()
    }
}

impl fmt::Display for LevelIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Hilbert-space dimension `2^n_spins`.
pub fn dim_of(n_spins: usize) -> Result<usize> {
    if n_spins == 0 || n_spins > 16 {
        return Err(Error::Input(format!(
            "spin count {n_spins} outside supported range 1..=16"
        )));
    }
    Ok(1 << n_spins)
}

/// Level of a basis bitstring such as `"01"`.
pub fn level_of(bits: &str) -> Result<LevelIndex> {
    if bits.is_empty() {
        return Err(Error::Input("empty bitstring".into()));
    }
    if let Some(c) = bits.chars().find(|c| *c != '0' && *c != '1') {
        return Err(Error::Input(format!(
            "bitstring `{bits}` contains non-binary character `{c}`"
        )));
    }
    let n = bits.len();
    dim_of(n)?;
    let value = usize::from_str_radix(bits, 2).expect("validated binary");
    Ok(LevelIndex(value + 1))
}

/// Like [`level_of`] but also checks the bitstring length against `n_spins`.
pub fn level_of_n(bits: &str, n_spins: usize) -> Result<LevelIndex> {
    if bits.len() != n_spins {
        return Err(Error::Input(format!(
            "bitstring `{bits}` has length {} but the system has {n_spins} spins",
            bits.len()
        )));
    }
    level_of(bits)
}

pub fn bits_of(level: LevelIndex, n_spins: usize) -> Result<String> {
    LevelIndex::new(level.value(), n_spins)?;
    Ok(level.bits(n_spins))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x" | "X" => Ok(Axis::X),
            "y" | "Y" => Ok(Axis::Y),
            "z" | "Z" => Ok(Axis::Z),
            _ => Err(Error::Input(format!("unknown axis `{s}`"))),
        }
    }
}
