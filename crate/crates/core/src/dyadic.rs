//! Binary expansions of integers and of points of `[0, 1)`.
//!
//! Integers are [`DyadicIndex`] values with digits `ε_j(n)`. Points are
//! [`DyadicPoint`] cells of a resolution-`N` grid: point digit `x_j` is bit
//! `N − 1 − j` of the cell index, so every dyadic interval `I_k(x)` is a
//! contiguous run of cells.

use std::fmt;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::{Rational, MAX_RESOLUTION};

/// Largest `n` for which `l_n` is produced as an exact rational.
///
/// The denominator of `l_n` grows like `lcm(1, …, n − 1)`, i.e. roughly
/// `1.44·n` bits, so the memo table is capped.
pub const EXACT_HARMONIC_LIMIT: u128 = 1 << 14;

/// A non-negative integer viewed through its binary digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct DyadicIndex(u128);

impl DyadicIndex {
    pub const fn new(value: u128) -> Self {
        Self(value)
    }

    pub const fn value(self) -> u128 {
        self.0
    }

    /// The digit `ε_j(n)`.
    pub const fn eps(self, j: u32) -> u8 {
        if j >= 128 {
            0
        } else {
            ((self.0 >> j) & 1) as u8
        }
    }

    /// `|n|`, the position of the leading one bit.
    pub fn order(self) -> Result<u32> {
        if self.0 == 0 {
            return Err(Error::IndexTooSmall {
                what: "order",
                n: 0,
                min: 1,
            });
        }
        Ok(127 - self.0.leading_zeros())
    }

    /// `n(k) = Σ_{j ≤ k} ε_j(n) 2^j`.
    pub const fn truncate(self, k: u32) -> Self {
        if k >= 127 {
            self
        } else {
            Self(self.0 & ((1u128 << (k + 1)) - 1))
        }
    }

    pub const fn is_power_of_two(self) -> bool {
        self.0.is_power_of_two()
    }

    pub const fn count_ones(self) -> u32 {
        self.0.count_ones()
    }

    /// Maximal runs of consecutive one bits, lowest first.
    pub fn block_runs(self) -> Result<BlockRuns> {
        if self.0 == 0 {
            return Err(Error::IndexTooSmall {
                what: "block_runs",
                n: 0,
                min: 1,
            });
        }
        let mut runs = Vec::new();
        let mut rest = self.0;
        while rest != 0 {
            let a = rest.trailing_zeros();
            let len = (rest >> a).trailing_ones();
            let b = a + len - 1;
            runs.push((a, b));
            // clear the run
            rest &= if b >= 127 { 0 } else { !((1u128 << (b + 1)) - 1) };
        }
        Ok(BlockRuns { runs })
    }

    pub fn to_binary_string(self) -> String {
        format!("{:b}", self.0)
    }
}

impl From<u128> for DyadicIndex {
    fn from(v: u128) -> Self {
        Self(v)
    }
}

impl From<u64> for DyadicIndex {
    fn from(v: u64) -> Self {
        Self(v as u128)
    }
}

impl From<u32> for DyadicIndex {
    fn from(v: u32) -> Self {
        Self(v as u128)
    }
}

impl fmt::Display for DyadicIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The runs `(a_i, b_i)` of one bits of an integer: `ε_j = 1` exactly for
/// `a_i ≤ j ≤ b_i`, and `b_i + 1 < a_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockRuns {
    runs: Vec<(u32, u32)>,
}

impl BlockRuns {
    pub fn runs(&self) -> &[(u32, u32)] {
        &self.runs
    }

    pub fn len(&self) -> usize {
        self.runs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    /// Rebuilds `Σ_i (2^(b_i+1) − 2^(a_i))`.
    pub fn value(&self) -> u128 {
        self.runs
            .iter()
            .map(|&(a, b)| {
                let hi = if b >= 127 { u128::MAX } else { (1u128 << (b + 1)) - 1 };
                hi & !((1u128 << a) - 1)
            })
            .fold(0, |acc, block| acc | block)
    }
}

/// `l_n = Σ_{k=1}^{n−1} 1/k` both exactly and as a double.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicValue {
    pub n: DyadicIndex,
    pub exact: Rational,
    pub approx: f64,
}

impl HarmonicValue {
    pub fn new(n: impl Into<DyadicIndex>) -> Result<Self> {
        let n = n.into();
        Ok(Self {
            n,
            exact: harmonic_exact(n.value())?,
            approx: harmonic_f64(n.value()),
        })
    }
}

/// Append-only memo of exact `l_n`, `TABLE[n] = l_n`.
static TABLE: RwLock<Vec<Rational>> = RwLock::new(Vec::new());

/// Exact `l_n` for `n ≤ EXACT_HARMONIC_LIMIT`; `l_0 = l_1 = 0`.
pub fn harmonic_exact(n: u128) -> Result<Rational> {
    if n > EXACT_HARMONIC_LIMIT {
        return Err(Error::ExactLimit {
            n,
            limit: EXACT_HARMONIC_LIMIT,
        });
    }
    let n = n as usize;
    {
        let table = TABLE.read().expect("harmonic table poisoned");
        if let Some(v) = table.get(n) {
            return Ok(v.clone());
        }
    }
    let mut table = TABLE.write().expect("harmonic table poisoned");
    if table.is_empty() {
        table.push(Rational::zero());
        table.push(Rational::zero());
    }
    while table.len() <= n {
        let k = table.len() - 1;
        let next = table[k].clone() + Rational::new(BigInt::from(1), BigInt::from(k));
        table.push(next);
    }
    Ok(table[n].clone())
}

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `l_n` in double precision, for any `n`.
///
/// Small arguments are summed directly; large ones use the asymptotic
/// expansion of `H_m = l_{m+1}`, truncated after the `m^-6` term.
pub fn harmonic_f64(n: u128) -> f64 {
    if n <= 1 {
        return 0.0;
    }
    let m = n - 1;
    if m < 64 {
        return (1..=m as u32).rev().map(|k| 1.0 / k as f64).sum();
    }
    let x = m as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let tail = inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 / 252.0));
    x.ln() + EULER_GAMMA + 0.5 * inv - tail
}

/// A point of `[0, 1)` known up to its dyadic cell of resolution `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DyadicPoint {
    resolution: u32,
    cell: u64,
}

impl DyadicPoint {
    pub fn new(resolution: u32, cell: u64) -> Result<Self> {
        if resolution > MAX_RESOLUTION {
            return Err(Error::ResolutionTooLarge(resolution));
        }
        if cell >> resolution != 0 {
            return Err(Error::ExceedsResolution {
                what: "cell",
                value: cell as u128,
                resolution,
            });
        }
        Ok(Self { resolution, cell })
    }

    pub fn resolution(self) -> u32 {
        self.resolution
    }

    pub fn cell(self) -> u64 {
        self.cell
    }

    /// Digit `x_j` of the point.
    pub fn digit(self, j: u32) -> Result<u8> {
        if j >= self.resolution {
            return Err(Error::ExceedsResolution {
                what: "digit",
                value: j as u128,
                resolution: self.resolution,
            });
        }
        Ok(((self.cell >> (self.resolution - 1 - j)) & 1) as u8)
    }

    /// `x ∔ y`: digit-wise addition modulo 2.
    pub fn dyadic_add(self, other: Self) -> Result<Self> {
        if self.resolution != other.resolution {
            return Err(Error::ResolutionMismatch {
                left: self.resolution,
                right: other.resolution,
            });
        }
        Ok(Self {
            resolution: self.resolution,
            cell: self.cell ^ other.cell,
        })
    }

    /// Left end of the cell, `cell / 2^N`.
    pub fn left_endpoint(self) -> f64 {
        self.cell as f64 / (1u64 << self.resolution) as f64
    }
}

/// Reverses the low `bits` bits of `v`; maps a cell index to the integer
/// whose binary digits are the point digits `x_0, x_1, …`.
#[inline]
pub fn reverse_bits(v: usize, bits: u32) -> usize {
    if bits == 0 {
        0
    } else {
        v.reverse_bits() >> (usize::BITS - bits)
    }
}

pub(crate) fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
