//! Piecewise-constant functions on `[0, 1)` and the fast Walsh–Hadamard
//! transform.
//!
//! A [`GridFunction`] of resolution `N` holds one value per dyadic cell
//! `I_N(x)`. Cell `c` contains the points whose first `N` binary digits
//! spell `c` most-significant first, so dyadic addition of points is XOR of
//! cells. The Walsh–Paley index of a coefficient reads the digits in the
//! opposite order, which is why [`GridFunction::fwht`] applies a bit-reversal
//! permutation after the Hadamard butterfly.

use std::fmt::Debug;
use std::io::{self, Write};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::Value;

use crate::dyadic::{harmonic_exact, harmonic_f64, rational_to_f64, reverse_bits};
use crate::error::{Error, Result};
use crate::fmt::{format_float, format_rational};
use crate::{Rational, MAX_RESOLUTION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScalarMode {
    Exact,
    Double,
}

/// Field of values carried by grids: exact rationals or doubles.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    const MODE: ScalarMode;

    fn from_i64(v: i64) -> Self;

    /// `num / den`, `den > 0`.
    fn from_frac(num: i64, den: u64) -> Self;

    /// The harmonic number `l_n`.
    fn harmonic(n: u128) -> Result<Self>;

    fn abs(&self) -> Self;

    fn to_f64(&self) -> f64;

    fn div_pow2(&self, k: u32) -> Self;

    fn div(&self, other: &Self) -> Self;

    /// Columns used in CSV dumps.
    fn csv_fields(&self) -> Vec<String>;

    fn to_json(&self) -> Value;
}

impl Scalar for f64 {
    const MODE: ScalarMode = ScalarMode::Double;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_frac(num: i64, den: u64) -> Self {
        num as f64 / den as f64
    }

    fn harmonic(n: u128) -> Result<Self> {
        Ok(harmonic_f64(n))
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn div_pow2(&self, k: u32) -> Self {
        self * 2f64.powi(-(k as i32))
    }

    fn div(&self, other: &Self) -> Self {
        self / other
    }

    fn csv_fields(&self) -> Vec<String> {
        vec![format_float(*self)]
    }

    fn to_json(&self) -> Value {
        serde_json::json!(*self)
    }
}

impl Scalar for Rational {
    const MODE: ScalarMode = ScalarMode::Exact;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_frac(num: i64, den: u64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn harmonic(n: u128) -> Result<Self> {
        harmonic_exact(n)
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }

    fn div_pow2(&self, k: u32) -> Self {
        Rational::new(self.numer().clone(), self.denom() << k as usize)
    }

    fn div(&self, other: &Self) -> Self {
        self / other
    }

    fn csv_fields(&self) -> Vec<String> {
        vec![self.numer().to_string(), self.denom().to_string()]
    }

    fn to_json(&self) -> Value {
        Value::String(format_rational(self))
    }
}

fn check_resolution(resolution: u32) -> Result<()> {
    if resolution > MAX_RESOLUTION {
        Err(Error::ResolutionTooLarge(resolution))
    } else {
        Ok(())
    }
}

/// In-place unnormalised Hadamard butterfly in natural order:
/// `out[t] = Σ_c in[c] (−1)^popcount(t & c)`.
pub(crate) fn hadamard_in_place<S: Scalar>(v: &mut [S]) {
    let n = v.len();
    debug_assert!(n.is_power_of_two());
    let mut h = 1;
    while h < n {
        for block in v.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let sum = a.clone() + b.clone();
                let diff = std::mem::replace(a, sum) - b.clone();
                *b = diff;
            }
        }
        h *= 2;
    }
}

/// A function on `[0, 1)` constant on each dyadic cell of resolution `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction<S> {
    resolution: u32,
    values: Vec<S>,
}

impl<S: Scalar> GridFunction<S> {
    pub fn new(resolution: u32, values: Vec<S>) -> Result<Self> {
        check_resolution(resolution)?;
        let expected = 1usize << resolution;
        if values.len() != expected {
            return Err(Error::Length {
                expected,
                got: values.len(),
            });
        }
        Ok(Self { resolution, values })
    }

    pub fn from_fn(resolution: u32, f: impl FnMut(usize) -> S) -> Result<Self> {
        check_resolution(resolution)?;
        Ok(Self {
            resolution,
            values: (0..1usize << resolution).map(f).collect(),
        })
    }

    pub fn constant(resolution: u32, value: S) -> Result<Self> {
        Self::from_fn(resolution, |_| value.clone())
    }

    pub fn zeros(resolution: u32) -> Result<Self> {
        Self::constant(resolution, S::zero())
    }

    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn into_values(self) -> Vec<S> {
        self.values
    }

    pub fn get(&self, cell: usize) -> Option<&S> {
        self.values.get(cell)
    }

    /// `∫ f = 2^−N Σ values`.
    pub fn integral(&self) -> S {
        self.sum_cells(0..self.len()).div_pow2(self.resolution)
    }

    /// Integral of `f` over the union of the given cells.
    pub fn integral_over(&self, cells: std::ops::Range<usize>) -> S {
        self.sum_cells(cells).div_pow2(self.resolution)
    }

    /// Integral of `|f|` over the given cells.
    pub fn abs_integral_over(&self, cells: std::ops::Range<usize>) -> S {
        self.values[cells]
            .iter()
            .fold(S::zero(), |acc, v| acc + v.abs())
            .div_pow2(self.resolution)
    }

    fn sum_cells(&self, cells: std::ops::Range<usize>) -> S {
        self.values[cells]
            .iter()
            .fold(S::zero(), |acc, v| acc + v.clone())
    }

    pub fn l1_norm(&self) -> S {
        self.abs_integral_over(0..self.len())
    }

    pub fn sup_norm(&self) -> S {
        self.values.iter().fold(S::zero(), |acc, v| {
            let a = v.abs();
            if a > acc {
                a
            } else {
                acc
            }
        })
    }

    /// Same function at resolution `N + 1`: every cell is split in two.
    pub fn refine(&self) -> Result<Self> {
        check_resolution(self.resolution + 1)?;
        let values = self
            .values
            .iter()
            .flat_map(|v| [v.clone(), v.clone()])
            .collect();
        Ok(Self {
            resolution: self.resolution + 1,
            values,
        })
    }

    pub fn refine_to(&self, resolution: u32) -> Result<Self> {
        if resolution < self.resolution {
            return Err(Error::Range(format!(
                "cannot refine resolution {} down to {resolution}",
                self.resolution
            )));
        }
        check_resolution(resolution)?;
        let shift = resolution - self.resolution;
        Self::from_fn(resolution, |c| self.values[c >> shift].clone())
    }

    /// Walsh–Paley coefficients `f̂(i) = ∫ f·w_i`, `i < 2^N`.
    pub fn fwht(&self) -> SpectrumFunction<S> {
        let mut buf = self.values.clone();
        hadamard_in_place(&mut buf);
        let n = self.resolution;
        let coeffs = (0..buf.len())
            .map(|i| buf[reverse_bits(i, n)].div_pow2(n))
            .collect();
        SpectrumFunction {
            resolution: n,
            coeffs,
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.resolution != other.resolution {
            return Err(Error::ResolutionMismatch {
                left: self.resolution,
                right: other.resolution,
            });
        }
        Ok(())
    }

    /// `(f ∗ g)(x) = ∫ f(t) g(x ∔ t) dt`, through the convolution theorem.
    pub fn xor_convolve(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let a = self.fwht();
        let b = other.fwht();
        a.mul(&b)?.ifwht()
    }

    /// Direct `O(4^N)` evaluation of the XOR convolution.
    pub fn xor_convolve_naive(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let len = self.len();
        Self::from_fn(self.resolution, |x| {
            (0..len)
                .fold(S::zero(), |acc, t| {
                    acc + self.values[t].clone() * other.values[x ^ t].clone()
                })
                .div_pow2(self.resolution)
        })
    }

    /// The translate `x ↦ f(x ∔ h)` for the dyadic point in cell `h`.
    pub fn xor_shift(&self, h: usize) -> Result<Self> {
        if h >= self.len() {
            return Err(Error::ExceedsResolution {
                what: "shift",
                value: h as u128,
                resolution: self.resolution,
            });
        }
        Self::from_fn(self.resolution, |c| self.values[c ^ h].clone())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&S, &S) -> S) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            resolution: self.resolution,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() + b.clone())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() - b.clone())
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() * b.clone())
    }

    pub fn scale(&self, k: &S) -> Self {
        Self {
            resolution: self.resolution,
            values: self.values.iter().map(|v| v.clone() * k.clone()).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        Self {
            resolution: self.resolution,
            values: self.values.iter().map(f).collect(),
        }
    }

    pub fn abs(&self) -> Self {
        self.map(|v| v.abs())
    }

    pub fn to_f64(&self) -> GridFunction<f64> {
        GridFunction {
            resolution: self.resolution,
            values: self.values.iter().map(Scalar::to_f64).collect(),
        }
    }

    /// First cell where `self` and `other` differ by more than `tol`
    /// (exact comparison when `tol` is `None`).
    pub fn first_mismatch(&self, other: &Self, tol: Option<f64>) -> Option<usize> {
        if self.resolution != other.resolution {
            return Some(0);
        }
        self.values
            .iter()
            .zip(&other.values)
            .position(|(a, b)| match tol {
                None => a != b,
                Some(t) => (a.clone() - b.clone()).abs().to_f64() > t,
            })
    }

    /// CSV dump: `cell,value_num,value_den` in exact mode, `cell,value`
    /// in double mode.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        match S::MODE {
            ScalarMode::Exact => writeln!(w, "cell,value_num,value_den")?,
            ScalarMode::Double => writeln!(w, "cell,value")?,
        }
        for (cell, v) in self.values.iter().enumerate() {
            writeln!(w, "{},{}", cell, v.csv_fields().join(","))?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.values.iter().map(Scalar::to_json).collect())
    }
}

/// Walsh–Paley coefficients of a resolution-`N` function, index `i < 2^N`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumFunction<S> {
    resolution: u32,
    coeffs: Vec<S>,
}

impl<S: Scalar> SpectrumFunction<S> {
    pub fn new(resolution: u32, coeffs: Vec<S>) -> Result<Self> {
        check_resolution(resolution)?;
        let expected = 1usize << resolution;
        if coeffs.len() != expected {
            return Err(Error::Length {
                expected,
                got: coeffs.len(),
            });
        }
        Ok(Self { resolution, coeffs })
    }

    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    /// `Σ_i c_i w_i`, the inverse of [`GridFunction::fwht`].
    pub fn ifwht(&self) -> Result<GridFunction<S>> {
        let n = self.resolution;
        let mut buf: Vec<S> = (0..self.coeffs.len())
            .map(|t| self.coeffs[reverse_bits(t, n)].clone())
            .collect();
        hadamard_in_place(&mut buf);
        GridFunction::new(n, buf)
    }

    /// Keeps the coefficients with index `< m`.
    pub fn truncated(&self, m: usize) -> Result<Self> {
        if m > self.coeffs.len() {
            return Err(Error::ExceedsResolution {
                what: "partial sum index",
                value: m as u128,
                resolution: self.resolution,
            });
        }
        let mut coeffs = self.coeffs.clone();
        for c in &mut coeffs[m..] {
            *c = S::zero();
        }
        Ok(Self {
            resolution: self.resolution,
            coeffs,
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.resolution != other.resolution {
            return Err(Error::ResolutionMismatch {
                left: self.resolution,
                right: other.resolution,
            });
        }
        Ok(Self {
            resolution: self.resolution,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() * b.clone())
                .collect(),
        })
    }

    /// `Σ_i c_i²`.
    pub fn energy(&self) -> S {
        self.coeffs
            .iter()
            .fold(S::zero(), |acc, c| acc + c.clone() * c.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn int_grid(n: u32, v: &[i64]) -> GridFunction<Rational> {
        GridFunction::new(n, v.iter().map(|&x| Rational::from_i64(x)).collect()).unwrap()
    }

    /// Walsh–Paley function evaluated straight from the digit definition.
    fn walsh_direct(i: usize, cell: usize, n: u32) -> i64 {
        let mut parity = 0;
        for k in 0..n {
            let digit = (cell >> (n - 1 - k)) & 1;
            parity ^= ((i >> k) & 1) & digit;
        }
        if parity == 0 {
            1
        } else {
            -1
        }
    }

    #[test]
    fn norms() {
        let g = GridFunction::new(1, vec![2.0, -2.0]).unwrap();
        assert_eq!(g.l1_norm(), 2.0);
        let g = GridFunction::new(1, vec![1.0, -3.0]).unwrap();
        assert_eq!(g.sup_norm(), 3.0);
        for n in 0..6 {
            assert_eq!(GridFunction::constant(n, 1.0).unwrap().l1_norm(), 1.0);
            assert_eq!(GridFunction::<f64>::zeros(n).unwrap().sup_norm(), 0.0);
        }
        assert!(GridFunction::new(2, vec![1.0; 3]).is_err());
    }

    #[test]
    fn transform_of_basics() {
        let one = GridFunction::constant(3, Rational::one()).unwrap().fwht();
        assert_eq!(one.coeffs()[0], Rational::one());
        assert!(one.coeffs()[1..].iter().all(Zero::is_zero));

        let w3: Vec<i64> = (0..4).map(|c| walsh_direct(3, c, 2)).collect();
        let spec = int_grid(2, &w3).fwht();
        let expect: Vec<Rational> = [0, 0, 0, 1].iter().map(|&v| Rational::from_i64(v)).collect();
        assert_eq!(spec.coeffs(), &expect[..]);
    }

    #[test]
    fn inverse_of_unit_vectors() {
        let n = 3;
        for i in 0..8 {
            let mut c = vec![Rational::zero(); 8];
            c[i] = Rational::one();
            let g = SpectrumFunction::new(n, c).unwrap().ifwht().unwrap();
            let expect: Vec<i64> = (0..8).map(|cell| walsh_direct(i, cell, n)).collect();
            assert_eq!(g, int_grid(n, &expect));
        }
    }

    #[test]
    fn refinement_preserves_norms_and_low_coefficients() {
        let g = int_grid(3, &[3, -1, 4, 1, -5, 9, 2, -6]);
        let r = g.refine().unwrap();
        assert_eq!(g.l1_norm(), r.l1_norm());
        assert_eq!(g.sup_norm(), r.sup_norm());
        assert_eq!(g.integral(), r.integral());
        let (a, b) = (g.fwht(), r.fwht());
        assert_eq!(a.coeffs(), &b.coeffs()[..8]);
        assert!(b.coeffs()[8..].iter().all(Zero::is_zero));
        assert_eq!(g.refine_to(5).unwrap(), r.refine().unwrap());
    }

    #[test]
    fn convolution_with_constant_is_integral() {
        let g = int_grid(3, &[3, -1, 4, 1, -5, 9, 2, -6]);
        let one = GridFunction::constant(3, Rational::one()).unwrap();
        let c = g.xor_convolve(&one).unwrap();
        assert!(c.values().iter().all(|v| *v == g.integral()));
    }

    #[test]
    fn csv_headers_follow_mode() {
        let mut out = Vec::new();
        int_grid(1, &[1, -1]).write_csv(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "cell,value_num,value_den\n0,1,1\n1,-1,1\n");
        let mut out = Vec::new();
        GridFunction::new(1, vec![0.5, 0.25]).unwrap().write_csv(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "cell,value\n0,0.5\n1,0.25\n");
    }

    fn grid_strategy(max_n: u32) -> impl Strategy<Value = GridFunction<Rational>> {
        (0..=max_n).prop_flat_map(|n| {
            prop::collection::vec(-20i64..20, 1usize << n)
                .prop_map(move |v| int_grid(n, &v))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn roundtrip_is_exact(g in grid_strategy(10)) {
            prop_assert_eq!(g.fwht().ifwht().unwrap(), g);
        }

        #[test]
        fn parseval_holds_exactly(g in grid_strategy(7)) {
            let energy = g.values().iter().fold(Rational::zero(), |a, v| a + v * v)
                .div_pow2(g.resolution());
            prop_assert_eq!(g.fwht().energy(), energy);
        }

        #[test]
        fn convolution_is_commutative_bilinear_and_diagonalised(
            (f, g, h) in (0u32..=5).prop_flat_map(|n| {
                let v = prop::collection::vec(-9i64..9, 1usize << n);
                (v.clone(), v.clone(), v).prop_map(move |(a, b, c)| (int_grid(n, &a), int_grid(n, &b), int_grid(n, &c)))
            }),
            k in -5i64..5
        ) {
            let fg = f.xor_convolve(&g).unwrap();
            prop_assert_eq!(&fg, &g.xor_convolve(&f).unwrap());
            prop_assert_eq!(&fg, &f.xor_convolve_naive(&g).unwrap());
            let k = Rational::from_i64(k);
            let lhs = f.scale(&k).add(&h).unwrap().xor_convolve(&g).unwrap();
            let rhs = fg.scale(&k).add(&h.xor_convolve(&g).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(fg.fwht(), f.fwht().mul(&g.fwht()).unwrap());
        }
    }
}
