//! Dirichlet, Fejér, Riesz-logarithmic and Nörlund kernels, and the
//! splitting of the logarithmic kernel numerator
//!
//! ```text
//! Σ_{j=1}^{n−1} D_{n−j}/j = H1 + (H21 + H22 + H23) + H3
//! ```
//!
//! that drives the two-sided L₁ estimate of the logarithmic kernel.
//!
//! Every kernel here is a finite combination `Σ_k c_k D_k`. Its Walsh
//! coefficient at `i` is the tail sum `Σ_{k>i} c_k`, so kernels are built
//! in the spectral domain and brought back with one inverse transform. The
//! decomposition parts are built cell by cell from the closed form of
//! `D_{2^j}` and the Rademacher signs instead, so that comparing their sum
//! with the spectrally built total is a genuine check.

use std::ops::Range;

use crate::dyadic::DyadicIndex;
use crate::error::{Error, Result};
use crate::grid::{GridFunction, Scalar, SpectrumFunction};
use crate::walsh::walsh_sign;
use crate::Rational;

/// `|n| + 1`, the smallest resolution carrying every kernel of index `n`.
pub fn default_resolution(n: u64) -> u32 {
    if n == 0 {
        1
    } else {
        64 - n.leading_zeros()
    }
}

fn order(n: u64) -> u32 {
    63 - n.leading_zeros()
}

fn check_fits(what: &'static str, k: u64, resolution: u32) -> Result<()> {
    if resolution < 64 && k > 1u64 << resolution {
        return Err(Error::ExceedsResolution {
            what,
            value: k as u128,
            resolution,
        });
    }
    Ok(())
}

fn too_small(what: &'static str, n: u64, min: u64) -> Error {
    Error::IndexTooSmall {
        what,
        n: n as u128,
        min: min as u128,
    }
}

/// `Σ_k coeffs[k]·D_k` on a resolution-`resolution` grid.
pub fn dirichlet_combination<S: Scalar>(resolution: u32, coeffs: &[S]) -> Result<GridFunction<S>> {
    let top = coeffs.len().saturating_sub(1) as u64;
    check_fits("Dirichlet index", top, resolution)?;
    let len = 1usize << resolution;
    let mut spectrum = vec![S::zero(); len];
    let mut tail = S::zero();
    for k in (1..coeffs.len()).rev() {
        tail = tail + coeffs[k].clone();
        spectrum[k - 1] = tail.clone();
    }
    SpectrumFunction::new(resolution, spectrum)?.ifwht()
}

/// `D_n = Σ_{k<n} w_k`.
pub fn dirichlet<S: Scalar>(n: u64, resolution: u32) -> Result<GridFunction<S>> {
    check_fits("Dirichlet index", n, resolution)?;
    let spectrum = (0..1u64 << resolution)
        .map(|i| if i < n { S::one() } else { S::zero() })
        .collect();
    SpectrumFunction::new(resolution, spectrum)?.ifwht()
}

/// `D_{2^j}(c)`: `2^j` on `I_j(0)`, zero elsewhere.
#[inline]
fn dyadic_dirichlet_value(j: u32, cell: usize, resolution: u32) -> i64 {
    if cell >> (resolution - j) == 0 {
        1i64 << j
    } else {
        0
    }
}

/// `D_{2^j}` from its closed form, `j ≤ resolution`.
pub fn dirichlet_dyadic<S: Scalar>(j: u32, resolution: u32) -> Result<GridFunction<S>> {
    if j > resolution {
        return Err(Error::ExceedsResolution {
            what: "dyadic Dirichlet level",
            value: j as u128,
            resolution,
        });
    }
    GridFunction::from_fn(resolution, |c| S::from_i64(dyadic_dirichlet_value(j, c, resolution)))
}

/// First cell violating `D_{2^j−k} = D_{2^j} − w_{2^j−1}·D_k`.
pub fn paley_shift_mismatch(j: u32, k: u64, resolution: u32) -> Result<Option<usize>> {
    if j >= resolution || j >= 63 {
        return Err(Error::Range(format!(
            "level j = {j} must be below the resolution {resolution}"
        )));
    }
    let top = 1u64 << j;
    if k == 0 || k >= top {
        return Err(Error::Range(format!("k = {k} must lie in 1..{top}")));
    }
    let lhs = dirichlet::<Rational>(top - k, resolution)?;
    let dk = dirichlet::<Rational>(k, resolution)?;
    let d_top = dirichlet::<Rational>(top, resolution)?;
    let rhs = GridFunction::from_fn(resolution, |c| {
        let w = Rational::from_i64(walsh_sign(top - 1, c, resolution));
        d_top.values()[c].clone() - w * dk.values()[c].clone()
    })?;
    Ok(lhs.first_mismatch(&rhs, None))
}

pub fn paley_shift_identity_check(j: u32, k: u64, resolution: u32) -> Result<bool> {
    Ok(paley_shift_mismatch(j, k, resolution)?.is_none())
}

/// `K_n = (1/n) Σ_{k=1}^n D_k`.
pub fn fejer<S: Scalar>(n: u64, resolution: u32) -> Result<GridFunction<S>> {
    if n == 0 {
        return Err(too_small("Fejér kernel", n, 1));
    }
    check_fits("Fejér index", n, resolution)?;
    let c = S::from_frac(1, n);
    let mut coeffs = vec![c; n as usize + 1];
    coeffs[0] = S::zero();
    dirichlet_combination(resolution, &coeffs)
}

/// `Σ_{j=1}^{n−1} D_{n−j}/j`, the numerator `l_n·F_n`.
pub fn log_kernel_numerator<S: Scalar>(n: u64, resolution: u32) -> Result<GridFunction<S>> {
    if n < 1 {
        return Err(too_small("logarithmic kernel", n, 1));
    }
    check_fits("logarithmic kernel index", n.saturating_sub(1), resolution)?;
    let coeffs: Vec<S> = (0..n)
        .map(|k| if k == 0 { S::zero() } else { S::from_frac(1, n - k) })
        .collect();
    dirichlet_combination(resolution, &coeffs)
}

/// `F_n = (1/l_n) Σ_{k=1}^{n−1} D_k/(n−k)`.
pub fn norlund_log_kernel<S: Scalar>(n: u64, resolution: u32) -> Result<GridFunction<S>> {
    if n < 2 {
        return Err(too_small("Nörlund logarithmic kernel", n, 2));
    }
    let l = S::harmonic(n as u128)?;
    let inv = S::one().div(&l);
    Ok(log_kernel_numerator::<S>(n, resolution)?.scale(&inv))
}

/// `(1/l_n) Σ_{k=1}^{n−1} D_k/k`.
pub fn riesz_log_kernel<S: Scalar>(n: u64, resolution: u32) -> Result<GridFunction<S>> {
    if n < 2 {
        return Err(too_small("Riesz logarithmic kernel", n, 2));
    }
    check_fits("Riesz kernel index", n - 1, resolution)?;
    let l = S::harmonic(n as u128)?;
    let coeffs: Vec<S> = (0..n)
        .map(|k| if k == 0 { S::zero() } else { S::from_frac(1, k).div(&l) })
        .collect();
    dirichlet_combination(resolution, &coeffs)
}

/// Nörlund weights `q_k`, `k ≥ 1` (`q_0` is stored but never used by the
/// normaliser `Q_n = Σ_{k=1}^n q_k`).
#[derive(Debug, Clone, PartialEq)]
pub struct NorlundWeights<S> {
    q: Vec<S>,
}

impl<S: Scalar> NorlundWeights<S> {
    /// Weights `q_0, q_1, …, q_{len−1}`.
    pub fn new(q: Vec<S>) -> Result<Self> {
        if q.iter().any(|v| *v < S::zero()) {
            return Err(Error::Range("Nörlund weights must be non-negative".into()));
        }
        Ok(Self { q })
    }

    /// `q_k = 1/k`.
    pub fn logarithmic(len: u64) -> Self {
        let q = (0..len)
            .map(|k| if k == 0 { S::zero() } else { S::from_frac(1, k) })
            .collect();
        Self { q }
    }

    /// `q_k = 1`.
    pub fn constant(len: u64) -> Self {
        Self {
            q: vec![S::one(); len as usize],
        }
    }

    pub fn get(&self, k: usize) -> Option<&S> {
        self.q.get(k)
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    /// `Q_n`.
    pub fn partial_sum(&self, n: u64) -> Result<S> {
        if n as usize >= self.q.len() {
            return Err(Error::Range(format!(
                "Q_{n} needs {} weights, only {} given",
                n + 1,
                self.q.len()
            )));
        }
        Ok(self.q[1..=n as usize]
            .iter()
            .fold(S::zero(), |acc, v| acc + v.clone()))
    }
}

/// `(1/Q_n) Σ_{k=0}^{n−1} q_{n−k} D_k`.
pub fn norlund_kernel<S: Scalar>(
    weights: &NorlundWeights<S>,
    n: u64,
    resolution: u32,
) -> Result<GridFunction<S>> {
    let q_n = weights.partial_sum(n)?;
    if q_n == S::zero() {
        return Err(Error::ZeroNormaliser);
    }
    check_fits("Nörlund kernel index", n.saturating_sub(1), resolution)?;
    let coeffs: Vec<S> = (0..n as usize)
        .map(|k| weights.q[n as usize - k].clone().div(&q_n))
        .collect();
    dirichlet_combination(resolution, &coeffs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelKind {
    Dirichlet,
    Fejer,
    NorlundLog,
    RieszLog,
    NorlundGeneral,
}

impl std::str::FromStr for KernelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "dirichlet" => Self::Dirichlet,
            "fejer" => Self::Fejer,
            "norlund_log" | "norlund-log" => Self::NorlundLog,
            "riesz_log" | "riesz-log" => Self::RieszLog,
            "norlund_general" | "norlund-general" => Self::NorlundGeneral,
            _ => {
                return Err(Error::UnknownName {
                    kind: "kernel",
                    name: s.to_string(),
                })
            }
        })
    }
}

/// Which kernel to build, for which index and at which resolution.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSpec<S> {
    pub kind: KernelKind,
    pub n: u64,
    pub resolution: u32,
    pub weights: Option<NorlundWeights<S>>,
}

impl<S: Scalar> KernelSpec<S> {
    /// A kernel at the minimal faithful resolution `|n| + 1`.
    pub fn new(kind: KernelKind, n: u64) -> Self {
        Self {
            kind,
            n,
            resolution: default_resolution(n),
            weights: None,
        }
    }

    pub fn with_resolution(mut self, resolution: u32) -> Self {
        self.resolution = resolution;
        self
    }

    pub fn with_weights(mut self, weights: NorlundWeights<S>) -> Self {
        self.weights = Some(weights);
        self
    }

    pub fn build(&self) -> Result<GridFunction<S>> {
        match self.kind {
            KernelKind::Dirichlet => dirichlet(self.n, self.resolution),
            KernelKind::Fejer => fejer(self.n, self.resolution),
            KernelKind::NorlundLog => norlund_log_kernel(self.n, self.resolution),
            KernelKind::RieszLog => riesz_log_kernel(self.n, self.resolution),
            KernelKind::NorlundGeneral => {
                let w = self
                    .weights
                    .as_ref()
                    .ok_or_else(|| Error::Range("general Nörlund kernel needs weights".into()))?;
                norlund_kernel(w, self.n, self.resolution)
            }
        }
    }
}

/// Cell-wise builder for `Σ_j coef_j · sign_j(c) · D_{2^j}(c)`.
fn dyadic_sum<S: Scalar>(
    resolution: u32,
    terms: &[(u32, S)],
    sign: impl Fn(u32, usize) -> i64,
) -> Result<GridFunction<S>> {
    GridFunction::from_fn(resolution, |c| {
        terms.iter().fold(S::zero(), |acc, (j, coef)| {
            let d = dyadic_dirichlet_value(*j, c, resolution);
            if d == 0 {
                acc
            } else {
                acc + coef.clone() * S::from_i64(d * sign(*j, c))
            }
        })
    })
}

/// `P_j(c) = Π_{s=j+1}^{|n|} ρ_s(c)^{ε_s(n)}`, the Walsh function of the
/// bits of `n` above `j`.
#[inline]
fn upper_sign(n: u64, j: u32, cell: usize, resolution: u32) -> i64 {
    let high = if j >= 63 { 0 } else { n & !((1u64 << (j + 1)) - 1) };
    walsh_sign(high, cell, resolution)
}

fn check_decomposable(n: u64) -> Result<()> {
    if n < 4 {
        return Err(too_small("kernel decomposition", n, 4));
    }
    Ok(())
}

fn check_decomposition_resolution(n: u64, resolution: u32) -> Result<()> {
    if resolution < default_resolution(n) {
        return Err(Error::ExceedsResolution {
            what: "decomposed index",
            value: n as u128,
            resolution,
        });
    }
    Ok(())
}

fn truncation(n: u64, k: u32) -> u64 {
    DyadicIndex::from(n).truncate(k).value() as u64
}

/// `H1 = w_n Σ_{j=2}^{|n|} ε_j(n) D_{2^j} ρ_j l_{n(j−1)}`.
pub fn h1_part<S: Scalar>(n: u64, resolution: u32) -> Result<GridFunction<S>> {
    check_decomposable(n)?;
    check_decomposition_resolution(n, resolution)?;
    let m = order(n);
    let terms: Vec<(u32, S)> = (2..=m)
        .filter(|j| (n >> j) & 1 == 1)
        .map(|j| Ok((j, S::harmonic(truncation(n, j - 1) as u128)?)))
        .collect::<Result<_>>()?;
    dyadic_sum(resolution, &terms, |j, c| {
        walsh_sign(n, c, resolution) * walsh_sign(1 << j, c, resolution)
    })
}

/// The parts of `Σ_{j=1}^{n−1} D_{n−j}/j` for one index `n ≥ 4`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelDecomposition<S> {
    pub n: u64,
    pub h1: GridFunction<S>,
    pub h21: GridFunction<S>,
    pub h22: GridFunction<S>,
    pub h23: GridFunction<S>,
    pub h3: GridFunction<S>,
    /// `Σ_{j=1}^{n−1} D_{n−j}/j`, built independently of the parts.
    pub total: GridFunction<S>,
}

impl<S: Scalar> KernelDecomposition<S> {
    pub fn resolution(&self) -> u32 {
        self.total.resolution()
    }

    pub fn h2(&self) -> GridFunction<S> {
        self.h21
            .add(&self.h22)
            .and_then(|g| g.add(&self.h23))
            .expect("parts share one resolution")
    }

    pub fn parts_sum(&self) -> GridFunction<S> {
        self.h1
            .add(&self.h2())
            .and_then(|g| g.add(&self.h3))
            .expect("parts share one resolution")
    }

    /// First cell where the parts fail to add up to the total; exact
    /// comparison when `tol` is `None`.
    pub fn identity_mismatch(&self, tol: Option<f64>) -> Option<usize> {
        self.parts_sum().first_mismatch(&self.total, tol)
    }
}

/// Splits `Σ_{j=1}^{n−1} D_{n−j}/j` at resolution `|n| + 1`.
pub fn decompose<S: Scalar>(n: u64) -> Result<KernelDecomposition<S>> {
    decompose_at(n, default_resolution(n))
}

/// Same as [`decompose`] at a chosen resolution `≥ |n| + 1`.
///
/// With `m = |n|`, `r_j = n(j−1)` and `P_j` the Walsh function of the bits
/// of `n` above `j`:
///
/// * `H21 = Σ_j ε_j P_j D_{2^j} / r_j` (terms with `r_j = 0` are absent:
///   the original sum has no `j = 0` term),
/// * `H22 = Σ_j ε_j P_j D_{2^j} Σ_{k=1}^{2^j−1} 1/(k + r_j)`,
/// * `H23 = −Σ_j ε_j P_j w_{2^j−1} Σ_{k=1}^{2^j−1} D_k/(k + r_j)`,
/// * `H3 = P_1 Σ_{i=1}^{n(1)−1} D_{n(1)−i}/i`,
///
/// with `j` running over `2..=m`.
pub fn decompose_at<S: Scalar>(n: u64, resolution: u32) -> Result<KernelDecomposition<S>> {
    check_decomposable(n)?;
    check_decomposition_resolution(n, resolution)?;
    let m = order(n);
    let blocks: Vec<u32> = (2..=m).filter(|j| (n >> j) & 1 == 1).collect();

    let h1 = h1_part::<S>(n, resolution)?;

    let mut h21_terms = Vec::new();
    let mut h22_terms = Vec::new();
    for &j in &blocks {
        let r = truncation(n, j - 1);
        if r >= 1 {
            h21_terms.push((j, S::from_frac(1, r)));
        }
        // Σ_{k=1}^{2^j−1} 1/(k + r) = l_{n(j)} − l_{r+1}
        let inner = S::harmonic(truncation(n, j) as u128)? - S::harmonic(r as u128 + 1)?;
        h22_terms.push((j, inner));
    }
    let upper = |j: u32, c: usize| upper_sign(n, j, c, resolution);
    let h21 = dyadic_sum(resolution, &h21_terms, upper)?;
    let h22 = dyadic_sum(resolution, &h22_terms, upper)?;

    let mut h23 = GridFunction::<S>::zeros(resolution)?;
    for &j in &blocks {
        let r = truncation(n, j - 1);
        let top = 1u64 << j;
        let coeffs: Vec<S> = (0..top)
            .map(|k| if k == 0 { S::zero() } else { S::from_frac(1, k + r) })
            .collect();
        let inner = dirichlet_combination(resolution, &coeffs)?;
        let signed = GridFunction::from_fn(resolution, |c| {
            let s = walsh_sign(top - 1, c, resolution) * upper_sign(n, j, c, resolution);
            S::from_i64(-s) * inner.values()[c].clone()
        })?;
        h23 = h23.add(&signed)?;
    }

    let low = truncation(n, 1);
    let h3 = if low <= 1 {
        GridFunction::zeros(resolution)?
    } else {
        let g = log_kernel_numerator::<S>(low, resolution)?;
        GridFunction::from_fn(resolution, |c| {
            S::from_i64(upper_sign(n, 1, c, resolution)) * g.values()[c].clone()
        })?
    };

    let total = log_kernel_numerator::<S>(n, resolution)?;
    Ok(KernelDecomposition {
        n,
        h1,
        h21,
        h22,
        h23,
        h3,
        total,
    })
}

/// Checks `H1` against its two rewritings:
///
/// ```text
/// w_n Σ_{j=2}^{m} ε_j l_{n(j−1)} (D_{2^{j+1}} − D_{2^j})
///   = w_n [ Σ_{j=2}^{m−1} (ε_j l_{n(j−1)} − ε_{j+1} l_{n(j)}) D_{2^{j+1}}
///           + l_{n(m−1)} D_{2^{m+1}} − ε_2 l_{n(1)} D_4 ]
/// ```
pub fn h1_closed_form_check(n: u64) -> Result<bool> {
    let resolution = default_resolution(n);
    let h1 = h1_part::<Rational>(n, resolution)?;
    let m = order(n);
    let eps = |j: u32| ((n >> j) & 1) as i64;
    let l = |k: u64| Rational::harmonic(k as u128);
    let wn = |c: usize| walsh_sign(n, c, resolution);

    let mut diff_terms = Vec::new();
    for j in 2..=m {
        if eps(j) == 1 {
            let lj = l(truncation(n, j - 1))?;
            diff_terms.push((j + 1, lj.clone()));
            diff_terms.push((j, -lj));
        }
    }
    let first = dyadic_sum(resolution, &diff_terms, |_, c| wn(c))?;

    let mut abel_terms = Vec::new();
    for j in 2..m {
        let a = Rational::from_i64(eps(j)) * l(truncation(n, j - 1))?;
        let b = Rational::from_i64(eps(j + 1)) * l(truncation(n, j))?;
        abel_terms.push((j + 1, a - b));
    }
    abel_terms.push((m + 1, l(truncation(n, m - 1))?));
    abel_terms.push((2, -(Rational::from_i64(eps(2)) * l(truncation(n, 1))?)));
    let second = dyadic_sum(resolution, &abel_terms, |_, c| wn(c))?;

    Ok(h1 == first && h1 == second)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WitnessInterval {
    /// `A_k = (2^{−a_k−1}, 2^{−a_k})`
    A,
    /// `B_k = (2^{−b_k−2}, 2^{−b_k−1})`
    B,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessRecord<S> {
    /// 1-based block number `k`.
    pub block: usize,
    pub interval: WitnessInterval,
    /// `a_k` or `b_k`.
    pub position: u32,
    pub cells: Range<usize>,
    /// `∫ |H1|` over the interval.
    pub integral: S,
    /// `l_{n(a_k−1)}/4` or `l_{n(b_k−1)}/4`.
    pub threshold: S,
}

impl<S: Scalar> WitnessRecord<S> {
    pub fn holds(&self) -> bool {
        self.integral >= self.threshold
    }
}

/// Lower-bound certificates for `‖H1‖₁` on the intervals `A_k`, `B_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerBoundWitness<S> {
    pub n: u64,
    pub resolution: u32,
    pub records: Vec<WitnessRecord<S>>,
    pub h1_l1: S,
    /// `(1/4) Σ_{k=1}^{|n|} |ε_k − ε_{k+1}| l_{n(k−1)}`.
    pub edge_bound: S,
}

impl<S: Scalar> LowerBoundWitness<S> {
    pub fn records_hold(&self) -> bool {
        self.records.iter().all(WitnessRecord::holds)
    }

    pub fn total_holds(&self) -> bool {
        self.h1_l1 >= self.edge_bound
    }

    pub fn holds(&self) -> bool {
        self.records_hold() && self.total_holds()
    }
}

/// Integrates `|H1|` over `A_k` (blocks with `a_k ≥ 2`) and `B_k` (blocks
/// with `b_k ≥ 2`).
///
/// `H1` is built at resolution `|n| + 2` so that `B_k` for the top block,
/// `(2^{−|n|−2}, 2^{−|n|−1})`, is a whole cell.
pub fn lower_bound_witness<S: Scalar>(n: u64) -> Result<LowerBoundWitness<S>> {
    check_decomposable(n)?;
    let resolution = default_resolution(n) + 1;
    let h1 = h1_part::<S>(n, resolution)?;
    let runs = DyadicIndex::from(n).block_runs()?;
    let quarter = S::from_frac(1, 4);
    let mut records = Vec::new();
    for (i, &(a, b)) in runs.runs().iter().enumerate() {
        if a >= 2 {
            let cells = (1usize << (resolution - a - 1))..(1usize << (resolution - a));
            records.push(WitnessRecord {
                block: i + 1,
                interval: WitnessInterval::A,
                position: a,
                integral: h1.abs_integral_over(cells.clone()),
                cells,
                threshold: S::harmonic(truncation(n, a - 1) as u128)? * quarter.clone(),
            });
        }
        if b >= 2 {
            let cells = (1usize << (resolution - b - 2))..(1usize << (resolution - b - 1));
            records.push(WitnessRecord {
                block: i + 1,
                interval: WitnessInterval::B,
                position: b,
                integral: h1.abs_integral_over(cells.clone()),
                cells,
                threshold: S::harmonic(truncation(n, b - 1) as u128)? * quarter.clone(),
            });
        }
    }
    if records.is_empty() {
        return Err(Error::Range(format!("n = {n} has no block at position >= 2")));
    }
    let m = order(n);
    let mut edge_sum = S::zero();
    for k in 1..=m {
        if (n >> k) & 1 != (n >> (k + 1)) & 1 {
            edge_sum = edge_sum + S::harmonic(truncation(n, k - 1) as u128)?;
        }
    }
    Ok(LowerBoundWitness {
        n,
        resolution,
        records,
        h1_l1: h1.l1_norm(),
        edge_bound: edge_sum * quarter,
    })
}

/// `‖F_n‖₁` at resolution `|n| + 1`.
pub fn log_kernel_l1_in<S: Scalar>(n: u64) -> Result<S> {
    Ok(norlund_log_kernel::<S>(n, default_resolution(n))?.l1_norm())
}

/// `‖F_n‖₁ = ‖(1/l_n) Σ_{j=1}^{n−1} D_{n−j}/j‖₁` in double precision.
pub fn log_kernel_l1(n: u64) -> Result<f64> {
    log_kernel_l1_in::<f64>(n)
}
