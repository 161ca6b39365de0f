//! Edge-count and logarithmic variation of integers, the (mem) sum, and
//! the index sequences used in convergence experiments.

use crate::dyadic::DyadicIndex;
use crate::error::{Error, Result};
use crate::grid::Scalar;
use crate::Rational;

/// `V_S(n) = Σ_{i≥0} |ε_i(n) − ε_{i+1}(n)| + ε_0(n)`; zero for `n = 0`.
pub fn vs(n: impl Into<DyadicIndex>) -> u32 {
    let v = n.into().value();
    (v ^ (v >> 1)).count_ones() + (v & 1) as u32
}

fn check_vl_domain(n: DyadicIndex) -> Result<u32> {
    if n.value() < 2 {
        return Err(Error::IndexTooSmall {
            what: "logarithmic variation",
            n: n.value(),
            min: 2,
        });
    }
    n.order()
}

/// `V_L(n) = (1/|n|) Σ_{k=1}^{|n|} |ε_k(n) − ε_{k+1}(n)| l_{n(k−1)}`.
pub fn vl_in<S: Scalar>(n: impl Into<DyadicIndex>) -> Result<S> {
    let n = n.into();
    let m = check_vl_domain(n)?;
    let mut sum = S::zero();
    for k in 1..=m {
        if n.eps(k) != n.eps(k + 1) {
            sum = sum + S::harmonic(n.truncate(k - 1).value())?;
        }
    }
    Ok(sum.div(&S::from_i64(m as i64)))
}

/// Exact `V_L(n)`.
pub fn vl(n: impl Into<DyadicIndex>) -> Result<Rational> {
    vl_in(n)
}

/// `(1/|n|) Σ_{k=1}^{|n|} ε_k(n) l_{n(k−1)}`.
pub fn mem_sum_in<S: Scalar>(n: impl Into<DyadicIndex>) -> Result<S> {
    let n = n.into();
    let m = check_vl_domain(n)?;
    let mut sum = S::zero();
    for k in 1..=m {
        if n.eps(k) == 1 {
            sum = sum + S::harmonic(n.truncate(k - 1).value())?;
        }
    }
    Ok(sum.div(&S::from_i64(m as i64)))
}

/// Exact (mem) sum.
pub fn mem_sum(n: impl Into<DyadicIndex>) -> Result<Rational> {
    mem_sum_in(n)
}

#[derive(Debug, Clone, PartialEq)]
pub struct VariationReport<S> {
    pub n: DyadicIndex,
    pub vs: u32,
    pub vl: S,
    pub mem_sum: S,
    /// `(k, l_{n(k−1)})` for `k = 1..=|n|`.
    pub l_truncations: Vec<(u32, S)>,
    pub runs: Vec<(u32, u32)>,
}

impl<S: Scalar> VariationReport<S> {
    pub fn new(n: impl Into<DyadicIndex>) -> Result<Self> {
        let n = n.into();
        let m = check_vl_domain(n)?;
        let l_truncations = (1..=m)
            .map(|k| Ok((k, S::harmonic(n.truncate(k - 1).value())?)))
            .collect::<Result<_>>()?;
        Ok(Self {
            n,
            vs: vs(n),
            vl: vl_in(n)?,
            mem_sum: mem_sum_in(n)?,
            l_truncations,
            runs: n.block_runs()?.runs().to_vec(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SequenceKind {
    /// `2^A`
    Pow2,
    /// `2^A − 1`
    Pow2Minus1,
    /// `2^{A²} Σ_{i=0}^{A} 4^i`
    Konyagin,
    /// `1010…₂` with `A + 1` digits
    Alternating,
}

impl SequenceKind {
    pub const ALL: [SequenceKind; 4] = [
        SequenceKind::Pow2,
        SequenceKind::Pow2Minus1,
        SequenceKind::Konyagin,
        SequenceKind::Alternating,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Pow2 => "pow2",
            Self::Pow2Minus1 => "pow2minus1",
            Self::Konyagin => "konyagin",
            Self::Alternating => "alternating",
        }
    }

    /// `m_A`, or an error if it does not fit in 128 bits.
    pub fn term(self, a: u32) -> Result<DyadicIndex> {
        let overflow = || Error::SequenceOverflow {
            name: self.name(),
            a,
        };
        let v = match self {
            Self::Pow2 => 1u128.checked_shl(a).filter(|_| a < 128).ok_or_else(overflow)?,
            Self::Pow2Minus1 => {
                if a >= 128 {
                    return Err(overflow());
                }
                (1u128 << a) - 1
            }
            Self::Konyagin => {
                // Σ_{i=0}^{A} 4^i has 2A + 1 bits
                let top = a.checked_mul(a).and_then(|s| s.checked_add(2 * a + 1));
                if top.is_none_or(|t| t > 128) {
                    return Err(overflow());
                }
                let sum = (0..=a).fold(0u128, |acc, i| acc | 1u128 << (2 * i));
                sum << (a * a)
            }
            Self::Alternating => {
                if a >= 127 {
                    return Err(overflow());
                }
                (1u128 << (a + 1)) / 3
            }
        };
        Ok(DyadicIndex::new(v))
    }
}

impl std::str::FromStr for SequenceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownName {
                kind: "sequence",
                name: s.to_string(),
            })
    }
}

impl std::fmt::Display for SequenceKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A strictly increasing index family `m_A`, `A = 1, 2, …`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexSequence {
    pub kind: SequenceKind,
}

impl IndexSequence {
    pub fn new(kind: SequenceKind) -> Self {
        Self { kind }
    }

    pub fn named(name: &str) -> Result<Self> {
        Ok(Self::new(name.parse()?))
    }

    pub fn term(&self, a: u32) -> Result<DyadicIndex> {
        self.kind.term(a)
    }

    /// `(A, m_A)` for `A = a_min..=a_max`.
    pub fn terms(&self, a_min: u32, a_max: u32) -> Result<Vec<(u32, DyadicIndex)>> {
        (a_min..=a_max).map(|a| Ok((a, self.term(a)?))).collect()
    }

    /// Lazy `(A, m_A)` from `A = 1`, stopping at the first overflow.
    pub fn iter(&self) -> impl Iterator<Item = (u32, DyadicIndex)> + '_ {
        (1u32..).map_while(|a| self.term(a).ok().map(|n| (a, n)))
    }
}

/// Checks that `2^{k_A}` divides `n_{A+1}` with `k_A = ⌊log₂ n_A⌋ + 1` for
/// every consecutive Konyagin pair with `A + 1 ≤ a_max`.
pub fn konyagin_divisibility(a_max: u32) -> Result<bool> {
    let seq = IndexSequence::new(SequenceKind::Konyagin);
    for a in 1..a_max {
        let n = seq.term(a)?.value();
        let next = seq.term(a + 1)?.value();
        let k = 128 - n.leading_zeros();
        if next.trailing_zeros() < k {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    BoundedSoFar,
    Growing,
}

impl Classification {
    /// Growth is declared when the last-quarter maximum exceeds the
    /// first-quarter maximum by more than this factor.
    pub const FACTOR: f64 = 1.5;

    pub fn name(self) -> &'static str {
        match self {
            Self::BoundedSoFar => "bounded-so-far",
            Self::Growing => "growing",
        }
    }

    /// Compares the maxima of the first and last quarter of `values`.
    pub fn of(values: &[f64]) -> Self {
        if values.is_empty() {
            return Self::BoundedSoFar;
        }
        let q = values.len().div_ceil(4);
        let max = |s: &[f64]| s.iter().copied().fold(0.0f64, f64::max);
        let first = max(&values[..q]);
        let last = max(&values[values.len() - q..]);
        if last > Self::FACTOR * first && last > 0.0 {
            Self::Growing
        } else {
            Self::BoundedSoFar
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileRow {
    pub a: u32,
    pub n: DyadicIndex,
    pub vs: u32,
    pub vl: f64,
    pub mem_sum: f64,
    pub runmax_vl: f64,
    pub runmax_mem: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionProfile {
    pub sequence: SequenceKind,
    pub rows: Vec<ProfileRow>,
    pub vs_class: Classification,
    pub vl_class: Classification,
    pub mem_class: Classification,
}

/// `V_S`, `V_L` and the (mem) sum along `m_1, …, m_{A_max}` in double
/// precision (terms with `m_A < 2` are skipped).
pub fn condition_profile(seq: IndexSequence, a_max: u32) -> Result<ConditionProfile> {
    if a_max == 0 {
        return Err(Error::Range("A_max must be at least 1".into()));
    }
    let mut rows = Vec::new();
    let (mut runmax_vl, mut runmax_mem) = (0.0f64, 0.0f64);
    for (a, n) in seq.terms(1, a_max)? {
        if n.value() < 2 {
            continue;
        }
        let vl = vl_in::<f64>(n)?;
        let mem = mem_sum_in::<f64>(n)?;
        runmax_vl = runmax_vl.max(vl);
        runmax_mem = runmax_mem.max(mem);
        rows.push(ProfileRow {
            a,
            n,
            vs: vs(n),
            vl,
            mem_sum: mem,
            runmax_vl,
            runmax_mem,
        });
    }
    let col = |f: fn(&ProfileRow) -> f64| rows.iter().map(f).collect::<Vec<_>>();
    Ok(ConditionProfile {
        sequence: seq.kind,
        vs_class: Classification::of(&col(|r| r.vs as f64)),
        vl_class: Classification::of(&col(|r| r.vl)),
        mem_class: Classification::of(&col(|r| r.mem_sum)),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::harmonic_exact;

    fn q(p: i64, d: u64) -> Rational {
        Rational::from_frac(p, d)
    }

    #[test]
    fn vs_examples() {
        assert_eq!(vs(1u64), 2);
        assert_eq!(vs(5u64), 4);
        assert_eq!(vs(0u64), 0);
        for k in 1..40 {
            assert_eq!(vs(1u64 << k), 2);
        }
    }

    #[test]
    fn vs_counts_runs() {
        for n in 1..1u64 << 16 {
            let runs = DyadicIndex::from(n).block_runs().unwrap();
            assert_eq!(vs(n), 2 * runs.len() as u32, "n = {n}");
        }
    }

    #[test]
    fn vl_and_mem_examples() {
        for k in 1..=30u32 {
            assert_eq!(vl(1u64 << k).unwrap(), q(0, 1));
            assert_eq!(mem_sum(1u64 << k).unwrap(), q(0, 1));
        }
        assert_eq!(vl(15u64).unwrap(), q(49, 60));
        assert_eq!(mem_sum(15u64).unwrap(), q(79, 60));
        assert!(vl(1u64).is_err());
        assert!(mem_sum(0u64).is_err());
        let v = vl_in::<f64>((1u64 << 20) - 1).unwrap();
        let ln2 = std::f64::consts::LN_2;
        assert!((0.9 * ln2..=1.1 * ln2).contains(&v), "{v}");
    }

    #[test]
    fn exact_and_double_agree() {
        for n in 2..2000u64 {
            let e = vl(n).unwrap();
            let d = vl_in::<f64>(n).unwrap();
            assert!((e.to_f64() - d).abs() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn mem_bounds_vl() {
        for n in 2..1u64 << 16 {
            let lhs = vl_in::<f64>(n).unwrap();
            let m = DyadicIndex::from(n).order().unwrap() as f64;
            let rhs = 2.0 * mem_sum_in::<f64>(n).unwrap() + 2.0 * f64::harmonic(n as u128).unwrap() / m;
            assert!(lhs <= rhs + 1e-12, "n = {n}");
        }
    }

    #[test]
    fn vl_vanishes_exactly_at_2k_and_2k_plus_1() {
        // every edge of 2^k + 1 sees a truncation ≤ 1, where l vanishes
        for n in 4..1u64 << 12 {
            let zero = vl_in::<f64>(n).unwrap() == 0.0;
            let expect = n.is_power_of_two() || (n - 1).is_power_of_two();
            assert_eq!(zero, expect, "n = {n}");
        }
        assert_eq!(vl(5u64).unwrap(), q(0, 1));
    }

    #[test]
    fn report_fields() {
        let r = VariationReport::<Rational>::new(15u64).unwrap();
        assert_eq!(r.vs, 2);
        assert_eq!(r.vl, q(49, 60));
        assert_eq!(r.runs, vec![(0, 3)]);
        let ls: Vec<Rational> = [1u128, 3, 7].iter().map(|&k| harmonic_exact(k).unwrap()).collect();
        assert_eq!(r.l_truncations, vec![(1, ls[0].clone()), (2, ls[1].clone()), (3, ls[2].clone())]);
    }

    #[test]
    fn sequence_terms() {
        assert_eq!(SequenceKind::Konyagin.term(2).unwrap().value(), 336);
        assert_eq!(SequenceKind::Pow2.term(5).unwrap().value(), 32);
        assert_eq!(SequenceKind::Pow2Minus1.term(5).unwrap().value(), 31);
        let alt: Vec<u128> = (1..=5).map(|a| SequenceKind::Alternating.term(a).unwrap().value()).collect();
        assert_eq!(alt, vec![0b1, 0b10, 0b101, 0b1010, 0b10101]);
        assert!("nope".parse::<SequenceKind>().is_err());
        assert!(SequenceKind::Konyagin.term(11).is_err());
        for kind in SequenceKind::ALL {
            let seq = IndexSequence::new(kind);
            let terms: Vec<u128> = seq.iter().map(|(_, n)| n.value()).collect();
            assert!(terms.windows(2).all(|w| w[0] < w[1]), "{kind}");
            assert!(terms.len() >= 10);
        }
    }

    #[test]
    fn konyagin_hypothesis() {
        assert!(konyagin_divisibility(10).unwrap());
        let vs: Vec<u32> = (1..=6).map(|a| vs(SequenceKind::Konyagin.term(a).unwrap())).collect();
        assert!(vs.windows(2).all(|w| w[0] < w[1]), "{vs:?}");
    }

    #[test]
    fn profiles() {
        let p = condition_profile(IndexSequence::new(SequenceKind::Pow2), 30).unwrap();
        assert!(p.rows.iter().all(|r| r.vl == 0.0));
        assert_eq!(p.vl_class, Classification::BoundedSoFar);

        let p = condition_profile(IndexSequence::new(SequenceKind::Pow2Minus1), 30).unwrap();
        assert_eq!(p.vl_class, Classification::BoundedSoFar);
        assert_eq!(p.mem_class, Classification::Growing);
        let m = |a: u32| p.rows.iter().find(|r| r.a == a).unwrap().mem_sum;
        assert!(m(30) >= 2.0 * m(10));

        let p = condition_profile(IndexSequence::new(SequenceKind::Alternating), 40).unwrap();
        assert_eq!(p.vl_class, Classification::Growing);
        // V_L(m_A)/A settles near ln 2 / 2
        let last = p.rows.last().unwrap();
        let slope = last.vl / last.a as f64;
        assert!((0.25..0.45).contains(&slope), "{slope}");

        assert!(condition_profile(IndexSequence::new(SequenceKind::Pow2), 0).is_err());
    }
}
