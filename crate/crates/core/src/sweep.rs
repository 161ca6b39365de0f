//! Sweeps of `‖F_n‖₁` against `1 + V_L(n)` with the norms of the
//! decomposition parts.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernels::{decompose, log_kernel_l1};
use crate::par::{self, Parallelism};
use crate::variation::{vl_in, vs, SequenceKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Range,
    Pow2Minus1,
    Alternating,
    TwoBit,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Self::Range => "range",
            Self::Pow2Minus1 => "pow2minus1",
            Self::Alternating => "alternating",
            Self::TwoBit => "two_bit",
        }
    }
}

/// `‖·‖₁` of the five decomposition parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartNorms {
    pub h1: f64,
    pub h21: f64,
    pub h22: f64,
    pub h23: f64,
    pub h3: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub n: u64,
    pub family: Family,
    pub order: u32,
    pub vs: u32,
    pub vl: f64,
    pub f_l1: f64,
    /// `‖F_n‖₁ / (1 + V_L(n))`
    pub ratio: f64,
    /// absent for `n < 4`
    pub parts: Option<PartNorms>,
    pub wall_seconds: f64,
}

impl SweepRecord {
    pub fn compute(n: u64, family: Family, with_parts: bool) -> Result<Self> {
        let start = Instant::now();
        let f_l1 = log_kernel_l1(n)?;
        let vl = vl_in::<f64>(n)?;
        let parts = if with_parts && n >= 4 {
            let d = decompose::<f64>(n)?;
            Some(PartNorms {
                h1: d.h1.l1_norm(),
                h21: d.h21.l1_norm(),
                h22: d.h22.l1_norm(),
                h23: d.h23.l1_norm(),
                h3: d.h3.l1_norm(),
            })
        } else {
            None
        };
        Ok(Self {
            n,
            family,
            order: 63 - n.leading_zeros(),
            vs: vs(n),
            vl,
            f_l1,
            ratio: f_l1 / (1.0 + vl),
            parts,
            wall_seconds: start.elapsed().as_secs_f64(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub nmin: u64,
    pub nmax: u64,
    /// add the sampled families up to `family_max`
    pub families: bool,
    pub family_max: u64,
    pub parts: bool,
    pub parallelism: Parallelism,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            nmin: 4,
            nmax: 512,
            families: true,
            family_max: 1 << 12,
            parts: true,
            parallelism: Parallelism::Parallel,
        }
    }
}

/// The realised range of `‖F_n‖₁ / (1 + V_L(n))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Band {
    pub lower: f64,
    pub lower_at: u64,
    pub upper: f64,
    pub upper_at: u64,
}

impl Band {
    pub fn width(&self) -> f64 {
        self.upper / self.lower
    }

    pub fn of(records: &[SweepRecord]) -> Option<Self> {
        let first = records.first()?;
        let mut band = Band {
            lower: first.ratio,
            lower_at: first.n,
            upper: first.ratio,
            upper_at: first.n,
        };
        for r in &records[1..] {
            if r.ratio < band.lower {
                band.lower = r.ratio;
                band.lower_at = r.n;
            }
            if r.ratio > band.upper {
                band.upper = r.ratio;
                band.upper_at = r.n;
            }
        }
        Some(band)
    }
}

/// Fitted constants of the part bounds
/// `‖H21‖₁, ‖H22‖₁, ‖H23‖₁ ≤ c|n|`, `‖H3‖₁ ≤ c`,
/// `‖H1‖₁ ≤ |n| V_L(n) + c|n|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartConstants {
    pub h21: f64,
    pub h22: f64,
    pub h23: f64,
    pub h3: f64,
    pub h1_excess: f64,
}

impl PartConstants {
    pub fn of(records: &[SweepRecord]) -> Option<Self> {
        let mut out: Option<Self> = None;
        for r in records {
            let Some(p) = r.parts else { continue };
            let m = r.order as f64;
            let row = Self {
                h21: p.h21 / m,
                h22: p.h22 / m,
                h23: p.h23 / m,
                h3: p.h3,
                h1_excess: (p.h1 - m * r.vl) / m,
            };
            out = Some(match out {
                None => row,
                Some(o) => Self {
                    h21: o.h21.max(row.h21),
                    h22: o.h22.max(row.h22),
                    h23: o.h23.max(row.h23),
                    h3: o.h3.max(row.h3),
                    h1_excess: o.h1_excess.max(row.h1_excess),
                },
            });
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub records: Vec<SweepRecord>,
    pub band: Band,
    pub part_constants: Option<PartConstants>,
}

/// Indices of a sweep, sorted, each tagged with the first family that
/// produced it (the exhaustive range takes precedence).
pub fn sweep_indices(cfg: &SweepConfig) -> Result<Vec<(u64, Family)>> {
    if cfg.nmin < 2 || cfg.nmin > cfg.nmax {
        return Err(Error::Range(format!(
            "need 2 <= nmin <= nmax, got {}..{}",
            cfg.nmin, cfg.nmax
        )));
    }
    let mut out: BTreeMap<u64, Family> = (cfg.nmin..=cfg.nmax).map(|n| (n, Family::Range)).collect();
    if cfg.families {
        let lo = cfg.nmin.max(4);
        let hi = cfg.family_max;
        let mut add = |n: u64, fam: Family| {
            if (lo..=hi).contains(&n) {
                out.entry(n).or_insert(fam);
            }
        };
        for (kind, fam) in [
            (SequenceKind::Pow2Minus1, Family::Pow2Minus1),
            (SequenceKind::Alternating, Family::Alternating),
        ] {
            for a in 1..64 {
                let n = kind.term(a)?.value() as u64;
                if n > hi {
                    break;
                }
                add(n, fam);
            }
        }
        for b in 1..63u32 {
            for a in 0..b {
                add((1u64 << a) + (1u64 << b), Family::TwoBit);
            }
        }
    }
    Ok(out.into_iter().collect())
}

pub fn theorem1_sweep(cfg: &SweepConfig) -> Result<SweepOutcome> {
    let indices = sweep_indices(cfg)?;
    let records = par::try_map(cfg.parallelism, indices, |(n, fam)| SweepRecord::compute(n, fam, cfg.parts))?;
    let band = Band::of(&records).expect("non-empty range");
    Ok(SweepOutcome {
        part_constants: PartConstants::of(&records),
        records,
        band,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indices_are_sorted_and_unique() {
        let cfg = SweepConfig {
            nmin: 4,
            nmax: 64,
            ..Default::default()
        };
        let idx = sweep_indices(&cfg).unwrap();
        assert!(idx.windows(2).all(|w| w[0].0 < w[1].0));
        assert!(idx.contains(&(4095, Family::Pow2Minus1)));
        assert!(idx.contains(&(2730, Family::Alternating)));
        assert!(idx.contains(&(3072, Family::TwoBit)));
        assert!(idx.contains(&(63, Family::Range)));
        assert!(idx.iter().all(|(n, _)| *n <= 4096));
        assert!(sweep_indices(&SweepConfig { nmin: 1, ..cfg.clone() }).is_err());
        assert!(sweep_indices(&SweepConfig { nmin: 9, nmax: 8, ..cfg }).is_err());
    }

    #[test]
    fn small_sweep() {
        let cfg = SweepConfig {
            nmin: 2,
            nmax: 128,
            families: false,
            ..Default::default()
        };
        let out = theorem1_sweep(&cfg).unwrap();
        assert_eq!(out.records.len(), 127);
        assert!(out.records[..2].iter().all(|r| r.parts.is_none()));
        for r in &out.records {
            assert!(r.f_l1 >= 1.0 - 1e-12 && r.ratio.is_finite());
            if r.n.is_power_of_two() {
                assert_eq!(r.vl, 0.0);
            }
        }
        let pc = out.part_constants.unwrap();
        assert!(pc.h21 <= 1.0, "{pc:?}");
        assert!(out.band.width() < 25.0);
    }

    #[test]
    fn part_constants_below_1024() {
        let cfg = SweepConfig {
            nmin: 4,
            nmax: 1023,
            families: false,
            ..Default::default()
        };
        let out = theorem1_sweep(&cfg).unwrap();
        for r in &out.records {
            let p = r.parts.unwrap();
            assert!(p.h21 <= r.order as f64, "n = {}: {}", r.n, p.h21);
        }
        let pc = out.part_constants.unwrap();
        for c in [pc.h22, pc.h23, pc.h3, pc.h1_excess] {
            assert!(c.is_finite() && c < 10.0, "{pc:?}");
        }
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let cfg = SweepConfig {
            nmin: 4,
            nmax: 100,
            families: false,
            ..Default::default()
        };
        let strip = |o: SweepOutcome| {
            o.records
                .into_iter()
                .map(|r| SweepRecord { wall_seconds: 0.0, ..r })
                .collect::<Vec<_>>()
        };
        let a = strip(theorem1_sweep(&cfg).unwrap());
        let b = strip(
            theorem1_sweep(&SweepConfig {
                parallelism: Parallelism::Sequential,
                ..cfg
            })
            .unwrap(),
        );
        assert_eq!(a, b);
    }
}
