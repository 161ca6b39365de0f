//! The acceptance suite: ten criteria, each a set of named checks with
//! pinned tolerances. Used by the `acceptance` test target and the CLI.

use std::fmt;
use std::time::Instant;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::grid::{GridFunction, Scalar};
use crate::kernels::{
    decompose, default_resolution, dirichlet, fejer, h1_closed_form_check, lower_bound_witness,
    paley_shift_mismatch,
};
use crate::means::{error_curve, h1_weak_constant, lebesgue_constant_curve, maximal_weak_constant, TestFunction};
use crate::par::{self, Parallelism};
use crate::sweep::{theorem1_sweep, SweepConfig};
use crate::variation::{konyagin_divisibility, mem_sum_in, vl, vl_in, vs, IndexSequence, SequenceKind};
use crate::Rational;

/// Ceiling for `max_{n ≤ 4096} ‖K_n‖₁`: observed 1.1326 plus 5 %.
pub const FEJER_CEILING: f64 = 1.19;
/// Largest admissible `C/c` for the Theorem-1 band.
pub const BAND_WIDTH_LIMIT: f64 = 25.0;
/// Regression bounds on the band (observed `[0.5298, 1.7071]`).
pub const BAND_LOWER_FLOOR: f64 = 0.50;
pub const BAND_UPPER_CEILING: f64 = 1.80;
/// `V_L(2^20 − 1)` must lie within this relative distance of `ln 2`.
pub const VL_LN2_TOLERANCE: f64 = 0.10;
/// Required growth of the (mem) sum of `2^A − 1` from `A = 10` to `A = 30`.
pub const MEM_GROWTH: f64 = 2.0;
/// `max/min` of `‖F_{2^A − 1}‖₁`, `A = 3..14`.
pub const POW2MINUS1_SPREAD: f64 = 2.0;
/// Required `final/initial` growth of `‖F‖₁` along alternating indices.
pub const ALTERNATING_GROWTH: f64 = 4.0;
/// Weak-type constant ceiling for the maximal function of spikes.
pub const MAXIMAL_WEAK_CEILING: f64 = 2.0;
/// Grid resolution of the spike experiments.
pub const SPIKE_RESOLUTION: u32 = 12;
/// Number of random inputs for the transform oracles.
pub const TRANSFORM_SAMPLES: usize = 100;
const SEED: u64 = 0x5eed_2024;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionOutcome {
    pub id: u32,
    pub title: &'static str,
    pub checks: Vec<Check>,
    pub seconds: f64,
}

impl CriterionOutcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "criterion {:>2} {verdict}  {} ({:.1}s)", self.id, self.title, self.seconds)?;
        for c in &self.checks {
            let mark = if c.passed { "ok  " } else { "FAIL" };
            write!(f, "\n    [{mark}] {}: {}", c.name, c.detail)?;
        }
        Ok(())
    }
}

pub const TITLES: [&str; 10] = [
    "exact decomposition identity, 4 <= n < 256",
    "Paley shift identity, j <= 6",
    "dyadic Dirichlet kernels, n <= 12",
    "uniform Fejér bound, n <= 4096",
    "two-sided band for ||F_n||_1 / (1 + V_L(n))",
    "lower-bound witnesses, 4 <= n < 512",
    "variation functionals",
    "convergence curves",
    "transform oracles",
    "weak-type experiments",
];

fn timed(id: u32, body: impl FnOnce() -> Result<Vec<Check>>) -> Result<CriterionOutcome> {
    let start = Instant::now();
    let checks = body()?;
    Ok(CriterionOutcome {
        id,
        title: TITLES[id as usize - 1],
        checks,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// Runs one criterion, `1 ≤ id ≤ 10`.
pub fn run(id: u32, par: Parallelism) -> Result<CriterionOutcome> {
    match id {
        1 => criterion_1(par),
        2 => criterion_2(),
        3 => criterion_3(),
        4 => criterion_4(par),
        5 => criterion_5(par),
        6 => criterion_6(par),
        7 => criterion_7(),
        8 => criterion_8(par),
        9 => criterion_9(),
        10 => criterion_10(par),
        _ => Err(crate::Error::Range(format!("no criterion {id}"))),
    }
}

pub fn run_all(par: Parallelism) -> Result<Vec<CriterionOutcome>> {
    (1..=10).map(|id| run(id, par)).collect()
}

pub fn criterion_1(par: Parallelism) -> Result<CriterionOutcome> {
    timed(1, || {
        let first = par::find_first(par, (4u64..256).collect(), |n| match decompose::<Rational>(n) {
            Ok(d) => d.identity_mismatch(None).map(|cell| format!("n = {n}, cell {cell}")),
            Err(e) => Some(format!("n = {n}: {e}")),
        });
        let h1 = par::find_first(par, (4u64..256).collect(), |n| match h1_closed_form_check(n) {
            Ok(true) => None,
            Ok(false) => Some(format!("n = {n}")),
            Err(e) => Some(format!("n = {n}: {e}")),
        });
        Ok(vec![
            Check::new("H1 + H21 + H22 + H23 + H3 = total", first.is_none(), first.unwrap_or_else(|| "252 indices, zero error".into())),
            Check::new("H1 rewritings", h1.is_none(), h1.unwrap_or_else(|| "252 indices agree".into())),
        ])
    })
}

pub fn criterion_2() -> Result<CriterionOutcome> {
    timed(2, || {
        let mut failure = None;
        let mut count = 0;
        'outer: for j in 1..=6u32 {
            for k in 1..1u64 << j {
                count += 1;
                if let Some(cell) = paley_shift_mismatch(j, k, j + 1)? {
                    failure = Some(format!("j = {j}, k = {k}, cell {cell}"));
                    break 'outer;
                }
            }
        }
        Ok(vec![Check::new(
            "D_{2^j-k} = D_{2^j} - w_{2^j-1} D_k",
            failure.is_none(),
            failure.unwrap_or_else(|| format!("{count} pairs exact")),
        )])
    })
}

pub fn criterion_3() -> Result<CriterionOutcome> {
    timed(3, || {
        let res = 12;
        let mut shape = None;
        let mut norm = None;
        for n in 0..=12u32 {
            let d = dirichlet::<Rational>(1 << n, res)?;
            let expect = GridFunction::from_fn(res, |c| {
                if c < 1 << (res - n) {
                    Rational::from_i64(1 << n)
                } else {
                    Rational::zero()
                }
            })?;
            if shape.is_none() {
                shape = d.first_mismatch(&expect, None).map(|c| format!("n = {n}, cell {c}"));
            }
            if norm.is_none() && d.l1_norm() != Rational::one() {
                norm = Some(format!("n = {n}"));
            }
        }
        Ok(vec![
            Check::new("D_{2^n} = 2^n 1_{I_n(0)}", shape.is_none(), shape.unwrap_or_else(|| "n = 0..12 exact".into())),
            Check::new("||D_{2^n}||_1 = 1", norm.is_none(), norm.unwrap_or_else(|| "n = 0..12 exact".into())),
        ])
    })
}

pub fn criterion_4(par: Parallelism) -> Result<CriterionOutcome> {
    timed(4, || {
        let norms = par::try_map(par, (1u64..=4096).collect(), |n| Ok::<_, crate::Error>((n, fejer::<f64>(n, default_resolution(n))?.l1_norm())))?;
        let (arg, max) = norms.into_iter().fold((0, 0.0f64), |best, (n, v)| if v > best.1 { (n, v) } else { best });
        Ok(vec![Check::new(
            format!("max ||K_n||_1 <= {FEJER_CEILING}"),
            max <= FEJER_CEILING,
            format!("max {max:.6} at n = {arg}"),
        )])
    })
}

pub fn criterion_5(par: Parallelism) -> Result<CriterionOutcome> {
    timed(5, || {
        let cfg = SweepConfig {
            parts: false,
            parallelism: par,
            ..SweepConfig::default()
        };
        let out = theorem1_sweep(&cfg)?;
        let b = out.band;
        let band = format!(
            "c = {:.5} (n = {}), C = {:.5} (n = {}), C/c = {:.4}, {} indices",
            b.lower,
            b.lower_at,
            b.upper,
            b.upper_at,
            b.width(),
            out.records.len()
        );
        Ok(vec![
            Check::new(format!("C/c <= {BAND_WIDTH_LIMIT}"), b.width() <= BAND_WIDTH_LIMIT, band),
            Check::new(
                format!("regression: c >= {BAND_LOWER_FLOOR}, C <= {BAND_UPPER_CEILING}"),
                b.lower >= BAND_LOWER_FLOOR && b.upper <= BAND_UPPER_CEILING,
                format!("[{:.5}, {:.5}]", b.lower, b.upper),
            ),
        ])
    })
}

pub fn criterion_6(par: Parallelism) -> Result<CriterionOutcome> {
    timed(6, || {
        let results = par::try_map(par, (4u64..512).collect(), |n| {
            let w = lower_bound_witness::<Rational>(n)?;
            Ok::<_, crate::Error>((n, w.records.len(), w.records.iter().find(|r| !r.holds()).map(|r| (r.block, r.interval)), w.total_holds()))
        })?;
        let records: usize = results.iter().map(|r| r.1).sum();
        let interval = results.iter().find_map(|(n, _, bad, _)| bad.map(|(k, i)| format!("n = {n}, block {k}, {i:?}")));
        let total = results.iter().find(|r| !r.3).map(|r| format!("n = {}", r.0));
        Ok(vec![
            Check::new("integral over A_k and B_k >= threshold", interval.is_none(), interval.unwrap_or_else(|| format!("{records} records hold"))),
            Check::new("||H1||_1 >= edge sum / 4", total.is_none(), total.unwrap_or_else(|| "508 indices hold".into())),
        ])
    })
}

pub fn criterion_7() -> Result<CriterionOutcome> {
    timed(7, || {
        let zero = (1..=30u32).all(|k| vl(1u64 << k).map(|v| v.is_zero()).unwrap_or(false));
        let ln2 = std::f64::consts::LN_2;
        let v20 = vl_in::<f64>((1u64 << 20) - 1)?;
        let m10 = mem_sum_in::<f64>((1u64 << 10) - 1)?;
        let m30 = mem_sum_in::<f64>((1u64 << 30) - 1)?;
        let kony: Vec<u32> = (1..=6).map(|a| SequenceKind::Konyagin.term(a).map(vs)).collect::<Result<_>>()?;
        Ok(vec![
            Check::new("V_L(2^k) = 0, k <= 30", zero, "exact"),
            Check::new(
                "V_L(2^20 - 1) within 10% of ln 2",
                (v20 / ln2 - 1.0).abs() <= VL_LN2_TOLERANCE,
                format!("{v20:.6} (ln 2 = {ln2:.6})"),
            ),
            Check::new(
                format!("mem(2^30 - 1) >= {MEM_GROWTH} mem(2^10 - 1)"),
                m30 >= MEM_GROWTH * m10,
                format!("{m30:.4} vs {m10:.4}, factor {:.3}", m30 / m10),
            ),
            Check::new("V_S(Konyagin n_A) increasing, A = 1..6", kony.windows(2).all(|w| w[0] < w[1]), format!("{kony:?}")),
            Check::new("2^{k_A} divides n_{A+1}, A < 10", konyagin_divisibility(10)?, "self-test of the generator"),
        ])
    })
}

pub fn criterion_8(par: Parallelism) -> Result<CriterionOutcome> {
    timed(8, || {
        let err = error_curve(IndexSequence::new(SequenceKind::Pow2), TestFunction::Identity, 3, 12, par)?;
        let errs: Vec<f64> = err.iter().map(|r| r.error_sup).collect();
        let decreasing = errs.windows(2).all(|w| w[1] < w[0]);

        let m1 = lebesgue_constant_curve(IndexSequence::new(SequenceKind::Pow2Minus1), 3, 14, par)?;
        let (lo, hi) = m1.iter().fold((f64::MAX, 0.0f64), |(l, h), r| (l.min(r.f_l1), h.max(r.f_l1)));

        let alt = lebesgue_constant_curve(IndexSequence::new(SequenceKind::Alternating), 3, 12, par)?;
        let (first, last) = (alt.first().expect("rows"), alt.last().expect("rows"));
        let growth = last.f_l1 / first.f_l1;
        Ok(vec![
            Check::new(
                "||L_{2^A} x - x||_sup strictly decreasing, A = 3..12",
                decreasing,
                format!("{:.3e} -> {:.3e}", errs[0], errs[errs.len() - 1]),
            ),
            Check::new(
                format!("pow2minus1: max/min ||F||_1 <= {POW2MINUS1_SPREAD}, A = 3..14"),
                hi / lo <= POW2MINUS1_SPREAD,
                format!("[{lo:.4}, {hi:.4}], spread {:.4}", hi / lo),
            ),
            Check::new(
                format!("alternating: final/initial ||F||_1 >= {ALTERNATING_GROWTH}, A = 3..12"),
                growth >= ALTERNATING_GROWTH,
                format!("{:.4} (n = {}) -> {:.4} (n = {}), factor {growth:.4}", first.f_l1, first.n, last.f_l1, last.n),
            ),
        ])
    })
}

/// `w_i(c)` straight from the digit definition, MSB-first cells.
fn walsh_digit(i: usize, cell: usize, res: u32) -> i64 {
    let parity = (0..res).fold(0, |p, k| p ^ ((i >> k) & (cell >> (res - 1 - k)) & 1));
    1 - 2 * parity as i64
}

fn naive_transform(f: &GridFunction<Rational>) -> Vec<Rational> {
    let res = f.resolution();
    (0..f.len())
        .map(|i| {
            f.values()
                .iter()
                .enumerate()
                .fold(Rational::zero(), |acc, (c, v)| acc + v * Rational::from_i64(walsh_digit(i, c, res)))
                .div_pow2(res)
        })
        .collect()
}

fn random_rational_grid(rng: &mut ChaCha8Rng, res: u32) -> GridFunction<Rational> {
    GridFunction::from_fn(res, |_| Rational::from_frac(rng.gen_range(-1000..1000), rng.gen_range(1..64))).expect("resolution in range")
}

pub fn criterion_9() -> Result<CriterionOutcome> {
    timed(9, || {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        let mut fwht_fail = None;
        for s in 0..TRANSFORM_SAMPLES {
            let res = (s % 9) as u32;
            let f = random_rational_grid(&mut rng, res);
            if f.fwht().coeffs() != &naive_transform(&f)[..] {
                fwht_fail = Some(format!("sample {s}, N = {res}"));
                break;
            }
        }
        let mut conv_fail = None;
        for s in 0..TRANSFORM_SAMPLES {
            let res = (s % 7) as u32;
            let f = random_rational_grid(&mut rng, res);
            let g = random_rational_grid(&mut rng, res);
            // naive XOR convolution
            let naive = GridFunction::from_fn(res, |x| {
                (0..f.len())
                    .fold(Rational::zero(), |acc, t| acc + &f.values()[t] * &g.values()[x ^ t])
                    .div_pow2(res)
            })?;
            if f.xor_convolve(&g)? != naive {
                conv_fail = Some(format!("sample {s}, N = {res}"));
                break;
            }
        }
        Ok(vec![
            Check::new("FWHT = naive transform, N <= 8", fwht_fail.is_none(), fwht_fail.unwrap_or_else(|| format!("{TRANSFORM_SAMPLES} random inputs exact"))),
            Check::new("spectral = naive XOR convolution, N <= 6", conv_fail.is_none(), conv_fail.unwrap_or_else(|| format!("{TRANSFORM_SAMPLES} random pairs exact"))),
        ])
    })
}

pub fn criterion_10(par: Parallelism) -> Result<CriterionOutcome> {
    timed(10, || {
        let maximal = (0..=10u32)
            .map(|m| Ok((m, maximal_weak_constant(m, SPIKE_RESOLUTION)?)))
            .collect::<Result<Vec<_>>>()?;
        let (worst_m, worst) = maximal.iter().copied().fold((0, 0.0f64), |b, (m, c)| if c > b.1 { (m, c) } else { b });
        let seq = IndexSequence::new(SequenceKind::Pow2Minus1);
        let h1 = (0..=6u32)
            .map(|m| Ok((m, h1_weak_constant(seq, m, 3, SPIKE_RESOLUTION - 1, par)?.constant)))
            .collect::<Result<Vec<_>>>()?;
        let (h1_m, h1_max) = h1.iter().copied().fold((0, 0.0f64), |b, (m, c)| if c > b.1 { (m, c) } else { b });
        Ok(vec![
            Check::new(
                format!("E* spikes: C <= {MAXIMAL_WEAK_CEILING}, m <= 10"),
                worst <= MAXIMAL_WEAK_CEILING,
                format!("max C = {worst:.6} at m = {worst_m}"),
            ),
            Check::new(
                "sup_A |f * H1_{m_A}| / |m_A|: finite constant, pow2minus1 A = 3..11",
                h1_max.is_finite() && h1_max > 0.0,
                format!("max C = {h1_max:.6} at m = {h1_m}"),
            ),
        ])
    })
}
