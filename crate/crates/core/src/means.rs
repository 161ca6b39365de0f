//! Summability means applied to functions: the test-function corpus,
//! approximation errors, moduli of continuity, Lebesgue constants along
//! index sequences, and weak-type experiments.

use crate::dyadic::DyadicIndex;
use crate::error::{Error, Result};
use crate::grid::{GridFunction, Scalar};
use crate::kernels::{self, default_resolution, KernelSpec};
use crate::par::{self, Parallelism};
use crate::variation::{vl_in, IndexSequence};
use crate::walsh::{maximal_function, walsh_sign, weak_type_constant};
use crate::MAX_RESOLUTION;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Norm {
    Sup,
    L1,
}

impl std::str::FromStr for Norm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sup" => Ok(Self::Sup),
            "l1" | "L1" => Ok(Self::L1),
            _ => Err(Error::UnknownName {
                kind: "norm",
                name: s.to_string(),
            }),
        }
    }
}

impl Norm {
    pub fn of<S: Scalar>(self, g: &GridFunction<S>) -> S {
        match self {
            Self::Sup => g.sup_norm(),
            Self::L1 => g.l1_norm(),
        }
    }
}

/// Terms `(index, coefficient)` of the corpus Walsh polynomial.
pub const WALSH_POLY_TERMS: [(u64, i64); 4] = [(0, 1), (3, 2), (5, -1), (6, 1)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TestFunction {
    /// `f ≡ 1`
    Constant,
    /// `f(x) = x`
    Identity,
    /// `Σ c_i w_i` over [`WALSH_POLY_TERMS`]
    WalshPolynomial,
    /// `1_{I_1(0)}`
    Indicator,
    /// `2^m 1_{I_m(0)}`
    Spike(u32),
    /// `1/(1 + k)` on `[2^{−k−1}, 2^{−k})`, zero at the origin;
    /// `ω(δ) ≍ 1/log(1/δ)`
    LogModulus,
}

impl TestFunction {
    pub fn name(&self) -> String {
        match self {
            Self::Constant => "constant".into(),
            Self::Identity => "identity".into(),
            Self::WalshPolynomial => "walsh_poly".into(),
            Self::Indicator => "indicator".into(),
            Self::Spike(m) => format!("spike:{m}"),
            Self::LogModulus => "log_modulus".into(),
        }
    }

    /// Smoothness class of the function, for reports.
    pub fn smoothness(&self) -> &'static str {
        match self {
            Self::Constant | Self::WalshPolynomial | Self::Indicator => "dyadic step",
            Self::Identity => "Lipschitz",
            Self::Spike(_) => "L1 spike",
            Self::LogModulus => "log modulus",
        }
    }

    /// Coarsest resolution at which the function is represented without
    /// loss (`None` when every resolution is an approximation).
    pub fn intrinsic_resolution(&self) -> Option<u32> {
        match self {
            Self::Constant => Some(0),
            Self::WalshPolynomial => Some(3),
            Self::Indicator => Some(1),
            Self::Spike(m) => Some(*m),
            Self::Identity | Self::LogModulus => None,
        }
    }

    /// The function on a resolution-`resolution` grid: cell averages, except
    /// for the log-modulus member, which takes left-endpoint values.
    pub fn sample<S: Scalar>(&self, resolution: u32) -> Result<GridFunction<S>> {
        if let Some(min) = self.intrinsic_resolution() {
            if resolution < min {
                return Err(Error::Range(format!(
                    "{} needs resolution >= {min}, got {resolution}",
                    self.name()
                )));
            }
        }
        let res = resolution;
        match *self {
            Self::Constant => GridFunction::constant(res, S::one()),
            // average of x over [c/2^N, (c+1)/2^N)
            Self::Identity => GridFunction::from_fn(res, |c| S::from_frac(2 * c as i64 + 1, 1u64 << (res + 1))),
            Self::WalshPolynomial => GridFunction::from_fn(res, |c| {
                WALSH_POLY_TERMS
                    .iter()
                    .fold(S::zero(), |acc, &(i, a)| acc + S::from_i64(a * walsh_sign(i, c, res)))
            }),
            Self::Indicator => GridFunction::from_fn(res, |c| {
                if c < 1 << (res - 1) {
                    S::one()
                } else {
                    S::zero()
                }
            }),
            Self::Spike(m) => GridFunction::from_fn(res, |c| {
                if c >> (res - m) == 0 {
                    S::from_i64(1 << m)
                } else {
                    S::zero()
                }
            }),
            // sampled at left endpoints, so the origin keeps f(0) = 0
            Self::LogModulus => GridFunction::from_fn(res, |c| {
                if c == 0 {
                    S::zero()
                } else {
                    let k = res - (usize::BITS - c.leading_zeros());
                    S::from_frac(1, k as u64 + 1)
                }
            }),
        }
    }
}

impl std::str::FromStr for TestFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownName {
            kind: "function",
            name: s.to_string(),
        };
        Ok(match s {
            "constant" => Self::Constant,
            "identity" => Self::Identity,
            "walsh_poly" => Self::WalshPolynomial,
            "indicator" => Self::Indicator,
            "log_modulus" => Self::LogModulus,
            "spike" => Self::Spike(4),
            _ => {
                let m = s.strip_prefix("spike:").ok_or_else(unknown)?;
                Self::Spike(m.parse().map_err(|_| unknown())?)
            }
        })
    }
}

/// Every corpus member (the spike with `m = 4`).
pub fn corpus() -> Vec<TestFunction> {
    vec![
        TestFunction::Constant,
        TestFunction::Identity,
        TestFunction::WalshPolynomial,
        TestFunction::Indicator,
        TestFunction::Spike(4),
        TestFunction::LogModulus,
    ]
}

/// `f ∗ K` for the kernel described by `spec`, which must share `f`'s
/// resolution.
pub fn apply_mean<S: Scalar>(spec: &KernelSpec<S>, f: &GridFunction<S>) -> Result<GridFunction<S>> {
    if spec.resolution != f.resolution() {
        return Err(Error::ResolutionMismatch {
            left: spec.resolution,
            right: f.resolution(),
        });
    }
    f.xor_convolve(&spec.build()?)
}

fn sequence_resolution(n: DyadicIndex) -> Result<u32> {
    let res = default_resolution(n.value() as u64);
    if n.value() >> 64 != 0 || res > MAX_RESOLUTION {
        return Err(Error::ResolutionTooLarge(n.order()? + 1));
    }
    Ok(res)
}

fn usable_terms(seq: IndexSequence, a_min: u32, a_max: u32) -> Result<Vec<(u32, DyadicIndex)>> {
    Ok(seq
        .terms(a_min, a_max)?
        .into_iter()
        .filter(|(_, n)| n.value() >= 2)
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorRow {
    pub a: u32,
    pub n: u64,
    pub error_sup: f64,
    pub error_l1: f64,
}

impl ErrorRow {
    pub fn error(&self, norm: Norm) -> f64 {
        match norm {
            Norm::Sup => self.error_sup,
            Norm::L1 => self.error_l1,
        }
    }
}

/// `‖L_{m_A} f − f‖` in both norms, `f` sampled at `|m_A| + 1` for each `A`.
pub fn error_curve(
    seq: IndexSequence,
    f: TestFunction,
    a_min: u32,
    a_max: u32,
    par: Parallelism,
) -> Result<Vec<ErrorRow>> {
    let terms = usable_terms(seq, a_min, a_max)?;
    par::try_map(par, terms, |(a, n)| {
        // never coarser than the function itself
        let res = sequence_resolution(n)?.max(f.intrinsic_resolution().unwrap_or(0));
        let n = n.value() as u64;
        let g = f.sample::<f64>(res)?;
        let spec = KernelSpec::new(kernels::KernelKind::NorlundLog, n).with_resolution(res);
        let diff = apply_mean(&spec, &g)?.sub(&g)?;
        Ok(ErrorRow {
            a,
            n,
            error_sup: diff.sup_norm(),
            error_l1: diff.l1_norm(),
        })
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LebesgueRow {
    pub a: u32,
    pub n: u64,
    pub f_l1: f64,
    pub vl: f64,
    /// `‖F_n‖₁ / (1 + V_L(n))`
    pub ratio: f64,
}

/// `‖F_{m_A}‖₁` and `V_L(m_A)` along a sequence.
pub fn lebesgue_constant_curve(
    seq: IndexSequence,
    a_min: u32,
    a_max: u32,
    par: Parallelism,
) -> Result<Vec<LebesgueRow>> {
    let terms = usable_terms(seq, a_min, a_max)?;
    par::try_map(par, terms, |(a, n)| {
        sequence_resolution(n)?;
        let vl = vl_in::<f64>(n)?;
        let n = n.value() as u64;
        let f_l1 = kernels::log_kernel_l1(n)?;
        Ok(LebesgueRow {
            a,
            n,
            f_l1,
            vl,
            ratio: f_l1 / (1.0 + vl),
        })
    })
}

/// `(k, ω(2^{−k}, f))` for `k = 0..=k_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModulusCurve {
    pub norm: Norm,
    pub points: Vec<(u32, f64)>,
}

impl ModulusCurve {
    pub fn get(&self, k: u32) -> Option<f64> {
        self.points.iter().find(|(j, _)| *j == k).map(|(_, v)| *v)
    }
}

/// `ω(2^{−k}, g) = max_{0 < h ≤ 2^{−k}} ‖g(· ∔ h) − g‖` over the dyadic
/// shifts representable on `g`'s grid.
pub fn modulus_of_grid(g: &GridFunction<f64>, norm: Norm, k_max: u32, par: Parallelism) -> Result<ModulusCurve> {
    let res = g.resolution();
    if k_max > res {
        return Err(Error::ExceedsResolution {
            what: "modulus level",
            value: k_max as u128,
            resolution: res,
        });
    }
    let vals = g.values();
    let cell = 2f64.powi(-(res as i32));
    // d[h − 1] = ‖g(· ∔ h) − g‖ for every nonzero shift cell h
    let d = par::map(par, (1..vals.len()).collect(), |h| {
        let it = vals.iter().enumerate().map(|(c, v)| (vals[c ^ h] - v).abs());
        match norm {
            Norm::Sup => it.fold(0.0, f64::max),
            Norm::L1 => it.sum::<f64>() * cell,
        }
    });
    let prefix: Vec<f64> = d
        .iter()
        .scan(0.0f64, |best, v| {
            *best = best.max(*v);
            Some(*best)
        })
        .collect();
    let points = (0..=k_max)
        .map(|k| {
            // shift cells h with h·2^{−res} ≤ 2^{−k}; the point 1 itself is
            // not in [0, 1), so k = 0 takes every shift
            let limit = (1usize << (res - k)).min(vals.len() - 1);
            (k, if limit == 0 { 0.0 } else { prefix[limit - 1] })
        })
        .collect();
    Ok(ModulusCurve { norm, points })
}

/// Modulus of continuity of a corpus function sampled at `resolution`.
pub fn modulus(f: TestFunction, norm: Norm, k_max: u32, resolution: u32, par: Parallelism) -> Result<ModulusCurve> {
    modulus_of_grid(&f.sample::<f64>(resolution)?, norm, k_max, par)
}

/// Weak-type constant `sup_λ λ|{E* f > λ}| / ‖f‖₁` for `f = 2^m 1_{I_m(0)}`.
pub fn maximal_weak_constant(m: u32, resolution: u32) -> Result<f64> {
    let f = TestFunction::Spike(m).sample::<f64>(resolution)?;
    Ok(weak_type_constant(&maximal_function(&f)) / f.l1_norm())
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeakTypeReport {
    pub spike: u32,
    pub resolution: u32,
    /// indices `m_A` entering the supremum
    pub indices: Vec<u64>,
    pub constant: f64,
}

/// Weak-type constant of `f ↦ sup_A |f ∗ H1_{m_A}| / |m_A|` for the spike
/// `2^m 1_{I_m(0)}`, `m_A` running over the sequence terms with
/// `a_min ≤ A ≤ a_max` and `m_A ≥ 4`. Everything lives on the grid of the
/// largest index.
pub fn h1_weak_constant(
    seq: IndexSequence,
    spike: u32,
    a_min: u32,
    a_max: u32,
    par: Parallelism,
) -> Result<WeakTypeReport> {
    let terms: Vec<u64> = seq
        .terms(a_min, a_max)?
        .into_iter()
        .map(|(_, n)| n.value())
        .filter(|&n| n >= 4)
        .map(|n| u64::try_from(n).map_err(|_| Error::ResolutionTooLarge(128 - n.leading_zeros())))
        .collect::<Result<_>>()?;
    let top = *terms
        .iter()
        .max()
        .ok_or_else(|| Error::Range("no sequence term >= 4 in range".into()))?;
    let res = default_resolution(top).max(spike);
    if res > MAX_RESOLUTION {
        return Err(Error::ResolutionTooLarge(res));
    }
    let f = TestFunction::Spike(spike).sample::<f64>(res)?;
    let parts = par::try_map(par, terms.clone(), |n| {
        let h1 = kernels::h1_part::<f64>(n, res)?;
        let order = (63 - n.leading_zeros()) as f64;
        Ok(f.xor_convolve(&h1)?.map(|v| v.abs() / order))
    })?;
    let sup = parts
        .into_iter()
        .reduce(|a, b| GridFunction::new(res, a.values().iter().zip(b.values()).map(|(x, y)| x.max(*y)).collect()).expect("same resolution"))
        .expect("at least one index");
    Ok(WeakTypeReport {
        spike,
        resolution: res,
        indices: terms,
        constant: weak_type_constant(&sup) / f.l1_norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::KernelKind;
    use crate::variation::SequenceKind;
    use crate::walsh::{dyadic_expectation, partial_sum};
    use crate::Rational;
    use num_traits::{One, Zero};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_grid(rng: &mut ChaCha8Rng, res: u32) -> GridFunction<Rational> {
        GridFunction::from_fn(res, |_| Rational::from_frac(rng.gen_range(-30..30), rng.gen_range(1..5))).unwrap()
    }

    #[test]
    fn corpus_basics() {
        for m in 0..8 {
            assert_eq!(TestFunction::Spike(m).sample::<Rational>(9).unwrap().l1_norm(), Rational::one());
        }
        assert_eq!(TestFunction::Identity.sample::<Rational>(7).unwrap().integral(), Rational::from_frac(1, 2));
        assert!(TestFunction::Spike(5).sample::<f64>(4).is_err());
        for f in corpus() {
            assert_eq!(f.name().parse::<TestFunction>().unwrap(), f);
            assert!(!f.smoothness().is_empty());
        }
        assert!("spike:x".parse::<TestFunction>().is_err());
        assert!("nope".parse::<TestFunction>().is_err());
    }

    #[test]
    fn refinement_consistency() {
        for f in corpus() {
            let start = f.intrinsic_resolution().unwrap_or(2).max(2);
            for res in start..10 {
                let coarse = f.sample::<f64>(res).unwrap();
                let fine = f.sample::<f64>(res + 1).unwrap();
                match f {
                    TestFunction::Identity => {
                        // cell averages are consistent under conditional expectation
                        let avg = dyadic_expectation(&fine, res).unwrap();
                        let back = avg.values().iter().step_by(2).copied().collect();
                        let back = GridFunction::new(res, back).unwrap();
                        assert!(back.first_mismatch(&coarse, Some(1e-12)).is_none());
                    }
                    TestFunction::LogModulus => {
                        // only the cell touching the origin changes
                        let r = coarse.refine().unwrap();
                        assert_eq!(r.first_mismatch(&fine, None), Some(1));
                        assert_eq!(r.values()[2..], fine.values()[2..]);
                    }
                    _ => assert_eq!(coarse.refine().unwrap(), fine, "{}", f.name()),
                }
            }
        }
    }

    #[test]
    fn means_of_constants_and_high_characters() {
        for n in 2..=64u64 {
            let res = default_resolution(n);
            let spec = KernelSpec::<Rational>::new(KernelKind::NorlundLog, n);
            let one = GridFunction::constant(res, Rational::one()).unwrap();
            assert_eq!(apply_mean(&spec, &one).unwrap(), one);
            for k in n..1u64 << res {
                let wk = crate::walsh::walsh::<Rational>(k, res).unwrap();
                assert!(apply_mean(&spec, &wk).unwrap().values().iter().all(Zero::is_zero));
            }
        }
        let spec = KernelSpec::<f64>::new(KernelKind::Fejer, 8);
        assert!(apply_mean(&spec, &GridFunction::constant(2, 1.0).unwrap()).is_err());
    }

    #[test]
    fn mean_matches_partial_sum_average() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let res = 5;
        let f = random_grid(&mut rng, res);
        let spec = KernelSpec::new(KernelKind::NorlundLog, 5).with_resolution(res);
        let l5 = Rational::harmonic(5).unwrap();
        let oracle = (1..5u64)
            .map(|k| partial_sum(&f, k).unwrap().scale(&Rational::from_frac(1, 5 - k)))
            .reduce(|a, b| a.add(&b).unwrap())
            .unwrap()
            .scale(&(Rational::one() / l5));
        assert_eq!(apply_mean(&spec, &f).unwrap(), oracle);
    }

    #[test]
    fn dirichlet_mean_is_partial_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let res = 6;
        let f = random_grid(&mut rng, res);
        for m in 0..=64u64 {
            let spec = KernelSpec::new(KernelKind::Dirichlet, m).with_resolution(res);
            assert_eq!(apply_mean(&spec, &f).unwrap(), partial_sum(&f, m).unwrap(), "M = {m}");
        }
    }

    #[test]
    fn walsh_polynomial_errors() {
        for a in 3..=8u32 {
            let n = 1u64 << a;
            let res = a + 1;
            let f = TestFunction::WalshPolynomial.sample::<Rational>(res).unwrap();
            assert_eq!(partial_sum(&f, n).unwrap(), f);
            let spec = KernelSpec::new(KernelKind::NorlundLog, n);
            let err = apply_mean(&spec, &f).unwrap().sub(&f).unwrap();
            let l = Rational::harmonic(n as u128).unwrap();
            let oracle = (1..8u64)
                .map(|k| partial_sum(&f, k).unwrap().sub(&f).unwrap().scale(&Rational::from_frac(1, n - k)))
                .reduce(|x, y| x.add(&y).unwrap())
                .unwrap()
                .scale(&(Rational::one() / l));
            assert_eq!(err, oracle, "A = {a}");
        }
        let rows = error_curve(IndexSequence::new(SequenceKind::Pow2), TestFunction::WalshPolynomial, 3, 14, Parallelism::Parallel).unwrap();
        assert!(rows.windows(2).all(|w| w[1].error_sup < w[0].error_sup));
    }

    #[test]
    fn identity_converges_along_pow2() {
        let rows = error_curve(IndexSequence::new(SequenceKind::Pow2), TestFunction::Identity, 3, 12, Parallelism::Parallel).unwrap();
        assert_eq!(rows.len(), 10);
        assert!(rows.windows(2).all(|w| w[1].error_sup < w[0].error_sup));
        assert!(rows.windows(2).all(|w| w[1].error_l1 < w[0].error_l1));
    }

    #[test]
    fn identity_converges_along_alternating_indices_too() {
        // a Lipschitz function is approximated even where Lebesgue constants grow
        let rows = error_curve(IndexSequence::new(SequenceKind::Alternating), TestFunction::Identity, 3, 12, Parallelism::Sequential).unwrap();
        assert!(rows.last().unwrap().error_sup < rows[0].error_sup / 100.0);
    }

    #[test]
    fn curves_do_not_depend_on_parallelism() {
        let seq = IndexSequence::new(SequenceKind::Alternating);
        let a = lebesgue_constant_curve(seq, 1, 10, Parallelism::Parallel).unwrap();
        let b = lebesgue_constant_curve(seq, 1, 10, Parallelism::Sequential).unwrap();
        assert_eq!(a, b);
        assert_eq!(a[0].a, 2);
    }

    #[test]
    fn lebesgue_curves() {
        let pow2 = lebesgue_constant_curve(IndexSequence::new(SequenceKind::Pow2), 2, 12, Parallelism::Parallel).unwrap();
        assert!(pow2.iter().all(|r| r.vl == 0.0 && (1.0..2.0).contains(&r.f_l1)));
        let m1 = lebesgue_constant_curve(IndexSequence::new(SequenceKind::Pow2Minus1), 3, 14, Parallelism::Parallel).unwrap();
        let (lo, hi) = m1.iter().fold((f64::MAX, 0.0f64), |(l, h), r| (l.min(r.f_l1), h.max(r.f_l1)));
        assert!(hi / lo <= 2.0);
        let alt = lebesgue_constant_curve(IndexSequence::new(SequenceKind::Alternating), 3, 12, Parallelism::Parallel).unwrap();
        assert!(alt.last().unwrap().f_l1 > 2.0 * alt[0].f_l1);
        assert!(alt.iter().all(|r| (0.4..2.0).contains(&r.ratio)));
    }

    #[test]
    fn modulus_examples() {
        let c = modulus(TestFunction::Constant, Norm::Sup, 6, 6, Parallelism::Parallel).unwrap();
        assert!(c.points.iter().all(|(_, v)| *v == 0.0));
        let id = modulus(TestFunction::Identity, Norm::Sup, 12, 12, Parallelism::Parallel).unwrap();
        for &(k, v) in &id.points[1..] {
            let d = 2f64.powi(-(k as i32));
            assert!(v >= d / 2.0 && v <= d, "k = {k}: {v}");
        }
        let ind = modulus(TestFunction::Indicator, Norm::Sup, 3, 6, Parallelism::Parallel).unwrap();
        assert_eq!(ind.get(1), Some(1.0));
        for f in corpus() {
            let m = modulus(f, Norm::L1, 8, 8, Parallelism::Sequential).unwrap();
            assert!(m.points.windows(2).all(|w| w[1].1 <= w[0].1), "{}", f.name());
        }
        assert!(modulus(TestFunction::Identity, Norm::Sup, 7, 6, Parallelism::Parallel).is_err());
    }

    #[test]
    fn log_modulus_rate() {
        let m = modulus(TestFunction::LogModulus, Norm::Sup, 12, 14, Parallelism::Parallel).unwrap();
        for k in 4..=12 {
            let scaled = m.get(k).unwrap() * k as f64;
            assert!((scaled - 1.0).abs() < 1e-12, "k = {k}: {scaled}");
        }
    }

    #[test]
    fn weak_type_experiments() {
        for m in 0..=10 {
            assert!(maximal_weak_constant(m, 12).unwrap() <= 2.0);
        }
        let r = h1_weak_constant(IndexSequence::new(SequenceKind::Pow2Minus1), 3, 1, 10, Parallelism::Parallel).unwrap();
        assert_eq!(r.indices.len(), 8);
        assert_eq!(r.resolution, 10);
        assert!(r.constant.is_finite() && r.constant > 0.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn young_inequality(n in 2u64..200, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let res = default_resolution(n);
            let f = GridFunction::from_fn(res, |_| rng.gen_range(-4.0..4.0)).unwrap();
            let spec = KernelSpec::<f64>::new(KernelKind::NorlundLog, n);
            let lf = apply_mean(&spec, &f).unwrap();
            let k = spec.build().unwrap().l1_norm();
            prop_assert!(lf.sup_norm() <= k * f.sup_norm() + 1e-9);
            prop_assert!(lf.l1_norm() <= k * f.l1_norm() + 1e-9);
        }
    }
}
