//! The Walsh–Paley system, Fourier partial sums, dyadic conditional
//! expectations and the dyadic maximal function.

use crate::dyadic::{reverse_bits, DyadicPoint};
use crate::error::{Error, Result};
use crate::grid::{GridFunction, Scalar, SpectrumFunction};

/// `w_n` at cell `cell` of a resolution-`resolution` grid, as ±1.
#[inline]
pub fn walsh_sign(n: u64, cell: usize, resolution: u32) -> i64 {
    let digits = reverse_bits(cell, resolution) as u64;
    if (n & digits).count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `ρ_k(x) = (−1)^{x_k}`.
pub fn rademacher(k: u32, x: DyadicPoint) -> Result<i64> {
    Ok(if x.digit(k)? == 0 { 1 } else { -1 })
}

/// `w_n(x) = Π_k ρ_k(x)^{ε_k(n)}`.
pub fn walsh_eval(n: u64, x: DyadicPoint) -> Result<i64> {
    check_index(n, x.resolution())?;
    Ok(walsh_sign(n, x.cell() as usize, x.resolution()))
}

fn check_index(n: u64, resolution: u32) -> Result<()> {
    if resolution < 64 && n >> resolution != 0 {
        return Err(Error::ExceedsResolution {
            what: "Walsh index",
            value: n as u128,
            resolution,
        });
    }
    Ok(())
}

/// `w_n` sampled on the grid.
pub fn walsh<S: Scalar>(n: u64, resolution: u32) -> Result<GridFunction<S>> {
    check_index(n, resolution)?;
    GridFunction::from_fn(resolution, |c| S::from_i64(walsh_sign(n, c, resolution)))
}

/// `ρ_k` sampled on the grid.
pub fn rademacher_grid<S: Scalar>(k: u32, resolution: u32) -> Result<GridFunction<S>> {
    if k >= resolution {
        return Err(Error::ExceedsResolution {
            what: "Rademacher index",
            value: k as u128,
            resolution,
        });
    }
    walsh(1 << k, resolution)
}

/// `f̂(i)` for every `i < 2^N`.
pub fn coefficients<S: Scalar>(f: &GridFunction<S>) -> SpectrumFunction<S> {
    f.fwht()
}

/// `S_M f = Σ_{i<M} f̂(i) w_i`.
pub fn partial_sum<S: Scalar>(f: &GridFunction<S>, m: u64) -> Result<GridFunction<S>> {
    if m > f.len() as u64 {
        return Err(Error::ExceedsResolution {
            what: "partial sum index",
            value: m as u128,
            resolution: f.resolution(),
        });
    }
    f.fwht().truncated(m as usize)?.ifwht()
}

/// `E_n f`: the average of `f` over each `I_n(x)`.
pub fn dyadic_expectation<S: Scalar>(f: &GridFunction<S>, level: u32) -> Result<GridFunction<S>> {
    let res = f.resolution();
    if level > res {
        return Err(Error::ExceedsResolution {
            what: "expectation level",
            value: level as u128,
            resolution: res,
        });
    }
    let shift = res - level;
    let width = 1usize << shift;
    let averages: Vec<S> = f
        .values()
        .chunks(width)
        .map(|block| {
            block
                .iter()
                .fold(S::zero(), |acc, v| acc + v.clone())
                .div_pow2(shift)
        })
        .collect();
    GridFunction::from_fn(res, |c| averages[c >> shift].clone())
}

/// `E* f = max_{0 ≤ n ≤ N} E_n |f|`.
///
/// On a resolution-`N` grid `E_n |f| = |f|` for every `n ≥ N`, so the
/// maximum over `n ≤ N` equals the supremum over all levels.
pub fn maximal_function<S: Scalar>(f: &GridFunction<S>) -> GridFunction<S> {
    let res = f.resolution();
    let mut best = f.abs();
    // block sums of |f| from the finest level up
    let mut sums: Vec<S> = best.values().to_vec();
    for up in 1..=res {
        sums = sums
            .chunks(2)
            .map(|p| p[0].clone() + p[1].clone())
            .collect();
        let values: Vec<S> = best
            .values()
            .iter()
            .enumerate()
            .map(|(c, cur)| {
                let avg = sums[c >> up].div_pow2(up);
                if avg > *cur {
                    avg
                } else {
                    cur.clone()
                }
            })
            .collect();
        best = GridFunction::new(res, values).expect("same length");
    }
    best
}

/// `sup_λ λ·|{g > λ}|`, computed exactly as `max_v v·|{g ≥ v}|` over the
/// values `v > 0` taken by `g` (the supremum is approached as `λ ↑ v`).
pub fn weak_type_constant(g: &GridFunction<f64>) -> f64 {
    let mut vals: Vec<f64> = g.values().iter().copied().filter(|v| *v > 0.0).collect();
    vals.sort_by(|a, b| b.partial_cmp(a).expect("finite values"));
    let cell = 2f64.powi(-(g.resolution() as i32));
    let mut best = 0.0f64;
    let mut i = 0;
    while i < vals.len() {
        let v = vals[i];
        while i < vals.len() && vals[i] == v {
            i += 1;
        }
        best = best.max(v * i as f64 * cell);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use num_traits::{One, Zero};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_grid(rng: &mut ChaCha8Rng, n: u32) -> GridFunction<Rational> {
        GridFunction::from_fn(n, |_| Rational::from_i64(rng.gen_range(-50..50))).unwrap()
    }

    #[test]
    fn rademacher_values() {
        for n in 0..4 {
            assert_eq!(rademacher(n, DyadicPoint::new(4, 0).unwrap()).unwrap(), 1);
        }
        for c in 0..8u64 {
            let x = DyadicPoint::new(3, c).unwrap();
            let expect = if x.left_endpoint() >= 0.5 { -1 } else { 1 };
            assert_eq!(rademacher(0, x).unwrap(), expect);
        }
        let r1: Vec<i64> = (0..4)
            .map(|c| rademacher(1, DyadicPoint::new(2, c).unwrap()).unwrap())
            .collect();
        assert_eq!(r1, vec![1, -1, 1, -1]);
        assert!(rademacher(2, DyadicPoint::new(2, 0).unwrap()).is_err());
    }

    #[test]
    fn walsh_values() {
        for c in 0..16u64 {
            let x = DyadicPoint::new(4, c).unwrap();
            assert_eq!(walsh_eval(0, x).unwrap(), 1);
            assert_eq!(walsh_eval(1, x).unwrap(), rademacher(0, x).unwrap());
        }
        for n in 1..16 {
            assert_eq!(walsh::<Rational>(n, 4).unwrap().integral(), Rational::zero());
        }
        assert!(walsh_eval(16, DyadicPoint::new(4, 0).unwrap()).is_err());
    }

    #[test]
    fn orthonormality() {
        let res = 6;
        let ws: Vec<GridFunction<Rational>> = (0..64).map(|i| walsh(i, res).unwrap()).collect();
        for i in 0..64 {
            for j in 0..64 {
                let ip = ws[i].mul(&ws[j]).unwrap().integral();
                let expect = if i == j { Rational::one() } else { Rational::zero() };
                assert_eq!(ip, expect, "({i}, {j})");
            }
        }
    }

    #[test]
    fn characters_are_multiplicative() {
        let res = 6;
        for n in 0..64u64 {
            for x in 0..64usize {
                for y in 0..64usize {
                    assert_eq!(
                        walsh_sign(n, x ^ y, res),
                        walsh_sign(n, x, res) * walsh_sign(n, y, res)
                    );
                }
            }
        }
    }

    #[test]
    fn coefficients_examples() {
        let w5 = walsh::<Rational>(5, 3).unwrap();
        let c = coefficients(&w5);
        for (i, v) in c.coeffs().iter().enumerate() {
            assert_eq!(*v, if i == 5 { Rational::one() } else { Rational::zero() });
        }
        // indicator of [0, 1/2): ∫_0^{1/2} w_i is 1/2 for i ∈ {0, 1}, else 0
        let ind = GridFunction::from_fn(3, |c| Rational::from_i64((c < 4) as i64)).unwrap();
        let c = coefficients(&ind);
        let half = Rational::from_frac(1, 2);
        assert_eq!(c.coeffs()[0], half);
        assert_eq!(c.coeffs()[1], half);
        assert!(c.coeffs()[2..].iter().all(Zero::is_zero));
    }

    #[test]
    fn coefficients_match_direct_integration() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f = random_grid(&mut rng, 6);
        let c = coefficients(&f);
        for i in 0..64u64 {
            let direct = f.mul(&walsh(i, 6).unwrap()).unwrap().integral();
            assert_eq!(c.coeffs()[i as usize], direct);
        }
    }

    #[test]
    fn partial_sums() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let f = random_grid(&mut rng, 5);
        assert_eq!(partial_sum(&f, 32).unwrap(), f);
        assert!(partial_sum(&f, 33).is_err());
        for k in 0..32u64 {
            let wk = walsh::<Rational>(k, 5).unwrap();
            for m in [0u64, 1, 7, 16, 32] {
                let expect = if k < m { wk.clone() } else { GridFunction::zeros(5).unwrap() };
                assert_eq!(partial_sum(&wk, m).unwrap(), expect);
            }
        }
    }

    #[test]
    fn expectations() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = random_grid(&mut rng, 5);
        let e0 = dyadic_expectation(&f, 0).unwrap();
        assert!(e0.values().iter().all(|v| *v == f.integral()));
        assert_eq!(dyadic_expectation(&f, 5).unwrap(), f);
        for n in 0..=5 {
            assert_eq!(dyadic_expectation(&f, n).unwrap(), partial_sum(&f, 1 << n).unwrap());
        }
        let ind = GridFunction::from_fn(5, |c| Rational::from_i64((c < 4) as i64)).unwrap();
        assert_eq!(dyadic_expectation(&ind, 3).unwrap(), ind);
        assert!(dyadic_expectation(&f, 6).is_err());
    }

    #[test]
    fn maximal_function_of_spike() {
        let n = 6u32;
        let spike = GridFunction::from_fn(n, |c| if c == 0 { 64.0 } else { 0.0 }).unwrap();
        let m = maximal_function(&spike);
        assert_eq!(m.values()[0], 64.0);
        for c in 1..64usize {
            // first point digit that differs from 0 sits at k = leading zeros
            let k = n - (usize::BITS - c.leading_zeros());
            assert_eq!(m.values()[c], 2f64.powi(k as i32), "cell {c}");
        }
    }

    #[test]
    fn maximal_function_dominates() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let c = GridFunction::constant(4, 2.5).unwrap();
        assert_eq!(maximal_function(&c), c);
        for _ in 0..100 {
            let f = random_grid(&mut rng, 5);
            let m = maximal_function(&f);
            for (a, b) in m.values().iter().zip(f.values()) {
                assert!(*a >= num_traits::Signed::abs(b));
            }
        }
    }

    #[test]
    fn weak_constant_of_step() {
        // g = 4 on a quarter, 1 elsewhere: sup is max(4·1/4, 1·1) = 1
        let g = GridFunction::new(2, vec![4.0, 1.0, 1.0, 1.0]).unwrap();
        assert_eq!(weak_type_constant(&g), 1.0);
        let g = GridFunction::new(2, vec![8.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(weak_type_constant(&g), 2.0);
    }

    #[test]
    fn weak_type_for_spikes() {
        for m in 0..=10u32 {
            let res = 12;
            let spike =
                GridFunction::from_fn(res, |c| if c < 1 << (res - m) { 2f64.powi(m as i32) } else { 0.0 })
                    .unwrap();
            let c = weak_type_constant(&maximal_function(&spike)) / spike.l1_norm();
            assert!(c <= 2.0, "m = {m}: {c}");
        }
    }
}
