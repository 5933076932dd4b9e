#![allow(dead_code)]

use mfseries::random::{random_map, random_mean, random_series};
use mfseries::{AlgebraContext, Complex64, MultiSeries, MultilinearMap};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn scalar_series(coeffs: &[f64]) -> MultiSeries {
    let ctx = AlgebraContext::new(1);
    let comps = coeffs
        .iter()
        .enumerate()
        .map(|(n, &c)| MultilinearMap::from_coeffs(ctx, n, vec![Complex64::new(c, 0.0)]).unwrap())
        .collect();
    MultiSeries::from_components(ctx, comps).unwrap()
}

pub fn scalar_coeffs(s: &MultiSeries) -> Vec<Complex64> {
    s.components().iter().map(|c| c.coeffs()[0]).collect()
}

/// Random series with a well-conditioned constant term.
pub fn unit_series(ctx: AlgebraContext, order: usize, rng: &mut ChaCha8Rng) -> MultiSeries {
    let mut comps = random_series(ctx, order, 0.3, rng).into_components();
    comps[0] = MultilinearMap::constant(&random_mean(ctx, 0.3, rng));
    MultiSeries::from_components(ctx, comps).unwrap()
}

/// Random series with zero constant term.
pub fn zero_const_series(ctx: AlgebraContext, order: usize, rng: &mut ChaCha8Rng) -> MultiSeries {
    let mut comps = random_series(ctx, order, 0.3, rng).into_components();
    comps[0] = MultilinearMap::zero(ctx, 0);
    MultiSeries::from_components(ctx, comps).unwrap()
}

/// Zero constant term, linear term `identity + 0.3 · random`.
pub fn invertible_zero_const_series(
    ctx: AlgebraContext,
    order: usize,
    rng: &mut ChaCha8Rng,
) -> MultiSeries {
    let mut comps = zero_const_series(ctx, order, rng).into_components();
    if order >= 1 {
        let mut lin = MultilinearMap::identity(ctx);
        let noise = random_map(ctx, 1, 0.3, rng);
        for (a, b) in lin.coeffs_mut().iter_mut().zip(noise.coeffs()) {
            *a += b;
        }
        comps[1] = lin;
    }
    MultiSeries::from_components(ctx, comps).unwrap()
}

pub fn max_dev(a: &MultiSeries, b: &MultiSeries) -> f64 {
    a.approx_eq(b, 0.0).unwrap().max_deviation
}

/// Components `0..=prefix.order()` of `full` equal `prefix` bit for bit.
pub fn is_exact_prefix(prefix: &MultiSeries, full: &MultiSeries) -> bool {
    prefix.components() == &full.components()[..=prefix.order()]
}
