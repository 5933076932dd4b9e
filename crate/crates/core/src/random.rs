//! Seeded random cumulant series for tests and verification campaigns.

use num_complex::Complex64;
use rand::Rng;

use crate::algebra::{AlgebraContext, AlgebraElement};
use crate::error::Result;
use crate::mfs::{MultiSeries, MultilinearMap};

/// Default spread of the random perturbations.
pub const DEFAULT_SCALE: f64 = 0.3;

/// Upper bound on the condition number of a sampled mean.
pub const MAX_MEAN_CONDITION: f64 = 1e3;

fn uniform_complex<R: Rng + ?Sized>(rng: &mut R, half_width: f64) -> Complex64 {
    if half_width == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    Complex64::new(
        rng.random_range(-half_width..=half_width),
        rng.random_range(-half_width..=half_width),
    )
}

/// A map of the given arity with coefficients uniform in `[-w, w]^2`.
pub fn random_map<R: Rng + ?Sized>(
    ctx: AlgebraContext,
    arity: usize,
    half_width: f64,
    rng: &mut R,
) -> MultilinearMap {
    let len = ctx.dim().pow(arity as u32 + 1);
    let coeffs = (0..len).map(|_| uniform_complex(rng, half_width)).collect();
    MultilinearMap::from_coeffs(ctx, arity, coeffs).expect("length matches arity")
}

pub fn random_element<R: Rng + ?Sized>(ctx: AlgebraContext, half_width: f64, rng: &mut R) -> AlgebraElement {
    random_map(ctx, 0, half_width, rng).as_constant()
}

/// `unit + scale · U` with `U` uniform in the complex square, resampled until
/// its condition number is at most `MAX_MEAN_CONDITION`.
pub fn random_mean<R: Rng + ?Sized>(ctx: AlgebraContext, scale: f64, rng: &mut R) -> AlgebraElement {
    loop {
        let u = random_element(ctx, 1.0, rng);
        let m = ctx
            .unit()
            .add(&u.scale(Complex64::new(scale, 0.0)))
            .expect("same context");
        if m.condition_estimate() <= MAX_MEAN_CONDITION {
            return m;
        }
    }
}

/// A cumulant series with a well-conditioned mean and higher cumulant
/// coefficients uniform in `[-scale, scale]^2`.
pub fn random_cumulants<R: Rng + ?Sized>(
    ctx: AlgebraContext,
    order: usize,
    scale: f64,
    rng: &mut R,
) -> Result<MultiSeries> {
    let mut comps = vec![MultilinearMap::constant(&random_mean(ctx, scale, rng))];
    for n in 1..=order {
        comps.push(random_map(ctx, n, scale, rng));
    }
    MultiSeries::from_components(ctx, comps)
}

/// A generic series with every coefficient uniform in `[-scale, scale]^2`.
pub fn random_series<R: Rng + ?Sized>(
    ctx: AlgebraContext,
    order: usize,
    scale: f64,
    rng: &mut R,
) -> MultiSeries {
    let comps = (0..=order).map(|n| random_map(ctx, n, scale, rng)).collect();
    MultiSeries::from_components(ctx, comps).expect("arities are consecutive")
}
