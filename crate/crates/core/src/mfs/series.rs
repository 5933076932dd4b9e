use num_complex::Complex64;

use super::map::MultilinearMap;
use crate::algebra::{invert_dense, AlgebraContext, AlgebraElement};
use crate::error::{Error, Result};

/// A multilinear function series `F = F_0 + F_1(b_1) + F_2(b_1, b_2) + ...`
/// truncated at order `N`.
///
/// Every operation computes its degree-`n` output from degree `<= n` inputs
/// only, with a summation order that does not depend on `N`, so recomputing at
/// a lower order reproduces the prefix bit for bit.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiSeries {
    ctx: AlgebraContext,
    components: Vec<MultilinearMap>,
}

/// Outcome of a coefficientwise comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesComparison {
    pub equal: bool,
    pub max_deviation: f64,
    /// Degree holding the largest deviation.
    pub degree: usize,
    /// Flat coefficient index of the largest deviation within that degree.
    pub index: usize,
}

impl MultiSeries {
    pub fn zero(ctx: AlgebraContext, order: usize) -> Self {
        Self {
            ctx,
            components: (0..=order).map(|n| MultilinearMap::zero(ctx, n)).collect(),
        }
    }

    /// The composition identity `I`, with `I_n(b_1..b_n) = δ_{n1} b_1`.
    pub fn identity(ctx: AlgebraContext, order: usize) -> Self {
        let mut s = Self::zero(ctx, order);
        if order >= 1 {
            s.components[1] = MultilinearMap::identity(ctx);
        }
        s
    }

    /// The series whose only nonzero term is the constant `b`.
    pub fn constant(b: &AlgebraElement, order: usize) -> Self {
        let mut s = Self::zero(*b.context(), order);
        s.components[0] = MultilinearMap::constant(b);
        s
    }

    /// `constant(1)`, the identity for the product.
    pub fn one(ctx: AlgebraContext, order: usize) -> Self {
        Self::constant(&ctx.unit(), order)
    }

    pub fn from_components(ctx: AlgebraContext, components: Vec<MultilinearMap>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Shape("a series needs at least the constant term".into()));
        }
        for (n, c) in components.iter().enumerate() {
            ctx.check(c.context())?;
            if c.arity() != n {
                return Err(Error::Shape(format!(
                    "component {n} has arity {}",
                    c.arity()
                )));
            }
        }
        Ok(Self { ctx, components })
    }

    pub fn context(&self) -> &AlgebraContext {
        &self.ctx
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.components.len() - 1
    }

    pub fn component(&self, n: usize) -> &MultilinearMap {
        &self.components[n]
    }

    pub fn components(&self) -> &[MultilinearMap] {
        &self.components
    }

    pub fn into_components(self) -> Vec<MultilinearMap> {
        self.components
    }

    pub(crate) fn set_component(&mut self, n: usize, map: MultilinearMap) {
        debug_assert_eq!(map.arity(), n);
        self.components[n] = map;
    }

    /// The constant term `F_0` as an algebra element.
    pub fn constant_term(&self) -> AlgebraElement {
        self.components[0].as_constant()
    }

    /// Drops all degrees above `order`.
    pub fn truncate(&self, order: usize) -> MultiSeries {
        assert!(order <= self.order(), "cannot truncate upwards");
        MultiSeries {
            ctx: self.ctx,
            components: self.components[..=order].to_vec(),
        }
    }

    /// Zero-pads up to `order`.
    pub fn extend(&self, order: usize) -> MultiSeries {
        assert!(order >= self.order(), "cannot extend downwards");
        let mut components = self.components.clone();
        for n in self.order() + 1..=order {
            components.push(MultilinearMap::zero(self.ctx, n));
        }
        MultiSeries {
            ctx: self.ctx,
            components,
        }
    }

    fn check_pair(&self, other: &MultiSeries) -> Result<()> {
        self.ctx.check(&other.ctx)?;
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiSeries) -> Result<MultiSeries> {
        self.check_pair(other)?;
        let mut out = self.clone();
        for (a, b) in out.components.iter_mut().zip(&other.components) {
            a.add_assign(b);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MultiSeries) -> Result<MultiSeries> {
        self.check_pair(other)?;
        let mut out = self.clone();
        for (a, b) in out.components.iter_mut().zip(&other.components) {
            a.sub_assign(b);
        }
        Ok(out)
    }

    pub fn scale(&self, c: Complex64) -> MultiSeries {
        MultiSeries {
            ctx: self.ctx,
            components: self.components.iter().map(|m| m.scale(c)).collect(),
        }
    }

    /// Cauchy-type product `(F·G)_n = Σ_k F_k(b_1..b_k) G_{n-k}(b_{k+1}..b_n)`.
    pub fn mul(&self, other: &MultiSeries) -> Result<MultiSeries> {
        self.check_pair(other)?;
        let components = (0..=self.order())
            .map(|n| mul_degree(&self.components, &other.components, n))
            .collect();
        Ok(MultiSeries {
            ctx: self.ctx,
            components,
        })
    }

    /// `F ∘ G`. Requires `‖G_0‖ <= tol`; a constant term within tolerance is
    /// snapped to zero.
    pub fn compose(&self, inner: &MultiSeries) -> Result<MultiSeries> {
        self.check_pair(inner)?;
        inner.check_vanishing_constant()?;
        let mut components = vec![self.components[0].clone()];
        for n in 1..=self.order() {
            components.push(compose_degree(&self.components, &inner.components, n, 1));
        }
        Ok(MultiSeries {
            ctx: self.ctx,
            components,
        })
    }

    fn check_vanishing_constant(&self) -> Result<()> {
        let norm = self.components[0].max_abs();
        if norm > self.ctx.tol() {
            Err(Error::NonzeroConstantTerm { norm })
        } else {
            Ok(())
        }
    }

    /// Multiplicative inverse, solved degree by degree:
    /// `G_0 = F_0⁻¹`, `G_n = -F_0⁻¹ Σ_{k>=1} F_k G_{n-k}`.
    pub fn mul_inverse(&self) -> Result<MultiSeries> {
        let f0_inv = self.constant_term().inverse()?;
        let neg_inv = f0_inv.scale(Complex64::new(-1.0, 0.0));
        let mut out = vec![MultilinearMap::constant(&f0_inv)];
        for n in 1..=self.order() {
            let mut acc = MultilinearMap::zero(self.ctx, n);
            for k in 1..=n {
                let f = &self.components[k];
                if f.is_zero() || out[n - k].is_zero() {
                    continue;
                }
                acc.add_assign(&f.product(&out[n - k]));
            }
            out.push(acc.left_mul(&neg_inv));
        }
        Ok(MultiSeries {
            ctx: self.ctx,
            components: out,
        })
    }

    /// Compositional inverse, solved degree by degree:
    /// `G_1 = F_1⁻¹`, `G_n = -F_1⁻¹(Σ_{k>=2} terms of (F∘G)_n)`.
    pub fn comp_inverse(&self) -> Result<MultiSeries> {
        self.check_vanishing_constant()?;
        if self.order() == 0 {
            return Ok(MultiSeries::zero(self.ctx, 0));
        }
        let dim = self.ctx.dim();
        let linear_inv = invert_dense(self.components[1].coeffs(), dim)
            .map_err(|pivot| Error::LinearTermSingular { pivot })?;
        let neg_inv: Vec<Complex64> = linear_inv.iter().map(|z| -z).collect();
        let mut out = vec![
            MultilinearMap::zero(self.ctx, 0),
            MultilinearMap::from_coeffs(self.ctx, 1, linear_inv)?,
        ];
        for n in 2..=self.order() {
            out.push(MultilinearMap::zero(self.ctx, n));
            let rest = compose_degree(&self.components, &out, n, 2);
            out[n] = rest.apply_linear(&neg_inv);
        }
        Ok(MultiSeries {
            ctx: self.ctx,
            components: out,
        })
    }

    /// `I · F`, one order higher: `(I·F)_{n+1}(b_0, ..., b_n) = b_0 F_n(b_1..b_n)`.
    pub fn left_mul_identity(&self) -> MultiSeries {
        let id = MultilinearMap::identity(self.ctx);
        let mut components = vec![MultilinearMap::zero(self.ctx, 0)];
        components.extend(self.components.iter().map(|c| id.product(c)));
        MultiSeries {
            ctx: self.ctx,
            components,
        }
    }

    /// Recovers `K` from `H = I·K`, with `K_{n-1}(b_2..b_n) = H_n(1, b_2..b_n)`.
    ///
    /// The factorization is validated by rebuilding `I·K` and comparing it to
    /// `H` within `tol · max(1, max|H|)`.
    pub fn left_strip(&self) -> Result<MultiSeries> {
        if self.order() == 0 {
            return Err(Error::OrderTooLow { needed: 1, order: 0 });
        }
        self.check_vanishing_constant()?;
        let unit = self.ctx.unit();
        let components = self.components[1..]
            .iter()
            .map(|h| h.fix_first(&unit))
            .collect();
        let stripped = MultiSeries {
            ctx: self.ctx,
            components,
        };
        let rebuilt = stripped.left_mul_identity();
        let mut deviation: f64 = 0.0;
        for n in 1..=self.order() {
            deviation = deviation.max(rebuilt.components[n].max_deviation(&self.components[n])?.0);
        }
        let scale = self.max_abs().max(1.0);
        if deviation > self.ctx.tol() * scale {
            return Err(Error::NotLeftMultipleOfI { deviation });
        }
        Ok(stripped)
    }

    /// `F_n(b_1, ..., b_n)`.
    pub fn evaluate(&self, degree: usize, args: &[AlgebraElement]) -> Result<AlgebraElement> {
        if degree > self.order() {
            return Err(Error::DegreeOutOfRange {
                degree,
                order: self.order(),
            });
        }
        self.components[degree].evaluate(args)
    }

    pub fn max_abs(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.max_abs())
            .fold(0.0, f64::max)
    }

    /// Maximum absolute coefficient deviation per degree.
    pub fn deviation_by_degree(&self, other: &MultiSeries) -> Result<Vec<f64>> {
        self.check_pair(other)?;
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.max_deviation(b).map(|(dev, _)| dev))
            .collect()
    }

    /// Entrywise comparison of all coefficient tensors.
    pub fn approx_eq(&self, other: &MultiSeries, tol: f64) -> Result<SeriesComparison> {
        self.check_pair(other)?;
        let mut report = SeriesComparison {
            equal: true,
            max_deviation: 0.0,
            degree: 0,
            index: 0,
        };
        for (n, (a, b)) in self.components.iter().zip(&other.components).enumerate() {
            let (dev, idx) = a.max_deviation(b)?;
            if dev > report.max_deviation {
                report.max_deviation = dev;
                report.degree = n;
                report.index = idx;
            }
        }
        report.equal = report.max_deviation <= tol;
        Ok(report)
    }
}

/// Degree-`n` component of `F·G`.
pub(crate) fn mul_degree(f: &[MultilinearMap], g: &[MultilinearMap], n: usize) -> MultilinearMap {
    let ctx = *f[0].context();
    let mut acc = MultilinearMap::zero(ctx, n);
    for k in 0..=n {
        if f[k].is_zero() || g[n - k].is_zero() {
            continue;
        }
        acc.add_assign(&f[k].product(&g[n - k]));
    }
    acc
}

/// Degree-`n` component of `F∘G` restricted to outer arities `k >= k_min`,
/// summing over ordered compositions `p_1 + ... + p_k = n`, `p_i >= 1`.
pub(crate) fn compose_degree(
    f: &[MultilinearMap],
    g: &[MultilinearMap],
    n: usize,
    k_min: usize,
) -> MultilinearMap {
    let ctx = *f[0].context();
    let mut acc = MultilinearMap::zero(ctx, n);
    for (k, outer) in f.iter().enumerate().take(n + 1).skip(k_min.max(1)) {
        if outer.is_zero() {
            continue;
        }
        for parts in compositions(n, k) {
            if parts.iter().any(|&p| g[p].is_zero()) {
                continue;
            }
            let inner: Vec<&MultilinearMap> = parts.iter().map(|&p| &g[p]).collect();
            acc.add_assign(&outer.substitute(&inner));
        }
    }
    acc
}

/// All ordered tuples of `k` positive integers summing to `n`, in
/// lexicographic order.
pub fn compositions(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(remaining: usize, slots: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 0 {
            if remaining == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        if remaining < slots {
            return;
        }
        for p in 1..=remaining - (slots - 1) {
            prefix.push(p);
            rec(remaining - p, slots - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if k == 0 {
        if n == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(n, k, &mut Vec::with_capacity(k), &mut out);
    out
}
