//! Homogeneous components `F_n: B^n -> B` stored as dense coefficient tensors.
//!
//! A map of arity `n` over `M_d(C)` keeps `D^(n+1)` coefficients, `D = d^2`.
//! Entry `[o][i_1, ..., i_n]` (flattened row-major, output index outermost) is
//! the `o`-th basis coefficient of `F_n(e_{i_1}, ..., e_{i_n})`.

use num_complex::Complex64;

use crate::algebra::{max_abs, AlgebraContext, AlgebraElement};
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

#[derive(Debug, Clone, PartialEq)]
pub struct MultilinearMap {
    ctx: AlgebraContext,
    arity: usize,
    coeffs: Vec<Complex64>,
}

impl MultilinearMap {
    pub fn zero(ctx: AlgebraContext, arity: usize) -> Self {
        let len = ctx.dim().pow(arity as u32 + 1);
        Self {
            ctx,
            arity,
            coeffs: vec![ZERO; len],
        }
    }

    /// Builds a map from its flattened coefficient tensor.
    pub fn from_coeffs(ctx: AlgebraContext, arity: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        let len = ctx.dim().pow(arity as u32 + 1);
        if coeffs.len() != len {
            return Err(Error::Shape(format!(
                "arity {arity} map needs {len} coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(Self { ctx, arity, coeffs })
    }

    /// The arity-0 map holding the constant `b`.
    pub fn constant(b: &AlgebraElement) -> Self {
        Self {
            ctx: *b.context(),
            arity: 0,
            coeffs: b.coeffs().to_vec(),
        }
    }

    /// The arity-1 map `b -> b`.
    pub fn identity(ctx: AlgebraContext) -> Self {
        let dim = ctx.dim();
        let mut m = Self::zero(ctx, 1);
        for i in 0..dim {
            m.coeffs[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Assembles a map by sampling `f` on every basis tuple.
    pub fn from_basis_fn<F>(ctx: AlgebraContext, arity: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(&[usize]) -> Result<AlgebraElement>,
    {
        let dim = ctx.dim();
        let inner = dim.pow(arity as u32);
        let mut m = Self::zero(ctx, arity);
        let mut idx = vec![0usize; arity];
        for flat in 0..inner {
            let mut rest = flat;
            for slot in (0..arity).rev() {
                idx[slot] = rest % dim;
                rest /= dim;
            }
            let value = f(&idx)?;
            ctx.check(value.context())?;
            for (o, v) in value.coeffs().iter().enumerate() {
                m.coeffs[o * inner + flat] = *v;
            }
        }
        Ok(m)
    }

    pub fn context(&self) -> &AlgebraContext {
        &self.ctx
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    /// Number of input index combinations, `D^arity`.
    pub fn inner_len(&self) -> usize {
        self.ctx.dim().pow(self.arity as u32)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.coeffs)
    }

    /// The constant of an arity-0 map as an algebra element.
    pub fn as_constant(&self) -> AlgebraElement {
        assert_eq!(self.arity, 0, "not a constant map");
        self.ctx
            .element(self.coeffs.clone())
            .expect("constant map has D coefficients")
    }

    pub(crate) fn add_assign(&mut self, other: &MultilinearMap) {
        debug_assert_eq!(self.coeffs.len(), other.coeffs.len());
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    pub(crate) fn sub_assign(&mut self, other: &MultilinearMap) {
        debug_assert_eq!(self.coeffs.len(), other.coeffs.len());
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a -= b;
        }
    }

    pub fn scale(&self, c: Complex64) -> MultilinearMap {
        MultilinearMap {
            ctx: self.ctx,
            arity: self.arity,
            coeffs: self.coeffs.iter().map(|z| z * c).collect(),
        }
    }

    /// `F_n(b_1, ..., b_n)` by contracting the last slot first.
    pub fn evaluate(&self, args: &[AlgebraElement]) -> Result<AlgebraElement> {
        if args.len() != self.arity {
            return Err(Error::ArityMismatch {
                arity: self.arity,
                got: args.len(),
            });
        }
        for b in args {
            self.ctx.check(b.context())?;
        }
        let dim = self.ctx.dim();
        let mut t = self.coeffs.clone();
        for b in args.iter().rev() {
            let rows = t.len() / dim;
            let bc = b.coeffs();
            t = (0..rows)
                .map(|r| {
                    let row = &t[r * dim..(r + 1) * dim];
                    row.iter().zip(bc).fold(ZERO, |acc, (x, y)| acc + x * y)
                })
                .collect();
        }
        self.ctx.element(t)
    }

    /// Pointwise product in `B`: `(f ⊗ g)(I, J) = f(I) · g(J)`.
    pub fn product(&self, g: &MultilinearMap) -> MultilinearMap {
        let d = self.ctx.d();
        let dim = self.ctx.dim();
        let m1 = self.inner_len();
        let m2 = g.inner_len();
        let mut out = MultilinearMap::zero(self.ctx, self.arity + g.arity);
        let inner = m1 * m2;
        for a in 0..d {
            for c in 0..d {
                let dst = &mut out.coeffs[(a * d + c) * inner..(a * d + c + 1) * inner];
                for b in 0..d {
                    let frow = &self.coeffs[(a * d + b) * m1..(a * d + b + 1) * m1];
                    let grow = &g.coeffs[(b * d + c) * m2..(b * d + c + 1) * m2];
                    for (i, fv) in frow.iter().enumerate() {
                        if fv.re == 0.0 && fv.im == 0.0 {
                            continue;
                        }
                        let chunk = &mut dst[i * m2..(i + 1) * m2];
                        for (o, gv) in chunk.iter_mut().zip(grow) {
                            *o += fv * gv;
                        }
                    }
                }
            }
        }
        debug_assert_eq!(out.coeffs.len(), dim * inner);
        out
    }

    /// Left multiplication of every output by `a`.
    pub fn left_mul(&self, a: &AlgebraElement) -> MultilinearMap {
        MultilinearMap::constant(a).product(self)
    }

    /// Applies a linear map on `B` (a `D x D` coefficient matrix) to every output.
    pub(crate) fn apply_linear(&self, matrix: &[Complex64]) -> MultilinearMap {
        let dim = self.ctx.dim();
        let m = self.inner_len();
        let mut out = MultilinearMap::zero(self.ctx, self.arity);
        for o in 0..dim {
            let dst = &mut out.coeffs[o * m..(o + 1) * m];
            for p in 0..dim {
                let w = matrix[o * dim + p];
                if w.re == 0.0 && w.im == 0.0 {
                    continue;
                }
                let src = &self.coeffs[p * m..(p + 1) * m];
                for (x, y) in dst.iter_mut().zip(src) {
                    *x += w * y;
                }
            }
        }
        out
    }

    /// Fixes the first argument to `b`, lowering the arity by one.
    pub fn fix_first(&self, b: &AlgebraElement) -> MultilinearMap {
        assert!(self.arity >= 1, "no argument to fix");
        let dim = self.ctx.dim();
        let m = self.inner_len();
        let tail = m / dim;
        let mut out = MultilinearMap::zero(self.ctx, self.arity - 1);
        for o in 0..dim {
            let dst = &mut out.coeffs[o * tail..(o + 1) * tail];
            for (i, bi) in b.coeffs().iter().enumerate() {
                if bi.re == 0.0 && bi.im == 0.0 {
                    continue;
                }
                let src = &self.coeffs[o * m + i * tail..o * m + (i + 1) * tail];
                for (x, y) in dst.iter_mut().zip(src) {
                    *x += bi * y;
                }
            }
        }
        out
    }

    /// `F_k(G_{p_1}(..), ..., G_{p_k}(..))` for `F = self` of arity `k`.
    ///
    /// Slots are substituted left to right; each step replaces one slot of
    /// length `D` by the `D^{p_r}` input indices of `gs[r]`.
    pub fn substitute(&self, gs: &[&MultilinearMap]) -> MultilinearMap {
        assert_eq!(gs.len(), self.arity, "one inner map per slot");
        let dim = self.ctx.dim();
        let mut t = self.coeffs.clone();
        let mut left = dim;
        let mut right = self.inner_len();
        let mut arity = 0;
        for g in gs {
            right /= dim;
            let p = g.inner_len();
            let mut next = vec![ZERO; left * p * right];
            for l in 0..left {
                for j in 0..dim {
                    let src = &t[(l * dim + j) * right..(l * dim + j + 1) * right];
                    if src.iter().all(|z| z.re == 0.0 && z.im == 0.0) {
                        continue;
                    }
                    let grow = &g.coeffs[j * p..(j + 1) * p];
                    for (q, gv) in grow.iter().enumerate() {
                        if gv.re == 0.0 && gv.im == 0.0 {
                            continue;
                        }
                        let dst = &mut next[(l * p + q) * right..(l * p + q + 1) * right];
                        for (x, y) in dst.iter_mut().zip(src) {
                            *x += gv * y;
                        }
                    }
                }
            }
            t = next;
            left *= p;
            arity += g.arity;
        }
        MultilinearMap {
            ctx: self.ctx,
            arity,
            coeffs: t,
        }
    }

    pub fn max_deviation(&self, other: &MultilinearMap) -> Result<(f64, usize)> {
        self.ctx.check(&other.ctx)?;
        if self.arity != other.arity {
            return Err(Error::ArityMismatch {
                arity: self.arity,
                got: other.arity,
            });
        }
        let mut best = (0.0, 0);
        for (i, (a, b)) in self.coeffs.iter().zip(&other.coeffs).enumerate() {
            let dev = (a - b).norm();
            if dev > best.0 {
                best = (dev, i);
            }
        }
        Ok(best)
    }
}
