//! The base algebra `B = M_d(C)`.
//!
//! Elements are stored as row-major `d x d` complex matrices. The basis is the
//! family of matrix units `e_{ij}` with linear index `i * d + j`, so the
//! coefficient vector of an element coincides with its flattened entries.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative pivot threshold below which a matrix is treated as singular.
pub const SINGULAR_PIVOT: f64 = 1e-12;

/// Default absolute comparison tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Shape data for `M_d(C)` plus the default comparison tolerance.
///
/// Two contexts are compatible when their matrix sizes agree; the tolerance
/// is carried along for operations that need one (zero snapping, validation).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlgebraContext {
    d: usize,
    tol: f64,
}

impl AlgebraContext {
    pub fn new(d: usize) -> Self {
        Self::with_tol(d, DEFAULT_TOL)
    }

    pub fn with_tol(d: usize, tol: f64) -> Self {
        assert!(d >= 1, "matrix size must be positive");
        assert!(tol >= 0.0, "tolerance must be nonnegative");
        Self { d, tol }
    }

    /// Matrix side length `d`.
    pub fn d(&self) -> usize {
        self.d
    }

    /// Linear dimension `D = d^2`.
    pub fn dim(&self) -> usize {
        self.d * self.d
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn check(&self, other: &AlgebraContext) -> Result<()> {
        if self.d == other.d {
            Ok(())
        } else {
            Err(Error::ContextMismatch {
                left: self.d,
                right: other.d,
            })
        }
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement {
            ctx: *self,
            entries: vec![Complex64::new(0.0, 0.0); self.dim()],
        }
    }

    pub fn unit(&self) -> AlgebraElement {
        let mut e = self.zero();
        for i in 0..self.d {
            e.entries[i * self.d + i] = Complex64::new(1.0, 0.0);
        }
        e
    }

    /// The matrix unit `e_{ij}`.
    pub fn matrix_unit(&self, i: usize, j: usize) -> AlgebraElement {
        assert!(i < self.d && j < self.d, "matrix unit index out of range");
        self.basis(i * self.d + j)
    }

    /// Basis element with linear index `k`.
    pub fn basis(&self, k: usize) -> AlgebraElement {
        let mut e = self.zero();
        e.entries[k] = Complex64::new(1.0, 0.0);
        e
    }

    pub fn basis_elements(&self) -> Vec<AlgebraElement> {
        (0..self.dim()).map(|k| self.basis(k)).collect()
    }

    pub fn diag(&self, values: &[Complex64]) -> AlgebraElement {
        assert_eq!(values.len(), self.d);
        let mut e = self.zero();
        for (i, v) in values.iter().enumerate() {
            e.entries[i * self.d + i] = *v;
        }
        e
    }

    pub fn scalar(&self, c: Complex64) -> AlgebraElement {
        self.unit().scale(c)
    }

    /// Builds an element from row-major entries.
    pub fn element(&self, entries: Vec<Complex64>) -> Result<AlgebraElement> {
        if entries.len() != self.dim() {
            return Err(Error::Shape(format!(
                "expected {} entries, got {}",
                self.dim(),
                entries.len()
            )));
        }
        Ok(AlgebraElement { ctx: *self, entries })
    }
}

/// An element of `M_d(C)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    ctx: AlgebraContext,
    entries: Vec<Complex64>,
}

impl AlgebraElement {
    pub fn context(&self) -> &AlgebraContext {
        &self.ctx
    }

    /// Row-major entries, equal to the coefficients in the matrix-unit basis.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.ctx.d + j]
    }

    pub fn add(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.ctx.check(&other.ctx)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(AlgebraElement {
            ctx: self.ctx,
            entries,
        })
    }

    pub fn sub(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.ctx.check(&other.ctx)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Ok(AlgebraElement {
            ctx: self.ctx,
            entries,
        })
    }

    pub fn scale(&self, c: Complex64) -> AlgebraElement {
        AlgebraElement {
            ctx: self.ctx,
            entries: self.entries.iter().map(|a| a * c).collect(),
        }
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.ctx.check(&other.ctx)?;
        let d = self.ctx.d;
        let mut out = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.entries[i * d + k];
                for j in 0..d {
                    out[i * d + j] += a * other.entries[k * d + j];
                }
            }
        }
        Ok(AlgebraElement {
            ctx: self.ctx,
            entries: out,
        })
    }

    /// Inverse via LU with partial pivoting; `NotInvertible` when the smallest
    /// pivot falls below `SINGULAR_PIVOT` times the max-norm.
    pub fn inverse(&self) -> Result<AlgebraElement> {
        let inv = invert_dense(&self.entries, self.ctx.d)
            .map_err(|pivot| Error::NotInvertible { pivot })?;
        Ok(AlgebraElement {
            ctx: self.ctx,
            entries: inv,
        })
    }

    pub fn is_invertible(&self) -> bool {
        invert_dense(&self.entries, self.ctx.d).is_ok()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        max_abs(&self.entries)
    }

    pub fn max_deviation(&self, other: &AlgebraElement) -> Result<f64> {
        self.ctx.check(&other.ctx)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// True iff the max entrywise absolute difference is at most `tol`.
    pub fn approx_eq(&self, other: &AlgebraElement, tol: f64) -> Result<bool> {
        Ok(self.max_deviation(other)? <= tol)
    }

    /// Spectral condition number `s_max / s_min` (infinite when singular).
    pub fn condition_estimate(&self) -> f64 {
        let d = self.ctx.d;
        let m = DMatrix::from_row_slice(d, d, &self.entries);
        let sv = m.singular_values();
        let max = sv.iter().cloned().fold(0.0, f64::max);
        let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
        if min == 0.0 {
            f64::INFINITY
        } else {
            max / min
        }
    }
}

pub(crate) fn max_abs(values: &[Complex64]) -> f64 {
    values.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Inverts a row-major `n x n` matrix. On failure returns the relative pivot
/// that triggered the singularity test.
pub(crate) fn invert_dense(entries: &[Complex64], n: usize) -> std::result::Result<Vec<Complex64>, f64> {
    let scale = max_abs(entries);
    if scale == 0.0 {
        return Err(0.0);
    }
    let m = DMatrix::from_row_slice(n, n, entries);
    let lu = m.lu();
    let u = lu.u();
    let pivot = (0..n).map(|i| u[(i, i)].norm()).fold(f64::INFINITY, f64::min) / scale;
    if pivot.is_nan() || pivot < SINGULAR_PIVOT {
        return Err(pivot);
    }
    let inv = lu.try_inverse().ok_or(pivot)?;
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            out.push(inv[(i, j)]);
        }
    }
    Ok(out)
}
