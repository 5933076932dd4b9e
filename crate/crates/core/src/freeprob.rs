//! Operator-valued moments, cumulants and the S-/T-transforms of a single
//! random variable, all carried as multilinear function series.
//!
//! Order bookkeeping: an order-`N` moment or cumulant series yields `χ` at
//! order `N` and `S`, `T` at order `N - 1` (stripping the left `I` consumes
//! one degree).

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraContext, AlgebraElement};
use crate::error::{Error, Result};
use crate::mfs::MultiSeries;

/// Which of the two moment-cumulant fixed-point relations to solve.
///
/// `C1` fixes the first letter in the cumulant:
/// `Φ = C∘(I + I·Φ·I)·(1 + I·Φ)`.
/// `C2` fixes the last one:
/// `Φ = (1 + Φ·I)·C∘(I + I·Φ·I)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MomentPath {
    C1,
    C2,
}

/// `I + I·Φ·I` at the order of `phi`.
fn nested_argument(phi: &MultiSeries) -> Result<MultiSeries> {
    let n = phi.order();
    let ctx = *phi.context();
    let id = MultiSeries::identity(ctx, n);
    let i_phi = phi.left_mul_identity().truncate(n);
    id.add(&i_phi.mul(&id)?)
}

/// Right-hand side of the chosen relation for given `C`, `Φ` of equal order.
fn relation_rhs(c: &MultiSeries, phi: &MultiSeries, path: MomentPath) -> Result<MultiSeries> {
    let n = phi.order();
    let ctx = *phi.context();
    let one = MultiSeries::one(ctx, n);
    let inner = c.compose(&nested_argument(phi)?)?;
    match path {
        MomentPath::C1 => {
            let tail = one.add(&phi.left_mul_identity().truncate(n))?;
            inner.mul(&tail)
        }
        MomentPath::C2 => {
            let head = one.add(&phi.mul(&MultiSeries::identity(ctx, n))?)?;
            head.mul(&inner)
        }
    }
}

/// Degree-`n` prefix of `s` with the degree-`n` slot cleared.
fn open_prefix(s: &MultiSeries, n: usize) -> MultiSeries {
    let mut t = s.truncate(n);
    t.set_component(n, crate::mfs::MultilinearMap::zero(*s.context(), n));
    t
}

/// The moment series determined by a cumulant series, solving the chosen
/// relation one degree at a time. Degree `n` of the right side needs only
/// `Φ_{<n}`, so each step is explicit.
pub fn moments_from_cumulants(c: &MultiSeries, path: MomentPath) -> Result<MultiSeries> {
    let order = c.order();
    let mut phi = MultiSeries::zero(*c.context(), order);
    for n in 0..=order {
        let rhs = relation_rhs(&c.truncate(n), &open_prefix(&phi, n), path)?;
        phi.set_component(n, rhs.component(n).clone());
    }
    Ok(phi)
}

/// Cumulants from moments via the first-letter recursion.
pub fn cumulants_from_moments(phi: &MultiSeries) -> Result<MultiSeries> {
    cumulants_from_moments_with(phi, MomentPath::C1)
}

/// Cumulants from moments. The top cumulant `κ(xb_1, ..., xb_n, x)` enters
/// degree `n` of either relation linearly with coefficient one, so
/// `C_n = Φ_n - (right side with C_n = 0)_n`.
pub fn cumulants_from_moments_with(phi: &MultiSeries, path: MomentPath) -> Result<MultiSeries> {
    let order = phi.order();
    let mut c = MultiSeries::zero(*phi.context(), order);
    for n in 0..=order {
        let rhs = relation_rhs(&open_prefix(&c, n), &phi.truncate(n), path)?;
        let mut top = phi.component(n).clone();
        top.sub_assign(rhs.component(n));
        c.set_component(n, top);
    }
    Ok(c)
}

/// Largest coefficient gap between the first-letter and last-letter cumulant
/// recursions. Both characterize the same cumulants, so this is a diagnostic
/// that should sit at rounding level.
pub fn cumulant_recursion_discrepancy(phi: &MultiSeries) -> Result<f64> {
    let a = cumulants_from_moments_with(phi, MomentPath::C1)?;
    let b = cumulants_from_moments_with(phi, MomentPath::C2)?;
    Ok(a.approx_eq(&b, 0.0)?.max_deviation)
}

/// `χ`, the compositional inverse of `I·Φ`.
pub fn chi(phi: &MultiSeries) -> Result<MultiSeries> {
    phi.left_mul_identity().truncate(phi.order()).comp_inverse()
}

/// `S` from `(1 + I)·χ = I·S`; order `N - 1`.
pub fn s_transform(phi: &MultiSeries) -> Result<MultiSeries> {
    let n = phi.order();
    if n == 0 {
        return Err(Error::OrderTooLow { needed: 1, order: 0 });
    }
    let ctx = *phi.context();
    let one_plus_i = MultiSeries::one(ctx, n).add(&MultiSeries::identity(ctx, n))?;
    one_plus_i.mul(&chi(phi)?)?.left_strip()
}

/// `S` as the left-stripped compositional inverse of `I·C`; order `N - 1`.
pub fn s_from_cumulants(c: &MultiSeries) -> Result<MultiSeries> {
    let n = c.order();
    if n == 0 {
        return Err(Error::OrderTooLow { needed: 1, order: 0 });
    }
    c.left_mul_identity().truncate(n).comp_inverse()?.left_strip()
}

/// `T = S⁻¹`; order `N - 1`.
pub fn t_transform(phi: &MultiSeries) -> Result<MultiSeries> {
    s_transform(phi)?.mul_inverse()
}

/// Per-degree residuals of `(I·C)∘(I·S) = I` and `(I·S)∘(I·C) = I` at the
/// order of `c`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaResiduals {
    pub forward: Vec<f64>,
    pub backward: Vec<f64>,
}

impl LemmaResiduals {
    pub fn max(&self) -> f64 {
        self.forward
            .iter()
            .chain(&self.backward)
            .cloned()
            .fold(0.0, f64::max)
    }

    /// Degreewise maximum over both directions.
    pub fn combined(&self) -> Vec<f64> {
        self.forward
            .iter()
            .zip(&self.backward)
            .map(|(a, b)| a.max(*b))
            .collect()
    }
}

pub fn lemma_residuals(c: &MultiSeries) -> Result<LemmaResiduals> {
    let n = c.order();
    let s = s_from_cumulants(c)?;
    let i_c = c.left_mul_identity().truncate(n);
    let i_s = s.left_mul_identity();
    let id = MultiSeries::identity(*c.context(), n);
    Ok(LemmaResiduals {
        forward: i_c.compose(&i_s)?.deviation_by_degree(&id)?,
        backward: i_s.compose(&i_c)?.deviation_by_degree(&id)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpecKind {
    Cumulants,
    Moments,
}

/// A random variable known through its cumulant or moment series.
#[derive(Debug, Clone, PartialEq)]
pub struct VariableSpec {
    kind: SpecKind,
    series: MultiSeries,
}

impl VariableSpec {
    pub fn from_cumulants(c: MultiSeries) -> Self {
        Self {
            kind: SpecKind::Cumulants,
            series: c,
        }
    }

    pub fn from_moments(phi: MultiSeries) -> Self {
        Self {
            kind: SpecKind::Moments,
            series: phi,
        }
    }

    pub fn kind(&self) -> SpecKind {
        self.kind
    }

    pub fn context(&self) -> &AlgebraContext {
        self.series.context()
    }

    pub fn order(&self) -> usize {
        self.series.order()
    }

    pub fn series(&self) -> &MultiSeries {
        &self.series
    }

    /// `E[x]`, the shared constant term of both series.
    pub fn mean(&self) -> AlgebraElement {
        self.series.constant_term()
    }

    pub fn cumulants(&self) -> Result<MultiSeries> {
        match self.kind {
            SpecKind::Cumulants => Ok(self.series.clone()),
            SpecKind::Moments => cumulants_from_moments(&self.series),
        }
    }

    pub fn moments(&self) -> Result<MultiSeries> {
        match self.kind {
            SpecKind::Moments => Ok(self.series.clone()),
            SpecKind::Cumulants => moments_from_cumulants(&self.series, MomentPath::C1),
        }
    }

    pub fn s_transform(&self) -> Result<MultiSeries> {
        match self.kind {
            SpecKind::Cumulants => s_from_cumulants(&self.series),
            SpecKind::Moments => s_transform(&self.series),
        }
    }

    pub fn t_transform(&self) -> Result<MultiSeries> {
        self.s_transform()?.mul_inverse()
    }
}
