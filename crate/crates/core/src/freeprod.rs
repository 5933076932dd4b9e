//! Products of free variables.
//!
//! For `x`, `y` free with amalgamation the moment series of `xy` is coupled
//! to two auxiliary series,
//!
//! ```text
//! Φ    = Σ E[xy b_1 xy ... b_n xy]
//! Φ^y→ = Σ E[y b_1 xy ... b_n xy]
//! Φ^→x = Σ E[xy b_1 ... xy b_n x]
//! ```
//!
//! through four relations (vanishing of mixed cumulants):
//!
//! ```text
//! (Ψ1) Φ    = C_x∘(Φ^y→·I)·Φ^y→
//! (Ψ2) Φ    = Φ^→x·C_y∘(I·Φ^→x)
//! (Ψ3) Φ^y→ = C_y∘(I·Φ^→x)·(1 + I·Φ)
//! (Ψ4) Φ^→x = (1 + Φ·I)·C_x∘(Φ^y→·I)
//! ```
//!
//! Per degree, Ψ3 and Ψ4 need only lower degrees and Ψ1 then needs the fresh
//! `Φ^y→_n`; Ψ2 is left out of the recursion and checked afterwards.

use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraContext;
use crate::error::{Error, Result};
use crate::freeprob::{chi, lemma_residuals, s_from_cumulants, s_transform};
use crate::mfs::{MultiSeries, MultilinearMap};

#[derive(Debug, Clone, PartialEq)]
pub struct ProductTriple {
    pub phi: MultiSeries,
    pub phi_y_left: MultiSeries,
    pub phi_x_right: MultiSeries,
}

impl ProductTriple {
    pub fn context(&self) -> &AlgebraContext {
        self.phi.context()
    }

    pub fn order(&self) -> usize {
        self.phi.order()
    }

    /// Per-degree residual of Ψ2.
    pub fn psi2_residual(&self, c_y: &MultiSeries) -> Result<Vec<f64>> {
        let n = self.order();
        let rhs = self
            .phi_x_right
            .mul(&c_y.compose(&self.phi_x_right.left_mul_identity().truncate(n))?)?;
        self.phi.deviation_by_degree(&rhs)
    }
}

fn open_prefix(s: &MultiSeries, n: usize) -> MultiSeries {
    let mut t = s.truncate(n);
    t.set_component(n, MultilinearMap::zero(*s.context(), n));
    t
}

/// Solves the Ψ-system degree by degree (Ψ3, then Ψ4, then Ψ1) and checks Ψ2.
pub fn product_moment_triple(c_x: &MultiSeries, c_y: &MultiSeries) -> Result<ProductTriple> {
    c_x.context().check(c_y.context())?;
    if c_x.order() != c_y.order() {
        return Err(Error::OrderMismatch {
            left: c_x.order(),
            right: c_y.order(),
        });
    }
    let ctx = *c_x.context();
    let order = c_x.order();
    let mut phi = MultiSeries::zero(ctx, order);
    let mut y_left = MultiSeries::zero(ctx, order);
    let mut x_right = MultiSeries::zero(ctx, order);

    for n in 0..=order {
        let cx = c_x.truncate(n);
        let cy = c_y.truncate(n);
        let id = MultiSeries::identity(ctx, n);
        let one = MultiSeries::one(ctx, n);
        let phi_n = open_prefix(&phi, n);
        let xr_n = open_prefix(&x_right, n);

        // Ψ3
        let yl_rhs = cy
            .compose(&xr_n.left_mul_identity().truncate(n))?
            .mul(&one.add(&phi_n.left_mul_identity().truncate(n))?)?;
        y_left.set_component(n, yl_rhs.component(n).clone());
        let yl_n = y_left.truncate(n);

        // Ψ4 and Ψ1 share C_x∘(Φ^y→·I); degree n of it uses Φ^y→_{<n} only.
        let cx_inner = cx.compose(&yl_n.mul(&id)?)?;
        let xr_rhs = one.add(&phi_n.mul(&id)?)?.mul(&cx_inner)?;
        x_right.set_component(n, xr_rhs.component(n).clone());

        let phi_rhs = cx_inner.mul(&yl_n)?;
        phi.set_component(n, phi_rhs.component(n).clone());
    }

    let triple = ProductTriple {
        phi,
        phi_y_left: y_left,
        phi_x_right: x_right,
    };
    let residual = triple
        .psi2_residual(c_y)?
        .into_iter()
        .fold(0.0, f64::max);
    let scale = triple.phi.max_abs().max(1.0);
    if residual > ctx.tol() * scale {
        return Err(Error::ConsistencyFailure {
            what: "Ψ2",
            residual,
        });
    }
    Ok(triple)
}

/// `S_y · S_x ∘ (S_y⁻¹ · I · S_y)`.
pub fn twisted_rhs(s_x: &MultiSeries, s_y: &MultiSeries) -> Result<MultiSeries> {
    let ctx = *s_y.context();
    let n = s_y.order();
    let id = MultiSeries::identity(ctx, n);
    let conj = s_y.mul_inverse()?.mul(&id)?.mul(s_y)?;
    s_y.mul(&s_x.compose(&conj)?)
}

/// Residual of `(I·Φ^→x)∘χ = I·S_y`, per degree, at the triple's order.
pub fn diag_ipsi(triple: &ProductTriple, c_y: &MultiSeries) -> Result<Vec<f64>> {
    let n = triple.order();
    let x = chi(&triple.phi)?;
    let lhs = triple
        .phi_x_right
        .left_mul_identity()
        .truncate(n)
        .compose(&x)?;
    let rhs = s_from_cumulants(c_y)?.left_mul_identity();
    lhs.deviation_by_degree(&rhs)
}

/// Residual of `Φ^y→∘χ = S_y⁻¹·(1 + I)`, per degree, at order `N - 1`.
pub fn diag_phichi(triple: &ProductTriple, c_y: &MultiSeries) -> Result<Vec<f64>> {
    let ctx = *triple.context();
    let x = chi(&triple.phi)?;
    let s_y = s_from_cumulants(c_y)?;
    let m = s_y.order();
    let lhs = triple.phi_y_left.compose(&x)?.truncate(m);
    let one_plus_i = MultiSeries::one(ctx, m).add(&MultiSeries::identity(ctx, m))?;
    let rhs = s_y.mul_inverse()?.mul(&one_plus_i)?;
    lhs.deviation_by_degree(&rhs)
}

/// Per-degree deviations collected by [`verify_twisted`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    /// Matrix size `d`.
    pub dim: usize,
    /// Truncation order of the cumulant inputs.
    pub order: usize,
    pub tolerance: f64,
    /// `S_xy` against the twisted product, degrees `0..N-1`.
    pub theorem: Vec<f64>,
    pub psi2: Vec<f64>,
    pub ipsi: Vec<f64>,
    pub phichi: Vec<f64>,
    pub lemma_x: Vec<f64>,
    pub lemma_y: Vec<f64>,
    pub max_deviation: f64,
    pub pass: bool,
}

impl VerificationReport {
    fn finish(mut self) -> Self {
        self.max_deviation = [
            &self.theorem,
            &self.psi2,
            &self.ipsi,
            &self.phichi,
            &self.lemma_x,
            &self.lemma_y,
        ]
        .iter()
        .flat_map(|v| v.iter())
        .cloned()
        .fold(0.0, f64::max);
        self.pass = self.max_deviation <= self.tolerance;
        self
    }

    pub fn theorem_max(&self) -> f64 {
        self.theorem.iter().cloned().fold(0.0, f64::max)
    }
}

/// End-to-end check of twisted multiplicativity for one pair of cumulant
/// series, together with the intermediate identities.
pub fn verify_twisted(c_x: &MultiSeries, c_y: &MultiSeries, tol: f64) -> Result<VerificationReport> {
    let triple = product_moment_triple(c_x, c_y)?;
    let s_xy = s_transform(&triple.phi)?;
    let s_x = s_from_cumulants(c_x)?;
    let s_y = s_from_cumulants(c_y)?;
    let rhs = twisted_rhs(&s_x, &s_y)?;
    Ok(VerificationReport {
        dim: c_x.context().d(),
        order: c_x.order(),
        tolerance: tol,
        theorem: s_xy.deviation_by_degree(&rhs)?,
        psi2: triple.psi2_residual(c_y)?,
        ipsi: diag_ipsi(&triple, c_y)?,
        phichi: diag_phichi(&triple, c_y)?,
        lemma_x: lemma_residuals(c_x)?.combined(),
        lemma_y: lemma_residuals(c_y)?.combined(),
        max_deviation: 0.0,
        pass: false,
    }
    .finish())
}
