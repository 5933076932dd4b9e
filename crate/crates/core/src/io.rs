//! JSON file format for series.
//!
//! ```json
//! { "dim": 2, "order": 3, "kind": "moments",
//!   "series": [ [[[re, im]], ...], ... ] }
//! ```
//!
//! `series[n]` is the degree-`n` tensor written as `D` rows of `D^n` entries
//! (row = output basis index, column = flattened input indices), matrix-unit
//! basis `e_{ij}` at index `i * dim + j`, complex numbers as `[re, im]`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraContext;
use crate::error::{Error, Result};
use crate::mfs::{MultiSeries, MultilinearMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeriesKind {
    Moments,
    Cumulants,
    STransform,
    Generic,
}

impl SeriesKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SeriesKind::Moments => "moments",
            SeriesKind::Cumulants => "cumulants",
            SeriesKind::STransform => "s-transform",
            SeriesKind::Generic => "generic",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesFile {
    pub dim: usize,
    pub order: usize,
    pub kind: SeriesKind,
    pub series: Vec<Vec<Vec<[f64; 2]>>>,
}

impl SeriesFile {
    pub fn from_series(s: &MultiSeries, kind: SeriesKind) -> Self {
        let dim = s.context().dim();
        let series = s
            .components()
            .iter()
            .map(|c| {
                let cols = c.inner_len();
                (0..dim)
                    .map(|o| {
                        c.coeffs()[o * cols..(o + 1) * cols]
                            .iter()
                            .map(|z| [z.re, z.im])
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Self {
            dim: s.context().d(),
            order: s.order(),
            kind,
            series,
        }
    }

    /// Validates shapes and builds the series in a context with tolerance `tol`.
    pub fn to_series(&self, tol: f64) -> Result<MultiSeries> {
        if self.dim == 0 {
            return Err(Error::Shape("dim must be positive".into()));
        }
        if self.series.len() != self.order + 1 {
            return Err(Error::Shape(format!(
                "order {} needs {} degree tensors, found {}",
                self.order,
                self.order + 1,
                self.series.len()
            )));
        }
        let ctx = AlgebraContext::with_tol(self.dim, tol);
        let dim = ctx.dim();
        let mut comps = Vec::with_capacity(self.order + 1);
        for (n, rows) in self.series.iter().enumerate() {
            let cols = dim.pow(n as u32);
            if rows.len() != dim || rows.iter().any(|r| r.len() != cols) {
                return Err(Error::Shape(format!(
                    "degree {n} must be a {dim} x {cols} array"
                )));
            }
            let coeffs = rows
                .iter()
                .flatten()
                .map(|&[re, im]| Complex64::new(re, im))
                .collect();
            comps.push(MultilinearMap::from_coeffs(ctx, n, coeffs)?);
        }
        MultiSeries::from_components(ctx, comps)
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Shape(format!("series file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("series file serializes")
    }
}
