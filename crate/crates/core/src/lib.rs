//! Truncated multilinear function series over the matrix algebra `M_d(C)` and
//! the operator-valued moment/cumulant calculus built on them: `χ`, the
//! S-transform and T-transform, products of free variables, and a
//! non-crossing-partition oracle to check the recursions against.

pub mod algebra;
pub mod error;
pub mod freeprob;
pub mod freeprod;
pub mod io;
pub mod mfs;
pub mod ncoracle;
pub mod random;

pub use algebra::{AlgebraContext, AlgebraElement};
pub use error::{Error, Result};
pub use mfs::{MultiSeries, MultilinearMap};
pub use num_complex::Complex64;
