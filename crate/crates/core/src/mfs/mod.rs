//! Multilinear function series over `M_d(C)`: homogeneous components, truncated
//! series and their calculus (sum, product, composition, both inverses).

mod expr;
mod map;
mod series;

pub use expr::{eval_expr, Expr};
pub use map::MultilinearMap;
pub use series::{compositions, MultiSeries, SeriesComparison};
