//! Exact arithmetic for integral Diophantine approximation on log pairs over
//! the rationals: heights, distances, Pell units, curves through a boundary
//! point, the degree-6 del Pezzo surface, and split toric varieties.

pub mod arith;
pub mod curves;
pub mod delpezzo6;
pub mod error;
pub mod metrics;
pub mod poly;
pub mod toric;

pub use error::{Error, Result};

#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/heights.md")]
    mod heights {}
    #[doc = include_str!("../../../book/src/pell.md")]
    mod pell {}
    #[doc = include_str!("../../../book/src/curves.md")]
    mod curves {}
    #[doc = include_str!("../../../book/src/delpezzo6.md")]
    mod delpezzo6 {}
    #[doc = include_str!("../../../book/src/estimators.md")]
    mod estimators {}
    #[doc = include_str!("../../../book/src/toric.md")]
    mod toric {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
