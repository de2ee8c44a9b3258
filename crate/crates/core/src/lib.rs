//! Executable pocsets, Dunwoody trees, cubings and algebraic regular neighborhoods, with a
//! free-group frontend that produces the input data from splittings.

pub mod arn;
pub mod bits;
pub mod cubing;
pub mod dot;
pub mod dunwoody;
pub mod error;
pub mod freegrp;
pub mod io;
pub mod pocset;
pub mod report;
pub mod uf;

pub use error::{Error, Result};
pub use report::{ValidationReport, Violation};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/pocsets.md")]
    mod pocsets {}
    #[doc = include_str!("../../../book/src/trees.md")]
    mod trees {}
    #[doc = include_str!("../../../book/src/cubings.md")]
    mod cubings {}
    #[doc = include_str!("../../../book/src/neighborhoods.md")]
    mod neighborhoods {}
    #[doc = include_str!("../../../book/src/free_groups.md")]
    mod free_groups {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
