//! Exact computation of the first cohomology of `sl(2)` acting on n-ary
//! multilinear differential operators between weighted densities on the line.

pub mod error;
pub mod exactlin;
pub mod multiindex;

pub use error::{Error, Result};
pub mod params;
pub mod symcalc;
pub mod cohomology;
pub mod oracle;
pub mod cli;
