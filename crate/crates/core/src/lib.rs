//! Exact Hochschild cohomology of skew group algebras `S(V)#G` presented as
//! group-decorated polyvector fields, with Gerstenhaber brackets and a
//! chain-level Koszul referee.

pub mod bracket;
pub mod cli;
pub mod cochain;
pub mod coeffs;
pub mod error;
pub mod files;
pub mod group;
pub mod koszul;
pub mod linalg;
pub mod poly;
pub mod polyvector;
pub mod scalars;
pub mod suites;

pub use error::{Error, Result};
pub use scalars::CycScalar;
