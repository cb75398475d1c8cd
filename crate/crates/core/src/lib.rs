//! Evaluation of the Cheeger-Chern-Simons class `2 C2` of SL(2,C) on
//! bar-complex cycles through the extended Bloch group.
//!
//! A 3-cycle is repaired to a homologous good cycle, pushed into
//! configurations of vectors in `C^2 \ {0}`, flattened with logarithms of
//! determinants and evaluated with the lifted Rogers dilogarithm.

pub mod bar;
pub mod bloch;
pub mod config;
pub mod error;
pub mod geometry;
pub mod io;
pub mod paths;
pub mod pipeline;
pub mod polylog;
pub mod real;
pub mod repair;
pub mod selftest;
pub mod tol;

pub use error::{CcsError, Result};
pub use geometry::{C64, ExtComplex, GroupElement, ProjVector};
