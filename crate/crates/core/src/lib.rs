//! Estimation, power analysis and Monte Carlo tooling for extreme
//! outcome-dependent sampling (EODS) biomarker studies.
//!
//! A cohort of `n_F` subjects has its continuous response `Y` measured; only
//! the subjects in the lower and upper `γ/2` tails of `Y` are tested for the
//! biomarker `X`. The forward effect of `X` on `Y` is recovered from a reverse
//! regression of `X` on `Y` within the tested subset combined with the mean and
//! variance of the full response vector.
//!
//! Modules:
//! - [`dist`]: normal, Student-t, F and noncentral F distribution functions.
//! - [`regress`]: simple least-squares regression and QQ series.
//! - [`odeb`]: reverse-to-forward conversion, standard errors, diagnostics.
//! - [`design`]: power and sample-size calculations.
//! - [`screen`]: extreme-sample selection and multi-biomarker screening.
//! - [`sim`]: the Monte Carlo engine.

// `!(x > 0.0)` checks are deliberate: they reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod design;
pub mod dist;
mod error;
pub mod odeb;
pub mod regress;
mod roots;
pub mod screen;
pub mod sim;
pub mod sum;

pub use error::{Error, Result};
