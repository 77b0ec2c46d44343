//! Componentwise L2-boosting, LARS regularization paths and
//! degrees-of-freedom diagnostics for linear models.
//!
//! * [`numcore`]: datasets, standardization, least squares and hat matrices.
//! * [`boost`]: componentwise linear L2-boosting and its smoother operator.
//! * [`path`]: exact LAR / lasso / forward-stagewise paths and the limiting
//!   product operator built from them.
//! * [`dof`]: trace, active-set, bootstrap and cross-validation diagnostics.
//! * [`lab`]: data generation and loading, experiment runners and reports.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod boost;
pub mod dof;
pub mod error;
pub mod lab;
pub mod numcore;
pub mod path;

pub use error::{Error, Result};
