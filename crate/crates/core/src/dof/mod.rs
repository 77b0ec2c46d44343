//! Degrees-of-freedom estimators and cross-validated model selection.
//!
//! For a path fitted adaptively, the trace of the limiting operator
//! ([`crate::path::limiting_hat`]) treats the selected sequence of active sets
//! as if it had been fixed in advance. The number of nonzero coefficients
//! ([`df_exact_active`]) accounts for the selection and, on designs where
//! the path adds one variable per step, equals the exact df. The bootstrap
//! estimates the covariance definition directly.

mod bootstrap;
mod cv;
mod models;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numcore::{SmootherMatrix, StandardizedDataset};
use crate::path::{limiting_df_curve, Path};

pub use bootstrap::{
    bootstrap_model_df, df_bootstrap, df_bootstrap_curve, full_model_fit, BootstrapConfig,
    BootstrapDf, MIN_BOOTSTRAP_REPS,
};
pub use cv::{cv_curve, cv_select, fold_assignment, CvResult};
pub use models::{BoostModel, MeanModel, PathModel, StepwiseModel};

/// `trace(B)`.
pub fn df_trace(b: &SmootherMatrix) -> f64 {
    b.trace()
}

/// Number of nonzero coefficients at breakpoint `k`, plus one for the intercept.
pub fn df_exact_active(path: &Path, k: usize, include_intercept: bool) -> Result<usize> {
    let beta = path.beta_at_step(k)?;
    let active = beta.iter().filter(|b| **b != 0.0).count();
    Ok(active + usize::from(include_intercept))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DfRow {
    pub k: usize,
    pub df_trace: f64,
    pub df_active: usize,
    pub df_bootstrap: Option<BootstrapDf>,
}

/// Per-step df estimates for one path.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DfTable {
    pub label: String,
    pub method: String,
    pub intercept: bool,
    pub rows: Vec<DfRow>,
}

impl DfTable {
    /// Trace and active-set df at every breakpoint `k = 1..=K`.
    pub fn from_path(
        label: &str,
        sd: &StandardizedDataset,
        path: &Path,
        include_intercept: bool,
    ) -> Result<Self> {
        let traces = limiting_df_curve(sd, path, include_intercept)?;
        let rows = (1..=path.steps())
            .map(|k| {
                Ok(DfRow {
                    k,
                    df_trace: traces[k],
                    df_active: df_exact_active(path, k, include_intercept)?,
                    df_bootstrap: None,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            label: label.to_string(),
            method: path.variant().name().to_string(),
            intercept: include_intercept,
            rows,
        })
    }

    /// Attaches bootstrap estimates indexed by `k` (`estimates[k]`).
    pub fn with_bootstrap(mut self, estimates: &[BootstrapDf]) -> Result<Self> {
        for row in &mut self.rows {
            let est = estimates.get(row.k).ok_or(Error::OutOfRange {
                what: "bootstrap index",
                value: row.k as f64,
                max: estimates.len() as f64 - 1.0,
            })?;
            row.df_bootstrap = Some(*est);
        }
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::{hat_matrix, standardize, Dataset};
    use crate::path::{lars_path, limiting_hat, PathVariant};
    use nalgebra::{DMatrix, DVector};

    #[test]
    fn trace_of_identity_and_zero() {
        let eye = SmootherMatrix::new(DMatrix::identity(5, 5), crate::numcore::Provenance::Hat { rank: 5 }).unwrap();
        assert_eq!(df_trace(&eye), 5.0);
        let zero = SmootherMatrix::new(DMatrix::zeros(5, 5), crate::numcore::Provenance::Hat { rank: 0 }).unwrap();
        assert_eq!(df_trace(&zero), 0.0);
    }

    #[test]
    fn hat_trace_counts_columns() {
        let x = DMatrix::from_fn(9, 3, |i, j| ((i * 7 + j * 3) % 5) as f64 + 0.1 * (i * j) as f64);
        assert!((df_trace(&hat_matrix(&x).unwrap()) - 3.0).abs() < 1e-8);
    }

    #[test]
    fn active_count_with_intercept() {
        let x = DMatrix::from_row_slice(
            6,
            2,
            &[1.0, 0.3, 2.0, -1.0, 0.5, 0.4, -1.0, 2.2, 4.0, 0.0, 0.7, -0.5],
        );
        let y = DVector::from_vec(vec![1.0, 2.0, -1.0, 0.3, 3.3, 0.0]);
        let sd = standardize(&Dataset::from_matrix(x, y).unwrap()).unwrap();
        let path = lars_path(&sd, PathVariant::Lar).unwrap();
        assert_eq!(df_exact_active(&path, 0, true).unwrap(), 1);
        assert_eq!(df_exact_active(&path, 0, false).unwrap(), 0);
        assert_eq!(df_exact_active(&path, 1, true).unwrap(), 2);
        assert!(df_exact_active(&path, path.steps() + 1, true).is_err());

        let table = DfTable::from_path("toy", &sd, &path, true).unwrap();
        assert_eq!(table.rows.len(), path.steps());
        for row in &table.rows {
            let b = limiting_hat(&sd, &path, row.k, true).unwrap();
            assert!((row.df_trace - df_trace(&b)).abs() < 1e-10);
            assert!(row.df_active as f64 <= sd.n() as f64);
        }
    }
}
