use nalgebra::{DMatrix, DVector};

use crate::boost::{l2boost, BoostConfig};
use crate::error::{Error, Result};
use crate::numcore::{standardize, Dataset, StandardizedDataset};
use crate::path::{lars_path, PathVariant};

/// A fitting procedure with a nested sequence of models indexed
/// `0..=max_index` (path breakpoint or boosting iteration).
///
/// Implementations standardize the training data themselves, so the same
/// model can be refit on bootstrap responses or cross-validation folds.
pub trait StepwiseModel: Sync {
    /// Predictions at every index `0..=max_index` for the rows of `test_x`.
    fn fit_predict(
        &self,
        train: &Dataset,
        test_x: &DMatrix<f64>,
        max_index: usize,
    ) -> Result<Vec<DVector<f64>>>;

    /// Number of nonzero coefficients of the model at `index` fitted on `data`.
    fn active_count(&self, data: &Dataset, index: usize) -> Result<usize>;
}

/// Drops constant training columns and standardizes the rest.
fn prepare(train: &Dataset) -> Result<(StandardizedDataset, Vec<usize>)> {
    let constant = train.constant_columns();
    let keep: Vec<usize> = (0..train.p()).filter(|j| !constant.contains(j)).collect();
    if keep.is_empty() {
        return Err(Error::InvalidData("every training column is constant".into()));
    }
    let reduced = if constant.is_empty() {
        train.clone()
    } else {
        let names = keep.iter().map(|&j| train.names()[j].clone()).collect();
        Dataset::new(train.x().select_columns(&keep), train.y().clone(), names)?
    };
    Ok((standardize(&reduced)?, keep))
}

/// Breakpoint `k` of a LARS-family path; indices past the end repeat the final fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathModel {
    pub variant: PathVariant,
}

impl StepwiseModel for PathModel {
    fn fit_predict(
        &self,
        train: &Dataset,
        test_x: &DMatrix<f64>,
        max_index: usize,
    ) -> Result<Vec<DVector<f64>>> {
        let (sd, keep) = prepare(train)?;
        let path = lars_path(&sd, self.variant)?;
        let x = test_x.select_columns(&keep);
        (0..=max_index)
            .map(|k| {
                let beta = path.beta_at_step(k.min(path.steps()))?;
                Ok(sd.predict(&beta, &x))
            })
            .collect()
    }

    fn active_count(&self, data: &Dataset, index: usize) -> Result<usize> {
        let (sd, _) = prepare(data)?;
        let path = lars_path(&sd, self.variant)?;
        let beta = path.beta_at_step(index.min(path.steps()))?;
        Ok(beta.iter().filter(|b| **b != 0.0).count())
    }
}

/// Iteration `m` of componentwise boosting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoostModel {
    pub config: BoostConfig,
}

impl StepwiseModel for BoostModel {
    fn fit_predict(
        &self,
        train: &Dataset,
        test_x: &DMatrix<f64>,
        max_index: usize,
    ) -> Result<Vec<DVector<f64>>> {
        let (sd, keep) = prepare(train)?;
        let cfg = BoostConfig {
            m_max: max_index.max(1),
            ..self.config
        };
        let trace = l2boost(&sd, &cfg)?;
        let x = sd.transform(&test_x.select_columns(&keep));
        let mut beta = DVector::zeros(sd.p());
        let mut out = Vec::with_capacity(max_index + 1);
        out.push((&x * &beta).add_scalar(sd.y_mean()));
        for m in 1..=max_index {
            if m <= trace.iterations() {
                beta[trace.selections()[m - 1]] += trace.increments()[m - 1];
            }
            out.push((&x * &beta).add_scalar(sd.y_mean()));
        }
        Ok(out)
    }

    fn active_count(&self, data: &Dataset, index: usize) -> Result<usize> {
        let (sd, _) = prepare(data)?;
        let cfg = BoostConfig {
            m_max: index.max(1),
            ..self.config
        };
        let trace = l2boost(&sd, &cfg)?;
        let beta = trace.coefficients(index.min(trace.iterations()))?;
        Ok(beta.iter().filter(|b| **b != 0.0).count())
    }
}

/// The intercept-only model at every index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MeanModel;

impl StepwiseModel for MeanModel {
    fn fit_predict(
        &self,
        train: &Dataset,
        test_x: &DMatrix<f64>,
        max_index: usize,
    ) -> Result<Vec<DVector<f64>>> {
        let pred = DVector::from_element(test_x.nrows(), train.y().mean());
        Ok(vec![pred; max_index + 1])
    }

    fn active_count(&self, _data: &Dataset, _index: usize) -> Result<usize> {
        Ok(0)
    }
}
