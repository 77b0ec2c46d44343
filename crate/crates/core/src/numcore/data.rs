use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Post-centering norm below which a column is treated as constant.
pub const CONSTANT_COLUMN_TOL: f64 = 1e-12;

/// A response vector with its design matrix and column labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    x: DMatrix<f64>,
    y: DVector<f64>,
    names: Vec<String>,
}

impl Dataset {
    pub fn new(x: DMatrix<f64>, y: DVector<f64>, names: Vec<String>) -> Result<Self> {
        let (n, p) = x.shape();
        if n < 2 {
            return Err(Error::InvalidData(format!("need at least 2 observations, got {n}")));
        }
        if p == 0 {
            return Err(Error::InvalidData("design has no columns".into()));
        }
        if y.len() != n {
            return Err(Error::InvalidData(format!(
                "response has length {} but design has {n} rows",
                y.len()
            )));
        }
        if names.len() != p {
            return Err(Error::InvalidData(format!(
                "{} column names for {p} columns",
                names.len()
            )));
        }
        if let Some((idx, _)) = x.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidData(format!("non-finite value in column {}", idx / n)));
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidData("non-finite value in response".into()));
        }
        Ok(Self { x, y, names })
    }

    /// Builds a dataset with generated column names `x1..xp`.
    pub fn from_matrix(x: DMatrix<f64>, y: DVector<f64>) -> Result<Self> {
        let names = (1..=x.ncols()).map(|j| format!("x{j}")).collect();
        Self::new(x, y, names)
    }

    pub fn x(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn y(&self) -> &DVector<f64> {
        &self.y
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    pub fn p(&self) -> usize {
        self.x.ncols()
    }

    /// Same design, different response.
    pub fn with_response(&self, y: DVector<f64>) -> Result<Self> {
        Self::new(self.x.clone(), y, self.names.clone())
    }

    /// Restricts the dataset to the given rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Result<Self> {
        let x = self.x.select_rows(rows);
        let y = DVector::from_iterator(rows.len(), rows.iter().map(|&i| self.y[i]));
        Self::new(x, y, self.names.clone())
    }

    /// Indices of columns whose post-centering norm is at most
    /// [`CONSTANT_COLUMN_TOL`].
    pub fn constant_columns(&self) -> Vec<usize> {
        (0..self.p())
            .filter(|&j| centered_norm(&self.x.column(j).into_owned()) <= CONSTANT_COLUMN_TOL)
            .collect()
    }

    /// Removes constant columns. A constant column spans the same space as the
    /// intercept, which the standardized fits already carry.
    pub fn drop_constant_columns(&self) -> Result<Self> {
        let constant = self.constant_columns();
        if constant.is_empty() {
            return Ok(self.clone());
        }
        let keep: Vec<usize> = (0..self.p()).filter(|j| !constant.contains(j)).collect();
        if keep.is_empty() {
            return Err(Error::InvalidData("every column is constant".into()));
        }
        let names = keep.iter().map(|&j| self.names[j].clone()).collect();
        Self::new(self.x.select_columns(&keep), self.y.clone(), names)
    }
}

fn centered_norm(col: &DVector<f64>) -> f64 {
    let mean = col.mean();
    col.iter().map(|v| (v - mean).powi(2)).sum::<f64>().sqrt()
}

/// Column scaling applied after centering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scaling {
    /// Unit L2 norm per column.
    #[default]
    UnitNorm,
    /// Unit sample standard deviation (divisor `n - 1`).
    UnitVariance,
}

/// Centered, scaled design with a centered response.
#[derive(Debug, Clone, PartialEq)]
pub struct StandardizedDataset {
    xs: DMatrix<f64>,
    yc: DVector<f64>,
    y_mean: f64,
    col_means: DVector<f64>,
    col_norms: DVector<f64>,
    col_scales: DVector<f64>,
    scaling: Scaling,
    names: Vec<String>,
}

/// Centers `y` and centers and unit-norm scales every column of `X`.
pub fn standardize(d: &Dataset) -> Result<StandardizedDataset> {
    standardize_with(d, Scaling::UnitNorm)
}

pub fn standardize_with(d: &Dataset, scaling: Scaling) -> Result<StandardizedDataset> {
    let (n, p) = d.x().shape();
    let mut xs = d.x().clone();
    let mut col_means = DVector::zeros(p);
    let mut col_norms = DVector::zeros(p);
    let mut col_scales = DVector::zeros(p);
    for j in 0..p {
        let mut col = xs.column_mut(j);
        let mean = col.mean();
        col.add_scalar_mut(-mean);
        let norm = col.norm();
        if norm <= CONSTANT_COLUMN_TOL {
            return Err(Error::ConstantColumn(j));
        }
        let scale = match scaling {
            Scaling::UnitNorm => norm,
            Scaling::UnitVariance => norm / ((n - 1) as f64).sqrt(),
        };
        col /= scale;
        col_means[j] = mean;
        col_norms[j] = norm;
        col_scales[j] = scale;
    }
    let y_mean = d.y().mean();
    let yc = d.y().add_scalar(-y_mean);
    Ok(StandardizedDataset {
        xs,
        yc,
        y_mean,
        col_means,
        col_norms,
        col_scales,
        scaling,
        names: d.names().to_vec(),
    })
}

impl StandardizedDataset {
    pub fn xs(&self) -> &DMatrix<f64> {
        &self.xs
    }

    pub fn yc(&self) -> &DVector<f64> {
        &self.yc
    }

    pub fn y_mean(&self) -> f64 {
        self.y_mean
    }

    pub fn col_means(&self) -> &DVector<f64> {
        &self.col_means
    }

    /// L2 norms of the centered (unscaled) columns.
    pub fn col_norms(&self) -> &DVector<f64> {
        &self.col_norms
    }

    /// Divisors applied to the centered columns.
    pub fn col_scales(&self) -> &DVector<f64> {
        &self.col_scales
    }

    pub fn scaling(&self) -> Scaling {
        self.scaling
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn n(&self) -> usize {
        self.xs.nrows()
    }

    pub fn p(&self) -> usize {
        self.xs.ncols()
    }

    /// Same design, with `y` (on the original scale) centered as the new response.
    pub fn with_response(&self, y: &DVector<f64>) -> StandardizedDataset {
        let y_mean = y.mean();
        StandardizedDataset {
            yc: y.add_scalar(-y_mean),
            y_mean,
            ..self.clone()
        }
    }

    /// Reconstructs the original design matrix.
    pub fn original_x(&self) -> DMatrix<f64> {
        let mut x = self.xs.clone();
        for j in 0..self.p() {
            let mut col = x.column_mut(j);
            col *= self.col_scales[j];
            col.add_scalar_mut(self.col_means[j]);
        }
        x
    }

    /// Applies the stored centering and scaling to new rows.
    pub fn transform(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        let mut out = x.clone();
        for j in 0..self.p() {
            let mut col = out.column_mut(j);
            col.add_scalar_mut(-self.col_means[j]);
            col /= self.col_scales[j];
        }
        out
    }

    /// Predictions on the original response scale for standardized-scale coefficients.
    pub fn predict(&self, beta: &DVector<f64>, x: &DMatrix<f64>) -> DVector<f64> {
        (self.transform(x) * beta).add_scalar(self.y_mean)
    }

    /// Fitted values on the original scale for standardized-scale coefficients.
    pub fn fitted(&self, beta: &DVector<f64>) -> DVector<f64> {
        (&self.xs * beta).add_scalar(self.y_mean)
    }

    /// Coefficients on the original column scale, with the intercept.
    pub fn unstandardize(&self, beta: &DVector<f64>) -> (f64, DVector<f64>) {
        let raw = beta.component_div(&self.col_scales);
        let intercept = self.y_mean - raw.dot(&self.col_means);
        (intercept, raw)
    }
}
