use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numcore::Dataset;

pub const DEFAULT_HAAR_SEED: u64 = 20070401;

/// How the true step-function coefficients are generated.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum BetaSpec {
    /// Four nonzero coefficients of alternating sign (`+m, -m, +m, -m`) at the
    /// knots with 0-based indices `q * p / 4`, `q = 0..4`.
    QuartileSteps { magnitude: f64 },
    /// One coefficient per knot, in knot order.
    Explicit(Vec<f64>),
}

/// Simulated piecewise-constant regression on a Haar step basis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HaarSpec {
    pub n: usize,
    pub seed: u64,
    pub beta_true: BetaSpec,
    pub sigma: f64,
}

impl Default for HaarSpec {
    fn default() -> Self {
        Self {
            n: 50,
            seed: DEFAULT_HAAR_SEED,
            beta_true: BetaSpec::QuartileSteps { magnitude: 2.0 },
            sigma: 1.0,
        }
    }
}

impl HaarSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidConfig(format!("Haar example needs n >= 2, got {}", self.n)));
        }
        if !(self.sigma >= 0.0) {
            return Err(Error::InvalidConfig(format!("sigma = {} must be >= 0", self.sigma)));
        }
        Ok(())
    }

    fn coefficients(&self, p: usize) -> Result<DVector<f64>> {
        match &self.beta_true {
            BetaSpec::QuartileSteps { magnitude } => {
                let mut beta = DVector::zeros(p);
                for q in 0..4 {
                    let j = q * p / 4;
                    let sign = if q % 2 == 0 { 1.0 } else { -1.0 };
                    beta[j] += sign * magnitude;
                }
                Ok(beta)
            }
            BetaSpec::Explicit(values) => {
                if values.len() != p {
                    return Err(Error::InvalidConfig(format!(
                        "{} coefficients for {p} knots",
                        values.len()
                    )));
                }
                Ok(DVector::from_column_slice(values))
            }
        }
    }
}

/// Step basis `X[i, j] = 1{x_i >= c_j}` with knots `c_j` at the sorted unique inputs.
pub fn haar_design(x: &[f64]) -> (DMatrix<f64>, Vec<f64>) {
    let mut knots = x.to_vec();
    knots.sort_by(f64::total_cmp);
    knots.dedup();
    let design = DMatrix::from_fn(x.len(), knots.len(), |i, j| {
        if x[i] >= knots[j] {
            1.0
        } else {
            0.0
        }
    });
    (design, knots)
}

/// Draws `x ~ U[0, 1)` and builds the Haar regression dataset.
pub fn gen_haar(spec: &HaarSpec) -> Result<Dataset> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let x: Vec<f64> = (0..spec.n).map(|_| rng.random::<f64>()).collect();
    haar_dataset(&x, spec, &mut rng)
}

/// Builds the Haar dataset at fixed inputs; noise is drawn from `spec.seed`.
pub fn gen_haar_at(x: &[f64], spec: &HaarSpec) -> Result<Dataset> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    haar_dataset(x, spec, &mut rng)
}

fn haar_dataset(x: &[f64], spec: &HaarSpec, rng: &mut ChaCha8Rng) -> Result<Dataset> {
    let (design, knots) = haar_design(x);
    let beta = spec.coefficients(knots.len())?;
    let mut y = &design * beta;
    if spec.sigma > 0.0 {
        for v in y.iter_mut() {
            let e: f64 = rng.sample(StandardNormal);
            *v += spec.sigma * e;
        }
    }
    let names = knots.iter().map(|c| format!("h({c:.6})")).collect();
    Dataset::new(design, y, names)
}
