use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use super::models::StepwiseModel;
use crate::error::{Error, Result};
use crate::numcore::{least_squares, Dataset};

/// Smallest replicate count accepted by the bootstrap estimators.
pub const MIN_BOOTSTRAP_REPS: usize = 100;

/// Monte-Carlo estimate of `(1/σ²) Σ_i cov(ŷ_i, y_i)` with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BootstrapDf {
    pub estimate: f64,
    pub std_error: f64,
    pub reps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BootstrapConfig {
    /// Noise scale; `None` estimates it from the full least-squares residuals.
    pub sigma: Option<f64>,
    pub reps: usize,
    pub seed: u64,
}

fn check(sigma: f64, reps: usize) -> Result<()> {
    if !(sigma > 0.0) {
        return Err(Error::InvalidConfig(format!("bootstrap sigma = {sigma} must be > 0")));
    }
    if reps < MIN_BOOTSTRAP_REPS {
        return Err(Error::InvalidConfig(format!(
            "bootstrap needs at least {MIN_BOOTSTRAP_REPS} replicates, got {reps}"
        )));
    }
    Ok(())
}

/// Standard normal draws for replicate `rep`; each replicate has its own
/// ChaCha stream so results do not depend on evaluation order.
fn replicate_noise(seed: u64, rep: usize, n: usize) -> DVector<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(rep as u64);
    DVector::from_fn(n, |_, _| rng.sample(StandardNormal))
}

/// Parametric bootstrap df for a procedure returning several fits at once.
///
/// Simulates `y* = mu + sigma * eps`, refits, and averages
/// `Σ_i (ŷ*_i - ŷ⁰_i) eps_i / sigma`, where `ŷ⁰` is the fit at `mu`.
/// Subtracting the constant `ŷ⁰` leaves the expectation unchanged and
/// removes most of the Monte-Carlo variance.
pub fn df_bootstrap_curve<F>(
    mu: &DVector<f64>,
    sigma: f64,
    reps: usize,
    seed: u64,
    fitter: F,
) -> Result<Vec<BootstrapDf>>
where
    F: Fn(&DVector<f64>) -> Result<Vec<DVector<f64>>> + Sync,
{
    check(sigma, reps)?;
    let n = mu.len();
    let base = fitter(mu)?;
    let width = base.len();
    let draws: Vec<Vec<f64>> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let eps = replicate_noise(seed, rep, n);
            let y = mu + &eps * sigma;
            let fits = fitter(&y)?;
            if fits.len() != width {
                return Err(Error::InvalidData("fitter changed its output count".into()));
            }
            Ok(fits
                .iter()
                .zip(&base)
                .map(|(fit, b)| (fit - b).dot(&eps) / sigma)
                .collect())
        })
        .collect::<Result<_>>()?;

    let r = reps as f64;
    Ok((0..width)
        .map(|idx| {
            let mean = draws.iter().map(|d| d[idx]).sum::<f64>() / r;
            let var = draws.iter().map(|d| (d[idx] - mean).powi(2)).sum::<f64>() / (r - 1.0);
            BootstrapDf {
                estimate: mean,
                std_error: (var / r).sqrt(),
                reps,
            }
        })
        .collect())
}

/// Parametric bootstrap df of a single fitting procedure.
pub fn df_bootstrap<F>(
    mu: &DVector<f64>,
    sigma: f64,
    reps: usize,
    seed: u64,
    fitter: F,
) -> Result<BootstrapDf>
where
    F: Fn(&DVector<f64>) -> Result<DVector<f64>> + Sync,
{
    let curve = df_bootstrap_curve(mu, sigma, reps, seed, |y| Ok(vec![fitter(y)?]))?;
    Ok(curve[0])
}

/// Full least-squares fit (with intercept) and the residual standard
/// deviation when there are residual degrees of freedom left.
pub fn full_model_fit(d: &Dataset) -> Result<(DVector<f64>, Option<f64>)> {
    let n = d.n();
    let mut design = DMatrix::from_element(n, d.p() + 1, 1.0);
    design.view_mut((0, 1), (n, d.p())).copy_from(d.x());
    let constant = d.constant_columns();
    let keep: Vec<usize> = (0..=d.p()).filter(|&j| j == 0 || !constant.contains(&(j - 1))).collect();
    let design = design.select_columns(&keep);
    let beta = least_squares(&design, d.y())?;
    let mu = &design * beta;
    let resid_df = n as i64 - design.ncols() as i64;
    let sigma = if resid_df > 0 {
        Some(((d.y() - &mu).norm_squared() / resid_df as f64).sqrt())
    } else {
        None
    };
    Ok((mu, sigma))
}

/// Bootstrap df at every index `0..=max_index` of a stepwise model, using the
/// full least-squares fit as the bootstrap mean.
pub fn bootstrap_model_df(
    d: &Dataset,
    model: &impl StepwiseModel,
    max_index: usize,
    cfg: &BootstrapConfig,
) -> Result<Vec<BootstrapDf>> {
    let (mu, sigma_hat) = full_model_fit(d)?;
    let sigma = match (cfg.sigma, sigma_hat) {
        (Some(s), _) => s,
        (None, Some(s)) => s,
        (None, None) => {
            return Err(Error::InvalidConfig(
                "no residual degrees of freedom to estimate sigma; supply it".into(),
            ))
        }
    };
    df_bootstrap_curve(&mu, sigma, cfg.reps, cfg.seed, |y| {
        let data = d.with_response(y.clone())?;
        model.fit_predict(&data, d.x(), max_index)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dof::models::MeanModel;
    use crate::numcore::hat_matrix;

    fn design() -> DMatrix<f64> {
        let mut state = 5u64;
        DMatrix::from_fn(30, 4, |_, _| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        })
    }

    #[test]
    fn fixed_projection_recovers_its_trace() {
        let x = design();
        let h = hat_matrix(&x).unwrap();
        let mu = &x * DVector::from_vec(vec![1.0, -2.0, 0.5, 3.0]);
        let est = df_bootstrap(&mu, 0.7, 2000, 11, |y| Ok(h.apply(y))).unwrap();
        assert!((est.estimate - 4.0).abs() < 3.0 * est.std_error, "{est:?}");
    }

    #[test]
    fn mean_model_has_one_df() {
        let x = design();
        let y = x.column(0) * 2.0 + x.column(1);
        let d = Dataset::from_matrix(x, y).unwrap();
        let cfg = BootstrapConfig {
            sigma: Some(1.0),
            reps: 1000,
            seed: 3,
        };
        let est = bootstrap_model_df(&d, &MeanModel, 0, &cfg).unwrap()[0];
        assert!((est.estimate - 1.0).abs() < 3.0 * est.std_error.max(1e-12), "{est:?}");
    }

    #[test]
    fn deterministic_given_seed() {
        let x = design();
        let h = hat_matrix(&x).unwrap();
        let mu = DVector::zeros(30);
        let a = df_bootstrap(&mu, 1.0, 200, 42, |y| Ok(h.apply(y))).unwrap();
        let b = df_bootstrap(&mu, 1.0, 200, 42, |y| Ok(h.apply(y))).unwrap();
        assert_eq!(a, b);
        let c = df_bootstrap(&mu, 1.0, 200, 43, |y| Ok(h.apply(y))).unwrap();
        assert_ne!(a.estimate, c.estimate);
    }

    #[test]
    fn rejects_bad_configuration() {
        let mu = DVector::zeros(5);
        assert!(df_bootstrap(&mu, 0.0, 500, 1, |y| Ok(y.clone())).is_err());
        assert!(df_bootstrap(&mu, 1.0, 99, 1, |y| Ok(y.clone())).is_err());
    }

    #[test]
    fn full_fit_estimates_sigma() {
        let x = design();
        let y = x.column(2) * 1.5;
        let d = Dataset::from_matrix(x, y.clone_owned()).unwrap();
        let (mu, sigma) = full_model_fit(&d).unwrap();
        assert!((mu - y).amax() < 1e-10);
        assert!(sigma.unwrap() < 1e-10);
    }
}
