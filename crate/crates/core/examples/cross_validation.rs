//! Ten-fold cross-validation over lasso breakpoints and boosting iterations.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use stagewise::boost::{BoostConfig, UpdateRule};
use stagewise::dof::{cv_select, BoostModel, PathModel, StepwiseModel};
use stagewise::numcore::Dataset;
use stagewise::path::PathVariant;

fn main() -> stagewise::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (n, p) = (80, 10);
    let x = DMatrix::from_fn(n, p, |_, _| rng.sample::<f64, _>(StandardNormal));
    let beta = DVector::from_fn(p, |j, _| if j < 3 { 2.0 - j as f64 } else { 0.0 });
    let y = &x * beta + DVector::from_fn(n, |_, _| 1.5 * rng.sample::<f64, _>(StandardNormal));
    let d = Dataset::from_matrix(x, y)?;

    let lasso = PathModel { variant: PathVariant::Lasso };
    let res = cv_select(&d, &lasso, p, 10, 1)?;
    println!("lasso: best step {} with {} active", res.best_index, lasso.active_count(&d, res.best_index)?);
    for (k, e) in res.curve.iter().enumerate() {
        println!("  {k:>2}  {e:.4}");
    }

    let boost = BoostModel {
        config: BoostConfig::new(0.1, UpdateRule::CoefficientStep, 300),
    };
    let res = cv_select(&d, &boost, 300, 10, 1)?;
    println!(
        "boosting: best iteration {} (cv mse {:.4}, {} active)",
        res.best_index,
        res.curve[res.best_index],
        boost.active_count(&d, res.best_index)?
    );
    Ok(())
}
