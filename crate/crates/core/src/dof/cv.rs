use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::models::StepwiseModel;
use crate::error::{Error, Result};
use crate::numcore::Dataset;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CvResult {
    /// Index with the smallest cross-validated error (smallest on ties).
    pub best_index: usize,
    /// Pooled held-out mean squared error at each index.
    pub curve: Vec<f64>,
    pub folds: Vec<Vec<usize>>,
}

/// Seeded random partition of `0..n` into `k` folds of near-equal size.
pub fn fold_assignment(n: usize, k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if k < 2 {
        return Err(Error::InsufficientData(format!("need at least 2 folds, got {k}")));
    }
    if k > n {
        return Err(Error::InsufficientData(format!("{k} folds for {n} observations")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut folds = vec![Vec::new(); k];
    for (pos, &i) in order.iter().enumerate() {
        folds[pos % k].push(i);
    }
    for fold in &mut folds {
        fold.sort_unstable();
    }
    Ok(folds)
}

/// Pooled held-out squared error at every index for the given folds.
pub fn cv_curve(
    d: &Dataset,
    model: &impl StepwiseModel,
    max_index: usize,
    folds: &[Vec<usize>],
) -> Result<Vec<f64>> {
    let n = d.n();
    let per_fold: Vec<Vec<f64>> = folds
        .par_iter()
        .map(|test| {
            let train: Vec<usize> = (0..n).filter(|i| !test.contains(i)).collect();
            if train.len() < 2 {
                return Err(Error::InsufficientData(
                    "training fold has fewer than 2 observations".into(),
                ));
            }
            let train_data = d.select_rows(&train)?;
            let test_x = d.x().select_rows(test);
            let preds = model.fit_predict(&train_data, &test_x, max_index)?;
            Ok(preds
                .iter()
                .map(|pred| {
                    test.iter()
                        .zip(pred.iter())
                        .map(|(&i, &yhat)| (d.y()[i] - yhat).powi(2))
                        .sum()
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    let total: usize = folds.iter().map(Vec::len).sum();
    Ok((0..=max_index)
        .map(|idx| per_fold.iter().map(|f| f[idx]).sum::<f64>() / total as f64)
        .collect())
}

/// K-fold cross-validation over the model indices `0..=max_index`.
pub fn cv_select(
    d: &Dataset,
    model: &impl StepwiseModel,
    max_index: usize,
    k: usize,
    seed: u64,
) -> Result<CvResult> {
    let folds = fold_assignment(d.n(), k, seed)?;
    let curve = cv_curve(d, model, max_index, &folds)?;
    let best_index = argmin(&curve);
    Ok(CvResult {
        best_index,
        curve,
        folds,
    })
}

fn argmin(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v < values[best] {
            best = i;
        }
    }
    best
}
