#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use stagewise::numcore::{standardize, Dataset, StandardizedDataset};
use stagewise::path::{lars_path, Path, PathVariant};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_matrix(rng: &mut ChaCha8Rng, n: usize, p: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, p, |_, _| rng.sample(StandardNormal))
}

pub fn gaussian_vector(rng: &mut ChaCha8Rng, n: usize) -> DVector<f64> {
    DVector::from_fn(n, |_, _| rng.sample(StandardNormal))
}

/// Random dataset with a sparse linear signal plus noise.
pub fn random_dataset(seed: u64, n: usize, p: usize) -> Dataset {
    let mut r = rng(seed);
    let x = gaussian_matrix(&mut r, n, p);
    let beta = DVector::from_fn(p, |j, _| if j % 2 == 0 { 1.0 + j as f64 } else { 0.0 });
    let y = &x * beta + gaussian_vector(&mut r, n);
    Dataset::from_matrix(x, y).unwrap()
}

pub fn random_standardized(seed: u64, n: usize, p: usize) -> StandardizedDataset {
    standardize(&random_dataset(seed, n, p)).unwrap()
}

/// Centered design with orthonormal columns, built by Gram-Schmidt.
pub fn orthonormal_dataset(seed: u64, n: usize, p: usize) -> StandardizedDataset {
    let mut r = rng(seed);
    let mut cols: Vec<DVector<f64>> = Vec::new();
    let ones = DVector::from_element(n, 1.0 / (n as f64).sqrt());
    while cols.len() < p {
        let mut v = gaussian_vector(&mut r, n);
        v -= &ones * ones.dot(&v);
        for c in &cols {
            let proj = c.dot(&v);
            v -= c * proj;
        }
        let norm = v.norm();
        cols.push(v / norm);
    }
    let x = DMatrix::from_columns(&cols);
    let y = gaussian_vector(&mut r, n) * 3.0;
    standardize(&Dataset::from_matrix(x, y).unwrap()).unwrap()
}

/// Lasso `min ½||y - Xb||² + lambda ||b||_1` by cyclic coordinate descent.
pub fn lasso_cd(x: &DMatrix<f64>, y: &DVector<f64>, lambda: f64, warm: Option<&DVector<f64>>) -> DVector<f64> {
    let p = x.ncols();
    let norms: Vec<f64> = (0..p).map(|j| x.column(j).norm_squared()).collect();
    let mut beta = warm.cloned().unwrap_or_else(|| DVector::zeros(p));
    let mut r = y - x * &beta;
    for _ in 0..200_000 {
        let mut max_change = 0.0f64;
        for j in 0..p {
            let xj = x.column(j);
            let rho = xj.dot(&r) + norms[j] * beta[j];
            let new = soft(rho, lambda) / norms[j];
            let delta = new - beta[j];
            if delta != 0.0 {
                r.axpy(-delta, &xj, 1.0);
                beta[j] = new;
                max_change = max_change.max(delta.abs());
            }
        }
        if max_change < 1e-15 {
            break;
        }
    }
    beta
}

pub fn soft(z: f64, t: f64) -> f64 {
    if z > t {
        z - t
    } else if z < -t {
        z + t
    } else {
        0.0
    }
}

/// Coefficient-step boosting replayed on `y` with a fixed selection order.
pub fn replay_boost(xs: &DMatrix<f64>, y: &DVector<f64>, selections: &[usize], nu: f64) -> DVector<f64> {
    let mut fit = DVector::zeros(y.len());
    for &j in selections {
        let x = xs.column(j);
        let c = x.dot(&(y - &fit));
        fit.axpy(nu * c, &x, 1.0);
    }
    fit
}

/// Point of a path whose coefficient L1 norm equals `t`, scanning segments
/// in order. The norm is linear on a segment when no coefficient changes sign.
pub fn at_l1_norm(path: &Path, t: f64) -> DVector<f64> {
    let mut prev = 0.0;
    for seg in path.segments() {
        let end = seg.beta_end.lp_norm(1);
        if t <= end {
            let frac = if end > prev { (t - prev) / (end - prev) } else { 1.0 };
            return &seg.beta_start + (&seg.beta_end - &seg.beta_start) * frac.clamp(0.0, 1.0);
        }
        prev = end;
    }
    path.final_beta().clone()
}

/// Largest coefficient discrepancy between the lasso path and coordinate
/// descent on a 40-point lambda grid, matched by lambda and by L1 norm.
pub fn lasso_oracle_error(seed: u64, n: usize, p: usize) -> (f64, f64) {
    let sd = random_standardized(seed, n, p);
    let path = lars_path(&sd, PathVariant::Lasso).unwrap();
    let lambda_max = sd.xs().tr_mul(sd.yc()).amax();
    let mut warm: Option<DVector<f64>> = None;
    let (mut by_lambda, mut by_norm) = (0.0f64, 0.0f64);
    for i in 1..=40 {
        let lambda = lambda_max * (1.0 - i as f64 / 40.5);
        let cd = lasso_cd(sd.xs(), sd.yc(), lambda, warm.as_ref());
        by_lambda = by_lambda.max((path.coefficients_at_lambda(lambda) - &cd).amax());
        by_norm = by_norm.max((at_l1_norm(&path, cd.lp_norm(1)) - &cd).amax());
        warm = Some(cd);
    }
    (by_lambda, by_norm)
}

/// Largest discrepancy between a path on an orthonormal design and the
/// soft-thresholded least-squares coefficients, over a lambda grid.
pub fn soft_threshold_error(seed: u64, variant: PathVariant) -> f64 {
    let sd = orthonormal_dataset(seed, 12, 5);
    let path = lars_path(&sd, variant).unwrap();
    let c = sd.xs().tr_mul(sd.yc());
    let lambda_max = c.amax();
    let mut err = (path.final_beta() - &c).amax();
    for i in 0..=100 {
        let lambda = lambda_max * (1.0 - i as f64 / 100.0);
        let closed = c.map(|v| soft(v, lambda));
        err = err.max((path.coefficients_at_lambda(lambda) - closed).amax());
    }
    err
}

/// First seed in `0..` whose correlated 3-variable design has a lasso path
/// with a coefficient shrinking toward zero, as seen by coordinate descent.
pub fn nonmonotone_instance() -> StandardizedDataset {
    for seed in 0..10_000u64 {
        let mut r = rng(seed);
        let n = 20;
        let z = gaussian_matrix(&mut r, n, 2);
        let noise = gaussian_matrix(&mut r, n, 3);
        let x = DMatrix::from_fn(n, 3, |i, j| match j {
            0 => z[(i, 0)] + 0.3 * noise[(i, 0)],
            1 => z[(i, 1)] + 0.3 * noise[(i, 1)],
            _ => z[(i, 0)] + z[(i, 1)] + 0.3 * noise[(i, 2)],
        });
        let y = DVector::from_fn(n, |i, _| {
            3.0 * x[(i, 0)] + 3.0 * x[(i, 1)] - 2.5 * x[(i, 2)] + 0.5 * r.sample::<f64, _>(StandardNormal)
        });
        let Ok(sd) = standardize(&Dataset::from_matrix(x, y).unwrap()) else {
            continue;
        };
        let lambda_max = sd.xs().tr_mul(sd.yc()).amax();
        let mut prev = DVector::zeros(3);
        let mut shrinks = false;
        for i in 1..=200 {
            let lambda = lambda_max * (1.0 - i as f64 / 200.0);
            let cd = lasso_cd(sd.xs(), sd.yc(), lambda, Some(&prev));
            if (0..3).any(|j| cd[j].abs() < prev[j].abs() - 1e-6) {
                shrinks = true;
            }
            prev = cd;
        }
        if shrinks {
            return sd;
        }
    }
    panic!("no nonmonotone instance found");
}

/// Tab-separated file laid out like the public prostate data: a row-label
/// column, eight predictors, `lpsa` and a `train` flag with 67 `T` rows.
pub fn prostate_like_file(seed: u64) -> String {
    let mut r = rng(seed);
    let mut out = String::from("\tlcavol\tlweight\tage\tlbph\tsvi\tlcp\tgleason\tpgg45\tlpsa\ttrain\n");
    for i in 0..97 {
        let cells: Vec<String> = (0..9)
            .map(|_| format!("{:.6}", r.sample::<f64, _>(StandardNormal)))
            .collect();
        let flag = if i % 3 == 2 && i < 90 { "F" } else { "T" };
        out.push_str(&format!("{}\t{}\t{flag}\n", i + 1, cells.join("\t")));
    }
    out
}
