use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Tolerance used by the active-set NNLS routine.
pub const NNLS_TOL: f64 = 1e-10;

/// Minimizes `½ wᵀ G w - qᵀ w` subject to `w >= 0` for symmetric positive
/// definite `G` (Lawson-Hanson active-set iteration in Gram form).
///
/// With `G = X̃ᵀX̃` and `q = X̃ᵀr` this is nonnegative least squares of `r` on
/// the columns of `X̃`.
pub fn nnls_gram(g: &DMatrix<f64>, q: &DVector<f64>) -> Result<DVector<f64>> {
    let k = q.len();
    let scale = q.amax().max(1.0);
    let tol = NNLS_TOL * scale;
    let mut w = DVector::zeros(k);
    let mut passive: Vec<usize> = Vec::new();

    for _ in 0..(3 * k + 10) {
        let grad = q - g * &w;
        let candidate = (0..k)
            .filter(|i| !passive.contains(i))
            .filter(|&i| grad[i] > tol)
            .max_by(|&a, &b| grad[a].total_cmp(&grad[b]));
        let Some(enter) = candidate else {
            return Ok(w);
        };
        passive.push(enter);

        loop {
            let z = solve_subset(g, q, &passive)?;
            if z.iter().all(|&v| v > tol) {
                w.fill(0.0);
                for (&i, &v) in passive.iter().zip(z.iter()) {
                    w[i] = v;
                }
                break;
            }
            let mut alpha = f64::INFINITY;
            for (&i, &zi) in passive.iter().zip(z.iter()) {
                if zi <= tol {
                    let denom = w[i] - zi;
                    if denom > 0.0 {
                        alpha = alpha.min(w[i] / denom);
                    } else {
                        alpha = 0.0;
                    }
                }
            }
            let alpha = alpha.clamp(0.0, 1.0);
            for (&i, &zi) in passive.iter().zip(z.iter()) {
                w[i] += alpha * (zi - w[i]);
            }
            passive.retain(|&i| {
                if w[i] <= tol {
                    w[i] = 0.0;
                    false
                } else {
                    true
                }
            });
            if passive.is_empty() {
                break;
            }
        }
    }
    Ok(w)
}

fn solve_subset(g: &DMatrix<f64>, q: &DVector<f64>, set: &[usize]) -> Result<DVector<f64>> {
    let sub = g.select_rows(set).select_columns(set);
    let rhs = DVector::from_iterator(set.len(), set.iter().map(|&i| q[i]));
    let chol = sub.cholesky().ok_or_else(|| Error::RankDeficientActiveSet {
        active: set.to_vec(),
    })?;
    Ok(chol.solve(&rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exhaustive search over supports for the KKT point.
    fn brute_force(g: &DMatrix<f64>, q: &DVector<f64>) -> DVector<f64> {
        let k = q.len();
        for mask in 0u32..(1 << k) {
            let set: Vec<usize> = (0..k).filter(|i| mask & (1 << i) != 0).collect();
            let mut w = DVector::zeros(k);
            if !set.is_empty() {
                let sub = g.select_rows(&set).select_columns(&set);
                let rhs = DVector::from_iterator(set.len(), set.iter().map(|&i| q[i]));
                let z = sub.lu().solve(&rhs).unwrap();
                if z.iter().any(|&v| v <= 0.0) {
                    continue;
                }
                for (&i, &v) in set.iter().zip(z.iter()) {
                    w[i] = v;
                }
            }
            let grad = q - g * &w;
            if (0..k).all(|i| set.contains(&i) || grad[i] <= 1e-12) {
                return w;
            }
        }
        panic!("no KKT point found");
    }

    #[test]
    fn agrees_with_support_enumeration() {
        let mut state = 99u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        for _ in 0..40 {
            let x = DMatrix::from_fn(8, 4, |_, _| next());
            let r = DVector::from_fn(8, |_, _| next());
            let g = x.transpose() * &x;
            let q = x.transpose() * r;
            let got = nnls_gram(&g, &q).unwrap();
            let want = brute_force(&g, &q);
            assert!((got - want).abs().max() < 1e-9);
        }
    }

    #[test]
    fn unconstrained_optimum_when_feasible() {
        let g = DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]);
        let q = DVector::from_vec(vec![1.0, 1.0]);
        let w = nnls_gram(&g, &q).unwrap();
        assert!((&g * &w - q).abs().max() < 1e-12);
    }

    #[test]
    fn all_negative_gradient_gives_zero() {
        let g = DMatrix::identity(3, 3);
        let q = DVector::from_vec(vec![-1.0, -2.0, -0.5]);
        assert_eq!(nnls_gram(&g, &q).unwrap(), DVector::zeros(3));
    }
}
