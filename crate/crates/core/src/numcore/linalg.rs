use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Relative singular-value threshold for full column rank.
pub const RANK_TOL: f64 = 1e-10;

/// Where a smoother matrix came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Provenance {
    /// Orthogonal projection onto the span of `rank` columns.
    Hat { rank: usize },
    /// Finite-step boosting operator after `m` iterations with step length `nu`.
    Boosting { nu: f64, m: usize },
    /// Limiting product operator over the first `k` path segments.
    Limiting { k: usize, intercept: bool },
}

/// An `n x n` linear map from responses to fitted values.
#[derive(Debug, Clone, PartialEq)]
pub struct SmootherMatrix {
    matrix: DMatrix<f64>,
    provenance: Provenance,
}

impl SmootherMatrix {
    pub fn new(matrix: DMatrix<f64>, provenance: Provenance) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidData(format!(
                "smoother must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidData("smoother has non-finite entries".into()));
        }
        Ok(Self { matrix, provenance })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }

    pub fn apply(&self, y: &DVector<f64>) -> DVector<f64> {
        &self.matrix * y
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.matrix
    }
}

fn check_full_rank(xa: &DMatrix<f64>) -> Result<()> {
    let (n, k) = xa.shape();
    if k == 0 {
        return Ok(());
    }
    if n < k {
        return Err(Error::RankDeficient { ratio: 0.0 });
    }
    let sv = xa.singular_values();
    let max = sv.max();
    let min = sv.min();
    if !(max > 0.0) || min <= RANK_TOL * max {
        let ratio = if max > 0.0 { min / max } else { 0.0 };
        return Err(Error::RankDeficient { ratio });
    }
    Ok(())
}

/// Thin QR factors of a full-rank `n x k` matrix.
fn thin_qr(xa: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    check_full_rank(xa)?;
    let qr = xa.clone().qr();
    Ok((qr.q(), qr.r()))
}

/// Least-squares coefficients `argmin ||y - Xa b||` via Householder QR.
pub fn least_squares(xa: &DMatrix<f64>, y: &DVector<f64>) -> Result<DVector<f64>> {
    if xa.nrows() != y.len() {
        return Err(Error::InvalidData(format!(
            "design has {} rows but response has length {}",
            xa.nrows(),
            y.len()
        )));
    }
    if xa.ncols() == 0 {
        return Ok(DVector::zeros(0));
    }
    let (q, r) = thin_qr(xa)?;
    let qty = q.transpose() * y;
    r.solve_upper_triangular(&qty)
        .ok_or(Error::RankDeficient { ratio: 0.0 })
}

/// Solves `(Xaᵀ Xa) d = s` through the QR factor of `Xa`.
pub fn solve_gram(xa: &DMatrix<f64>, s: &DVector<f64>) -> Result<DVector<f64>> {
    let (_, r) = thin_qr(xa)?;
    let z = r
        .transpose()
        .solve_lower_triangular(s)
        .ok_or(Error::RankDeficient { ratio: 0.0 })?;
    r.solve_upper_triangular(&z)
        .ok_or(Error::RankDeficient { ratio: 0.0 })
}

/// Orthogonal projection `Xa (Xaᵀ Xa)⁻¹ Xaᵀ`, formed as `Q Qᵀ`.
pub fn hat_matrix(xa: &DMatrix<f64>) -> Result<SmootherMatrix> {
    let n = xa.nrows();
    let k = xa.ncols();
    let matrix = if k == 0 {
        DMatrix::zeros(n, n)
    } else {
        let (q, _) = thin_qr(xa)?;
        &q * q.transpose()
    };
    SmootherMatrix::new(matrix, Provenance::Hat { rank: k })
}

/// Inner products `Xsᵀ r` of every column with the residual.
pub fn residual_correlations(xs: &DMatrix<f64>, r: &DVector<f64>) -> DVector<f64> {
    xs.tr_mul(r)
}

/// Projection onto the constant vector, `11ᵀ/n`.
pub fn mean_projection(n: usize) -> DMatrix<f64> {
    DMatrix::from_element(n, n, 1.0 / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lcg_matrix(n: usize, k: usize, seed: u64) -> DMatrix<f64> {
        let mut state = seed;
        DMatrix::from_fn(n, k, |_, _| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        })
    }

    #[test]
    fn identity_design_returns_response() {
        let y = DVector::from_vec(vec![1.0, -2.0, 3.5]);
        let beta = least_squares(&DMatrix::identity(3, 3), &y).unwrap();
        assert!((beta - &y).abs().max() < 1e-14);
    }

    #[test]
    fn exact_single_column_fit() {
        let x = DMatrix::from_column_slice(4, 1, &[1.0, 2.0, -1.0, 0.5]);
        let y = &x.column(0) * 2.0;
        let beta = least_squares(&x, &y.into_owned()).unwrap();
        assert!((beta[0] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn matches_normal_equations() {
        let x = lcg_matrix(5, 2, 7);
        let y = DVector::from_vec(vec![0.3, -1.2, 0.8, 2.0, -0.4]);
        let beta = least_squares(&x, &y).unwrap();
        // normal equations, solved by explicit 2x2 inverse
        let g = x.transpose() * &x;
        let b = x.transpose() * &y;
        let det = g[(0, 0)] * g[(1, 1)] - g[(0, 1)] * g[(1, 0)];
        let b0 = (g[(1, 1)] * b[0] - g[(0, 1)] * b[1]) / det;
        let b1 = (-g[(1, 0)] * b[0] + g[(0, 0)] * b[1]) / det;
        assert!((beta[0] - b0).abs() < 1e-8);
        assert!((beta[1] - b1).abs() < 1e-8);
        let resid = &y - &x * &beta;
        assert!((x.transpose() * resid).abs().max() < 1e-8 * y.norm());
    }

    #[test]
    fn rank_deficient_design_is_rejected() {
        let mut x = lcg_matrix(6, 3, 11);
        let c0 = x.column(0).into_owned();
        x.set_column(2, &(c0 * 2.0));
        assert!(matches!(
            least_squares(&x, &DVector::zeros(6)),
            Err(Error::RankDeficient { .. })
        ));
        assert!(hat_matrix(&x).is_err());
    }

    #[test]
    fn rank_one_hat_matrix() {
        let u = DVector::from_vec(vec![3.0, 4.0, 0.0]) / 5.0;
        let h = hat_matrix(&DMatrix::from_columns(std::slice::from_ref(&u))).unwrap();
        assert!((h.matrix() - &u * u.transpose()).abs().max() < 1e-14);
        assert!((h.trace() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn full_rank_square_hat_is_identity() {
        let x = lcg_matrix(4, 4, 3);
        let h = hat_matrix(&x).unwrap();
        assert!((h.matrix() - DMatrix::identity(4, 4)).abs().max() < 1e-10);
        assert!((h.trace() - 4.0).abs() < 1e-10);
    }

    #[test]
    fn random_hat_is_a_projection() {
        let x = lcg_matrix(6, 3, 5);
        let h = hat_matrix(&x).unwrap();
        let m = h.matrix();
        assert!((h.trace() - 3.0).abs() < 1e-8);
        assert!((m * m - m).abs().max() < 1e-8);
        assert!((m - m.transpose()).abs().max() < 1e-9);
    }

    #[test]
    fn correlations_match_dot_products() {
        let xs = lcg_matrix(10, 4, 9);
        let r = lcg_matrix(10, 1, 13).column(0).into_owned();
        let c = residual_correlations(&xs, &r);
        for j in 0..4 {
            let dot: f64 = (0..10).map(|i| xs[(i, j)] * r[i]).sum();
            assert!((c[j] - dot).abs() < 1e-12);
        }
        assert_eq!(residual_correlations(&xs, &DVector::zeros(10)).max(), 0.0);
    }

    #[test]
    fn self_correlation_is_bounded_by_one() {
        let mut xs = lcg_matrix(8, 3, 21);
        for mut col in xs.column_iter_mut() {
            let mean = col.mean();
            col.add_scalar_mut(-mean);
            let norm = col.norm();
            col /= norm;
        }
        let c = residual_correlations(&xs, &xs.column(1).into_owned());
        assert!((c[1] - 1.0).abs() < 1e-14);
        assert!(c.iter().all(|v| v.abs() <= 1.0 + 1e-14));
    }

    #[test]
    fn gram_solve_matches_least_squares_route() {
        let x = lcg_matrix(7, 3, 17);
        let s = DVector::from_vec(vec![1.0, -1.0, 1.0]);
        let d = solve_gram(&x, &s).unwrap();
        assert!((x.transpose() * &x * &d - s).abs().max() < 1e-10);
    }
}
