use nalgebra::DMatrix;

use super::Path;
use crate::error::{Error, Result};
use crate::numcore::{hat_matrix, mean_projection, Provenance, SmootherMatrix, StandardizedDataset};

/// Builds `B_k = I - (I - gamma_k H_k) ... (I - gamma_1 H_1)`, where `H_j`
/// projects onto the centered columns active on segment `j`.
///
/// With `include_intercept` the mean projection is applied in full before the
/// first segment, adding exactly 1 to the trace.
pub fn limiting_hat(
    sd: &StandardizedDataset,
    path: &Path,
    k: usize,
    include_intercept: bool,
) -> Result<SmootherMatrix> {
    if k > path.steps() {
        return Err(Error::OutOfRange {
            what: "step",
            value: k as f64,
            max: path.steps() as f64,
        });
    }
    let n = sd.n();
    let mut resid_op = residual_start(n, include_intercept);
    for seg in &path.segments()[..k] {
        apply_segment(sd, &mut resid_op, &seg.active_set, seg.gamma)?;
    }
    let b = DMatrix::identity(n, n) - resid_op;
    SmootherMatrix::new(
        b,
        Provenance::Limiting {
            k,
            intercept: include_intercept,
        },
    )
}

/// `trace(B_k)` for `k = 0..=K`.
pub fn limiting_df_curve(
    sd: &StandardizedDataset,
    path: &Path,
    include_intercept: bool,
) -> Result<Vec<f64>> {
    let n = sd.n() as f64;
    let mut resid_op = residual_start(sd.n(), include_intercept);
    let mut out = Vec::with_capacity(path.steps() + 1);
    out.push(n - resid_op.trace());
    for seg in path.segments() {
        apply_segment(sd, &mut resid_op, &seg.active_set, seg.gamma)?;
        out.push(n - resid_op.trace());
    }
    Ok(out)
}

fn residual_start(n: usize, include_intercept: bool) -> DMatrix<f64> {
    let eye = DMatrix::identity(n, n);
    if include_intercept {
        eye - mean_projection(n)
    } else {
        eye
    }
}

fn apply_segment(
    sd: &StandardizedDataset,
    resid_op: &mut DMatrix<f64>,
    active: &[usize],
    gamma: f64,
) -> Result<()> {
    let h = hat_matrix(&sd.xs().select_columns(active)).map_err(|_| {
        Error::RankDeficientActiveSet {
            active: active.to_vec(),
        }
    })?;
    let update = h.matrix() * &*resid_op;
    *resid_op -= update * gamma;
    Ok(())
}
