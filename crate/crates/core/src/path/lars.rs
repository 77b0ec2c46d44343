use nalgebra::{DMatrix, DVector};

use super::nnls::nnls_gram;
use super::{Path, PathSegment, PathVariant, SegmentEnd};
use crate::error::{Error, Result};
use crate::numcore::{least_squares, residual_correlations, solve_gram, StandardizedDataset};

/// Relative tolerance for treating two absolute correlations as tied.
pub const TIE_TOL: f64 = 1e-9;

/// Step candidates at or below this fraction of the current correlation
/// level are discarded.
pub const ZERO_STEP_TOL: f64 = 1e-12;

/// Computes the exact piecewise-linear coefficient path of the chosen variant.
///
/// The path is traced as a homotopy in the common absolute correlation
/// `C = max_j |x_jᵀ r|` of the active variables, which decreases from
/// `max_j |x_jᵀ yc|` to zero. Segment `k` moves along direction `d_k`
/// for a decrease `t_k` of `C`; `gamma_k = t_k / C_k` is the fraction of the
/// step to the least-squares fit of the segment's active set.
pub fn lars_path(sd: &StandardizedDataset, variant: PathVariant) -> Result<Path> {
    let xs = sd.xs();
    let y = sd.yc();
    let p = sd.p();
    let max_steps = 50 * p + 100;

    let mut beta = DVector::<f64>::zeros(p);
    let mut signs = vec![0.0f64; p];
    let mut active: Vec<usize> = Vec::new();
    let mut segments: Vec<PathSegment> = Vec::new();
    let mut arc = 0.0;

    let c0 = residual_correlations(xs, y);
    let c0_max = c0.amax();
    if c0_max <= f64::MIN_POSITIVE {
        return Ok(Path::new(variant, p, segments, beta));
    }
    for j in 0..p {
        if c0[j].abs() >= c0_max * (1.0 - TIE_TOL) {
            active.push(j);
            signs[j] = c0[j].signum();
        }
    }

    for step in 1..=max_steps {
        let resid = y - xs * &beta;
        let c = residual_correlations(xs, &resid);
        let level = active.iter().map(|&j| c[j].abs()).fold(0.0, f64::max);
        if level <= ZERO_STEP_TOL * c0_max {
            // Residual already orthogonal to every column.
            return Ok(Path::new(variant, p, segments, beta));
        }

        let xa = xs.select_columns(&active);
        let ca = DVector::from_iterator(active.len(), active.iter().map(|&j| c[j]));
        // Direction scaled so that t = level reaches the target fit of the segment.
        let (dir_active, moving) = match variant {
            PathVariant::Lar | PathVariant::Lasso => {
                let d = solve_gram(&xa, &(&ca / level)).map_err(|_| {
                    Error::RankDeficientActiveSet {
                        active: active.clone(),
                    }
                })?;
                (d, active.clone())
            }
            PathVariant::ForwardStagewise => {
                let s = DVector::from_iterator(active.len(), active.iter().map(|&j| signs[j]));
                let xt = DMatrix::from_fn(xa.nrows(), xa.ncols(), |i, k| xa[(i, k)] * s[k]);
                let g = xt.transpose() * &xt;
                let q = ca.component_mul(&s) / level;
                let w = nnls_gram(&g, &q)?;
                let moving: Vec<usize> = active
                    .iter()
                    .zip(w.iter())
                    .filter(|(_, &wk)| wk > 0.0)
                    .map(|(&j, _)| j)
                    .collect();
                (w.component_mul(&s), moving)
            }
        };
        let mut direction = DVector::zeros(p);
        for (&j, &dj) in active.iter().zip(dir_active.iter()) {
            direction[j] = dj;
        }
        let a = xs.tr_mul(&(xs * &direction));

        let eps = ZERO_STEP_TOL * level;
        let mut t_best = level;
        let mut end = SegmentEnd::LeastSquares;
        let mut joiners: Vec<(usize, f64, f64)> = Vec::new();
        let mut drops: Vec<(usize, f64)> = Vec::new();

        for j in (0..p).filter(|j| !moving.contains(j)) {
            for (sign, num, den) in [(1.0, level - c[j], 1.0 - a[j]), (-1.0, level + c[j], 1.0 + a[j])] {
                if den.abs() <= f64::EPSILON {
                    continue;
                }
                let t = num / den;
                if t > eps && t <= level {
                    joiners.push((j, sign, t));
                }
            }
        }
        if variant == PathVariant::Lasso {
            for &j in &active {
                if direction[j] != 0.0 && beta[j] != 0.0 {
                    let t = -beta[j] / direction[j];
                    if t > eps && t <= level {
                        drops.push((j, t));
                    }
                }
            }
        }
        let t_join = joiners.iter().map(|&(_, _, t)| t).fold(f64::INFINITY, f64::min);
        let t_drop = drops.iter().map(|&(_, t)| t).fold(f64::INFINITY, f64::min);
        // Events within TIE_TOL of the full step coincide with the fit itself.
        let full = t_best * (1.0 - TIE_TOL);
        if t_drop < full && t_drop <= t_join {
            t_best = t_drop;
            let mut dropped: Vec<usize> = drops
                .iter()
                .filter(|&&(_, t)| t <= t_drop * (1.0 + TIE_TOL))
                .map(|&(j, _)| j)
                .collect();
            dropped.sort_unstable();
            end = SegmentEnd::Drop(dropped);
        } else if t_join < full {
            t_best = t_join;
            let mut joined: Vec<usize> = Vec::new();
            for &(j, sign, t) in &joiners {
                if t <= t_join * (1.0 + TIE_TOL) && !joined.contains(&j) {
                    joined.push(j);
                    signs[j] = sign;
                }
            }
            joined.sort_unstable();
            end = SegmentEnd::Join(joined);
        }

        let t = t_best;
        if !(t > 0.0) {
            return Err(Error::NoProgress {
                step,
                step_length: t,
            });
        }
        let gamma = (t / level).min(1.0);
        let beta_start = beta.clone();
        beta.axpy(t, &direction, 1.0);

        match &end {
            SegmentEnd::LeastSquares => {
                // Land exactly on the target fit to avoid drift at the last breakpoint.
                if moving.len() == active.len() {
                    let xa = xs.select_columns(&active);
                    let ls = least_squares(&xa, y).map_err(|_| Error::RankDeficientActiveSet {
                        active: active.clone(),
                    })?;
                    beta.fill(0.0);
                    for (&j, &b) in active.iter().zip(ls.iter()) {
                        beta[j] = b;
                    }
                }
            }
            SegmentEnd::Drop(dropped) => {
                for &j in dropped {
                    beta[j] = 0.0;
                }
            }
            SegmentEnd::Join(_) => {}
        }

        let arc_start = arc;
        arc += (&beta - &beta_start).lp_norm(1);
        if !(arc > arc_start) {
            return Err(Error::NoProgress {
                step,
                step_length: t,
            });
        }
        segments.push(PathSegment {
            active_set: active.clone(),
            moving: moving.clone(),
            direction,
            gamma,
            beta_start,
            beta_end: beta.clone(),
            arc_start,
            arc_end: arc,
            lambda_start: level,
            lambda_end: if matches!(end, SegmentEnd::LeastSquares) { 0.0 } else { level - t },
            end: end.clone(),
        });

        match end {
            SegmentEnd::LeastSquares => return Ok(Path::new(variant, p, segments, beta)),
            SegmentEnd::Drop(dropped) => active.retain(|j| !dropped.contains(j)),
            SegmentEnd::Join(joined) => {
                if variant == PathVariant::ForwardStagewise {
                    active.retain(|j| moving.contains(j));
                }
                for j in joined {
                    if !active.contains(&j) {
                        active.push(j);
                    }
                }
            }
        }
        if active.is_empty() {
            return Err(Error::NoProgress {
                step,
                step_length: t,
            });
        }
    }
    Err(Error::NoProgress {
        step: max_steps,
        step_length: 0.0,
    })
}
