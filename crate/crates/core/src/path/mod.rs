//! LARS-family regularization paths.
//!
//! All three variants produce exact piecewise-linear coefficient profiles,
//! indexed here by cumulative L1 arc-length:
//!
//! * [`PathVariant::Lar`]: least angle regression, the active set only grows.
//! * [`PathVariant::Lasso`]: LAR plus removal of a variable whose coefficient
//!   crosses zero.
//! * [`PathVariant::ForwardStagewise`]: the `nu -> 0` limit of componentwise
//!   boosting; directions are restricted to agree in sign with the current
//!   correlations.
//!
//! When every profile is monotone the three paths coincide.

mod hat;
mod lars;
mod nnls;

use nalgebra::DVector;

use crate::error::{Error, Result};

pub use hat::{limiting_df_curve, limiting_hat};
pub use lars::{lars_path, TIE_TOL, ZERO_STEP_TOL};
pub use nnls::{nnls_gram, NNLS_TOL};

/// Magnitude slack allowed by [`is_monotone`].
pub const MONOTONE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PathVariant {
    Lar,
    Lasso,
    ForwardStagewise,
}

impl PathVariant {
    pub fn name(&self) -> &'static str {
        match self {
            PathVariant::Lar => "lar",
            PathVariant::Lasso => "lasso",
            PathVariant::ForwardStagewise => "stagewise",
        }
    }
}

/// What ended a segment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SegmentEnd {
    /// Inactive variables tied the active correlation level.
    Join(Vec<usize>),
    /// Lasso coefficients reached zero.
    Drop(Vec<usize>),
    /// The least-squares fit of the active set was reached.
    LeastSquares,
}

/// One linear piece of a path.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSegment {
    /// Variables tied at the maximal absolute correlation on this piece, in
    /// order of entry.
    pub active_set: Vec<usize>,
    /// Active variables with nonzero direction. Differs from `active_set`
    /// only for stagewise pieces with stationary variables.
    pub moving: Vec<usize>,
    /// Coefficient change per unit decrease of the correlation level.
    pub direction: DVector<f64>,
    /// Fraction of the step to the segment's least-squares target.
    pub gamma: f64,
    pub beta_start: DVector<f64>,
    pub beta_end: DVector<f64>,
    pub arc_start: f64,
    pub arc_end: f64,
    /// Common absolute correlation of the active set at the segment start.
    pub lambda_start: f64,
    pub lambda_end: f64,
    pub end: SegmentEnd,
}

impl PathSegment {
    pub fn arc_length(&self) -> f64 {
        self.arc_end - self.arc_start
    }

    /// Linear interpolation at arc-length `s` inside the segment.
    fn at_arc(&self, s: f64) -> DVector<f64> {
        let len = self.arc_length();
        let frac = if len > 0.0 {
            ((s - self.arc_start) / len).clamp(0.0, 1.0)
        } else {
            1.0
        };
        &self.beta_start + (&self.beta_end - &self.beta_start) * frac
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    variant: PathVariant,
    p: usize,
    segments: Vec<PathSegment>,
    final_beta: DVector<f64>,
}

impl Path {
    pub(crate) fn new(
        variant: PathVariant,
        p: usize,
        segments: Vec<PathSegment>,
        final_beta: DVector<f64>,
    ) -> Self {
        Self {
            variant,
            p,
            segments,
            final_beta,
        }
    }

    pub fn variant(&self) -> PathVariant {
        self.variant
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn segments(&self) -> &[PathSegment] {
        &self.segments
    }

    /// Number of segments `K`.
    pub fn steps(&self) -> usize {
        self.segments.len()
    }

    pub fn final_beta(&self) -> &DVector<f64> {
        &self.final_beta
    }

    pub fn total_arc_length(&self) -> f64 {
        self.segments.last().map_or(0.0, |s| s.arc_end)
    }

    /// Breakpoint arc-lengths, starting with 0.
    pub fn breakpoints(&self) -> Vec<f64> {
        std::iter::once(0.0)
            .chain(self.segments.iter().map(|s| s.arc_end))
            .collect()
    }

    /// Coefficients at breakpoint `k` (`k = 0` is the origin).
    pub fn beta_at_step(&self, k: usize) -> Result<DVector<f64>> {
        match k {
            0 => Ok(DVector::zeros(self.p)),
            k if k <= self.steps() => Ok(self.segments[k - 1].beta_end.clone()),
            _ => Err(Error::OutOfRange {
                what: "step",
                value: k as f64,
                max: self.steps() as f64,
            }),
        }
    }

    /// Coefficients at correlation level `lambda`; the lasso penalty for the
    /// lasso variant.
    pub fn coefficients_at_lambda(&self, lambda: f64) -> DVector<f64> {
        let Some(first) = self.segments.first() else {
            return DVector::zeros(self.p);
        };
        if lambda >= first.lambda_start {
            return DVector::zeros(self.p);
        }
        for seg in &self.segments {
            if lambda >= seg.lambda_end {
                let span = seg.lambda_start - seg.lambda_end;
                let frac = if span > 0.0 {
                    (seg.lambda_start - lambda) / span
                } else {
                    1.0
                };
                return &seg.beta_start + (&seg.beta_end - &seg.beta_start) * frac;
            }
        }
        self.final_beta.clone()
    }
}

/// Coefficients at L1 arc-length `s`, exact at breakpoints.
pub fn coefficients_at(path: &Path, s: f64) -> Result<DVector<f64>> {
    let total = path.total_arc_length();
    if !(s >= 0.0) || s > total * (1.0 + 1e-12) + 1e-15 {
        return Err(Error::OutOfRange {
            what: "arc length",
            value: s,
            max: total,
        });
    }
    if s == 0.0 || path.segments.is_empty() {
        return Ok(DVector::zeros(path.p));
    }
    let idx = path
        .segments
        .partition_point(|seg| seg.arc_end < s)
        .min(path.segments.len() - 1);
    Ok(path.segments[idx].at_arc(s))
}

/// True when no coefficient changes sign or shrinks in magnitude along the path.
pub fn is_monotone(path: &Path) -> bool {
    let mut prev = DVector::<f64>::zeros(path.p);
    for seg in &path.segments {
        let next = &seg.beta_end;
        for j in 0..path.p {
            if prev[j].abs() > MONOTONE_TOL && next[j] * prev[j] < 0.0 {
                return false;
            }
            if next[j].abs() < prev[j].abs() - MONOTONE_TOL {
                return false;
            }
        }
        prev = next.clone();
    }
    true
}

/// Compares two paths on the union of their breakpoints plus midpoints.
pub fn paths_equal(p1: &Path, p2: &Path, tol: f64) -> bool {
    if p1.p != p2.p {
        return false;
    }
    let total = p1.total_arc_length();
    if (total - p2.total_arc_length()).abs() > tol {
        return false;
    }
    let end = total.min(p2.total_arc_length());
    let mut grid: Vec<f64> = p1
        .breakpoints()
        .into_iter()
        .chain(p2.breakpoints())
        .map(|s| s.min(end))
        .collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let mids: Vec<f64> = grid.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    grid.extend(mids);
    grid.iter().all(|&s| {
        match (coefficients_at(p1, s), coefficients_at(p2, s)) {
            (Ok(a), Ok(b)) => (a - b).amax() <= tol,
            _ => false,
        }
    })
}
