//! Componentwise linear L2-boosting.
//!
//! Each iteration fits the current residual by simple least squares on the
//! single column with the largest absolute inner product, then moves that
//! coordinate by a fraction `nu` of the univariate coefficient
//! ([`UpdateRule::CoefficientStep`]) or by `nu` times its sign
//! ([`UpdateRule::SignStep`]). Both rules share the same `nu -> 0` limit, the
//! forward-stagewise path computed exactly by [`crate::path::lars_path`].

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::numcore::{residual_correlations, Provenance, SmootherMatrix, StandardizedDataset};

/// Allowed deviation of a column norm from 1.
pub const STANDARDIZED_TOL: f64 = 1e-8;

/// Default stopping threshold relative to `||yc||`.
pub const DEFAULT_RELATIVE_STOP: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpdateRule {
    /// Move by `nu` times the univariate least-squares coefficient.
    CoefficientStep,
    /// Move by `nu` times the sign of the univariate coefficient.
    SignStep,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoostConfig {
    pub nu: f64,
    pub rule: UpdateRule,
    pub m_max: usize,
    /// Absolute threshold on `max_j |c_j|`; `None` uses `1e-10 * ||yc||`.
    pub stop_tol: Option<f64>,
}

impl BoostConfig {
    pub fn new(nu: f64, rule: UpdateRule, m_max: usize) -> Self {
        Self {
            nu,
            rule,
            m_max,
            stop_tol: None,
        }
    }

    pub fn with_stop_tol(mut self, tol: f64) -> Self {
        self.stop_tol = Some(tol);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.nu > 0.0 && self.nu <= 1.0) {
            return Err(Error::InvalidConfig(format!("step length nu = {} not in (0, 1]", self.nu)));
        }
        if self.m_max < 1 {
            return Err(Error::InvalidConfig("m_max must be at least 1".into()));
        }
        if let Some(tol) = self.stop_tol {
            if !(tol >= 0.0) {
                return Err(Error::InvalidConfig(format!("stop_tol = {tol} must be >= 0")));
            }
        }
        Ok(())
    }
}

/// Record of a boosting run on the standardized scale.
///
/// Coefficients are stored as per-iteration increments; `coefficients(m)`
/// rebuilds `beta^[m]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoostTrace {
    config: BoostConfig,
    p: usize,
    selections: Vec<usize>,
    increments: Vec<f64>,
    arc_lengths: Vec<f64>,
    beta: DVector<f64>,
    fitted: DVector<f64>,
}

impl BoostTrace {
    pub fn config(&self) -> &BoostConfig {
        &self.config
    }

    /// Number of completed iterations `M`.
    pub fn iterations(&self) -> usize {
        self.selections.len()
    }

    /// Selected columns `S_1..S_M` (0-based).
    pub fn selections(&self) -> &[usize] {
        &self.selections
    }

    /// Signed coefficient change applied at each iteration.
    pub fn increments(&self) -> &[f64] {
        &self.increments
    }

    /// Cumulative L1 arc-length, `arc_lengths()[m]` after `m` iterations.
    pub fn arc_lengths(&self) -> &[f64] {
        &self.arc_lengths
    }

    pub fn total_arc_length(&self) -> f64 {
        *self.arc_lengths.last().unwrap_or(&0.0)
    }

    /// Final coefficients `beta^[M]`.
    pub fn beta(&self) -> &DVector<f64> {
        &self.beta
    }

    /// Final fitted values `Xs beta^[M]` (centered scale).
    pub fn fitted(&self) -> &DVector<f64> {
        &self.fitted
    }

    /// `beta^[m]` for `0 <= m <= M`.
    pub fn coefficients(&self, m: usize) -> Result<DVector<f64>> {
        if m > self.iterations() {
            return Err(Error::OutOfRange {
                what: "iteration",
                value: m as f64,
                max: self.iterations() as f64,
            });
        }
        let mut beta = DVector::zeros(self.p);
        for (&j, &delta) in self.selections[..m].iter().zip(&self.increments[..m]) {
            beta[j] += delta;
        }
        Ok(beta)
    }

    /// The whole sequence `beta^[0], ..., beta^[M]`.
    pub fn coefficient_sequence(&self) -> Vec<DVector<f64>> {
        let mut beta = DVector::zeros(self.p);
        let mut out = Vec::with_capacity(self.iterations() + 1);
        out.push(beta.clone());
        for (&j, &delta) in self.selections.iter().zip(&self.increments) {
            beta[j] += delta;
            out.push(beta.clone());
        }
        out
    }

    /// Fitted values `Xs beta^[m]` on the centered scale.
    pub fn fitted_at(&self, sd: &StandardizedDataset, m: usize) -> Result<DVector<f64>> {
        Ok(sd.xs() * self.coefficients(m)?)
    }

    /// Coefficients at L1 arc-length `s`, interpolating within an iteration.
    pub fn coefficients_at_arc(&self, s: f64) -> Result<DVector<f64>> {
        let total = self.total_arc_length();
        if !(s >= 0.0) || s > total * (1.0 + 1e-12) + 1e-15 {
            return Err(Error::OutOfRange {
                what: "arc length",
                value: s,
                max: total,
            });
        }
        let mut beta = DVector::zeros(self.p);
        for (m, (&j, &delta)) in self.selections.iter().zip(&self.increments).enumerate() {
            let end = self.arc_lengths[m + 1];
            if end >= s {
                let start = self.arc_lengths[m];
                let frac = if end > start { (s - start) / (end - start) } else { 1.0 };
                beta[j] += frac.clamp(0.0, 1.0) * delta;
                return Ok(beta);
            }
            beta[j] += delta;
        }
        Ok(beta)
    }

    /// Coefficients at each arc-length of an ascending grid, in one sweep.
    pub fn coefficients_at_arcs(&self, grid: &[f64]) -> Result<Vec<DVector<f64>>> {
        if grid.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidConfig("arc-length grid must be ascending".into()));
        }
        if let Some(&last) = grid.last() {
            if last > self.total_arc_length() * (1.0 + 1e-12) + 1e-15 {
                return Err(Error::OutOfRange {
                    what: "arc length",
                    value: last,
                    max: self.total_arc_length(),
                });
            }
        }
        let mut out = Vec::with_capacity(grid.len());
        let mut beta = DVector::zeros(self.p);
        let mut m = 0;
        for &s in grid {
            // advance past iterations that end before s
            while m < self.iterations() && self.arc_lengths[m + 1] < s {
                beta[self.selections[m]] += self.increments[m];
                m += 1;
            }
            let mut at = beta.clone();
            if m < self.iterations() {
                let start = self.arc_lengths[m];
                let end = self.arc_lengths[m + 1];
                let frac = if end > start { ((s - start) / (end - start)).clamp(0.0, 1.0) } else { 1.0 };
                at[self.selections[m]] += frac * self.increments[m];
            }
            out.push(at);
        }
        Ok(out)
    }
}

fn check_standardized(sd: &StandardizedDataset) -> Result<()> {
    for (j, col) in sd.xs().column_iter().enumerate() {
        let norm = col.norm();
        if (norm - 1.0).abs() > STANDARDIZED_TOL {
            return Err(Error::NotStandardized { column: j, norm });
        }
    }
    Ok(())
}

/// Index of the largest `|c_j|`, smallest index on ties.
fn argmax_abs(c: &DVector<f64>) -> (usize, f64) {
    let mut best = 0;
    let mut best_abs = c[0].abs();
    for (j, v) in c.iter().enumerate().skip(1) {
        if v.abs() > best_abs {
            best = j;
            best_abs = v.abs();
        }
    }
    (best, best_abs)
}

/// Runs componentwise L2-boosting from `beta = 0`.
pub fn l2boost(sd: &StandardizedDataset, cfg: &BoostConfig) -> Result<BoostTrace> {
    cfg.validate()?;
    check_standardized(sd)?;
    l2boost_with_stop(sd, cfg, |_, _| false)
}

/// Like [`l2boost`] but also stops once the cumulative arc-length reaches `arc_limit`.
pub fn l2boost_to_arc(
    sd: &StandardizedDataset,
    cfg: &BoostConfig,
    arc_limit: f64,
) -> Result<BoostTrace> {
    cfg.validate()?;
    check_standardized(sd)?;
    l2boost_with_stop(sd, cfg, |arc, _| arc >= arc_limit)
}

fn l2boost_with_stop(
    sd: &StandardizedDataset,
    cfg: &BoostConfig,
    stop: impl Fn(f64, usize) -> bool,
) -> Result<BoostTrace> {
    let xs = sd.xs();
    let yc = sd.yc();
    let p = sd.p();
    let stop_tol = cfg
        .stop_tol
        .unwrap_or(DEFAULT_RELATIVE_STOP * yc.norm());

    let mut beta = DVector::zeros(p);
    let mut fitted = DVector::zeros(sd.n());
    let mut selections = Vec::new();
    let mut increments = Vec::new();
    let mut arc_lengths = vec![0.0];
    let mut arc = 0.0;

    for m in 1..=cfg.m_max {
        let resid = yc - &fitted;
        let c = residual_correlations(xs, &resid);
        let (j, cmax) = argmax_abs(&c);
        if cmax < stop_tol {
            break;
        }
        let b = c[j];
        let delta = match cfg.rule {
            UpdateRule::CoefficientStep => cfg.nu * b,
            UpdateRule::SignStep => cfg.nu * b.signum(),
        };
        beta[j] += delta;
        fitted.axpy(delta, &xs.column(j), 1.0);
        arc += delta.abs();
        selections.push(j);
        increments.push(delta);
        arc_lengths.push(arc);
        if stop(arc, m) {
            break;
        }
    }

    Ok(BoostTrace {
        config: *cfg,
        p,
        selections,
        increments,
        arc_lengths,
        beta,
        fitted,
    })
}

/// The operator `B_m = I - (I - nu H_{S_m}) ... (I - nu H_{S_1})` that maps
/// `yc` to the coefficient-step fit after `m` iterations, with the selected
/// columns held fixed.
pub fn boosting_smoother(
    sd: &StandardizedDataset,
    trace: &BoostTrace,
    m: usize,
) -> Result<SmootherMatrix> {
    if trace.config.rule != UpdateRule::CoefficientStep {
        return Err(Error::NotLinearSmoother);
    }
    if m > trace.iterations() {
        return Err(Error::OutOfRange {
            what: "iteration",
            value: m as f64,
            max: trace.iterations() as f64,
        });
    }
    let n = sd.n();
    let nu = trace.config.nu;
    // residual operator I - B_m
    let mut resid_op = DMatrix::<f64>::identity(n, n);
    for &j in &trace.selections[..m] {
        let x = sd.xs().column(j);
        let xt_r = x.transpose() * &resid_op;
        resid_op.ger(-nu, &x, &xt_r.transpose(), 1.0);
    }
    let b = DMatrix::identity(n, n) - resid_op;
    SmootherMatrix::new(b, Provenance::Boosting { nu, m })
}

/// `df(m) = trace(B_m)` for each supplied smoother.
pub fn boost_df_trace(smoothers: &[SmootherMatrix]) -> Vec<f64> {
    smoothers.iter().map(SmootherMatrix::trace).collect()
}

/// `trace(B_m)` for every `m = 0..=M`, updated incrementally.
pub fn boost_df_curve(sd: &StandardizedDataset, trace: &BoostTrace) -> Result<Vec<f64>> {
    if trace.config.rule != UpdateRule::CoefficientStep {
        return Err(Error::NotLinearSmoother);
    }
    let n = sd.n();
    let nu = trace.config.nu;
    let mut resid_op = DMatrix::<f64>::identity(n, n);
    let mut df = 0.0;
    let mut out = Vec::with_capacity(trace.iterations() + 1);
    out.push(0.0);
    for &j in &trace.selections {
        let x = sd.xs().column(j);
        let xt_r = x.transpose() * &resid_op;
        // trace(nu x xᵀ R) = nu xᵀ R x
        df += nu * xt_r.dot(&x.transpose());
        resid_op.ger(-nu, &x, &xt_r.transpose(), 1.0);
        out.push(df);
    }
    Ok(out)
}
