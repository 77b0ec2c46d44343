use nalgebra::DVector;

use super::report::{check_rows, dataset_hash, ExperimentReport, Table};
use crate::boost::{l2boost_to_arc, BoostConfig, UpdateRule};
use crate::dof::DfTable;
use crate::error::{Error, Result};
use crate::numcore::{standardize, Dataset};
use crate::path::{coefficients_at, is_monotone, lars_path, paths_equal, PathVariant};

/// Tolerance used when comparing path variants in reports.
pub const PATH_EQUAL_TOL: f64 = 1e-6;

/// Number of evenly spaced arc-lengths added to the profile table.
pub const PROFILE_GRID: usize = 200;

/// Number of evenly spaced arc-lengths on which boosting and the limiting
/// path are compared.
pub const CONVERGENCE_GRID: usize = 2000;

/// Iteration cap for each boosting run in [`run_convergence`].
pub const CONVERGENCE_MAX_ITER: usize = 5_000_000;

/// Step lengths used by the convergence experiment when none are supplied.
pub const DEFAULT_NUS: [f64; 4] = [0.5, 0.1, 0.02, 0.004];

fn prepared(d: &Dataset) -> Result<(Dataset, crate::numcore::StandardizedDataset)> {
    let reduced = d.drop_constant_columns()?;
    let sd = standardize(&reduced)?;
    Ok((reduced, sd))
}

fn base_report(label: &str, d: &Dataset) -> ExperimentReport {
    let mut report = ExperimentReport::new(label);
    report.provenance.insert("dataset_hash".into(), dataset_hash(d));
    report.provenance.insert("n".into(), d.n().to_string());
    report.provenance.insert("p".into(), d.p().to_string());
    report
}

/// Trace df of the limiting operator against the exact df `k + 1` at every
/// breakpoint of the forward-stagewise path.
///
/// Constant columns are dropped first; their span is the intercept.
pub fn run_df_comparison(label: &str, d: &Dataset) -> Result<ExperimentReport> {
    let (reduced, sd) = prepared(d)?;
    let path = lars_path(&sd, PathVariant::ForwardStagewise)?;
    let table = DfTable::from_path(label, &sd, &path, true)?;

    let mut report = base_report(label, &reduced);
    report.provenance.insert("method".into(), "stagewise".into());
    report.provenance.insert("intercept".into(), "true".into());
    let mut t = Table::new(
        "df",
        ["k", "gamma", "active_size", "df_trace", "df_exact", "gap"]
            .map(String::from)
            .to_vec(),
    );
    let last = path.steps();
    let mut under_interior = true;
    let mut one_per_step = true;
    for (row, seg) in table.rows.iter().zip(path.segments()) {
        let exact = (row.k + 1) as f64;
        t.push(vec![
            row.k as f64,
            seg.gamma,
            seg.active_set.len() as f64,
            row.df_trace,
            exact,
            exact - row.df_trace,
        ]);
        if row.k < last && row.df_trace >= exact {
            under_interior = false;
        }
        if seg.active_set.len() != row.k || row.df_active != row.k + 1 {
            one_per_step = false;
        }
    }
    let dropped = path
        .segments()
        .iter()
        .any(|s| matches!(s.end, crate::path::SegmentEnd::Drop(_)));
    report.tables.push(t);
    report.flags.insert("underestimates_at_joins".into(), under_interior);
    report.flags.insert("one_variable_per_step".into(), one_per_step && !dropped);
    if let Some(first) = table.rows.first() {
        report.scalars.insert("df_trace_first".into(), first.df_trace);
    }
    if let Some(last_row) = table.rows.last() {
        report.scalars.insert("df_trace_last".into(), last_row.df_trace);
    }
    report.scalars.insert("steps".into(), path.steps() as f64);
    check_rows(&report)?;
    Ok(report)
}

/// Coefficient profiles of one variant at breakpoints plus an even grid,
/// with monotonicity and cross-variant agreement flags.
pub fn run_profiles(label: &str, d: &Dataset, variant: PathVariant) -> Result<ExperimentReport> {
    let (reduced, sd) = prepared(d)?;
    let path = lars_path(&sd, variant)?;
    let total = path.total_arc_length();

    let mut report = base_report(label, &reduced);
    report.provenance.insert("method".into(), variant.name().into());

    let mut columns = vec!["arc_length".to_string(), "breakpoint".to_string()];
    columns.extend(sd.names().iter().cloned());
    let mut profiles = Table::new("profiles", columns);
    let mut grid: Vec<(f64, bool)> = path.breakpoints().into_iter().map(|s| (s, true)).collect();
    if path.steps() > 1 {
        grid.extend((1..PROFILE_GRID).map(|i| (total * i as f64 / PROFILE_GRID as f64, false)));
    }
    grid.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)));
    grid.dedup_by(|a, b| a.0 == b.0);
    for (s, is_break) in grid {
        let beta = coefficients_at(&path, s)?;
        let mut row = vec![s, if is_break { 1.0 } else { 0.0 }];
        row.extend(beta.iter());
        profiles.push(row);
    }

    let mut breaks = Table::new(
        "breakpoints",
        ["k", "arc_length", "gamma", "active_size", "df_exact"]
            .map(String::from)
            .to_vec(),
    );
    for (k, seg) in path.segments().iter().enumerate() {
        let active = seg.beta_end.iter().filter(|b| **b != 0.0).count();
        breaks.push(vec![
            (k + 1) as f64,
            seg.arc_end,
            seg.gamma,
            seg.active_set.len() as f64,
            (active + 1) as f64,
        ]);
    }
    report.tables.push(profiles);
    report.tables.push(breaks);
    report.flags.insert("monotone".into(), is_monotone(&path));

    let lasso = lars_path(&sd, PathVariant::Lasso)?;
    let stagewise = lars_path(&sd, PathVariant::ForwardStagewise)?;
    let lar = lars_path(&sd, PathVariant::Lar)?;
    report.flags.insert(
        "paths_equal_lasso_stagewise".into(),
        paths_equal(&lasso, &stagewise, PATH_EQUAL_TOL),
    );
    report
        .flags
        .insert("paths_equal_lasso_lar".into(), paths_equal(&lasso, &lar, PATH_EQUAL_TOL));
    report.scalars.insert("total_arc_length".into(), total);
    check_rows(&report)?;
    Ok(report)
}

/// Distance between coefficient-step boosting and the forward-stagewise
/// path for each step length, both indexed by L1 arc-length.
///
/// The distance is `sup_s ||beta_boost(s) - beta_path(s)||_inf` over an even
/// grid plus the path breakpoints, up to the shorter of the two arc-lengths.
pub fn run_convergence(label: &str, d: &Dataset, nus: &[f64]) -> Result<ExperimentReport> {
    if nus.is_empty() {
        return Err(Error::InvalidConfig("no step lengths supplied".into()));
    }
    let (reduced, sd) = prepared(d)?;
    let path = lars_path(&sd, PathVariant::ForwardStagewise)?;
    let total = path.total_arc_length();

    let mut report = base_report(label, &reduced);
    report.provenance.insert(
        "nus".into(),
        nus.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","),
    );
    let mut t = Table::new(
        "convergence",
        ["nu", "iterations", "boost_arc_length", "path_arc_length", "distance"]
            .map(String::from)
            .to_vec(),
    );
    let mut distances = Vec::with_capacity(nus.len());
    for &nu in nus {
        let cfg = BoostConfig::new(nu, UpdateRule::CoefficientStep, CONVERGENCE_MAX_ITER);
        let trace = l2boost_to_arc(&sd, &cfg, total)?;
        let reach = total.min(trace.total_arc_length());
        let mut grid: Vec<f64> = (0..=CONVERGENCE_GRID)
            .map(|i| reach * i as f64 / CONVERGENCE_GRID as f64)
            .chain(path.breakpoints().into_iter().filter(|&s| s <= reach))
            .collect();
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        let boosted = trace.coefficients_at_arcs(&grid)?;
        let mut dist = 0.0f64;
        for (&s, b) in grid.iter().zip(&boosted) {
            let limit: DVector<f64> = coefficients_at(&path, s)?;
            dist = dist.max((b - limit).amax());
        }
        distances.push((nu, dist));
        t.push(vec![
            nu,
            trace.iterations() as f64,
            trace.total_arc_length(),
            total,
            dist,
        ]);
    }
    let mut sorted = distances.clone();
    sorted.sort_by(|a, b| b.0.total_cmp(&a.0));
    let decreasing = sorted.windows(2).all(|w| w[1].1 < w[0].1);
    report.tables.push(t);
    report.flags.insert("distance_decreasing".into(), decreasing);
    check_rows(&report)?;
    Ok(report)
}

/// df comparison plus forward-stagewise profiles for one dataset.
pub fn run_example_suite(label: &str, d: &Dataset) -> Result<ExperimentReport> {
    let mut report = run_df_comparison(label, d)?;
    report.absorb(run_profiles(label, d, PathVariant::ForwardStagewise)?);
    Ok(report)
}
