//! The prostate cancer example: trace(B_1) under both column scalings and
//! the full df/profile report.
//!
//! Needs the public 97-row `prostate.data` file (tab separated, with a
//! `train` column), found via `STAGEWISE_DATA_DIR` or the first argument.

use std::path::PathBuf;

use stagewise::lab::{find_prostate, load_prostate, run_example_suite};
use stagewise::numcore::{standardize_with, Scaling};
use stagewise::path::{lars_path, limiting_hat, PathVariant};

fn main() -> stagewise::Result<()> {
    let dir = std::env::args().nth(1).map(PathBuf::from);
    let d = load_prostate(find_prostate(dir.as_deref())?)?;
    println!("training rows: {}, predictors: {}", d.n(), d.p());

    for scaling in [Scaling::UnitNorm, Scaling::UnitVariance] {
        let sd = standardize_with(&d, scaling)?;
        let path = lars_path(&sd, PathVariant::ForwardStagewise)?;
        let b1 = limiting_hat(&sd, &path, 1, true)?;
        println!("{scaling:?}: trace(B_1) = {:.4} (exact df 2)", b1.trace());
    }

    let report = run_example_suite("prostate", &d)?;
    for (name, value) in &report.flags {
        println!("{name}: {value}");
    }
    for file in report.write(&PathBuf::from("out/prostate"))? {
        println!("wrote {}", file.display());
    }
    Ok(())
}
