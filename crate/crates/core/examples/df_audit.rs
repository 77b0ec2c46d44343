//! Trace df of the limiting stagewise operator against the exact df k + 1
//! at each breakpoint.
//!
//! Usage: `cargo run --example df_audit [data.csv response]`; without
//! arguments the simulated Haar data is used.

use stagewise::dof::DfTable;
use stagewise::lab::{gen_haar, load_csv, HaarSpec};
use stagewise::numcore::standardize;
use stagewise::path::{lars_path, PathVariant};

fn main() -> stagewise::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let d = match args.as_slice() {
        [file, response] => load_csv(file, response)?,
        _ => gen_haar(&HaarSpec::default())?,
    }
    .drop_constant_columns()?;
    let sd = standardize(&d)?;
    let path = lars_path(&sd, PathVariant::ForwardStagewise)?;
    let table = DfTable::from_path("audit", &sd, &path, true)?;

    println!("  k   gamma  df_trace  df_exact   gap");
    for (row, seg) in table.rows.iter().zip(path.segments()) {
        println!(
            "{:>3}  {:.4}  {:>8.4}  {:>8}  {:.4}",
            row.k,
            seg.gamma,
            row.df_trace,
            row.df_active,
            row.df_active as f64 - row.df_trace
        );
    }
    Ok(())
}
