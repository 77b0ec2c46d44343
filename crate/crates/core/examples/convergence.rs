//! Boosting with shrinking step lengths approaches the forward-stagewise
//! path; prints the sup-distance between the two for each nu.

use stagewise::lab::{gen_haar, run_convergence, HaarSpec};

fn main() -> stagewise::Result<()> {
    let d = gen_haar(&HaarSpec { n: 20, ..HaarSpec::default() })?;
    let report = run_convergence("convergence", &d, &[0.5, 0.1, 0.02, 0.004])?;
    let table = report.table("convergence").expect("convergence table");
    println!("      nu  iterations  distance");
    for row in &table.rows {
        println!("{:>8}  {:>10}  {:.5}", row[0], row[1], row[4]);
    }
    println!("decreasing: {:?}", report.flag("distance_decreasing"));
    Ok(())
}
