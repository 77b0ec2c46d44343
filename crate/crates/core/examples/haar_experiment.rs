//! The simulated Haar experiment: df comparison and stagewise profiles,
//! written as CSV tables plus a JSON envelope.
//!
//! Usage: `cargo run --example haar_experiment [out_dir] [seed]`

use std::path::PathBuf;

use stagewise::lab::{gen_haar, run_example_suite, HaarSpec};

fn main() -> stagewise::Result<()> {
    let mut args = std::env::args().skip(1);
    let out = PathBuf::from(args.next().unwrap_or_else(|| "out/haar".into()));
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(HaarSpec::default().seed);
    let spec = HaarSpec { seed, ..HaarSpec::default() };

    let report = run_example_suite("haar", &gen_haar(&spec)?)?;
    for (name, value) in &report.flags {
        println!("{name}: {value}");
    }
    for (name, value) in &report.scalars {
        println!("{name}: {value:.6}");
    }
    for file in report.write(&out)? {
        println!("wrote {}", file.display());
    }
    Ok(())
}
