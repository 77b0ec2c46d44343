//! LAR, lasso and forward-stagewise paths on one design, their breakpoints
//! and whether they coincide.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use stagewise::numcore::{standardize, Dataset};
use stagewise::path::{coefficients_at, is_monotone, lars_path, paths_equal, PathVariant};

fn main() -> stagewise::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let n = 40;
    let x = DMatrix::from_fn(n, 5, |_, _| rng.sample::<f64, _>(StandardNormal));
    let beta = DVector::from_vec(vec![3.0, -2.0, 0.0, 1.0, 0.0]);
    let y = &x * beta + DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let sd = standardize(&Dataset::from_matrix(x, y)?)?;

    let variants = [PathVariant::Lar, PathVariant::Lasso, PathVariant::ForwardStagewise];
    let mut paths = Vec::new();
    for v in variants {
        let path = lars_path(&sd, v)?;
        println!("{} ({} steps, monotone = {})", v.name(), path.steps(), is_monotone(&path));
        for (k, seg) in path.segments().iter().enumerate() {
            println!(
                "  k={:<2} arc={:>7.4} gamma={:.4} active={:?} end={:?}",
                k + 1,
                seg.arc_end,
                seg.gamma,
                seg.active_set,
                seg.end
            );
        }
        paths.push(path);
    }

    let half = paths[1].total_arc_length() / 2.0;
    let mid: Vec<String> = coefficients_at(&paths[1], half)?.iter().map(|b| format!("{b:.4}")).collect();
    println!("\nlasso at half arc length: [{}]", mid.join(", "));
    println!("lasso = LAR: {}", paths_equal(&paths[1], &paths[0], 1e-6));
    println!("lasso = stagewise: {}", paths_equal(&paths[1], &paths[2], 1e-6));
    Ok(())
}
