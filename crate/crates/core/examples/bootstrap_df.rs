//! Parametric bootstrap df of LAR at its first few steps on the Haar design,
//! next to the trace formula.

use stagewise::dof::{bootstrap_model_df, BootstrapConfig, PathModel};
use stagewise::lab::{gen_haar, HaarSpec};
use stagewise::numcore::standardize;
use stagewise::path::{lars_path, limiting_df_curve, PathVariant};

fn main() -> stagewise::Result<()> {
    let d = gen_haar(&HaarSpec::default())?;
    let model = PathModel { variant: PathVariant::Lar };
    // n = p + 1 leaves no residual df, so the noise scale is supplied.
    let cfg = BootstrapConfig { sigma: Some(1.0), reps: 1000, seed: 7 };
    let boot = bootstrap_model_df(&d, &model, 8, &cfg)?;

    let reduced = d.drop_constant_columns()?;
    let sd = standardize(&reduced)?;
    let trace = limiting_df_curve(&sd, &lars_path(&sd, PathVariant::Lar)?, true)?;

    println!("  k  bootstrap    se   trace  k+1");
    for k in 0..=8 {
        println!(
            "{k:>3}  {:>9.3}  {:.3}  {:>6.3}  {:>3}",
            boot[k].estimate,
            boot[k].std_error,
            trace[k],
            k + 1
        );
    }
    Ok(())
}
