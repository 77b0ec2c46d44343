//! Componentwise L2-boosting on the simulated Haar data, with both update
//! rules and the trace df of the coefficient-step smoother.

use stagewise::boost::{boost_df_curve, l2boost, BoostConfig, UpdateRule};
use stagewise::lab::{gen_haar, HaarSpec};
use stagewise::numcore::standardize;

fn main() -> stagewise::Result<()> {
    let d = gen_haar(&HaarSpec::default())?.drop_constant_columns()?;
    let sd = standardize(&d)?;

    for rule in [UpdateRule::CoefficientStep, UpdateRule::SignStep] {
        let trace = l2boost(&sd, &BoostConfig::new(0.05, rule, 400))?;
        let rss = (sd.yc() - trace.fitted()).norm_squared();
        let nonzero = trace.beta().iter().filter(|b| **b != 0.0).count();
        println!(
            "{rule:?}: {} iterations, arc length {:.3}, rss {:.3}, {nonzero} nonzero",
            trace.iterations(),
            trace.total_arc_length(),
            rss
        );
    }

    let trace = l2boost(&sd, &BoostConfig::new(0.05, UpdateRule::CoefficientStep, 400))?;
    let df = boost_df_curve(&sd, &trace)?;
    println!("\n   m   df(m)  active");
    for m in [1, 5, 10, 25, 50, 100, 200, 400] {
        let active = trace.coefficients(m)?.iter().filter(|b| **b != 0.0).count();
        println!("{m:>4}  {:>6.3}  {active:>6}", df[m]);
    }
    Ok(())
}
