//! Data generation and loading, experiment runners and their reports.

mod experiments;
mod haar;
mod io;
mod report;

pub use experiments::{
    run_convergence, run_df_comparison, run_example_suite, run_profiles, CONVERGENCE_GRID,
    CONVERGENCE_MAX_ITER, DEFAULT_NUS, PATH_EQUAL_TOL, PROFILE_GRID,
};
pub use haar::{gen_haar, gen_haar_at, haar_design, BetaSpec, HaarSpec, DEFAULT_HAAR_SEED};
pub use io::{
    default_data_dir, find_prostate, load_csv, load_csv_with, load_prostate, parse_csv,
    CsvOptions, Split, DATA_DIR_ENV, PROSTATE_FILES,
};
pub use report::{dataset_hash, format_number, round_sig, ExperimentReport, Table, SIGNIFICANT_DIGITS};
