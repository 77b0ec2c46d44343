//! Dense linear algebra and data preparation shared by the fitting routines.

mod data;
mod linalg;

pub use data::{standardize, standardize_with, Dataset, Scaling, StandardizedDataset, CONSTANT_COLUMN_TOL};
pub use linalg::{
    hat_matrix, least_squares, mean_projection, residual_correlations, solve_gram, Provenance,
    SmootherMatrix, RANK_TOL,
};
