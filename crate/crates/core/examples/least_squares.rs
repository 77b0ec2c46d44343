//! The numerical core: standardization, QR least squares and hat matrices.

use nalgebra::{DMatrix, DVector};
use stagewise::numcore::{hat_matrix, least_squares, standardize, Dataset};

fn list(v: &DVector<f64>) -> String {
    v.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>().join(", ")
}

fn main() -> stagewise::Result<()> {
    let x = DMatrix::from_row_slice(6, 2, &[1.0, 2.0, 2.0, 1.0, 3.0, 5.0, 4.0, 3.0, 5.0, 8.0, 6.0, 4.0]);
    let y = DVector::from_vec(vec![3.1, 2.9, 8.2, 6.8, 13.1, 9.9]);
    let d = Dataset::from_matrix(x, y)?;
    let sd = standardize(&d)?;

    let beta = least_squares(sd.xs(), sd.yc())?;
    let (intercept, raw) = sd.unstandardize(&beta);
    println!("standardized coefficients: {}", list(&beta));
    println!("original scale: intercept {intercept:.4}, slopes {}", list(&raw));

    let h = hat_matrix(sd.xs())?;
    println!("trace of the hat matrix: {:.6}", h.trace());
    println!("fitted values: {}", list(&sd.fitted(&beta)));
    Ok(())
}
