use std::io::{self, Write};

use nalgebra::DMatrix;

use crate::scalar::Real;

/// Writes the nonzero entries of `matrix` as `row col value` lines
/// (zero-based indices, values in round-trip exponent form).
pub fn write_triplets<T: Real, W: Write>(matrix: &DMatrix<T>, mut out: W) -> io::Result<()> {
    writeln!(out, "# {} {}", matrix.nrows(), matrix.ncols())?;
    for i in 0..matrix.nrows() {
        for j in 0..matrix.ncols() {
            let v = matrix[(i, j)];
            if !v.is_zero() {
                writeln!(out, "{i} {j} {v:e}")?;
            }
        }
    }
    Ok(())
}
