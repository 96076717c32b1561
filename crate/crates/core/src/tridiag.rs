//! Thomas algorithm for tridiagonal systems.

use crate::error::{Error, Result};

/// Solves `lower[i]·x[i-1] + diag[i]·x[i] + upper[i]·x[i+1] = rhs[i]` in
/// place of `rhs`. `lower[0]` and `upper[n-1]` are ignored.
///
/// No pivoting; callers supply diagonally dominant systems.
pub fn solve(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &mut [f64]) -> Result<()> {
    let n = diag.len();
    if lower.len() != n || upper.len() != n || rhs.len() != n {
        return Err(Error::Solver("tridiagonal system with inconsistent lengths".into()));
    }
    if n == 0 {
        return Ok(());
    }
    let mut c = vec![0.0; n];
    let mut beta = diag[0];
    if beta == 0.0 {
        return Err(Error::Solver("zero pivot in tridiagonal solve".into()));
    }
    rhs[0] /= beta;
    for i in 1..n {
        c[i] = upper[i - 1] / beta;
        beta = diag[i] - lower[i] * c[i];
        if beta == 0.0 {
            return Err(Error::Solver("zero pivot in tridiagonal solve".into()));
        }
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / beta;
    }
    for i in (0..n - 1).rev() {
        let next = rhs[i + 1];
        rhs[i] -= c[i + 1] * next;
    }
    Ok(())
}
