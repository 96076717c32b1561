//! Dimension one: the origin disconnects the line and each half keeps its
//! own mass.

use std::f64::consts::E;

use cdh::analysis::two_branch_convergence_error;
use cdh::solver::solve_two_branch;
use cdh::transforms::{InitialDatum, TwoBranchDatum};
use cdh::{Dimension, Result};

fn main() -> Result<()> {
    let d1 = Dimension::ONE;
    let u0 = TwoBranchDatum::new(
        InitialDatum::annulus_indicator(1.0, E, 0.25, d1)?,
        InitialDatum::annulus_indicator(1.0, E, 0.75, d1)?,
    )?;
    let sol = solve_two_branch(&u0, 4.0, vec![0.1, 1.0, 10.0])?;
    for (x, v) in sol.samples() {
        println!("u({x:>5}, 4) = {v:.6}");
    }
    let s = two_branch_convergence_error(&u0, 0.25, &[1.0, 10.0, 100.0, 1000.0], 0.5)?;
    for (t, e) in &s.samples {
        println!("t = {t:>6}  t^½ sup|u - F₁| = {e:.4e}");
    }
    Ok(())
}
