//! Data vanishing near the origin become positive everywhere except at the
//! origin itself, where the solution stays zero.

use std::f64::consts::E;

use cdh::analysis::positivity_check;
use cdh::transforms::InitialDatum;
use cdh::{Dimension, Result};

fn main() -> Result<()> {
    let u0 = InitialDatum::annulus_indicator(1.0, E, 1.0, Dimension::THREE)?;
    let report = positivity_check(&u0, 1.0, &[0.1, 1.0, 10.0])?;
    for row in &report.rows {
        println!(
            "t = {:<5} min u = {:.3e}  u(1/2) = {:.3e}  u(0) = {}  monotone toward 0: {}",
            row.t, row.min_value, row.inside_value, row.origin_value, row.monotone_to_origin
        );
    }
    println!("passed: {}", report.passed);
    Ok(())
}
