//! L¹₂ contraction of the positive part and the comparison principle.

use std::f64::consts::E;

use cdh::analysis::acceptance::{contraction_times, pair_policy};
use cdh::analysis::{comparison_check, contraction_check};
use cdh::solver::kernel_trajectory;
use cdh::transforms::InitialDatum;
use cdh::{Dimension, Result};

fn main() -> Result<()> {
    let d3 = Dimension::THREE;
    let a = InitialDatum::annulus_indicator(1.0, E, 1.0, d3)?;
    let b = InitialDatum::gaussian_bump(0.8, 0.3, 1.2, d3)?;
    let times = contraction_times(d3);
    let policy = pair_policy(&a, &b, 4096);
    let (ta, tb) = (kernel_trajectory(&a, &times, &policy)?, kernel_trajectory(&b, &times, &policy)?);

    let c = contraction_check(&ta, &tb)?;
    for (t, v) in c.times.iter().zip(&c.values) {
        println!("t = {t:<5} ∫|x|⁻²[u₁ - u₂]₊ = {v:.10}");
    }
    println!("nonincreasing: {} (largest step {:.2e})", c.nonincreasing, c.max_increase);

    let upper = InitialDatum::annulus_indicator(0.8, 3.0, 1.5, d3)?;
    let policy = pair_policy(&a, &upper, 4096);
    let report = comparison_check(&kernel_trajectory(&a, &times, &policy)?, &kernel_trajectory(&upper, &times, &policy)?)?;
    println!("ordered: {} (max u₁ - u₂ = {:.2e})", report.ordered, report.max_violation);
    Ok(())
}
