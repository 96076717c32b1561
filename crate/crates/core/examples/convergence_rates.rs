//! Scaled sup-norm error series and log-log rate fits for the three
//! convergence statements.

use std::f64::consts::E;

use cdh::analysis::{convergence_error, fit_rate, geometric_times, Target};
use cdh::transforms::InitialDatum;
use cdh::{Dimension, Result};

fn main() -> Result<()> {
    let d3 = Dimension::THREE;

    let annulus = InitialDatum::annulus_indicator(1.0, E, 1.0, d3)?;
    let s = convergence_error(&annulus, Target::F, &[1.0, 10.0, 100.0, 1000.0], 0.5)?;
    for (t, e) in &s.samples {
        println!("t = {t:>6}  t^½ sup|u - M F| = {e:.4e}");
    }
    println!("decreasing: {}, e(1000)/e(1) = {:.4}", s.is_strictly_decreasing(), s.final_ratio());

    let times = geometric_times(10.0, 1e4, 8);
    for (label, u0) in [
        ("step_to_K", InitialDatum::step_to_k(1.0, E, 4.0, d3)?),
        ("smooth_erfc_like", InitialDatum::smooth_erfc_like(1.0, 0.0, d3)?),
    ] {
        let fit = fit_rate(&convergence_error(&u0, Target::E, &times, 0.0)?)?;
        println!("{label:<17} sup|u - (K/2)E| ~ t^{:.3}  (r² = {:.6})", fit.exponent, fit.r_squared);
    }
    Ok(())
}
