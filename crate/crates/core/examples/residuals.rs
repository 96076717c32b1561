//! Finite-difference residuals of the exact solutions: second order in h.

use cdh::profiles::{profile_e, profile_f, profile_fn_cartesian, AngularRange};
use cdh::solver::{pde_residual, Sampler};
use cdh::{Dimension, Result};

fn main() -> Result<()> {
    let d3 = Dimension::THREE;
    let range = AngularRange::default();
    let f = |r: f64, t: f64| profile_f(r, t, d3).unwrap();
    let e = |r: f64, t: f64| profile_e(r, t, d3, 2.0).unwrap();
    let fnc = |x: [f64; 3], t: f64| profile_fn_cartesian(x, t, &range).unwrap();

    for h in [2e-2, 1e-2, 5e-3, 2.5e-3] {
        let rf = pde_residual(Sampler::Radial(&f), &[0.8], 1.0, d3, h)?;
        let re = pde_residual(Sampler::Radial(&e), &[0.8], 1.0, d3, h)?;
        let rn = pde_residual(Sampler::Cartesian(&fnc), &[-0.4, 0.5, 0.3], 1.0, d3, h)?;
        println!("h = {h:<7} F: {rf:>11.3e}  E: {re:>11.3e}  θF: {rn:>11.3e}");
    }

    let near_cut = pde_residual(Sampler::Cartesian(&fnc), &[0.6, 1e-3, 0.2], 1.0, d3, 1e-2);
    println!("stencil across the θ = 0 cut: {}", near_cut.unwrap_err());
    Ok(())
}
