//! The log-coordinate map and the integrals it turns into 1-D quadratures:
//! weighted mass, L¹₂ norm, and the conditions I₁ and I₂.

use std::f64::consts::E;

use cdh::transforms::{
    condition_i1, condition_i2, l12_norm, to_log_coords, uniform_grid, weighted_mass, weighted_mass_radial,
    InitialDatum,
};
use cdh::{Dimension, Result};

fn main() -> Result<()> {
    let d3 = Dimension::THREE;
    let annulus = InitialDatum::annulus_indicator(1.0, E, 1.0, d3)?;
    let v0 = to_log_coords(&annulus, uniform_grid(-0.5, 1.5, 9))?;
    for (y, v) in v0.grid().iter().zip(v0.values()) {
        println!("y = {y:>5.2}  v₀ = {v}");
    }

    let m = weighted_mass(&annulus);
    let m_radial = weighted_mass_radial(&annulus, 1e-6, 1e6);
    println!("M = {:?} (log route), {:?} (radial route)", m.value(), m_radial.value());
    println!("‖u₀‖_L¹₂ = {:?}", l12_norm(&annulus).value());

    let step = InitialDatum::step_to_k(1.0, E, 4.0, d3)?;
    println!("step_to_K: M infinite = {}, I₁ = {:?}", weighted_mass(&step).is_infinite(), condition_i1(&step, 1.0).value());
    let smooth = InitialDatum::smooth_erfc_like(1.0, 0.0, d3)?;
    println!("smooth_erfc_like: I₂ = {:?}", condition_i2(&smooth).value());
    println!("annulus (jumps): I₂ infinite = {}", condition_i2(&annulus).is_infinite());
    Ok(())
}
