//! Solving the radial problem through the 1-D heat kernel, with certified
//! error bounds, and the trajectory API.

use std::f64::consts::E;

use cdh::profiles::profile_f;
use cdh::solver::{kernel_trajectory, solve_radial, GridPolicy, HeatFlow};
use cdh::transforms::{weighted_mass, InitialDatum};
use cdh::{Dimension, Result};

fn main() -> Result<()> {
    let d3 = Dimension::THREE;
    let u0 = InitialDatum::annulus_indicator(1.0, E, 1.0, d3)?;
    let mass = weighted_mass(&u0).value().unwrap() / d3.sphere_area();

    let radii: Vec<f64> = [0.01, 0.05, 0.1, 0.3, 1.0, 3.0].to_vec();
    for t in [0.5, 5.0, 50.0] {
        let u = solve_radial(&u0, t, radii.clone())?;
        print!("t = {t:>4}:");
        for (r, v) in u.radii().iter().zip(u.values()) {
            print!("  u({r}) = {v:.3e} [{:.3e}]", mass * profile_f(*r, t, d3)?);
        }
        println!();
    }

    let flow = HeatFlow::new(&u0)?;
    let (v, bound) = flow.eval(0.5, 2.0);
    println!("v(0.5, 2) = {v:.15} ± {bound:.1e}");

    let traj = kernel_trajectory(&u0, &[0.1, 1.0, 10.0], &GridPolicy::around(&u0, 12.0, 1024))?;
    println!(
        "trajectory: {} snapshots, values in [{:.2e}, {:.4}], error bound {:.1e}",
        traj.len(),
        traj.min_value(),
        traj.max_value(),
        traj.error_bound
    );
    Ok(())
}
