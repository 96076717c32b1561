//! The inversion transform and the dimension self-map applied to F.

use cdh::profiles::{gaussian_kernel, profile_f};
use cdh::transforms::{inversion_transform, self_map, uniform_grid, RadialField};
use cdh::{Dimension, Result};

fn radial_f(t: f64, dim: Dimension) -> Result<RadialField> {
    let radii = uniform_grid(-6.0, 3.0, 181).into_iter().map(f64::exp).collect();
    RadialField::from_fn(radii, t, dim, (0.0, 0.0), |r| profile_f(r, t, dim).unwrap())
}

fn main() -> Result<()> {
    let d4 = Dimension::new(4)?;
    let t = 1.0;
    // In N = 4 the inversion of F is the heat kernel in z.
    let w = inversion_transform(&radial_f(t, d4)?)?;
    let worst = w
        .grid()
        .iter()
        .zip(w.values())
        .map(|(z, v)| (v - gaussian_kernel(*z, t).unwrap()).abs())
        .fold(0.0, f64::max);
    println!("N = 4: max |w - G(z, t)| = {worst:.2e}");

    let u3 = radial_f(t, Dimension::THREE)?;
    for target in [4, 5, 7] {
        let dim = Dimension::new(target)?;
        let mapped = self_map(&u3, dim)?;
        let err = mapped
            .radii()
            .iter()
            .zip(mapped.values())
            .map(|(r, v)| (v - profile_f(*r, t, dim).unwrap()).abs())
            .fold(0.0, f64::max);
        println!("F in N = 3 mapped to N = {target}: max error {err:.2e}");
    }
    Ok(())
}
