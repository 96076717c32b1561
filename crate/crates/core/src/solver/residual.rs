use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::profiles::{azimuth, Dimension};

/// A solution candidate to be tested against the equation.
pub enum Sampler<'a> {
    /// `u(r, t)` for radial functions in any dimension.
    Radial(&'a (dyn Fn(f64, f64) -> f64 + Sync)),
    /// `u(x, t)` for `x ∈ ℝ³`.
    Cartesian(&'a (dyn Fn([f64; 3], f64) -> f64 + Sync)),
}

fn check_time(t: f64, h: f64) -> Result<()> {
    if t < 10.0 * h {
        return Err(Error::domain(format!("t = {t} is within ten time steps of t = 0")));
    }
    Ok(())
}

/// `|x|^{-2}u_t - Δu` by central differences with step `h` in space and
/// time.
///
/// Radial mode uses `Δu = u_rr + (N-1)/r·u_r` at `r = point[0]`; Cartesian
/// mode (`N = 3`) uses the seven-point Laplacian and additionally keeps the
/// stencil off the axis `x₁ = x₂ = 0` and off the half-plane `θ = 0 ≡ 2π`
/// where the azimuth jumps.
pub fn pde_residual(sampler: Sampler<'_>, point: &[f64], t: f64, dim: Dimension, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::domain("step must be positive"));
    }
    check_time(t, h)?;
    match sampler {
        Sampler::Radial(u) => {
            let r = *point
                .first()
                .ok_or_else(|| Error::domain("radial mode needs a radius"))?;
            if r < 10.0 * h {
                return Err(Error::domain(format!("r = {r} is within 10h of the origin")));
            }
            let u_t = (u(r, t + h) - u(r, t - h)) / (2.0 * h);
            let c = u(r, t);
            let up = u(r + h, t);
            let down = u(r - h, t);
            let u_rr = (up - 2.0 * c + down) / (h * h);
            let u_r = (up - down) / (2.0 * h);
            let n = dim.n() as f64;
            Ok(u_t / (r * r) - (u_rr + (n - 1.0) / r * u_r))
        }
        Sampler::Cartesian(u) => {
            if dim.n() != 3 {
                return Err(Error::Unsupported("Cartesian residual is implemented for N = 3".into()));
            }
            if point.len() != 3 {
                return Err(Error::domain("Cartesian mode needs a point in R^3"));
            }
            let x = [point[0], point[1], point[2]];
            let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
            let rho = (x[0] * x[0] + x[1] * x[1]).sqrt();
            if r2.sqrt() < 10.0 * h || rho < 10.0 * h {
                return Err(Error::domain("point is within 10h of the origin or the axis"));
            }
            let theta = azimuth(x);
            let margin = 10.0 * h / rho;
            if theta < margin || theta > TAU - margin {
                return Err(Error::domain(format!("stencil at θ = {theta} crosses the angular cut")));
            }
            let u_t = (u(x, t + h) - u(x, t - h)) / (2.0 * h);
            let c = u(x, t);
            let mut lap = -6.0 * c;
            for i in 0..3 {
                let mut p = x;
                p[i] += h;
                lap += u(p, t);
                p[i] -= 2.0 * h;
                lap += u(p, t);
            }
            Ok(u_t / r2 - lap / (h * h))
        }
    }
}

/// `w_t - (a·w_zz + b·w_z + c·w)` by central differences, for checking
/// one-dimensional reductions of the equation.
pub fn line_residual(
    w: &dyn Fn(f64, f64) -> f64,
    z: f64,
    t: f64,
    h: f64,
    coefficients: (f64, f64, f64),
) -> Result<f64> {
    check_time(t, h)?;
    let (a, b, c) = coefficients;
    let w_t = (w(z, t + h) - w(z, t - h)) / (2.0 * h);
    let mid = w(z, t);
    let up = w(z + h, t);
    let down = w(z - h, t);
    let w_zz = (up - 2.0 * mid + down) / (h * h);
    let w_z = (up - down) / (2.0 * h);
    Ok(w_t - (a * w_zz + b * w_z + c * mid))
}

/// Coefficients `(a², 0, 1 - a²)` of the equation solved by the inversion
/// transform `w`, with `a = (N-2)/2`; for `N = 4` it is the heat equation.
pub fn inversion_coefficients(dim: Dimension) -> (f64, f64, f64) {
    let a = dim.drift() / 2.0;
    (a * a, 0.0, 1.0 - a * a)
}
