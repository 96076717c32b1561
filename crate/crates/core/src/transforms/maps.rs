use crate::error::{Error, Result};
use crate::profiles::Dimension;

use super::datum::{InitialDatum, LineDatum};
use super::fields::{LineField, RadialField};

/// `v₀(y) = u₀(e^y)` sampled on `grid`, with the family's tails.
pub fn to_log_coords(u0: &InitialDatum, grid: Vec<f64>) -> Result<LineField> {
    LineField::from_fn(grid, 0.0, u0.tails(), |y| u0.value(y))
}

/// `v(y, t) = u(e^{y - (N-2)t}, t)`: each radius maps to
/// `y = log r + (N-2)t`, values unchanged.
pub fn field_to_log_coords(u: &RadialField) -> Result<LineField> {
    let shift = u.dim().drift() * u.time();
    let grid = u.radii().iter().map(|r| r.ln() + shift).collect();
    LineField::new(grid, u.values().to_vec(), u.time(), (u.origin_value(), u.outer_value()))
}

/// `u(r, t) = v(log r + (N-2)t, t)`; the origin value is the left tail.
pub fn from_log_coords(v: &LineField, dim: Dimension) -> Result<RadialField> {
    let shift = dim.drift() * v.time();
    let radii = v.grid().iter().map(|y| (y - shift).exp()).collect();
    RadialField::new(
        radii,
        v.values().to_vec(),
        v.time(),
        dim,
        v.tail_left(),
        v.tail_right(),
    )
}

fn inversion_scale(dim: Dimension) -> Result<f64> {
    if dim.n() == 2 {
        return Err(Error::Unsupported(
            "the inversion map degenerates in dimension N = 2".into(),
        ));
    }
    Ok(dim.drift() / 2.0)
}

/// `w(z, t) = e^{t-z}·u(e^{-2z/(N-2)}, t)` with `z = -(N-2)/2·log r`.
///
/// For `N ≥ 3` this swaps the origin and infinity. The weight `e^{-z}`
/// blows up on one side, so the limit of `u` there must vanish; both tails
/// of `w` are then declared zero.
pub fn inversion_transform(u: &RadialField) -> Result<LineField> {
    let a = inversion_scale(u.dim())?;
    let t = u.time();
    let blowup_limit = if a > 0.0 { u.outer_value() } else { u.origin_value() };
    if blowup_limit != 0.0 {
        return Err(Error::Unsupported(
            "inversion needs u to vanish where e^{-z} is unbounded".into(),
        ));
    }
    let mut pairs: Vec<(f64, f64)> = u
        .radii()
        .iter()
        .zip(u.values())
        .map(|(r, v)| {
            let z = -a * r.ln();
            (z, (t - z).exp() * v)
        })
        .collect();
    if a > 0.0 {
        pairs.reverse();
    }
    let (grid, values) = pairs.into_iter().unzip();
    LineField::new(grid, values, t, (0.0, 0.0))
}

/// Inverse of [`inversion_transform`]: `u(r, t) = e^{z-t}·w(z, t)` at
/// `r = e^{-z/a}`, `a = (N-2)/2`. The limits of `u` at the origin and at
/// infinity are not recoverable from `w` and are supplied by the caller.
pub fn inversion_inverse(w: &LineField, dim: Dimension, limits: (f64, f64)) -> Result<RadialField> {
    let a = inversion_scale(dim)?;
    let t = w.time();
    let mut pairs: Vec<(f64, f64)> = w
        .grid()
        .iter()
        .zip(w.values())
        .map(|(z, v)| ((-z / a).exp(), (z - t).exp() * v))
        .collect();
    if a > 0.0 {
        pairs.reverse();
    }
    let (radii, values) = pairs.into_iter().unzip();
    RadialField::new(radii, values, t, dim, limits.0, limits.1)
}

/// Dimension self-map `ū(r̄, t) = u(r̄·e^{(N̄-N)t}, t)`: a solution in
/// dimension `N` becomes a solution in dimension `N̄`.
pub fn self_map(u: &RadialField, target: Dimension) -> Result<RadialField> {
    let factor = ((target.drift() - u.dim().drift()) * u.time()).exp();
    let radii = u.radii().iter().map(|r| r / factor).collect();
    RadialField::new(
        radii,
        u.values().to_vec(),
        u.time(),
        target,
        u.origin_value(),
        u.outer_value(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::{gaussian_kernel, profile_f};
    use crate::transforms::fields::uniform_grid;
    use std::f64::consts::E;

    const D3: Dimension = Dimension::THREE;

    fn radial_f(t: f64, dim: Dimension) -> RadialField {
        let radii: Vec<f64> = uniform_grid(-8.0, 4.0, 301).into_iter().map(f64::exp).collect();
        RadialField::from_fn(radii, t, dim, (0.0, 0.0), |r| profile_f(r, t, dim).unwrap()).unwrap()
    }

    #[test]
    fn annulus_indicator_becomes_unit_interval() {
        let u0 = InitialDatum::annulus_indicator(1.0, E, 1.0, D3).unwrap();
        let v0 = to_log_coords(&u0, uniform_grid(-1.0, 2.0, 31)).unwrap();
        for (y, v) in v0.grid().iter().zip(v0.values()) {
            let expected = if (0.0..=1.0).contains(y) { 1.0 } else { 0.0 };
            assert_eq!(*v, expected, "y = {y}");
        }
    }

    #[test]
    fn step_tails() {
        let u0 = InitialDatum::step_to_k(2.0, 1.0, 3.0, D3).unwrap();
        let v0 = to_log_coords(&u0, uniform_grid(-1.0, 1.0, 11)).unwrap();
        assert_eq!(v0.tails(), (2.0, 0.0));
    }

    #[test]
    fn log_round_trip() {
        let u = radial_f(1.7, D3);
        let back = from_log_coords(&field_to_log_coords(&u).unwrap(), D3).unwrap();
        for (a, b) in u.radii().iter().zip(back.radii()) {
            assert!((a - b).abs() <= 1e-14 * a);
        }
        assert_eq!(u.values(), back.values());
    }

    #[test]
    fn gaussian_line_field_maps_to_profile_f() {
        let t = 2.0;
        let v = LineField::from_fn(uniform_grid(-10.0, 10.0, 81), t, (0.0, 0.0), |y| {
            gaussian_kernel(y, t).unwrap()
        })
        .unwrap();
        let u = from_log_coords(&v, D3).unwrap();
        for (r, val) in u.radii().iter().zip(u.values()) {
            assert!((val - profile_f(*r, t, D3).unwrap()).abs() < 1e-15);
        }
        assert_eq!(u.origin_value(), 0.0);
    }

    #[test]
    fn constant_fields_and_origin_value() {
        let v = LineField::from_fn(uniform_grid(-3.0, 3.0, 7), 0.5, (4.0, 4.0), |_| 4.0).unwrap();
        let u = from_log_coords(&v, D3).unwrap();
        assert!(u.values().iter().all(|&x| x == 4.0));
        assert_eq!(u.origin_value(), 4.0);
    }

    #[test]
    fn inversion_round_trip_and_zero() {
        for n in [1, 3, 5] {
            let dim = Dimension::new(n).unwrap();
            let u = radial_f(0.8, dim);
            let w = inversion_transform(&u).unwrap();
            let back = inversion_inverse(&w, dim, (0.0, 0.0)).unwrap();
            for ((a, b), (x, y)) in u.radii().iter().zip(back.radii()).zip(u.values().iter().zip(back.values())) {
                assert!((a - b).abs() <= 1e-12 * a);
                assert!((x - y).abs() <= 1e-12 * x.abs().max(1e-300));
            }
        }
        let zero = RadialField::from_fn(vec![0.5, 1.0, 2.0], 1.0, D3, (0.0, 0.0), |_| 0.0).unwrap();
        assert!(inversion_transform(&zero).unwrap().values().iter().all(|&w| w == 0.0));
        let two = Dimension::new(2).unwrap();
        let u2 = RadialField::from_fn(vec![0.5, 1.0], 1.0, two, (0.0, 0.0), |_| 1.0).unwrap();
        assert!(matches!(inversion_transform(&u2), Err(Error::Unsupported(_))));
    }

    #[test]
    fn inversion_of_f_is_the_heat_kernel_in_four_dimensions() {
        let dim = Dimension::new(4).unwrap();
        let t = 1.3;
        let w = inversion_transform(&radial_f(t, dim)).unwrap();
        for (z, val) in w.grid().iter().zip(w.values()) {
            let g = gaussian_kernel(*z, t).unwrap();
            assert!((val - g).abs() < 1e-13 * (1.0 + g), "z = {z}");
        }
    }

    #[test]
    fn profile_f_in_z_peaks_at_z0() {
        // F as a function of z = -(N-2)/2·log r is maximal at (N-2)²t/2
        let t = 3.0;
        let a = 0.5;
        let fz = |z: f64| profile_f((-z / a).exp(), t, D3).unwrap();
        let z0 = 2.0 * a * a * t;
        let h = 1e-3;
        assert!(fz(z0) > fz(z0 - h) && fz(z0) > fz(z0 + h));
        assert!((fz(z0) - 1.0 / (4.0 * std::f64::consts::PI * t).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn self_map_identities() {
        let u = radial_f(1.0, D3);
        assert_eq!(self_map(&u, D3).unwrap(), u);
        let u0 = RadialField::from_fn(vec![0.5, 1.0, 2.0], 0.0, D3, (0.0, 0.0), |r| r).unwrap();
        let mapped = self_map(&u0, Dimension::new(7).unwrap()).unwrap();
        assert_eq!(mapped.radii(), u0.radii());
    }

    #[test]
    fn self_map_sends_f3_to_f4() {
        let d4 = Dimension::new(4).unwrap();
        let mapped = self_map(&radial_f(1.0, D3), d4).unwrap();
        for (r, v) in mapped.radii().iter().zip(mapped.values()) {
            assert!((v - profile_f(*r, 1.0, d4).unwrap()).abs() < 1e-12);
        }
    }
}
