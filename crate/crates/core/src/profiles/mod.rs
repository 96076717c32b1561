//! Closed-form solutions and asymptotic profiles.
//!
//! With `y = log r + (N-2)t` the two attracting profiles are
//!
//! ```text
//! F(r, t) = (4πt)^{-1/2} exp(-y² / 4t)          (F(0, t) = 0)
//! E(r, t) = erfc(y / 2√t)                        (E(0, t) = 2)
//! ```
//!
//! [`profile_e`] returns the scaled limit `(K/2)·E` directly, so its value at
//! the origin is the level `K`.

mod erfc;

pub use erfc::erfc;

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};

/// Spatial dimension `N ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dimension(u32);

impl Dimension {
    pub const ONE: Dimension = Dimension(1);
    pub const THREE: Dimension = Dimension(3);

    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("dimension must be at least 1"));
        }
        Ok(Dimension(n))
    }

    pub fn n(self) -> u32 {
        self.0
    }

    /// The drift `N - 2` of the log-coordinate map.
    pub fn drift(self) -> f64 {
        self.0 as f64 - 2.0
    }

    /// Dimensions handled by the solvers: `N = 1` or `N ≥ 3`.
    pub fn is_solver_dimension(self) -> bool {
        self.0 == 1 || self.0 >= 3
    }

    /// Area `ω₁ = 2π^{N/2} / Γ(N/2)` of the unit sphere in `ℝ^N`
    /// (`ω₁ = 2` for `N = 1`, counting the two endpoints).
    pub fn sphere_area(self) -> f64 {
        2.0 * PI.powf(self.0 as f64 / 2.0) / gamma_half_integer(self.0)
    }
}

impl std::fmt::Display for Dimension {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `Γ(n/2)` for a positive integer `n`, by the closed forms
/// `Γ(k) = (k-1)!` and `Γ(k + 1/2) = (2k)! √π / (4^k k!)`.
fn gamma_half_integer(n: u32) -> f64 {
    if n % 2 == 0 {
        (1..n / 2).map(|k| k as f64).product()
    } else {
        // Γ(1/2) = √π, Γ(k + 1/2) = (k - 1/2) Γ(k - 1/2)
        let k = (n - 1) / 2;
        (0..k).fold(PI.sqrt(), |acc, j| acc * (j as f64 + 0.5))
    }
}

/// `y = log r + (N-2)t`.
#[inline]
pub fn log_coordinate(r: f64, t: f64, dim: Dimension) -> f64 {
    r.ln() + dim.drift() * t
}

/// The one-dimensional heat kernel `G(y, t) = (4πt)^{-1/2} exp(-y²/4t)`.
pub fn gaussian_kernel(y: f64, t: f64) -> Result<f64> {
    check_time(t)?;
    Ok(gaussian_kernel_unchecked(y, t))
}

#[inline]
pub(crate) fn gaussian_kernel_unchecked(y: f64, t: f64) -> f64 {
    (-y * y / (4.0 * t)).exp() / (4.0 * PI * t).sqrt()
}

/// `(level/2)·erfc(y / 2√t)`: the step `level·H` evolved by the heat flow.
#[inline]
pub(crate) fn erfc_front(y: f64, t: f64, level: f64) -> f64 {
    0.5 * level * erfc(y / (2.0 * t.sqrt()))
}

fn check_time(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("time must be positive and finite, got {t}")))
    }
}

fn check_radius(r: f64) -> Result<()> {
    if r >= 0.0 && !r.is_nan() {
        Ok(())
    } else {
        Err(Error::domain(format!("radius must be nonnegative, got {r}")))
    }
}

/// Profile `F(r, t)`; zero at the origin.
pub fn profile_f(r: f64, t: f64, dim: Dimension) -> Result<f64> {
    check_time(t)?;
    check_radius(r)?;
    if r == 0.0 {
        return Ok(0.0);
    }
    Ok(gaussian_kernel_unchecked(log_coordinate(r, t, dim), t))
}

/// Scaled profile `(level/2)·E(r, t)`; equal to `level` at the origin and
/// nonincreasing in `r`.
pub fn profile_e(r: f64, t: f64, dim: Dimension, level: f64) -> Result<f64> {
    check_time(t)?;
    check_radius(r)?;
    if !(level >= 0.0 && level.is_finite()) {
        return Err(Error::domain(format!("level must be finite and nonnegative, got {level}")));
    }
    if r == 0.0 {
        return Ok(level);
    }
    Ok(erfc_front(log_coordinate(r, t, dim), t, level))
}

/// Range of the last spherical angle `θ` for the non-radial solution
/// `F_N = θ·F`, together with the exclusion margin around the branch cut
/// `θ = 0 ≡ 2π` used by residual checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularRange {
    theta_min: f64,
    theta_max: f64,
    cut_margin: f64,
}

impl Default for AngularRange {
    fn default() -> Self {
        AngularRange {
            theta_min: 0.0,
            theta_max: TAU,
            cut_margin: 1e-3,
        }
    }
}

impl AngularRange {
    pub fn new(theta_min: f64, theta_max: f64) -> Result<Self> {
        if !(0.0 <= theta_min && theta_min < theta_max && theta_max <= TAU) {
            return Err(Error::domain(format!(
                "angular range must satisfy 0 <= min < max <= 2π, got [{theta_min}, {theta_max}]"
            )));
        }
        Ok(AngularRange {
            theta_min,
            theta_max,
            ..Default::default()
        })
    }

    /// Single-angle range `[θ, θ]`; the radial limit of the counterexample.
    pub fn point(theta: f64) -> Result<Self> {
        if !(0.0..=TAU).contains(&theta) {
            return Err(Error::domain(format!("angle {theta} outside [0, 2π]")));
        }
        Ok(AngularRange {
            theta_min: theta,
            theta_max: theta,
            ..Default::default()
        })
    }

    pub fn with_cut_margin(mut self, margin: f64) -> Self {
        self.cut_margin = margin.max(0.0);
        self
    }

    pub fn min(&self) -> f64 {
        self.theta_min
    }

    pub fn max(&self) -> f64 {
        self.theta_max
    }

    pub fn width(&self) -> f64 {
        self.theta_max - self.theta_min
    }

    pub fn cut_margin(&self) -> f64 {
        self.cut_margin
    }

    pub fn contains(&self, theta: f64) -> bool {
        theta >= self.theta_min && theta <= self.theta_max
    }

    /// Inside the range and at least `cut_margin` away from `0` and `2π`.
    pub fn contains_away_from_cut(&self, theta: f64) -> bool {
        self.contains(theta) && theta >= self.cut_margin && theta <= TAU - self.cut_margin
    }
}

/// The non-radial solution `F_N = θ·F(r, t)`.
pub fn profile_fn(r: f64, theta: f64, t: f64, dim: Dimension, range: &AngularRange) -> Result<f64> {
    if !range.contains(theta) {
        return Err(Error::domain(format!(
            "angle {theta} outside [{}, {}]",
            range.min(),
            range.max()
        )));
    }
    Ok(theta * profile_f(r, t, dim)?)
}

/// Azimuth `θ = atan2(x₂, x₁) ∈ [0, 2π)` of a point in `ℝ³`, the last
/// spherical angle.
pub fn azimuth(x: [f64; 3]) -> f64 {
    let theta = x[1].atan2(x[0]);
    if theta < 0.0 {
        theta + TAU
    } else {
        theta
    }
}

/// `F_N = θ·F` at a Cartesian point of `ℝ³`.
pub fn profile_fn_cartesian(x: [f64; 3], t: f64, range: &AngularRange) -> Result<f64> {
    let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    profile_fn(r, azimuth(x), t, Dimension::THREE, range)
}

/// Two-branch profile in `N = 1`: `α·F` on `x ≤ 0`, `(1-α)·F` on `x > 0`,
/// with `F` evaluated at `|x|`.
pub fn profile_f1(x: f64, t: f64, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!("branch weight must lie in (0, 1), got {alpha}")));
    }
    let weight = if x <= 0.0 { alpha } else { 1.0 - alpha };
    Ok(weight * profile_f(x.abs(), t, Dimension::ONE)?)
}

/// Location and height of the spatial maximum of `F(·, t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hotspot {
    pub radius: f64,
    pub value: f64,
}

/// The maximum of `F` sits where `log r = -(N-2)t`, i.e. at
/// `z₀ = (N-2)²t/2` in the inversion coordinate `z = -(N-2)/2·log r`, with
/// value `1/√(4πt)`.
pub fn hotspot(t: f64, dim: Dimension) -> Result<Hotspot> {
    check_time(t)?;
    if dim.n() < 3 {
        return Err(Error::domain(format!(
            "hotspot law is stated for N >= 3, got N = {}",
            dim.n()
        )));
    }
    let z0 = dim.drift().powi(2) * t / 2.0;
    let radius = (-2.0 * z0 / dim.drift()).exp();
    Ok(Hotspot {
        radius,
        value: 1.0 / (4.0 * PI * t).sqrt(),
    })
}

/// `t^{power}·exp(-exp_rate·t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayRate {
    pub power: f64,
    pub exp_rate: f64,
}

impl DecayRate {
    pub fn eval(&self, t: f64) -> f64 {
        t.powf(self.power) * (-self.exp_rate * t).exp()
    }
}

/// Large-time behaviour of `E(x, t)` at fixed `x ≠ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EBehaviour {
    Decays(DecayRate),
    Limit(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayDescriptor {
    pub f_rate: DecayRate,
    pub e: EBehaviour,
}

/// Fixed-point decay of the profiles as `t → ∞`.
///
/// `N ≥ 3`: both decay like `t^{-1/2} e^{-(N-2)² t/4}`. `N = 2`: `E → 1`,
/// `F = O(t^{-1/2})`. `N = 1`: `E → 2`, `F` decays as for `N ≥ 3`.
pub fn decay_descriptor(dim: Dimension) -> DecayDescriptor {
    let f_rate = DecayRate {
        power: -0.5,
        exp_rate: dim.drift().powi(2) / 4.0,
    };
    let e = match dim.n() {
        1 => EBehaviour::Limit(2.0),
        2 => EBehaviour::Limit(1.0),
        _ => EBehaviour::Decays(f_rate),
    };
    DecayDescriptor { f_rate, e }
}

/// Evaluates `F` and `E` at fixed `r` for times `t` and `2t` and confirms
/// that the descriptor predicts the change within a factor-2 band (for
/// decaying quantities) or that `E` is within `tol` of its limit.
pub fn check_decay_descriptor(dim: Dimension, r: f64, t: f64, limit_tol: f64) -> Result<bool> {
    let d = decay_descriptor(dim);
    let ratio_ok = |a: f64, b: f64, rate: &DecayRate| {
        let predicted = rate.eval(2.0 * t) / rate.eval(t);
        let observed = b / a;
        let q = observed / predicted;
        q.is_finite() && (0.5..=2.0).contains(&q)
    };
    let f_ok = ratio_ok(profile_f(r, t, dim)?, profile_f(r, 2.0 * t, dim)?, &d.f_rate);
    let e_ok = match d.e {
        EBehaviour::Decays(rate) => ratio_ok(
            profile_e(r, t, dim, 2.0)?,
            profile_e(r, 2.0 * t, dim, 2.0)?,
            &rate,
        ),
        EBehaviour::Limit(l) => (profile_e(r, t, dim, 2.0)? - l).abs() <= limit_tol,
    };
    Ok(f_ok && e_ok)
}

/// Which asymptotic profile a datum is attracted to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProfileKind {
    /// `mass·F`, for data vanishing at the origin; `mass = M_{u0}/ω₁`.
    F { mass: f64 },
    /// `(level/2)·E`, for data with `u₀(0) = level > 0`.
    E { level: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileParams {
    pub dim: Dimension,
    pub kind: ProfileKind,
}

impl ProfileParams {
    pub fn f(dim: Dimension, mass: f64) -> Result<Self> {
        if !(mass >= 0.0 && mass.is_finite()) {
            return Err(Error::domain(format!("mass must be finite and nonnegative, got {mass}")));
        }
        Ok(ProfileParams {
            dim,
            kind: ProfileKind::F { mass },
        })
    }

    pub fn e(dim: Dimension, level: f64) -> Result<Self> {
        if !(level >= 0.0 && level.is_finite()) {
            return Err(Error::domain(format!("level must be finite and nonnegative, got {level}")));
        }
        Ok(ProfileParams {
            dim,
            kind: ProfileKind::E { level },
        })
    }

    /// Value at radius `r`.
    pub fn eval_radial(&self, r: f64, t: f64) -> Result<f64> {
        match self.kind {
            ProfileKind::F { mass } => Ok(mass * profile_f(r, t, self.dim)?),
            ProfileKind::E { level } => profile_e(r, t, self.dim, level),
        }
    }

    /// Value at log coordinate `y = log r + (N-2)t`.
    pub fn eval_line(&self, y: f64, t: f64) -> f64 {
        match self.kind {
            ProfileKind::F { mass } => mass * gaussian_kernel_unchecked(y, t),
            ProfileKind::E { level } => erfc_front(y, t, level),
        }
    }

    /// `(left, right)` limits in `y`.
    pub fn line_tails(&self) -> (f64, f64) {
        match self.kind {
            ProfileKind::F { .. } => (0.0, 0.0),
            ProfileKind::E { level } => (level, 0.0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const D3: Dimension = Dimension::THREE;

    #[test]
    fn sphere_areas() {
        let d = |n| Dimension::new(n).unwrap().sphere_area();
        assert!((d(1) - 2.0).abs() < 1e-15);
        assert!((d(2) - TAU).abs() < 1e-14);
        assert!((d(3) - 4.0 * PI).abs() < 1e-14);
        assert!((d(4) - 2.0 * PI * PI).abs() < 1e-13);
        assert!((d(5) - 8.0 * PI * PI / 3.0).abs() < 1e-13);
    }

    #[test]
    fn kernel_examples() {
        assert!((gaussian_kernel(0.0, 1.0 / (4.0 * PI)).unwrap() - 1.0).abs() < 1e-15);
        let g = gaussian_kernel(2.0, 1.0).unwrap();
        assert!((g - 0.10377687435514868).abs() < 1e-15);
        assert_eq!(gaussian_kernel(1.3, 0.7).unwrap(), gaussian_kernel(-1.3, 0.7).unwrap());
        assert!(gaussian_kernel(0.0, 0.0).is_err());
        assert!(gaussian_kernel(0.0, -1.0).is_err());
    }

    #[test]
    fn profile_f_examples() {
        for n in [3, 4, 7] {
            let dim = Dimension::new(n).unwrap();
            for t in [0.3, 1.0, 5.0] {
                let r = (-dim.drift() * t).exp();
                let v = profile_f(r, t, dim).unwrap();
                assert!((v - 1.0 / (4.0 * PI * t).sqrt()).abs() < 1e-15);
            }
        }
        assert_eq!(profile_f(0.0, 1.0, D3).unwrap(), 0.0);
        let v = profile_f(std::f64::consts::E, 1.0, D3).unwrap();
        assert!((v - 0.10377687435514868).abs() < 1e-15);
        assert!(profile_f(1.0, 0.0, D3).is_err());
    }

    #[test]
    fn profile_e_examples() {
        let level = 3.0;
        assert_eq!(profile_e(0.0, 2.0, D3, level).unwrap(), level);
        assert!((profile_e(1e-300, 2.0, D3, level).unwrap() - level).abs() < 1e-12);
        let t = 2.0;
        let r = (-D3.drift() * t).exp();
        assert!((profile_e(r, t, D3, level).unwrap() - level / 2.0).abs() < 1e-15);
        assert!(profile_e(1e300, t, D3, level).unwrap() < 1e-200);
        assert!(profile_e(1.0, t, D3, -1.0).is_err());
        assert!(profile_e(1.0, 0.0, D3, 1.0).is_err());
    }

    #[test]
    fn profile_e_is_nonincreasing() {
        let mut prev = f64::INFINITY;
        for k in 0..2000 {
            let r = (-10.0 + k as f64 * 0.01f64).exp();
            let v = profile_e(r, 1.5, D3, 2.0).unwrap();
            assert!(v <= prev);
            assert!((0.0..=2.0).contains(&v));
            prev = v;
        }
    }

    #[test]
    fn profile_fn_examples() {
        let range = AngularRange::default();
        let t = 0.8;
        for r in [0.1, 1.0, 3.0] {
            assert_eq!(profile_fn(r, 0.0, t, D3, &range).unwrap(), 0.0);
            assert_eq!(profile_fn(r, 1.0, t, D3, &range).unwrap(), profile_f(r, t, D3).unwrap());
        }
        let r = (-D3.drift() * t).exp();
        let v = profile_fn(r, PI, t, D3, &range).unwrap();
        assert!((v - PI / (4.0 * PI * t).sqrt()).abs() < 1e-15);
        let narrow = AngularRange::new(0.0, 1.0).unwrap();
        assert!(profile_fn(1.0, 2.0, t, D3, &narrow).is_err());
    }

    #[test]
    fn profile_f1_examples() {
        let t = 1.7;
        for x in [-3.0, -0.5, 0.4, 2.0] {
            let v = profile_f1(x, t, 0.5).unwrap();
            let w = profile_f1(-x, t, 0.5).unwrap();
            assert!((v - w).abs() < 1e-16);
            assert!((v - 0.5 * profile_f(x.abs(), t, Dimension::ONE).unwrap()).abs() < 1e-16);
        }
        assert_eq!(profile_f1(0.0, t, 0.3).unwrap(), 0.0);
        // In N = 1 the sup of F sits at |x| = e^{t}.
        let v = profile_f1(-t.exp(), t, 0.25).unwrap();
        assert!((v - 0.25 / (4.0 * PI * t).sqrt()).abs() < 1e-15);
        assert!(profile_f1(1.0, t, 0.0).is_err());
        assert!(profile_f1(1.0, t, 1.0).is_err());
    }

    #[test]
    fn hotspot_examples() {
        let h = hotspot(1.0, D3).unwrap();
        assert!((h.radius - (-1.0f64).exp()).abs() < 1e-15);
        assert!((h.value - 0.28209479177387814).abs() < 1e-15);
        assert!((hotspot(1.0 / (4.0 * PI), D3).unwrap().value - 1.0).abs() < 1e-15);
        let h4 = hotspot(4.0, Dimension::new(4).unwrap()).unwrap();
        assert!((h4.radius / (-8.0f64).exp() - 1.0).abs() < 1e-14);
        assert!((h4.value - 1.0 / (16.0 * PI).sqrt()).abs() < 1e-15);
        assert!(hotspot(1.0, Dimension::new(2).unwrap()).is_err());
    }

    #[test]
    fn hotspot_matches_numerical_argmax() {
        let dim = Dimension::new(4).unwrap();
        let t = 4.0;
        let h = hotspot(t, dim).unwrap();
        let step = 1e-3;
        let (mut best_y, mut best_v) = (0.0, 0.0);
        for k in 0..20001 {
            let log_r = -18.0 + k as f64 * step;
            let v = profile_f(log_r.exp(), t, dim).unwrap();
            if v > best_v {
                best_v = v;
                best_y = log_r;
            }
        }
        assert!((best_y - h.radius.ln()).abs() <= step);
        assert!((best_v - h.value).abs() < 1e-9);
    }

    #[test]
    fn decay_descriptor_examples() {
        let d3 = decay_descriptor(D3);
        assert_eq!(d3.f_rate, DecayRate { power: -0.5, exp_rate: 0.25 });
        assert_eq!(d3.e, EBehaviour::Decays(d3.f_rate));
        assert_eq!(decay_descriptor(Dimension::new(2).unwrap()).e, EBehaviour::Limit(1.0));
        assert_eq!(decay_descriptor(Dimension::ONE).e, EBehaviour::Limit(2.0));
        assert_eq!(decay_descriptor(Dimension::ONE).f_rate.exp_rate, 0.25);
    }

    #[test]
    fn decay_descriptor_numeric_check() {
        for n in [1, 3, 4, 5] {
            let dim = Dimension::new(n).unwrap();
            assert!(check_decay_descriptor(dim, 1.5, 40.0, 1e-3).unwrap(), "N = {n}");
        }
        // N = 2: E → 1 only like erfc(log r / 2√t), so take a large time.
        let d2 = Dimension::new(2).unwrap();
        assert!(check_decay_descriptor(d2, 1.5, 1e6, 1e-3).unwrap());
    }

    #[test]
    fn angular_range_validation() {
        assert!(AngularRange::new(1.0, 1.0).is_err());
        assert!(AngularRange::new(-0.1, 1.0).is_err());
        assert!(AngularRange::new(0.0, 7.0).is_err());
        let r = AngularRange::default();
        assert!(r.contains(0.0) && r.contains(TAU));
        assert!(!r.contains_away_from_cut(1e-4));
        assert!(r.contains_away_from_cut(1.0));
        assert_eq!(AngularRange::point(1.0).unwrap().width(), 0.0);
    }
}
