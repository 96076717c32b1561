use crate::quadrature::{adaptive, adaptive_with_breaks, Integral};

use super::datum::{InitialDatum, LineDatum};
use super::fields::{LineField, RadialField};

const TOL: f64 = 1e-13;

/// Adaptive quadrature of `g` over `[a, b]`, split at the datum's
/// breakpoints.
fn integrate_between<G: Fn(f64) -> f64>(g: G, a: f64, b: f64, mut breaks: Vec<f64>) -> (f64, f64) {
    if b <= a {
        return (0.0, 0.0);
    }
    breaks.retain(|&x| x > a && x < b);
    breaks.push(a);
    breaks.push(b);
    breaks.sort_by(|x, y| x.partial_cmp(y).unwrap());
    breaks.dedup();
    adaptive_with_breaks(g, &breaks, TOL)
}

/// `M_{u0} = ∫|x|^{-N} u₀ dx = ω₁ ∫ v₀(y) dy`; infinite unless `u₀`
/// vanishes at both the origin and infinity.
pub fn weighted_mass(u0: &InitialDatum) -> Integral {
    if u0.tails() != (0.0, 0.0) {
        return Integral::Infinite;
    }
    let core = u0.core();
    let (value, err) = integrate_between(|y| u0.value(y), core.lo, core.hi, u0.breakpoints());
    Integral::finite(value, err + core.left.mass() + core.right.mass()).scale(u0.dim.sphere_area())
}

/// Weighted mass of a sampled field: `ω₁` times the exact integral of the
/// spline through its log-coordinate samples.
pub fn weighted_mass_field(u: &RadialField) -> Integral {
    if u.origin_value() != 0.0 || u.outer_value() != 0.0 {
        return Integral::Infinite;
    }
    super::maps::field_to_log_coords(u)
        .map(|v| Integral::finite(u.dim().sphere_area() * v.integral(), 0.0))
        .unwrap_or(Integral::Infinite)
}

/// `∫_{-∞}^{edge} c·e^{a y} dy` (`left`) or `∫_{edge}^{∞}` (`!left`);
/// `None` if divergent.
fn exp_tail(c: f64, a: f64, edge: f64, left: bool) -> Option<f64> {
    if c == 0.0 {
        return Some(0.0);
    }
    if (left && a > 0.0) || (!left && a < 0.0) {
        Some(c.abs() * (a * edge).exp() / a.abs())
    } else {
        None
    }
}

/// `‖u₀‖_{L¹₂} = ∫|x|^{-2}|u₀| dx = ω₁ ∫ e^{(N-2)y}|v₀(y)| dy`.
///
/// A nonzero limit at the origin is integrable only for `N > 2`, a nonzero
/// limit at infinity only for `N = 1`.
pub fn l12_norm(u0: &InitialDatum) -> Integral {
    let a = u0.dim.drift();
    let core = u0.core();
    let (tl, tr) = u0.tails();
    let (Some(left), Some(right)) = (exp_tail(tl, a, core.lo, true), exp_tail(tr, a, core.hi, false)) else {
        return Integral::Infinite;
    };
    let (Some(el), Some(er)) = (core.left.exp_weighted(core.lo, a, -1.0), core.right.exp_weighted(core.hi, a, 1.0))
    else {
        return Integral::Infinite;
    };
    let (value, err) = integrate_between(|y| (a * y).exp() * u0.value(y).abs(), core.lo, core.hi, u0.breakpoints());
    Integral::finite(value + left + right, err + el + er).scale(u0.dim.sphere_area())
}

/// `L¹₂` norm of a sampled field, integrating `e^{(N-2)η}|u|` over the
/// spline in `η = log r` plus the exact contribution of the limits beyond
/// the sampled range.
pub fn l12_norm_field(u: &RadialField) -> Integral {
    let a = u.dim().drift();
    let etas: Vec<f64> = u.radii().iter().map(|r| r.ln()).collect();
    let lo = etas[0];
    let hi = *etas.last().unwrap();
    let (Some(left), Some(right)) = (
        exp_tail(u.origin_value(), a, lo, true),
        exp_tail(u.outer_value(), a, hi, false),
    ) else {
        return Integral::Infinite;
    };
    if etas.len() == 1 {
        return Integral::finite(left + right, 0.0).scale(u.dim().sphere_area());
    }
    let line = match LineField::new(etas.clone(), u.values().to_vec(), 0.0, (u.origin_value(), u.outer_value())) {
        Ok(l) => l,
        Err(_) => return Integral::Infinite,
    };
    let (value, err) = adaptive_with_breaks(|eta| (a * eta).exp() * line.eval(eta).abs(), &etas, TOL);
    Integral::finite(value + left + right, err).scale(u.dim().sphere_area())
}

/// `I₁ = ∫_{B(0,1)}|x|^{-N}|K - u₀| dx + ∫_{ℝ^N∖B(0,1)}|x|^{-N}|u₀| dx
/// = ω₁ ∫|K·H(y) - v₀(y)| dy` with `H = 1` on `y < 0`.
pub fn condition_i1(u0: &InitialDatum, k: f64) -> Integral {
    if u0.tails() != (k, 0.0) {
        return Integral::Infinite;
    }
    let core = u0.core();
    let lo = core.lo.min(0.0);
    let hi = core.hi.max(0.0);
    let mut breaks = u0.breakpoints();
    breaks.push(0.0);
    let integrand = |y: f64| {
        let step = if y < 0.0 { k } else { 0.0 };
        (step - u0.value(y)).abs()
    };
    let (value, err) = integrate_between(integrand, lo, hi, breaks);
    Integral::finite(value, err + core.left.mass() + core.right.mass()).scale(u0.dim.sphere_area())
}

/// `I₂ = ∫|log|x||³ |x|^{1-N} |∇u₀| dx = ω₁ ∫|y³ v₀'(y)| dy`; infinite for
/// data with jumps.
pub fn condition_i2(u0: &InitialDatum) -> Integral {
    let Some((left, right)) = u0.derivative_envelopes() else {
        return Integral::Infinite;
    };
    let core = u0.core();
    let integrand = |y: f64| (y.powi(3) * u0.derivative_in_y(y).unwrap_or(0.0)).abs();
    let mut breaks = u0.breakpoints();
    breaks.push(0.0);
    let (value, err) = integrate_between(integrand, core.lo, core.hi, breaks);
    let tails = left.cubic_moment(core.lo) + right.cubic_moment(core.hi);
    Integral::finite(value, err + tails).scale(u0.dim.sphere_area())
}

/// Moments of `ψ₀ = -v₀'`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiMoments {
    /// `M(ψ) = ∫ψ₀ = tail_left - tail_right`.
    pub mass: f64,
    /// `ϱ(ψ) = ∫|y³ψ₀|`.
    pub rho: Integral,
}

/// `M(ψ)` telescopes to the difference of the tails; `ϱ(ψ)` integrates the
/// spline derivative, which vanishes beyond the grid.
pub fn psi_moments(v0: &LineField) -> PsiMoments {
    let (value, err) = adaptive_with_breaks(|y| (y.powi(3) * v0.derivative(y)).abs(), v0.grid(), TOL);
    PsiMoments {
        mass: v0.tail_left() - v0.tail_right(),
        rho: Integral::finite(value, err),
    }
}

/// `ϱ(ψ)` of an analytic datum, i.e. `I₂/ω₁`.
pub fn psi_rho(u0: &InitialDatum) -> Integral {
    condition_i2(u0).scale(1.0 / u0.dim.sphere_area())
}

/// Weighted mass computed in the radial variable, `ω₁ ∫₀^∞ u₀(r)/r dr`,
/// as an independent route to the log-coordinate identity. Panels are split
/// at `r = e^k` so that no panel spans more than one unit of `log r`.
pub fn weighted_mass_radial(u0: &InitialDatum, r_min: f64, r_max: f64) -> Integral {
    if u0.tails() != (0.0, 0.0) {
        return Integral::Infinite;
    }
    let core = u0.core();
    let mut breaks: Vec<f64> = u0.breakpoints().iter().map(|y| y.exp()).collect();
    breaks.extend([core.lo.exp(), core.hi.exp()]);
    let (k_lo, k_hi) = (r_min.ln().ceil() as i64, r_max.ln().floor() as i64);
    breaks.extend((k_lo..=k_hi).map(|k| (k as f64).exp()));
    breaks.retain(|&r| r > r_min && r < r_max);
    breaks.push(r_min);
    breaks.push(r_max);
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breaks.dedup();
    let mut acc = 0.0;
    let mut err = 0.0;
    for w in breaks.windows(2) {
        let (v, e) = adaptive(|r| u0.value_at_radius(r) / r, w[0], w[1], TOL);
        acc += v;
        err += e;
    }
    Integral::finite(acc, err).scale(u0.dim.sphere_area())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::Dimension;
    use crate::transforms::datum::Tabulated;
    use crate::transforms::fields::uniform_grid;
    use std::f64::consts::{E, PI};

    const D3: Dimension = Dimension::THREE;

    #[test]
    fn weighted_mass_of_unit_log_annulus() {
        let u0 = InitialDatum::annulus_indicator(1.0, E, 1.0, D3).unwrap();
        let m = weighted_mass(&u0);
        assert!((m.value().unwrap() - 4.0 * PI).abs() < 1e-12);
        assert!((weighted_mass_radial(&u0, 0.5, 4.0).value().unwrap() - 4.0 * PI).abs() < 1e-10);
    }

    #[test]
    fn weighted_mass_flags_divergence() {
        let u0 = InitialDatum::step_to_k(1.0, 1.0, 2.0, D3).unwrap();
        assert!(weighted_mass(&u0).is_infinite());
        let zero = InitialDatum::annulus_indicator(1.0, 2.0, 0.0, D3).unwrap();
        assert_eq!(weighted_mass(&zero).value(), Some(0.0));
    }

    #[test]
    fn gaussian_mass_closed_form() {
        let d5 = Dimension::new(5).unwrap();
        let u0 = InitialDatum::gaussian_bump(0.4, 0.3, 2.0, d5).unwrap();
        let exact = d5.sphere_area() * 2.0 * 0.3 * (2.0 * PI).sqrt();
        assert!((weighted_mass(&u0).value().unwrap() - exact).abs() < 1e-10);
    }

    #[test]
    fn l12_of_unit_log_annulus() {
        let u0 = InitialDatum::annulus_indicator(1.0, E, 1.0, D3).unwrap();
        let l = l12_norm(&u0).value().unwrap();
        assert!((l - 4.0 * PI * (E - 1.0)).abs() < 1e-11);
        let scaled = InitialDatum::annulus_indicator(1.0, E, 3.0, D3).unwrap();
        assert!((l12_norm(&scaled).value().unwrap() - 3.0 * l).abs() < 1e-10);
    }

    #[test]
    fn l12_tail_rules() {
        // K at the origin is integrable against |x|^{-2} for N = 3 ...
        let u0 = InitialDatum::step_to_k(1.0, 1.0, 4.0, D3).unwrap();
        assert!(!l12_norm(&u0).is_infinite());
        // ... but not for N = 1
        assert!(l12_norm(&InitialDatum::step_to_k(1.0, 1.0, 4.0, Dimension::ONE).unwrap()).is_infinite());
        // decay like r^{-p} with p ≤ N - 2 is not integrable at infinity
        assert!(l12_norm(&InitialDatum::step_to_k(1.0, 1.0, 0.5, D3).unwrap()).is_infinite());
    }

    #[test]
    fn l12_field_matches_datum() {
        let u0 = InitialDatum::gaussian_bump(0.0, 0.5, 1.0, D3).unwrap();
        let radii: Vec<f64> = uniform_grid(-6.0, 6.0, 2001).into_iter().map(f64::exp).collect();
        let field = RadialField::from_fn(radii, 0.0, D3, (0.0, 0.0), |r| u0.value_at_radius(r)).unwrap();
        let a = l12_norm(&u0).value().unwrap();
        let b = l12_norm_field(&field).value().unwrap();
        assert!((a - b).abs() < 1e-8 * a);
        let zero = RadialField::from_fn(vec![1.0, 2.0], 0.0, D3, (0.0, 0.0), |_| 0.0).unwrap();
        assert_eq!(l12_norm_field(&zero).value(), Some(0.0));
    }

    #[test]
    fn i1_vanishes_for_the_exact_step() {
        let k = 2.5;
        let t = Tabulated::new(vec![0.5, 1.0], vec![k, k], k, 0.0).unwrap();
        let u0 = InitialDatum::tabulated(t, D3).unwrap();
        assert!(condition_i1(&u0, k).value().unwrap().abs() < 1e-14);
    }

    #[test]
    fn i1_with_zero_level_is_the_mass() {
        let u0 = InitialDatum::annulus_indicator(0.5, 3.0, 1.0, D3).unwrap();
        let a = condition_i1(&u0, 0.0).value().unwrap();
        let b = weighted_mass(&u0).value().unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn i1_of_erfc_datum() {
        // ∫|2H - erfc(y)| dy = 2∫_0^∞ erfc = 2/√π
        let u0 = InitialDatum::smooth_erfc_like(2.0, 0.0, D3).unwrap();
        let i1 = condition_i1(&u0, 2.0).value().unwrap();
        assert!((i1 - 4.0 * PI * 2.0 / PI.sqrt()).abs() < 1e-10);
        assert!(condition_i1(&u0, 1.0).is_infinite());
    }

    #[test]
    fn i2_cases() {
        let constant = Tabulated::new(vec![0.5, 2.0], vec![1.0, 1.0], 1.0, 1.0).unwrap();
        let c = InitialDatum::tabulated(constant, D3).unwrap();
        assert_eq!(condition_i2(&c).value(), Some(0.0));
        let ann = InitialDatum::annulus_indicator(1.0, 2.0, 1.0, D3).unwrap();
        assert!(condition_i2(&ann).is_infinite());
        let erfc = InitialDatum::smooth_erfc_like(1.0, 0.0, D3).unwrap();
        // ∫|y|³ e^{-y²}/√π dy = 1/√π
        let rho = psi_rho(&erfc).value().unwrap();
        assert!((rho - 1.0 / PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn psi_mass_telescopes() {
        let v0 = LineField::from_fn(uniform_grid(-5.0, 5.0, 41), 0.0, (3.0, 0.0), |y| {
            1.5 * crate::profiles::erfc(y) + 0.2 * (-y * y).exp()
        })
        .unwrap();
        let m = psi_moments(&v0);
        assert_eq!(m.mass, 3.0);
        assert!(m.rho.value().unwrap() > 0.0);
    }

    #[test]
    fn psi_rho_from_samples_matches_closed_form() {
        let v0 = LineField::from_fn(uniform_grid(-9.0, 9.0, 3601), 0.0, (1.0, 0.0), |y| {
            0.5 * crate::profiles::erfc(y)
        })
        .unwrap();
        let rho = psi_moments(&v0).rho.value().unwrap();
        assert!((rho - 1.0 / PI.sqrt()).abs() < 1e-6, "rho = {rho}");
    }
}
