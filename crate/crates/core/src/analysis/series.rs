use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::profiles::gaussian_kernel_unchecked;
use crate::quadrature::adaptive_with_breaks;
use crate::solver::HeatFlow;
use crate::transforms::{uniform_grid, weighted_mass, InitialDatum, LineDatum, TwoBranchDatum};

/// Half-width of the sup-norm window in units of `√t`.
pub const SUP_WINDOW: f64 = 8.0;
/// Nodes of the sup-norm grid.
pub const SUP_POINTS: usize = 4096;

/// Samples `e(t_k) = t_k^s · sup|u(·, t_k) - profile(·, t_k)|`.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorSeries {
    pub samples: Vec<(f64, f64)>,
    pub scaling_exponent: f64,
}

impl ErrorSeries {
    pub fn new(samples: Vec<(f64, f64)>, scaling_exponent: f64) -> Result<Self> {
        if samples.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::domain("series times must be strictly increasing"));
        }
        if samples.iter().any(|&(t, e)| !(t > 0.0) || !(e >= 0.0 && e.is_finite())) {
            return Err(Error::domain("series needs t > 0 and finite e >= 0"));
        }
        Ok(ErrorSeries {
            samples,
            scaling_exponent,
        })
    }

    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.0).collect()
    }

    pub fn errors(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.1).collect()
    }

    pub fn is_strictly_decreasing(&self) -> bool {
        self.samples.windows(2).all(|w| w[1].1 < w[0].1)
    }

    /// `e(t_last) / e(t_first)`.
    pub fn final_ratio(&self) -> f64 {
        match (self.samples.first(), self.samples.last()) {
            (Some(a), Some(b)) => b.1 / a.1,
            _ => f64::NAN,
        }
    }
}

/// Least-squares fit `log e = exponent·log t + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    pub exponent: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub window: (f64, f64),
    /// Samples left out because `e = 0`.
    pub excluded: usize,
}

pub fn fit_rate(series: &ErrorSeries) -> Result<RateFit> {
    let usable: Vec<(f64, f64)> = series
        .samples
        .iter()
        .filter(|s| s.1 > 0.0)
        .map(|&(t, e)| (t.ln(), e.ln()))
        .collect();
    let excluded = series.samples.len() - usable.len();
    if usable.len() < 5 {
        return Err(Error::Precondition(format!(
            "rate fit needs at least 5 positive samples, got {}",
            usable.len()
        )));
    }
    let n = usable.len() as f64;
    let mx = usable.iter().map(|p| p.0).sum::<f64>() / n;
    let my = usable.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = usable.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = usable.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = usable.iter().map(|p| (p.1 - my).powi(2)).sum();
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let ss_res: f64 = usable
        .iter()
        .map(|p| (p.1 - intercept - exponent * p.0).powi(2))
        .sum();
    let r_squared = if syy > 0.0 { (1.0 - ss_res / syy).clamp(0.0, 1.0) } else { 1.0 };
    let ts = series.times();
    Ok(RateFit {
        exponent,
        intercept,
        r_squared,
        window: (ts[0], *ts.last().unwrap()),
        excluded,
    })
}

/// Which profile a datum is measured against. Its parameters are derived
/// from the datum: `M_{u0}/ω₁` for `F`, `u₀(0)` for `E`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    F,
    E,
}

/// Profile in log coordinates, `y ↦ profile(y, t)`, for a datum and target.
fn line_profile(u0: &InitialDatum, target: Target) -> Result<Box<dyn Fn(f64, f64) -> f64 + Sync>> {
    let (left, right) = u0.tails();
    match target {
        Target::F => {
            if left != 0.0 || right != 0.0 {
                return Err(Error::Precondition(format!(
                    "F-profile needs u0 vanishing at 0 and ∞, got limits ({left}, {right})"
                )));
            }
            let mass = weighted_mass(u0)
                .value()
                .ok_or_else(|| Error::Precondition("weighted mass is infinite".into()))?
                / u0.dim.sphere_area();
            Ok(Box::new(move |y, t| mass * gaussian_kernel_unchecked(y, t)))
        }
        Target::E => {
            if !(left > 0.0) || right != 0.0 {
                return Err(Error::Precondition(format!(
                    "E-profile needs u0(0) = K > 0 and u0 → 0 at ∞, got limits ({left}, {right})"
                )));
            }
            Ok(Box::new(move |y, t| {
                0.5 * left * crate::profiles::erfc(y / (2.0 * t.sqrt()))
            }))
        }
    }
}

/// Sup-norm grid at time `t` for a datum with core `[lo, hi]`: `y` over
/// `[-c√t - a, c√t + a]` with `a` covering the core.
pub fn sup_grid<D: LineDatum + ?Sized>(datum: &D, t: f64) -> Vec<f64> {
    let core = datum.core();
    let a = core.lo.abs().max(core.hi.abs()) + 1.0;
    let w = SUP_WINDOW * t.sqrt() + a;
    uniform_grid(-w, w, SUP_POINTS)
}

/// Bound on `|v - profile|` beyond the sup grid, for a profile that is the
/// flow of `level·H(-y)` plus `mass·δ`: the core part of `v₀ - level·H(-y)`
/// and the point mass reach the window edge through `G(8√t + 1, t)`, the
/// envelopes outside the core through `G(0, t)`.
fn outside_window_bound<D: LineDatum + ?Sized>(u0: &D, level: f64, mass: f64, t: f64) -> f64 {
    let core = u0.core();
    let mut breaks: Vec<f64> = u0.breakpoints();
    breaks.retain(|&b| b > core.lo && b < core.hi);
    breaks.extend([core.lo, core.hi]);
    if core.lo < 0.0 && core.hi > 0.0 {
        breaks.push(0.0);
    }
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breaks.dedup();
    let step = |y: f64| if y < 0.0 { level } else { 0.0 };
    let (l1, err) = adaptive_with_breaks(|y| (u0.value(y) - step(y)).abs(), &breaks, 1e-12);
    let reach = SUP_WINDOW * t.sqrt() + 1.0;
    (l1 + err + mass.abs()) * gaussian_kernel_unchecked(reach, t)
        + (core.left.mass() + core.right.mass()) * gaussian_kernel_unchecked(0.0, t)
}

/// `e(t) = t^s·sup_y |v(y, t) - profile(y, t)|`; the sup over `x ∈ ℝ^N` of
/// the radial error equals the sup over `y` of the line error. Quadrature
/// error bounds and the bound beyond the grid are added.
pub fn convergence_error(u0: &InitialDatum, target: Target, times: &[f64], s: f64) -> Result<ErrorSeries> {
    if times.is_empty() {
        return Err(Error::domain("no times given"));
    }
    let profile = line_profile(u0, target)?;
    let (level, mass) = match target {
        Target::F => (0.0, weighted_mass(u0).value_or_inf() / u0.dim.sphere_area()),
        Target::E => (u0.tails().0, 0.0),
    };
    let flow = HeatFlow::new(u0)?;
    let samples = times
        .iter()
        .map(|&t| {
            if !(t > 0.0) {
                return Err(Error::domain(format!("time must be positive, got {t}")));
            }
            let grid = sup_grid(u0, t);
            let sup = grid
                .par_iter()
                .map(|&y| {
                    let (v, bound) = flow.eval(y, t);
                    (v - profile(y, t)).abs() + bound
                })
                .reduce(|| 0.0, f64::max);
            let sup = sup.max(outside_window_bound(u0, level, mass, t));
            Ok((t, t.powf(s) * sup))
        })
        .collect::<Result<Vec<_>>>()?;
    ErrorSeries::new(samples, s)
}

/// Two-branch analogue in `N = 1`: the left branch is measured against
/// `α·F` and the right against `(1-α)·F`, i.e. against the profile `F₁`.
pub fn two_branch_convergence_error(u0: &TwoBranchDatum, alpha: f64, times: &[f64], s: f64) -> Result<ErrorSeries> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!("branch weight must lie in (0, 1), got {alpha}")));
    }
    let left = HeatFlow::new(&u0.left)?;
    let right = HeatFlow::new(&u0.right)?;
    let samples = times
        .iter()
        .map(|&t| {
            let grid: Vec<f64> = sup_grid(&u0.left, t)
                .into_iter()
                .chain(sup_grid(&u0.right, t))
                .collect();
            let half = grid.len() / 2;
            let sup = grid
                .par_iter()
                .enumerate()
                .map(|(i, &y)| {
                    let g = gaussian_kernel_unchecked(y, t);
                    let ((v, bound), weight) = if i < half {
                        (left.eval(y, t), alpha)
                    } else {
                        (right.eval(y, t), 1.0 - alpha)
                    };
                    (v - weight * g).abs() + bound
                })
                .reduce(|| 0.0, f64::max);
            let tail = outside_window_bound(&u0.left, 0.0, alpha, t)
                .max(outside_window_bound(&u0.right, 0.0, 1.0 - alpha, t));
            Ok((t, t.powf(s) * sup.max(tail)))
        })
        .collect::<Result<Vec<_>>>()?;
    ErrorSeries::new(samples, s)
}

/// `count` geometrically spaced times from `a` to `b` inclusive.
pub fn geometric_times(a: f64, b: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2 && a > 0.0 && b > a);
    let q = (b / a).ln() / (count - 1) as f64;
    (0..count)
        .map(|k| if k + 1 == count { b } else { a * (q * k as f64).exp() })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::Dimension;
    use crate::transforms::Tabulated;
    use std::f64::consts::E;

    const D3: Dimension = Dimension::THREE;

    #[test]
    fn exact_power_law_fit() {
        let samples = [10.0, 1e2, 1e3, 1e4, 1e5].iter().map(|&t: &f64| (t, 2.0 * t.powf(-0.5))).collect();
        let fit = fit_rate(&ErrorSeries::new(samples, 0.0).unwrap()).unwrap();
        assert!((fit.exponent + 0.5).abs() < 1e-12);
        assert!((fit.intercept - 2f64.ln()).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_series_has_zero_exponent() {
        let samples = (1..=6).map(|k| (k as f64, 0.3)).collect();
        let fit = fit_rate(&ErrorSeries::new(samples, 0.0).unwrap()).unwrap();
        assert!(fit.exponent.abs() < 1e-12);
    }

    #[test]
    fn fit_needs_five_positive_samples() {
        let samples = vec![(1.0, 1.0), (2.0, 0.5), (3.0, 0.0), (4.0, 0.2), (5.0, 0.1)];
        let series = ErrorSeries::new(samples, 0.0).unwrap();
        assert!(fit_rate(&series).is_err());
    }

    #[test]
    fn sampled_profile_has_tiny_error() {
        // v0 = G(·, t0) sampled in y flows to G(·, t0 + t)
        let t0 = 1.0;
        let radii: Vec<f64> = uniform_grid(-14.0, 12.0, 5201).into_iter().map(f64::exp).collect();
        let values: Vec<f64> = radii
            .iter()
            .map(|&r| gaussian_kernel_unchecked(r.ln(), t0))
            .collect();
        let u0 = InitialDatum::tabulated(Tabulated::new(radii, values, 0.0, 0.0).unwrap(), D3).unwrap();
        let flow = HeatFlow::new(&u0).unwrap();
        for t in [0.5, 2.0] {
            let err = uniform_grid(-10.0, 10.0, 101)
                .into_iter()
                .map(|y| (flow.eval(y, t).0 - gaussian_kernel_unchecked(y, t + t0)).abs())
                .fold(0.0, f64::max);
            assert!(err < 1e-5, "t={t}: {err}");
        }
    }

    #[test]
    fn profile_mismatch_is_rejected() {
        let step = InitialDatum::step_to_k(1.0, E, 4.0, D3).unwrap();
        assert!(convergence_error(&step, Target::F, &[1.0], 0.5).is_err());
        let ann = InitialDatum::annulus_indicator(1.0, E, 1.0, D3).unwrap();
        assert!(convergence_error(&ann, Target::E, &[1.0], 0.5).is_err());
    }

    #[test]
    fn step_series_is_bounded() {
        let step = InitialDatum::step_to_k(1.0, E, 4.0, D3).unwrap();
        let series = convergence_error(&step, Target::E, &[10.0, 100.0, 1000.0], 0.5).unwrap();
        let errs = series.errors();
        let max = errs.iter().cloned().fold(0.0, f64::max);
        let min = errs.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(max / min < 1.5, "{errs:?}");
    }

    #[test]
    fn geometric_times_endpoints() {
        let ts = geometric_times(10.0, 1e4, 10);
        assert_eq!(ts.len(), 10);
        assert_eq!(ts[0], 10.0);
        assert_eq!(ts[9], 1e4);
        assert!((ts[3] - 100.0).abs() < 1e-9);
    }
}
