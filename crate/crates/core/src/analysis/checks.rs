use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::profiles::{gaussian_kernel_unchecked, profile_f, AngularRange, Dimension};
use crate::quadrature::{adaptive_with_breaks, gl10};
use crate::solver::{HeatFlow, Snapshot, SolutionTrajectory};
use crate::transforms::{uniform_grid, LineField, weighted_mass, weighted_mass_field, InitialDatum, LineDatum};

/// `max_k |M(t_k) - M(0)| / M(0)` over the snapshots, with `M(0)` from the
/// analytic datum; absolute drift when `M(0) = 0`.
pub fn conservation_drift(traj: &SolutionTrajectory) -> Result<f64> {
    let datum = traj
        .datum
        .as_ref()
        .ok_or_else(|| Error::Precondition("trajectory has no initial datum".into()))?;
    let m0 = weighted_mass(datum)
        .value()
        .ok_or_else(|| Error::Precondition("initial weighted mass is infinite".into()))?;
    let mut drift: f64 = 0.0;
    for snap in &traj.snapshots {
        let m = match snap {
            Snapshot::Line(l) => {
                if l.tails() != (0.0, 0.0) {
                    return Err(Error::Precondition("snapshot has nonzero tails".into()));
                }
                traj.dim.sphere_area() * l.integral()
            }
            Snapshot::Radial(r) => weighted_mass_field(r).value_or_inf(),
        };
        drift = drift.max((m - m0).abs());
    }
    Ok(if m0 == 0.0 { drift } else { drift / m0 })
}

/// `ω₁ ∫ e^{(N-2)η} [u₁ - u₂]₊ dη` for two snapshots on the same nodes,
/// integrating the positive part of the cubic spline through the
/// difference, cell by cell and split at sign changes.
fn l12_positive_part(dim: Dimension, etas: &[f64], u1: &[f64], u2: &[f64]) -> Result<f64> {
    let d: Vec<f64> = u1.iter().zip(u2).map(|(a, b)| a - b).collect();
    let spline = LineField::new(etas.to_vec(), d.clone(), 0.0, (0.0, 0.0))?;
    let a = dim.drift();
    let gl = gl10();
    let integrand = |x: f64| (a * x).exp() * spline.eval(x).max(0.0);
    let cells: Vec<f64> = (0..etas.len() - 1)
        .into_par_iter()
        .map(|i| {
            let (x0, x1, d0, d1) = (etas[i], etas[i + 1], d[i], d[i + 1]);
            if d0 * d1 < 0.0 {
                let root = x0 + (x1 - x0) * d0 / (d0 - d1);
                gl.integrate(x0, root, integrand) + gl.integrate(root, x1, integrand)
            } else {
                gl.integrate(x0, x1, integrand)
            }
        })
        .collect();
    Ok(dim.sphere_area() * cells.iter().sum::<f64>())
}

/// The same functional for two analytic data at `t = 0`.
pub fn l12_positive_part_data(d1: &InitialDatum, d2: &InitialDatum) -> Result<f64> {
    if d1.dim != d2.dim {
        return Err(Error::GridMismatch("data live in different dimensions".into()));
    }
    let (c1, c2) = (d1.core(), d2.core());
    let lo = c1.lo.min(c2.lo);
    let hi = c1.hi.max(c2.hi);
    let mut breaks: Vec<f64> = d1.breakpoints().into_iter().chain(d2.breakpoints()).collect();
    breaks.retain(|&b| b > lo && b < hi);
    breaks.push(lo);
    breaks.push(hi);
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breaks.dedup();
    let a = d1.dim.drift();
    let (v, _) = adaptive_with_breaks(|y| (a * y).exp() * (d1.value(y) - d2.value(y)).max(0.0), &breaks, 1e-13);
    Ok(d1.dim.sphere_area() * v)
}

fn check_same_grids(t1: &SolutionTrajectory, t2: &SolutionTrajectory) -> Result<()> {
    if t1.dim != t2.dim {
        return Err(Error::GridMismatch("trajectories in different dimensions".into()));
    }
    if t1.times() != t2.times() {
        return Err(Error::GridMismatch("snapshot times differ".into()));
    }
    for (a, b) in t1.snapshots.iter().zip(&t2.snapshots) {
        if a.log_radii(t1.dim) != b.log_radii(t2.dim) {
            return Err(Error::GridMismatch(format!("grids differ at t = {}", a.time())));
        }
    }
    Ok(())
}

/// The series `c(t_k) = ∫|x|^{-2}[u₁ - u₂]₊ dx`, which the contraction
/// principle makes nonincreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct ContractionSeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    /// Largest `c(t_{k+1}) - c(t_k)`.
    pub max_increase: f64,
    pub nonincreasing: bool,
}

/// Tolerance on increases of the contraction series.
pub const CONTRACTION_TOL: f64 = 1e-8;

/// Evaluates `c(t)` at every snapshot; when both trajectories carry their
/// analytic data, `c(0)` is prepended.
pub fn contraction_check(t1: &SolutionTrajectory, t2: &SolutionTrajectory) -> Result<ContractionSeries> {
    check_same_grids(t1, t2)?;
    let mut times = Vec::new();
    let mut values = Vec::new();
    if let (Some(d1), Some(d2)) = (&t1.datum, &t2.datum) {
        times.push(0.0);
        values.push(l12_positive_part_data(d1, d2)?);
    }
    for (a, b) in t1.snapshots.iter().zip(&t2.snapshots) {
        times.push(a.time());
        values.push(l12_positive_part(t1.dim, &a.log_radii(t1.dim), a.values(), b.values())?);
    }
    let max_increase = values
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(ContractionSeries {
        times,
        nonincreasing: max_increase <= CONTRACTION_TOL,
        max_increase,
        values,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonReport {
    pub ordered: bool,
    /// `max (u₁ - u₂)` over all snapshots and nodes.
    pub max_violation: f64,
}

/// Tolerance on pointwise ordering.
pub const COMPARISON_TOL: f64 = 1e-10;

/// Checks `u₁ ≤ u₂` at every node of every snapshot. The data must be
/// ordered; with analytic data this is checked on a fine sample of the
/// union of their cores.
pub fn comparison_check(t1: &SolutionTrajectory, t2: &SolutionTrajectory) -> Result<ComparisonReport> {
    check_same_grids(t1, t2)?;
    if let (Some(d1), Some(d2)) = (&t1.datum, &t2.datum) {
        let (c1, c2) = (d1.core(), d2.core());
        let lo = c1.lo.min(c2.lo) - 1.0;
        let hi = c1.hi.max(c2.hi) + 1.0;
        let mut ys = uniform_grid(lo, hi, 8001);
        for b in d1.breakpoints().into_iter().chain(d2.breakpoints()) {
            ys.extend([b - 1e-12, b, b + 1e-12]);
        }
        let (l1, r1) = d1.tails();
        let (l2, r2) = d2.tails();
        if ys.iter().any(|&y| d1.value(y) > d2.value(y)) || l1 > l2 || r1 > r2 {
            return Err(Error::Precondition("initial data are not ordered".into()));
        }
    }
    let max_violation = t1
        .snapshots
        .iter()
        .zip(&t2.snapshots)
        .flat_map(|(a, b)| a.values().iter().zip(b.values()).map(|(x, y)| x - y))
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(ComparisonReport {
        ordered: max_violation <= COMPARISON_TOL,
        max_violation,
    })
}

/// Nodes of the angular grid used by [`counterexample_gap`].
pub const GAP_ANGLES: usize = 257;
/// Candidates for the constant `c` before ternary refinement.
pub const GAP_CANDIDATES: usize = 101;

/// `g(t) = min_c t^{1/2}·sup_{r, θ}|θ·F(r, t) - c·F(r, t)|` for `θ` in the
/// range: the distance of `F_N = θF` from the best radial multiple of `F`.
///
/// The sup runs over an angular grid and a log-radius grid of
/// [`super::SUP_POINTS`] nodes; `c` is located by grid search and refined by
/// ternary search on the (convex) objective.
pub fn counterexample_gap(t: f64, dim: Dimension, range: &AngularRange) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::domain(format!("time must be positive, got {t}")));
    }
    let center = -dim.drift() * t;
    let w = super::SUP_WINDOW * t.sqrt() + 1.0;
    let f_values: Vec<f64> = uniform_grid(center - w, center + w, super::SUP_POINTS)
        .into_iter()
        .map(|eta| profile_f(eta.exp(), t, dim))
        .collect::<Result<_>>()?;
    let thetas: Vec<f64> = if range.width() == 0.0 {
        vec![range.min()]
    } else {
        uniform_grid(range.min(), range.max(), GAP_ANGLES)
    };
    let scale = t.sqrt();
    let objective = |c: f64| {
        thetas
            .par_iter()
            .map(|&theta| {
                f_values
                    .iter()
                    .map(|&f| (theta * f - c * f).abs())
                    .fold(0.0, f64::max)
            })
            .reduce(|| 0.0, f64::max)
            * scale
    };
    if thetas.len() == 1 {
        return Ok(objective(thetas[0]));
    }
    let candidates = uniform_grid(range.min(), range.max(), GAP_CANDIDATES);
    let step = candidates[1] - candidates[0];
    let best = candidates
        .iter()
        .map(|&c| (c, objective(c)))
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .unwrap();
    let (mut a, mut b) = (best.0 - step, best.0 + step);
    for _ in 0..60 {
        let m1 = a + (b - a) / 3.0;
        let m2 = b - (b - a) / 3.0;
        if objective(m1) <= objective(m2) {
            b = m2;
        } else {
            a = m1;
        }
    }
    Ok(objective(0.5 * (a + b)).min(best.1))
}

/// Closed form of [`counterexample_gap`]: `(width/2)/√(4π)`.
pub fn counterexample_gap_exact(range: &AngularRange) -> f64 {
    0.5 * range.width() / (4.0 * PI).sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PositivityRow {
    pub t: f64,
    /// Smallest value over the grid.
    pub min_value: f64,
    /// `u(r₀/2, t)`.
    pub inside_value: f64,
    /// Values decrease strictly towards the origin on the part of the grid
    /// whose log coordinate lies left of the support.
    pub monotone_to_origin: bool,
    /// The analytic left tail of the kernel solution, i.e. `u(0, t)`.
    pub origin_value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PositivityReport {
    pub rows: Vec<PositivityRow>,
    /// The datum is identically zero; nothing to check.
    pub vacuous: bool,
    pub passed: bool,
}

/// Strict positivity away from the origin and `u(0, t) = 0` for data
/// vanishing on `B(0, r₀)`.
pub fn positivity_check(u0: &InitialDatum, r0: f64, times: &[f64]) -> Result<PositivityReport> {
    let core = u0.core();
    if !(r0 > 0.0) || u0.origin_value() != 0.0 || !core.left.is_exact() || core.lo < r0.ln() {
        return Err(Error::Precondition(format!("datum does not vanish on B(0, {r0})")));
    }
    let sample = uniform_grid(core.lo, core.hi, 2001);
    if sample.iter().all(|&y| u0.value(y) == 0.0) {
        return Ok(PositivityReport {
            rows: Vec::new(),
            vacuous: true,
            passed: true,
        });
    }
    let flow = HeatFlow::new(u0)?;
    let dim = u0.dim;
    let mut rows = Vec::with_capacity(times.len());
    for &t in times {
        let shift = dim.drift() * t;
        let w = super::SUP_WINDOW * t.sqrt();
        let inner = (r0 / 2.0).ln().min(core.lo - 1.0);
        let etas = uniform_grid(inner - w, core.hi + w, super::SUP_POINTS);
        let (line, _) = flow.solve(t, etas.iter().map(|e| e + shift).collect())?;
        let values = line.values();
        let min_value = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let cutoff = core.lo - shift;
        let inside: Vec<f64> = etas
            .iter()
            .zip(values)
            .filter(|(e, _)| **e < cutoff)
            .map(|(_, v)| *v)
            .collect();
        let monotone_to_origin = inside.windows(2).all(|p| p[0] < p[1]);
        rows.push(PositivityRow {
            t,
            min_value,
            inside_value: flow.eval((r0 / 2.0).ln() + shift, t).0,
            monotone_to_origin,
            origin_value: line.tail_left(),
        });
    }
    let passed = rows
        .iter()
        .all(|r| r.min_value > 0.0 && r.inside_value > 0.0 && r.monotone_to_origin && r.origin_value == 0.0);
    Ok(PositivityReport {
        rows,
        vacuous: false,
        passed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HotspotRow {
    pub t: f64,
    /// `log r` of the grid maximum.
    pub argmax_log_r: f64,
    pub max_value: f64,
    /// `-(N-2)t`.
    pub expected_log_r: f64,
    pub cell: f64,
}

impl HotspotRow {
    pub fn within_one_cell(&self) -> bool {
        (self.argmax_log_r - self.expected_log_r).abs() <= self.cell
    }
}

/// Grid maximum of a radial function of `log r` over a window that contains
/// both the origin scale `log r = 0` and the expected hotspot.
pub fn grid_hotspot<F: Fn(f64) -> f64 + Sync>(f: F, t: f64, dim: Dimension) -> HotspotRow {
    let expected = -dim.drift() * t;
    let w = super::SUP_WINDOW * t.sqrt() + 1.0;
    let grid = uniform_grid(expected.min(0.0) - w, expected.max(0.0) + w, super::SUP_POINTS);
    let cell = grid[1] - grid[0];
    let (argmax, max_value) = grid
        .par_iter()
        .map(|&eta| (eta, f(eta)))
        .reduce(|| (f64::NAN, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
    HotspotRow {
        t,
        argmax_log_r: argmax,
        max_value,
        expected_log_r: expected,
        cell,
    }
}

/// Hotspot of the kernel solution for a datum symmetric in `y` about 0,
/// whose maximum must sit at `log r = -(N-2)t`.
pub fn solution_hotspot(u0: &InitialDatum, t: f64) -> Result<HotspotRow> {
    let flow = HeatFlow::new(u0)?;
    let shift = u0.dim.drift() * t;
    Ok(grid_hotspot(|eta| flow.eval(eta + shift, t).0, t, u0.dim))
}

/// Hotspot of the profile `F` itself.
pub fn profile_hotspot(t: f64, dim: Dimension) -> HotspotRow {
    grid_hotspot(|eta| gaussian_kernel_unchecked(eta + dim.drift() * t, t), t, dim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{kernel_trajectory, GridPolicy};
    use std::f64::consts::{E, TAU};

    const D3: Dimension = Dimension::THREE;

    fn traj(u0: &InitialDatum, times: &[f64], policy: &GridPolicy) -> SolutionTrajectory {
        kernel_trajectory(u0, times, policy).unwrap()
    }

    #[test]
    fn drift_of_kernel_path_is_tiny() {
        let u0 = InitialDatum::annulus_indicator(1.0, E, 1.0, D3).unwrap();
        let policy = GridPolicy::around(&u0, 12.0, 4096);
        let d = conservation_drift(&traj(&u0, &[0.5, 5.0, 50.0], &policy)).unwrap();
        assert!(d < 1e-8, "drift {d}");
        let zero = InitialDatum::annulus_indicator(1.0, E, 0.0, D3).unwrap();
        assert_eq!(conservation_drift(&traj(&zero, &[1.0], &policy)).unwrap(), 0.0);
    }

    #[test]
    fn contraction_of_identical_and_ordered_pairs() {
        let a = InitialDatum::annulus_indicator(1.0, E, 1.0, D3).unwrap();
        let b = InitialDatum::annulus_indicator(0.8, 3.0, 1.5, D3).unwrap();
        let policy = GridPolicy::Window {
            lo: -1.0,
            hi: 2.0,
            c: 12.0,
            points: 2048,
        };
        let ta = traj(&a, &[0.2, 1.0], &policy);
        let tb = traj(&b, &[0.2, 1.0], &policy);
        let same = contraction_check(&ta, &ta).unwrap();
        assert!(same.values.iter().all(|&v| v == 0.0));
        let ordered = contraction_check(&ta, &tb).unwrap();
        assert!(ordered.values.iter().all(|&v| v.abs() < 1e-10), "{:?}", ordered.values);
        let crossing = contraction_check(&tb, &ta).unwrap();
        assert!(crossing.nonincreasing, "{:?}", crossing.values);
        assert!(crossing.values.iter().all(|&v| v > 0.0));
        assert!(comparison_check(&ta, &tb).unwrap().ordered);
        assert!(matches!(comparison_check(&tb, &ta), Err(Error::Precondition(_))));
    }

    #[test]
    fn grid_mismatch_is_rejected() {
        let a = InitialDatum::annulus_indicator(1.0, E, 1.0, D3).unwrap();
        let t1 = traj(&a, &[1.0], &GridPolicy::around(&a, 8.0, 64));
        let t2 = traj(&a, &[1.0], &GridPolicy::around(&a, 8.0, 65));
        assert!(matches!(contraction_check(&t1, &t2), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn gap_matches_closed_form() {
        for (lo, hi) in [(0.0, PI), (0.0, TAU)] {
            let range = AngularRange::new(lo, hi).unwrap();
            let g = counterexample_gap(3.0, D3, &range).unwrap();
            let exact = counterexample_gap_exact(&range);
            assert!((g - exact).abs() < 1e-3 * exact, "{g} vs {exact}");
        }
        let point = AngularRange::point(1.0).unwrap();
        assert_eq!(counterexample_gap(1.0, D3, &point).unwrap(), 0.0);
    }

    #[test]
    fn positivity_of_annulus_datum() {
        let u0 = InitialDatum::annulus_indicator(1.0, E, 1.0, D3).unwrap();
        let report = positivity_check(&u0, 1.0, &[0.1, 1.0]).unwrap();
        assert!(report.passed, "{report:?}");
        let zero = InitialDatum::annulus_indicator(1.0, E, 0.0, D3).unwrap();
        assert!(positivity_check(&zero, 1.0, &[1.0]).unwrap().vacuous);
        assert!(positivity_check(&u0, 2.0, &[1.0]).is_err());
    }

    #[test]
    fn hotspots() {
        let row = profile_hotspot(10.0, D3);
        assert!(row.within_one_cell());
        assert!((row.max_value - 1.0 / (40.0 * PI).sqrt()).abs() < 1e-6);
        let bump = InitialDatum::gaussian_bump(0.0, 0.5, 1.0, D3).unwrap();
        assert!(solution_hotspot(&bump, 20.0).unwrap().within_one_cell());
    }
}
