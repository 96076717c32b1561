//! The acceptance suite: twelve numbered criteria, each a pure function
//! returning a [`Check`], run by `cdh verify` and the `acceptance` test
//! target alike.

use std::f64::consts::{E, PI, TAU};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::checks::{
    comparison_check, conservation_drift, contraction_check, counterexample_gap, counterexample_gap_exact,
    positivity_check, profile_hotspot, solution_hotspot,
};
use super::series::{convergence_error, fit_rate, geometric_times, two_branch_convergence_error, ErrorSeries, Target};
use crate::error::{Error, Result};
use crate::profiles::{erfc, profile_e, profile_f, profile_fn_cartesian, AngularRange, Dimension};
use crate::quadrature::adaptive;
use crate::solver::{
    annulus_error_vs_kernel, doubling_schedule, kernel_trajectory, nested_annulus_limit, pde_residual, AnnulusProblem,
    GridPolicy, Sampler, SolutionTrajectory,
};
use crate::transforms::{
    condition_i1, uniform_grid, weighted_mass, weighted_mass_radial, InitialDatum, LineDatum, Tabulated,
    TwoBranchDatum,
};

/// Verdict of one criterion before timing is applied.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Check {
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    pub limit: Option<Duration>,
    pub run: fn() -> Result<Check>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub runtime: Duration,
    pub limit: Option<Duration>,
}

impl Outcome {
    /// One line of the verification table.
    pub fn line(&self) -> String {
        let limit = self
            .limit
            .map(|l| format!(" / {} s", l.as_secs()))
            .unwrap_or_default();
        format!(
            "[{}] {:>2} {:<26} {:>7.2} s{}  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.runtime.as_secs_f64(),
            limit,
            self.detail
        )
    }
}

const fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

pub fn criteria() -> Vec<Criterion> {
    vec![
        Criterion { id: 1, name: "radial_convergence_F", limit: secs(30), run: radial_convergence },
        Criterion { id: 2, name: "rate_step_to_K", limit: secs(60), run: rate_step_to_k },
        Criterion { id: 3, name: "rate_smooth_erfc_like", limit: secs(60), run: rate_smooth_erfc },
        Criterion { id: 4, name: "mass_conservation", limit: None, run: mass_conservation },
        Criterion { id: 5, name: "contraction_comparison", limit: None, run: contraction_comparison },
        Criterion { id: 6, name: "counterexample_gap", limit: secs(10), run: gap },
        Criterion { id: 7, name: "exact_solution_residuals", limit: secs(10), run: residuals },
        Criterion { id: 8, name: "sup_norm_hotspot", limit: None, run: sup_norm_hotspot },
        Criterion { id: 9, name: "annulus_construction", limit: secs(120), run: annulus_construction },
        Criterion { id: 10, name: "positivity_origin", limit: None, run: positivity },
        Criterion { id: 11, name: "erfc_accuracy", limit: None, run: || erfc_accuracy(erfc) },
        Criterion { id: 12, name: "two_branch_n1", limit: None, run: two_branch },
    ]
}

/// Runs one criterion; errors count as failures and exceeding the runtime
/// limit fails an otherwise passing criterion.
pub fn run_criterion(c: &Criterion) -> Outcome {
    let start = Instant::now();
    let result = (c.run)();
    let runtime = start.elapsed();
    let (mut passed, mut detail) = match result {
        Ok(check) => (check.passed, check.detail),
        Err(e) => (false, format!("error: {e}")),
    };
    if let Some(limit) = c.limit {
        if runtime > limit {
            passed = false;
            detail = format!("{detail}; exceeded {} s", limit.as_secs());
        }
    }
    Outcome {
        id: c.id,
        name: c.name,
        passed,
        detail,
        runtime,
        limit: c.limit,
    }
}

/// Runs the criteria whose name contains `filter`, in order.
pub fn run_all(filter: Option<&str>) -> Vec<Outcome> {
    criteria()
        .iter()
        .filter(|c| filter.is_none_or(|f| c.name.contains(f)))
        .map(run_criterion)
        .collect()
}

fn decreasing_series_check(series: &ErrorSeries) -> Check {
    let ratio = series.final_ratio();
    let decreasing = series.is_strictly_decreasing();
    let errors: Vec<String> = series.errors().iter().map(|e| format!("{e:.3e}")).collect();
    Check::new(
        decreasing && ratio < 0.05,
        format!("e = [{}], final/initial = {ratio:.4}", errors.join(", ")),
    )
}

/// Times of the rate fits: 8 geometric samples over `[10, 10⁴]`.
pub fn rate_times() -> Vec<f64> {
    geometric_times(10.0, 1e4, 8)
}

fn rate_check(u0: &InitialDatum, lo: f64, hi: f64) -> Result<Check> {
    let series = convergence_error(u0, Target::E, &rate_times(), 0.0)?;
    let fit = fit_rate(&series)?;
    Ok(Check::new(
        (lo..=hi).contains(&fit.exponent) && fit.r_squared >= 0.98,
        format!(
            "exponent {:.4} (want [{lo}, {hi}]), r² = {:.5}",
            fit.exponent, fit.r_squared
        ),
    ))
}

pub fn radial_convergence() -> Result<Check> {
    let u0 = InitialDatum::annulus_indicator(1.0, E, 1.0, Dimension::THREE)?;
    let series = convergence_error(&u0, Target::F, &[1.0, 10.0, 100.0, 1000.0], 0.5)?;
    Ok(decreasing_series_check(&series))
}

pub fn rate_step_to_k() -> Result<Check> {
    let u0 = InitialDatum::step_to_k(1.0, E, 4.0, Dimension::THREE)?;
    if condition_i1(&u0, 1.0).is_infinite() {
        return Err(Error::Precondition("I₁ is infinite".into()));
    }
    rate_check(&u0, -0.65, -0.45)
}

pub fn rate_smooth_erfc() -> Result<Check> {
    let u0 = InitialDatum::smooth_erfc_like(1.0, 0.0, Dimension::THREE)?;
    if crate::transforms::condition_i2(&u0).is_infinite() {
        return Err(Error::Precondition("I₂ is infinite".into()));
    }
    rate_check(&u0, -1.7, -1.3)
}

/// Times of the conservation check.
pub const CONSERVATION_TIMES: [f64; 8] = [0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0];

/// Data of the five families used by the mass identity check.
pub fn family_samples(dim: Dimension) -> Result<Vec<InitialDatum>> {
    let table = Tabulated::new(vec![0.5, 1.0, 2.0, 3.0, 4.0], vec![0.0, 1.0, 0.5, 0.25, 0.0], 0.0, 0.0)?;
    Ok(vec![
        InitialDatum::annulus_indicator(1.0, E, 1.0, dim)?,
        InitialDatum::gaussian_bump(0.3, 0.4, 1.5, dim)?,
        InitialDatum::step_to_k(1.0, E, 4.0, dim)?,
        InitialDatum::smooth_erfc_like(1.0, 0.0, dim)?,
        InitialDatum::tabulated(table, dim)?,
    ])
}

/// `ω₁[∫₀¹|K - u₀(r)|/r dr + ∫₁^∞ u₀(r)/r dr]` in the radial variable,
/// over `r ∈ [e^{-40}, e^{40}]` split at `e^k`.
pub fn i1_radial_route(u0: &InitialDatum, k: f64) -> f64 {
    let mut acc = 0.0;
    for j in -40..40 {
        let (a, b) = ((j as f64).exp(), ((j + 1) as f64).exp());
        let (v, _) = if j < 0 {
            adaptive(|r| (k - u0.value_at_radius(r)).abs() / r, a, b, 1e-15)
        } else {
            adaptive(|r| u0.value_at_radius(r).abs() / r, a, b, 1e-15)
        };
        acc += v;
    }
    u0.dim.sphere_area() * acc
}

pub fn mass_conservation() -> Result<Check> {
    let u0 = InitialDatum::annulus_indicator(1.0, E, 1.0, Dimension::THREE)?;
    let traj = kernel_trajectory(&u0, &CONSERVATION_TIMES, &GridPolicy::around(&u0, 12.0, 4096))?;
    let drift = conservation_drift(&traj)?;
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    for n in [3, 4, 5] {
        let dim = Dimension::new(n)?;
        for datum in family_samples(dim)? {
            let line = weighted_mass(&datum);
            let radial = weighted_mass_radial(&datum, (-40f64).exp(), 40f64.exp());
            match (line.value(), radial.value()) {
                (Some(a), Some(b)) => {
                    let rel = (a - b).abs() / b.abs();
                    worst = worst.max(rel);
                    if rel > 1e-8 {
                        failures.push(format!("{} N={n}: {rel:.2e}", datum.family_name()));
                    }
                }
                (None, None) => {
                    let k = datum.origin_value();
                    let a = condition_i1(&datum, k).value_or_inf();
                    let b = i1_radial_route(&datum, k);
                    let rel = (a - b).abs() / b.abs();
                    worst = worst.max(rel);
                    if rel > 1e-8 {
                        failures.push(format!("{} N={n} I₁: {rel:.2e}", datum.family_name()));
                    }
                }
                _ => failures.push(format!("{} N={n}: routes disagree on finiteness", datum.family_name())),
            }
        }
    }
    Ok(Check::new(
        drift <= 1e-8 && failures.is_empty(),
        format!(
            "drift {drift:.2e} over t ≤ 100; worst identity error {worst:.2e}{}",
            if failures.is_empty() { String::new() } else { format!("; {}", failures.join(", ")) }
        ),
    ))
}

/// Times of the contraction and comparison checks in dimension `N`, up to
/// `1/(N-2)²`: the `L¹₂` weight moves the mass by `2(N-2)t` against the
/// kernel window `12√t`, and this keeps it five widths inside.
pub fn contraction_times(dim: Dimension) -> Vec<f64> {
    let t_max = 1.0 / (dim.drift() * dim.drift());
    [0.1, 0.25, 0.5, 0.75, 1.0].iter().map(|f| f * t_max).collect()
}

/// A random annulus indicator or Gaussian bump.
pub fn random_datum<R: Rng>(rng: &mut R, dim: Dimension) -> Result<InitialDatum> {
    if rng.gen_bool(0.5) {
        let r1 = rng.gen_range(0.5..1.5);
        let r2 = r1 * rng.gen_range(0.3f64..1.5).exp();
        InitialDatum::annulus_indicator(r1, r2, rng.gen_range(0.2..2.0), dim)
    } else {
        InitialDatum::gaussian_bump(rng.gen_range(-1.0..1.0), rng.gen_range(0.2..0.8), rng.gen_range(0.2..2.0), dim)
    }
}

/// A datum dominating `u0`: a wider, taller annulus, or a taller bump with
/// the same centre and width.
pub fn dominating_datum<R: Rng>(rng: &mut R, u0: &InitialDatum) -> Result<InitialDatum> {
    use crate::transforms::DatumFamily::*;
    match u0.family {
        AnnulusIndicator { r1, r2, height } => InitialDatum::annulus_indicator(
            r1 * rng.gen_range(0.7..1.0),
            r2 * rng.gen_range(1.0..1.4),
            height + rng.gen_range(0.0..1.0),
            u0.dim,
        ),
        GaussianBumpInY { center, width, height } => {
            InitialDatum::gaussian_bump(center, width, height + rng.gen_range(0.0..1.0), u0.dim)
        }
        _ => Err(Error::Unsupported(format!("no dominating datum for {}", u0.family_name()))),
    }
}

/// Common grid for a pair of data up to `t_max`: the cores widened by
/// `12√t`, and on the right by `2(N-2)t` where the `L¹₂` weight moves the
/// mass.
pub fn pair_policy(a: &InitialDatum, b: &InitialDatum, points: usize) -> GridPolicy {
    let lo = a.core().lo.min(b.core().lo);
    let hi = a.core().hi.max(b.core().hi);
    let drift = a.dim.drift();
    GridPolicy::Custom(Arc::new(move |t: f64| {
        let w = 12.0 * t.sqrt();
        uniform_grid(lo - w, hi + 2.0 * drift * t + w, points)
    }))
}

fn pair_trajectories(a: &InitialDatum, b: &InitialDatum) -> Result<(SolutionTrajectory, SolutionTrajectory)> {
    let policy = pair_policy(a, b, 4096);
    let times = contraction_times(a.dim);
    Ok((kernel_trajectory(a, &times, &policy)?, kernel_trajectory(b, &times, &policy)?))
}

/// Seed of the randomized suites.
pub const SEED: u64 = 20_240_917;

pub fn contraction_comparison() -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst_increase = f64::NEG_INFINITY;
    let mut worst_violation = f64::NEG_INFINITY;
    let mut bad = Vec::new();
    for k in 0..10 {
        let dim = Dimension::new(rng.gen_range(3..=5))?;
        let a = random_datum(&mut rng, dim)?;
        let b = random_datum(&mut rng, dim)?;
        let (ta, tb) = pair_trajectories(&a, &b)?;
        let series = contraction_check(&ta, &tb)?;
        worst_increase = worst_increase.max(series.max_increase);
        if !series.nonincreasing {
            bad.push(format!("pair {k} increases by {:.2e}", series.max_increase));
        }
        let c = dominating_datum(&mut rng, &a)?;
        let (ta, tc) = pair_trajectories(&a, &c)?;
        let report = comparison_check(&ta, &tc)?;
        worst_violation = worst_violation.max(report.max_violation);
        if !report.ordered {
            bad.push(format!("ordered pair {k} violates by {:.2e}", report.max_violation));
        }
    }
    Ok(Check::new(
        bad.is_empty(),
        format!(
            "max increase {worst_increase:.2e}, max ordering violation {worst_violation:.2e}{}",
            if bad.is_empty() { String::new() } else { format!("; {}", bad.join(", ")) }
        ),
    ))
}

pub fn gap() -> Result<Check> {
    let range = AngularRange::new(0.0, TAU)?;
    let exact = counterexample_gap_exact(&range);
    let mut worst: f64 = 0.0;
    let mut values = Vec::new();
    for t in [1.0, 10.0, 100.0] {
        let g = counterexample_gap(t, Dimension::THREE, &range)?;
        worst = worst.max((g - exact).abs() / exact);
        values.push(format!("{g:.5}"));
    }
    Ok(Check::new(
        worst < 0.01,
        format!("g = [{}] vs {exact:.5}, worst rel. dev. {worst:.2e}", values.join(", ")),
    ))
}

/// Residual steps `h` and `h/2`.
pub const RESIDUAL_STEPS: (f64, f64) = (1e-2, 5e-3);

/// `max_k |res_h| / max_k |res_{h/2}|` over the points.
fn residual_ratio<F: Fn(f64) -> Result<f64>>(res: F) -> Result<f64> {
    let (h1, h2) = RESIDUAL_STEPS;
    Ok(res(h1)? / res(h2)?)
}

pub fn residuals() -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let d3 = Dimension::THREE;
    let radial: Vec<(f64, f64)> = (0..20)
        .map(|_| (rng.gen_range(0.4..1.5), rng.gen_range(0.5..2.0)))
        .collect();
    let cartesian: Vec<([f64; 3], f64)> = (0..20)
        .map(|_| {
            let r: f64 = rng.gen_range(0.4..1.5);
            let phi: f64 = rng.gen_range(1.0..TAU - 1.0);
            let polar: f64 = rng.gen_range(0.5..PI - 0.5);
            let x = [r * polar.sin() * phi.cos(), r * polar.sin() * phi.sin(), r * polar.cos()];
            (x, rng.gen_range(0.5..2.0))
        })
        .collect();
    let range = AngularRange::default();
    let f = |r: f64, t: f64| profile_f(r, t, d3).unwrap_or(f64::NAN);
    let e = |r: f64, t: f64| profile_e(r, t, d3, 2.0).unwrap_or(f64::NAN);
    let fnc = |x: [f64; 3], t: f64| profile_fn_cartesian(x, t, &range).unwrap_or(f64::NAN);
    let max_radial = |u: &(dyn Fn(f64, f64) -> f64 + Sync), h: f64| -> Result<f64> {
        radial.iter().try_fold(0.0f64, |m, &(r, t)| {
            Ok(m.max(pde_residual(Sampler::Radial(u), &[r], t, d3, h)?.abs()))
        })
    };
    let ratios = [
        ("F", residual_ratio(|h| max_radial(&f, h))?),
        ("E", residual_ratio(|h| max_radial(&e, h))?),
        (
            "F_N",
            residual_ratio(|h| {
                cartesian.iter().try_fold(0.0f64, |m, &(x, t)| {
                    Ok(m.max(pde_residual(Sampler::Cartesian(&fnc), &x, t, d3, h)?.abs()))
                })
            })?,
        ),
    ];
    let passed = ratios.iter().all(|(_, q)| (3.5..=4.5).contains(q));
    let detail: Vec<String> = ratios.iter().map(|(n, q)| format!("{n}: {q:.3}")).collect();
    Ok(Check::new(passed, format!("ratios {}", detail.join(", "))))
}

pub fn sup_norm_hotspot() -> Result<Check> {
    let dim = Dimension::THREE;
    let mut ok = true;
    let mut parts = Vec::new();
    for t in [1.0, 10.0, 100.0] {
        let row = profile_hotspot(t, dim);
        let peak = 1.0 / (4.0 * PI * t).sqrt();
        let tol = (1.0 - (-row.cell * row.cell / (16.0 * t)).exp()) * peak;
        let dev = peak - row.max_value;
        ok &= (0.0..=tol).contains(&dev) && row.within_one_cell();
        parts.push(format!(
            "t={t}: max dev {dev:.1e} (tol {tol:.1e}), argmax {:.4} vs {:.4}",
            row.argmax_log_r, row.expected_log_r
        ));
    }
    let bump = InitialDatum::gaussian_bump(0.0, 0.5, 1.0, dim)?;
    for t in [10.0, 100.0] {
        let row = solution_hotspot(&bump, t)?;
        ok &= row.within_one_cell();
        parts.push(format!("solution t={t}: argmax {:.4} vs {:.4}", row.argmax_log_r, row.expected_log_r));
    }
    Ok(Check::new(ok, parts.join("; ")))
}

/// Grid sizes of the order-of-convergence study on `η ∈ [-8, 8]`.
pub const ORDER_POINTS: [usize; 5] = [161, 321, 641, 1281, 2561];

/// `(h, sup error)` of Crank–Nicolson against the kernel solution at
/// `t = 0.5`, with `dt = h/2`.
pub fn annulus_order_study(u0: &InitialDatum) -> Result<Vec<(f64, f64)>> {
    ORDER_POINTS
        .iter()
        .rev()
        .map(|&n| {
            let h = 16.0 / (n - 1) as f64;
            let p = AnnulusProblem::new((-8f64).exp(), 8f64.exp(), u0.clone(), n, h / 2.0)?;
            Ok((h, annulus_error_vs_kernel(&p, 0.5)?))
        })
        .collect()
}

pub fn annulus_construction() -> Result<Check> {
    let d3 = Dimension::THREE;
    let nest_datum = InitialDatum::gaussian_bump(0.5, 0.25, 1.0, d3)?;
    let m = 32;
    let h = std::f64::consts::LN_2 / m as f64;
    let (_, report) = nested_annulus_limit(&nest_datum, &doubling_schedule(1.0 / 16.0, 16.0, 4), m, h * h, 1.0, 0.0625)?;
    let min_step = report.min_steps.iter().cloned().fold(f64::INFINITY, f64::min);
    let order_datum = InitialDatum::gaussian_bump(0.0, 0.4, 1.0, d3)?;
    let study = annulus_order_study(&order_datum)?;
    let fit = fit_rate(&ErrorSeries::new(study.clone(), 0.0)?)?;
    let passed = report.monotone && report.bound_ratio <= 1.0 && (1.8..=2.2).contains(&fit.exponent);
    Ok(Check::new(
        passed,
        format!(
            "min step {min_step:.2e}, bound ratio {:.4} (K = {:.4}), order {:.3} (r² = {:.5}), finest error {:.2e}",
            report.bound_ratio,
            report.bound.k,
            fit.exponent,
            fit.r_squared,
            study[0].1
        ),
    ))
}

pub fn positivity() -> Result<Check> {
    let u0 = InitialDatum::annulus_indicator(1.0, E, 1.0, Dimension::THREE)?;
    let report = positivity_check(&u0, 1.0, &[0.1, 1.0, 10.0])?;
    let rows: Vec<String> = report
        .rows
        .iter()
        .map(|r| format!("t={}: min {:.2e}, u(r₀/2) {:.2e}, u(0) = {}", r.t, r.min_value, r.inside_value, r.origin_value))
        .collect();
    Ok(Check::new(report.passed && !report.vacuous, rows.join("; ")))
}

/// Points of the erfc check.
pub const ERFC_POINTS: usize = 10_000;

/// `(2/√π)∫_ξ^∞ e^{-s²} ds`, truncated where the integrand drops below
/// `e^{-100}`.
pub fn erfc_oracle(xi: f64) -> f64 {
    let (v, _) = adaptive(|s| (-s * s).exp(), xi, xi.max(0.0) + 10.0, 1e-16);
    2.0 / PI.sqrt() * v
}

/// Criterion 11 for an arbitrary implementation of erfc.
pub fn erfc_accuracy(erfc_fn: fn(f64) -> f64) -> Result<Check> {
    let xs = uniform_grid(-8.0, 8.0, ERFC_POINTS);
    let (worst, at) = xs
        .iter()
        .map(|&x| ((erfc_fn(x) - erfc_oracle(x)).abs(), x))
        .fold((0.0, 0.0), |a, b| if b.0 > a.0 { b } else { a });
    Ok(Check::new(
        worst <= 1e-12,
        format!("max deviation {worst:.2e} at ξ = {at:.4}"),
    ))
}

pub fn two_branch() -> Result<Check> {
    let d1 = Dimension::ONE;
    let u0 = TwoBranchDatum::new(
        InitialDatum::annulus_indicator(1.0, E, 0.25, d1)?,
        InitialDatum::annulus_indicator(1.0, E, 0.75, d1)?,
    )?;
    let series = two_branch_convergence_error(&u0, 0.25, &[1.0, 10.0, 100.0, 1000.0], 0.5)?;
    Ok(decreasing_series_check(&series))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corrupted_erfc_fails() {
        fn bad(x: f64) -> f64 {
            erfc(x) * (1.0 + 1e-9)
        }
        assert!(!erfc_accuracy(bad).unwrap().passed);
    }

    #[test]
    fn filter_selects_by_name() {
        let names: Vec<_> = criteria().into_iter().filter(|c| c.name.contains("rate")).map(|c| c.id).collect();
        assert_eq!(names, vec![2, 3]);
    }

    #[test]
    fn oracle_matches_known_values() {
        assert!((erfc_oracle(0.0) - 1.0).abs() < 1e-15);
        assert!((erfc_oracle(1.0) - 0.157_299_207_050_285_13).abs() < 1e-15);
        assert!((erfc_oracle(-8.0) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn dominating_data_dominate() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let a = random_datum(&mut rng, Dimension::THREE).unwrap();
            let b = dominating_datum(&mut rng, &a).unwrap();
            for y in uniform_grid(-3.0, 3.0, 601) {
                assert!(a.value(y) <= b.value(y));
            }
        }
    }
}
