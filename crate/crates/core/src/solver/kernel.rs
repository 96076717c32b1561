use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::profiles::{erfc, gaussian_kernel_unchecked, Dimension};
use crate::quadrature::{gauss_legendre, GaussLegendre};
use crate::transforms::{Core, InitialDatum, LineDatum, LineField, RadialField, TwoBranchDatum};

/// Convolution window `|σ - y| ≤ WINDOW·√t`.
pub const WINDOW: f64 = 12.0;

/// The heat flow `v(·, t) = G(·, t) * v₀` of a line datum, evaluated
/// pointwise.
///
/// The datum is split into a step between its two tails, which evolves in
/// closed form through `erfc`, and a remainder supported (up to exponential
/// envelopes) on the core interval, which is convolved by composite
/// Gauss–Legendre quadrature.
pub struct HeatFlow<'a, D: LineDatum + ?Sized> {
    datum: &'a D,
    tails: (f64, f64),
    split: f64,
    core: Core,
    breaks: Vec<f64>,
    feature: f64,
    rule: &'static GaussLegendre,
    remainder_sup: f64,
}

impl<'a, D: LineDatum + ?Sized> HeatFlow<'a, D> {
    pub fn new(datum: &'a D) -> Result<Self> {
        let tails = datum.tails();
        if !(tails.0.is_finite() && tails.1.is_finite()) {
            return Err(Error::domain("heat flow needs finite declared tails"));
        }
        let core = datum.core();
        let split = datum.split_point();
        let mut breaks = datum.breakpoints();
        breaks.push(split);
        breaks.push(core.lo);
        breaks.push(core.hi);
        breaks.retain(|&b| b >= core.lo && b <= core.hi);
        breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        breaks.dedup();
        let feature = datum.feature_scale();
        if !(feature > 0.0) {
            return Err(Error::domain("datum feature scale must be positive"));
        }
        let mut flow = HeatFlow {
            datum,
            tails,
            split,
            core,
            breaks,
            feature,
            rule: gauss_legendre(datum.panel_order()),
            remainder_sup: 0.0,
        };
        flow.remainder_sup = flow.estimate_remainder_sup();
        Ok(flow)
    }

    fn estimate_remainder_sup(&self) -> f64 {
        let mut sup: f64 = 0.0;
        for w in self.breaks.windows(2) {
            for k in 0..=64 {
                let y = w[0] + (w[1] - w[0]) * (k as f64 / 64.0);
                sup = sup.max(self.datum.remainder(y).abs());
            }
        }
        sup.max(self.core.left.amplitude).max(self.core.right.amplitude)
    }

    pub fn datum(&self) -> &D {
        self.datum
    }

    /// `(v(y, t), error bound)` for `t > 0`.
    pub fn eval(&self, y: f64, t: f64) -> (f64, f64) {
        let sq = t.sqrt();
        let (cl, cr) = self.tails;
        let z = (y - self.split) / (2.0 * sq);
        let mut value = 0.5 * cl * erfc(z) + 0.5 * cr * erfc(-z);

        let a = self.core.lo.max(y - WINDOW * sq);
        let b = self.core.hi.min(y + WINDOW * sq);
        let panel = 0.5 * sq.min(self.feature);
        if a < b {
            for w in self.breaks.windows(2) {
                let p = w[0].max(a);
                let q = w[1].min(b);
                if p >= q {
                    continue;
                }
                let n = ((q - p) / panel).ceil().max(1.0) as usize;
                let h = (q - p) / n as f64;
                for k in 0..n {
                    let lo = p + k as f64 * h;
                    value += self.rule.integrate(lo, lo + h, |s| {
                        gaussian_kernel_unchecked(y - s, t) * self.datum.remainder(s)
                    });
                }
            }
        }

        let mut bound = 0.0;
        let cut = 0.5 * erfc(WINDOW / 2.0) * self.remainder_sup;
        if y - WINDOW * sq > self.core.lo {
            bound += cut;
        }
        if y + WINDOW * sq < self.core.hi {
            bound += cut;
        }
        let spread = (4.0 * PI * t).sqrt();
        for env in [self.core.left, self.core.right] {
            if !env.is_exact() {
                bound += env.amplitude * (1.0 / (env.rate * spread)).min(1.0);
            }
        }
        (value, bound + 4.0 * f64::EPSILON * value.abs())
    }

    /// `v(y, t)` at every grid point, in parallel; returns the field and
    /// the largest pointwise error bound.
    pub fn solve(&self, t: f64, grid: Vec<f64>) -> Result<(LineField, f64)> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::domain(format!("time must be nonnegative, got {t}")));
        }
        let t0 = self.datum.time();
        if t == 0.0 {
            let field = LineField::from_fn(grid, t0, self.tails, |y| self.datum.value(y))?;
            return Ok((field, 0.0));
        }
        let evals: Vec<(f64, f64)> = grid.par_iter().map(|&y| self.eval(y, t)).collect();
        let bound = evals.iter().map(|e| e.1).fold(0.0, f64::max);
        let values = evals.into_iter().map(|e| e.0).collect();
        Ok((LineField::new(grid, values, t0 + t, self.tails)?, bound))
    }
}

/// `v(·, t)` for a line datum (including a sampled [`LineField`]) on `grid`.
pub fn heat1d_solve<D: LineDatum + ?Sized>(v0: &D, t: f64, grid: Vec<f64>) -> Result<LineField> {
    Ok(HeatFlow::new(v0)?.solve(t, grid)?.0)
}

/// Radial solution `u(r, t) = v(log r + (N-2)t, t)` of the singular
/// equation at the given radii. In `N = 2` the drift vanishes.
pub fn solve_radial(u0: &InitialDatum, t: f64, radii: Vec<f64>) -> Result<RadialField> {
    let dim = u0.dim;
    let shift = dim.drift() * t;
    let flow = HeatFlow::new(u0)?;
    let grid: Vec<f64> = radii.iter().map(|r| r.ln() + shift).collect();
    let (line, _) = flow.solve(t, grid)?;
    let (origin, outer) = u0.tails();
    RadialField::new(radii, line.values().to_vec(), t, dim, origin, outer)
}

/// The two half-line solutions of an `N = 1` problem; the origin
/// disconnects the line and each side evolves on its own.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfLineSolution {
    pub left: RadialField,
    pub right: RadialField,
}

impl HalfLineSolution {
    /// Samples as `(x, u(x, t))` pairs sorted by `x`, the left branch at
    /// negative `x`.
    pub fn samples(&self) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = self
            .left
            .radii()
            .iter()
            .zip(self.left.values())
            .rev()
            .map(|(r, v)| (-r, *v))
            .collect();
        out.extend(self.right.radii().iter().zip(self.right.values()).map(|(r, v)| (*r, *v)));
        out
    }
}

pub fn solve_two_branch(u0: &TwoBranchDatum, t: f64, radii: Vec<f64>) -> Result<HalfLineSolution> {
    Ok(HalfLineSolution {
        left: solve_radial(&u0.left, t, radii.clone())?,
        right: solve_radial(&u0.right, t, radii)?,
    })
}

/// How the spatial grid of each snapshot is chosen.
#[derive(Clone)]
pub enum GridPolicy {
    Fixed(Vec<f64>),
    /// `points` nodes on `[lo - c√t, hi + c√t]`.
    Window { lo: f64, hi: f64, c: f64, points: usize },
    Custom(Arc<dyn Fn(f64) -> Vec<f64> + Send + Sync>),
}

impl fmt::Debug for GridPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridPolicy::Fixed(g) => write!(f, "Fixed({} nodes)", g.len()),
            GridPolicy::Window { lo, hi, c, points } => {
                write!(f, "Window {{ lo: {lo}, hi: {hi}, c: {c}, points: {points} }}")
            }
            GridPolicy::Custom(_) => write!(f, "Custom"),
        }
    }
}

impl GridPolicy {
    /// Window around the core of `datum`.
    pub fn around<D: LineDatum + ?Sized>(datum: &D, c: f64, points: usize) -> Self {
        let core = datum.core();
        GridPolicy::Window {
            lo: core.lo,
            hi: core.hi,
            c,
            points,
        }
    }

    pub fn grid(&self, t: f64) -> Vec<f64> {
        match self {
            GridPolicy::Fixed(g) => g.clone(),
            GridPolicy::Window { lo, hi, c, points } => {
                let w = c * t.sqrt();
                crate::transforms::uniform_grid(lo - w, hi + w, *points)
            }
            GridPolicy::Custom(f) => f(t),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Kernel,
    CrankNicolson,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Kernel => "kernel",
            Scheme::CrankNicolson => "crank_nicolson",
        })
    }
}

/// A snapshot is a line field `v(y, t)` (kernel path) or a radial field
/// `u(r, t)` (annulus path).
#[derive(Debug, Clone, PartialEq)]
pub enum Snapshot {
    Line(LineField),
    Radial(RadialField),
}

impl Snapshot {
    pub fn time(&self) -> f64 {
        match self {
            Snapshot::Line(l) => l.time(),
            Snapshot::Radial(r) => r.time(),
        }
    }

    pub fn values(&self) -> &[f64] {
        match self {
            Snapshot::Line(l) => l.values(),
            Snapshot::Radial(r) => r.values(),
        }
    }

    /// Radii of the nodes.
    pub fn radii(&self, dim: Dimension) -> Vec<f64> {
        match self {
            Snapshot::Line(l) => {
                let shift = dim.drift() * l.time();
                l.grid().iter().map(|y| (y - shift).exp()).collect()
            }
            Snapshot::Radial(r) => r.radii().to_vec(),
        }
    }

    /// `η = log r` of the nodes.
    pub fn log_radii(&self, dim: Dimension) -> Vec<f64> {
        match self {
            Snapshot::Line(l) => {
                let shift = dim.drift() * l.time();
                l.grid().iter().map(|y| y - shift).collect()
            }
            Snapshot::Radial(r) => r.radii().iter().map(|x| x.ln()).collect(),
        }
    }

    pub fn to_radial(&self, dim: Dimension) -> Result<RadialField> {
        match self {
            Snapshot::Line(l) => crate::transforms::from_log_coords(l, dim),
            Snapshot::Radial(r) => Ok(r.clone()),
        }
    }
}

/// Snapshots of one solution at increasing times.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionTrajectory {
    pub scheme: Scheme,
    pub dim: Dimension,
    /// The analytic initial datum, when known.
    pub datum: Option<InitialDatum>,
    pub snapshots: Vec<Snapshot>,
    /// Largest pointwise error bound reported by the scheme (zero when the
    /// scheme does not certify one).
    pub error_bound: f64,
}

impl SolutionTrajectory {
    pub fn new(
        scheme: Scheme,
        dim: Dimension,
        datum: Option<InitialDatum>,
        snapshots: Vec<Snapshot>,
        error_bound: f64,
    ) -> Result<Self> {
        if snapshots.windows(2).any(|w| w[1].time() <= w[0].time()) {
            return Err(Error::domain("snapshot times must be strictly increasing"));
        }
        Ok(SolutionTrajectory {
            scheme,
            dim,
            datum,
            snapshots,
            error_bound,
        })
    }

    pub fn times(&self) -> Vec<f64> {
        self.snapshots.iter().map(Snapshot::time).collect()
    }

    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    pub fn min_value(&self) -> f64 {
        self.snapshots
            .iter()
            .flat_map(|s| s.values().iter().copied())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.snapshots
            .iter()
            .flat_map(|s| s.values().iter().copied())
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Kernel-path trajectory: `v(·, t)` at each positive time on the grid
/// chosen by `policy`.
pub fn kernel_trajectory(u0: &InitialDatum, times: &[f64], policy: &GridPolicy) -> Result<SolutionTrajectory> {
    if times.is_empty() {
        return Err(Error::domain("at least one snapshot time is needed"));
    }
    if times.iter().any(|&t| !(t > 0.0 && t.is_finite())) {
        return Err(Error::domain("snapshot times must be positive"));
    }
    let flow = HeatFlow::new(u0)?;
    let mut snapshots = Vec::with_capacity(times.len());
    let mut bound: f64 = 0.0;
    for &t in times {
        let (field, b) = flow.solve(t, policy.grid(t))?;
        bound = bound.max(b);
        snapshots.push(Snapshot::Line(field));
    }
    SolutionTrajectory::new(Scheme::Kernel, u0.dim, Some(u0.clone()), snapshots, bound)
}

/// `ω₁ ∫ v(y, t) dy` evaluated directly from the flow by composite
/// quadrature over `[lo - 12√t, hi + 12√t]`; equals the weighted mass of
/// `u(·, t)`.
pub fn flow_mass(u0: &InitialDatum, t: f64) -> Result<f64> {
    if u0.tails() != (0.0, 0.0) {
        return Err(Error::Precondition("mass is infinite for data with nonzero tails".into()));
    }
    let flow = HeatFlow::new(u0)?;
    let core = u0.core();
    let sq = t.sqrt();
    let a = core.lo - WINDOW * sq;
    let b = core.hi + WINDOW * sq;
    let panel = 0.5 * sq.min(u0.feature_scale()).max(1e-3);
    let n = ((b - a) / panel).ceil() as usize;
    let h = (b - a) / n as f64;
    let rule = gauss_legendre(20);
    let panels: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|k| {
            let lo = a + k as f64 * h;
            rule.integrate(lo, lo + h, |y| flow.eval(y, t).0)
        })
        .collect();
    let total: f64 = panels.iter().sum();
    Ok(u0.dim.sphere_area() * total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::{gaussian_kernel, profile_e, profile_f};
    use crate::transforms::{uniform_grid, weighted_mass, Tabulated};
    use std::f64::consts::E;

    const D3: Dimension = Dimension::THREE;

    fn gaussian_field(t0: f64) -> LineField {
        LineField::from_fn(uniform_grid(-30.0, 30.0, 3001), t0, (0.0, 0.0), |y| {
            gaussian_kernel(y, t0).unwrap()
        })
        .unwrap()
    }

    #[test]
    fn semigroup_on_sampled_gaussian() {
        let v0 = gaussian_field(1.0);
        let grid = uniform_grid(-10.0, 10.0, 81);
        let v = heat1d_solve(&v0, 2.0, grid.clone()).unwrap();
        assert_eq!(v.time(), 3.0);
        for (y, val) in grid.iter().zip(v.values()) {
            assert!((val - gaussian_kernel(*y, 3.0).unwrap()).abs() < 1e-9, "y = {y}");
        }
    }

    #[test]
    fn step_evolves_to_erfc_front() {
        let k = 1.7;
        let step = Tabulated::new(vec![0.5, 1.0], vec![k, k], k, 0.0).unwrap();
        let u0 = InitialDatum::tabulated(step, D3).unwrap();
        for t in [0.1, 1.0, 30.0] {
            for y in [-3.0, -0.2, 0.0, 0.4, 5.0] {
                let (v, bound) = HeatFlow::new(&u0).unwrap().eval(y, t);
                let exact = 0.5 * k * erfc(y / (2.0 * t.sqrt()));
                assert!((v - exact).abs() < 1e-13, "t={t} y={y}: {v} vs {exact}");
                assert!(bound < 1e-9);
            }
        }
    }

    #[test]
    fn zero_and_constant_data() {
        let zero = InitialDatum::annulus_indicator(1.0, 2.0, 0.0, D3).unwrap();
        let u = solve_radial(&zero, 1.0, vec![0.5, 1.0, 4.0]).unwrap();
        assert!(u.values().iter().all(|&x| x == 0.0));
        let c = Tabulated::new(vec![0.5, 2.0], vec![2.0, 2.0], 2.0, 2.0).unwrap();
        let constant = InitialDatum::tabulated(c, D3).unwrap();
        let u = solve_radial(&constant, 3.0, vec![1e-3, 0.5, 1.0, 40.0]).unwrap();
        for v in u.values() {
            assert!((v - 2.0).abs() < 1e-13);
        }
    }

    #[test]
    fn smooth_erfc_datum_has_closed_form_flow() {
        // (K/2) erfc(y) evolves to (K/2) erfc(y / 2√(t + 1/4))
        let u0 = InitialDatum::smooth_erfc_like(2.0, 0.0, D3).unwrap();
        let flow = HeatFlow::new(&u0).unwrap();
        for t in [0.05, 1.0, 100.0] {
            for y in [-20.0, -1.0, 0.0, 0.7, 15.0] {
                let exact = erfc(y / (2.0 * (t + 0.25f64).sqrt()));
                let (v, bound) = flow.eval(y, t);
                assert!((v - exact).abs() < 1e-12, "t={t} y={y}");
                assert!(bound < 1e-9);
            }
        }
    }

    #[test]
    fn radial_solution_of_sampled_profile() {
        // F(·, t₀) as initial datum gives F(·, t₀ + t)
        let t0 = 0.5;
        let radii: Vec<f64> = uniform_grid(-12.0, 12.0, 4801).into_iter().map(f64::exp).collect();
        let values: Vec<f64> = radii.iter().map(|&r| profile_f(r, t0, D3).unwrap()).collect();
        let table = Tabulated::new(radii, values, 0.0, 0.0).unwrap();
        // the log-profile at time t₀ sits at y = log r + t₀
        let u0 = InitialDatum::tabulated(table, D3).unwrap();
        let t = 1.0;
        let check: Vec<f64> = [0.05, 0.2, 0.5, 1.0, 3.0].to_vec();
        let u = solve_radial(&u0, t, check.clone()).unwrap();
        for (r, v) in check.iter().zip(u.values()) {
            // v₀(y) = G(y + t₀, t₀): shifted by the drift accumulated before t = 0
            let y = r.ln() + t;
            let exact = gaussian_kernel(y + t0, t0 + t).unwrap();
            assert!((v - exact).abs() < 1e-5, "r={r}: {v} vs {exact}");
        }
    }

    #[test]
    fn step_datum_approaches_e_profile() {
        let u0 = InitialDatum::step_to_k(1.0, E, 4.0, D3).unwrap();
        let t = 400.0;
        let radii: Vec<f64> = uniform_grid(-600.0, -200.0, 201).into_iter().map(f64::exp).collect();
        let u = solve_radial(&u0, t, radii.clone()).unwrap();
        let err = radii
            .iter()
            .zip(u.values())
            .map(|(r, v)| (v - profile_e(*r, t, D3, 1.0).unwrap()).abs())
            .fold(0.0, f64::max);
        assert!(err < 0.05 && err > 0.0);
    }

    #[test]
    fn mass_is_conserved_by_the_flow() {
        let u0 = InitialDatum::annulus_indicator(1.0, E, 1.0, D3).unwrap();
        let m0 = weighted_mass(&u0).value().unwrap();
        for t in [0.01, 1.0, 100.0] {
            let m = flow_mass(&u0, t).unwrap();
            assert!(((m - m0) / m0).abs() < 1e-10, "t={t}: {m} vs {m0}");
        }
    }

    #[test]
    fn two_branch_solution_orders_samples() {
        let l = InitialDatum::annulus_indicator(1.0, E, 0.25, Dimension::ONE).unwrap();
        let r = InitialDatum::annulus_indicator(1.0, E, 0.75, Dimension::ONE).unwrap();
        let tb = TwoBranchDatum::new(l, r).unwrap();
        let sol = solve_two_branch(&tb, 1.0, vec![0.5, 1.0, 2.0]).unwrap();
        let xs: Vec<f64> = sol.samples().iter().map(|p| p.0).collect();
        assert_eq!(xs, vec![-2.0, -1.0, -0.5, 0.5, 1.0, 2.0]);
        let s = sol.samples();
        assert!((s[1].1 * 3.0 - s[4].1).abs() < 1e-14);
    }

    #[test]
    fn trajectory_validation() {
        let u0 = InitialDatum::annulus_indicator(1.0, E, 1.0, D3).unwrap();
        let policy = GridPolicy::around(&u0, 8.0, 64);
        assert!(kernel_trajectory(&u0, &[], &policy).is_err());
        assert!(kernel_trajectory(&u0, &[0.0, 1.0], &policy).is_err());
        let traj = kernel_trajectory(&u0, &[0.5, 1.0], &policy).unwrap();
        assert_eq!(traj.times(), vec![0.5, 1.0]);
        assert!(traj.min_value() >= 0.0);
        assert!(traj.max_value() <= 1.0);
    }
}
