use crate::error::{Error, Result};
use crate::profiles::{gaussian_kernel_unchecked, profile_f, Dimension};
use crate::transforms::{InitialDatum, LineDatum, RadialField};
use crate::tridiag;

use super::kernel::{solve_radial, Scheme, Snapshot, SolutionTrajectory};

/// The Dirichlet problem on the annulus `B_{r,R} = {r < |x| < R}` with zero
/// boundary data. In `η = log|x|` it reads `V_t = V_ηη + (N-2)V_η` on
/// `(log r, log R)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnulusProblem {
    pub r_inner: f64,
    pub r_outer: f64,
    pub dim: Dimension,
    pub u0: InitialDatum,
    /// Nodes in `η`, boundary nodes included.
    pub grid_points: usize,
    pub dt: f64,
}

/// Below this level (relative to the peak) a datum counts as vanishing
/// near the boundary.
const SUPPORT_TOL: f64 = 1e-14;

impl AnnulusProblem {
    pub fn new(r_inner: f64, r_outer: f64, u0: InitialDatum, grid_points: usize, dt: f64) -> Result<Self> {
        let p = AnnulusProblem {
            r_inner,
            r_outer,
            dim: u0.dim,
            u0,
            grid_points,
            dt,
        };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        if !(self.r_inner > 0.0 && self.r_outer > self.r_inner && self.r_outer.is_finite()) {
            return Err(Error::domain(format!(
                "annulus needs 0 < r < R, got ({}, {})",
                self.r_inner, self.r_outer
            )));
        }
        if self.dim.n() < 3 {
            return Err(Error::domain("annulus problems are posed in dimension N >= 3"));
        }
        if self.grid_points < 16 {
            return Err(Error::domain(format!("need at least 16 grid points, got {}", self.grid_points)));
        }
        let span = self.span();
        if !(self.dt > 0.0 && self.dt <= span * span / 4.0) {
            return Err(Error::domain(format!("dt must lie in (0, span²/4], got {}", self.dt)));
        }
        let h = self.spacing();
        if self.dim.drift() * h > 2.0 {
            return Err(Error::domain(format!("cell Péclet number {} exceeds 2", self.dim.drift() * h)));
        }
        let (a, b) = (self.r_inner.ln(), self.r_outer.ln());
        let core = self.u0.core();
        let exact = core.left.is_exact() && core.right.is_exact();
        if exact {
            if !(core.lo > a && core.hi < b) || self.u0.tails() != (0.0, 0.0) {
                return Err(Error::domain("initial datum must be supported strictly inside the annulus"));
            }
        } else {
            let peak = (0..=400)
                .map(|k| self.u0.value(core.lo + (core.hi - core.lo) * k as f64 / 400.0).abs())
                .fold(0.0, f64::max);
            let edge = self.u0.value(a).abs().max(self.u0.value(b).abs());
            if self.u0.tails() != (0.0, 0.0) || edge > SUPPORT_TOL * peak {
                return Err(Error::domain("initial datum does not vanish at the annulus boundary"));
            }
        }
        let resolved = self
            .log_grid()
            .iter()
            .filter(|&&e| e >= core.lo.max(a) && e <= core.hi.min(b))
            .count();
        if resolved < 4 {
            return Err(Error::domain(format!(
                "grid too coarse: only {resolved} nodes inside the support of the initial datum"
            )));
        }
        Ok(())
    }

    pub fn span(&self) -> f64 {
        self.r_outer.ln() - self.r_inner.ln()
    }

    pub fn spacing(&self) -> f64 {
        self.span() / (self.grid_points - 1) as f64
    }

    /// Nodes `η_j = log r + j·h`.
    pub fn log_grid(&self) -> Vec<f64> {
        let a = self.r_inner.ln();
        let h = self.spacing();
        (0..self.grid_points)
            .map(|j| if j + 1 == self.grid_points { self.r_outer.ln() } else { a + j as f64 * h })
            .collect()
    }
}

/// One Crank–Nicolson stepper for a fixed step size.
struct CrankNicolson {
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
    /// Explicit-half coefficients.
    e_lower: f64,
    e_diag: f64,
    e_upper: f64,
}

impl CrankNicolson {
    fn new(n: usize, h: f64, drift: f64, dt: f64) -> Self {
        let diffusion = 1.0 / (h * h);
        let advection = drift / (2.0 * h);
        let a_lower = diffusion - advection;
        let a_diag = -2.0 * diffusion;
        let a_upper = diffusion + advection;
        CrankNicolson {
            lower: vec![-0.5 * dt * a_lower; n],
            diag: vec![1.0 - 0.5 * dt * a_diag; n],
            upper: vec![-0.5 * dt * a_upper; n],
            e_lower: 0.5 * dt * a_lower,
            e_diag: 1.0 + 0.5 * dt * a_diag,
            e_upper: 0.5 * dt * a_upper,
        }
    }

    /// Advances the interior values; boundary values are zero.
    fn step(&self, v: &mut [f64], scratch: &mut Vec<f64>) -> Result<()> {
        let n = v.len();
        scratch.clear();
        for i in 0..n {
            let left = if i > 0 { v[i - 1] } else { 0.0 };
            let right = if i + 1 < n { v[i + 1] } else { 0.0 };
            scratch.push(self.e_lower * left + self.e_diag * v[i] + self.e_upper * right);
        }
        tridiag::solve(&self.lower, &self.diag, &self.upper, scratch)?;
        v.copy_from_slice(scratch);
        Ok(())
    }
}

/// Crank–Nicolson solution of the annulus problem, with a radial snapshot
/// at each requested time. Between snapshots the step is shrunk so that
/// every time is hit exactly.
pub fn annulus_solve(p: &AnnulusProblem, times: &[f64]) -> Result<SolutionTrajectory> {
    p.validate()?;
    if times.is_empty() || times.iter().any(|&t| !(t >= 0.0 && t.is_finite())) {
        return Err(Error::domain("snapshot times must be nonnegative and nonempty"));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain("snapshot times must be strictly increasing"));
    }
    let etas = p.log_grid();
    let radii: Vec<f64> = etas.iter().map(|e| e.exp()).collect();
    let n = etas.len() - 2;
    let h = p.spacing();
    let mut v: Vec<f64> = etas[1..=n].iter().map(|&e| p.u0.value(e)).collect();
    let mut scratch = Vec::with_capacity(n);
    let mut now = 0.0;
    let mut snapshots = Vec::with_capacity(times.len());
    for &t in times {
        let gap = t - now;
        if gap > 0.0 {
            let steps = (gap / p.dt - 1e-9).ceil().max(1.0) as usize;
            let cn = CrankNicolson::new(n, h, p.dim.drift(), gap / steps as f64);
            for _ in 0..steps {
                cn.step(&mut v, &mut scratch)?;
            }
        }
        now = t;
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::Solver("Crank-Nicolson produced non-finite values".into()));
        }
        let mut values = Vec::with_capacity(n + 2);
        values.push(0.0);
        values.extend_from_slice(&v);
        values.push(0.0);
        snapshots.push(Snapshot::Radial(RadialField::new(
            radii.clone(),
            values,
            t,
            p.dim,
            0.0,
            0.0,
        )?));
    }
    SolutionTrajectory::new(Scheme::CrankNicolson, p.dim, Some(p.u0.clone()), snapshots, 0.0)
}

/// `(K, τ)` with `u₀ ≤ K·F(·, τ)`, so that `K·F(x, t + τ)` bounds every
/// annulus solution. `K` carries a 5% margin over the sampled ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniversalBound {
    pub k: f64,
    pub tau: f64,
}

impl UniversalBound {
    pub fn for_datum(u0: &InitialDatum, tau: f64) -> Result<Self> {
        if u0.tails() != (0.0, 0.0) {
            return Err(Error::Precondition("the universal bound needs data vanishing at 0 and ∞".into()));
        }
        let core = u0.core();
        let shift = u0.dim.drift() * tau;
        let mut ys: Vec<f64> = (0..=4000)
            .map(|k| core.lo + (core.hi - core.lo) * k as f64 / 4000.0)
            .collect();
        ys.extend(u0.breakpoints());
        let ratio = ys
            .iter()
            .map(|&y| u0.value(y) / gaussian_kernel_unchecked(y + shift, tau))
            .fold(0.0, f64::max);
        Ok(UniversalBound { k: 1.05 * ratio, tau })
    }

    pub fn eval(&self, r: f64, t: f64, dim: Dimension) -> f64 {
        self.k * profile_f(r, t + self.tau, dim).unwrap_or(0.0)
    }
}

/// Outcome of the nested exhaustion `u = lim u_{r_k, R_k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct NestingReport {
    /// Domains actually used, snapped to the common lattice.
    pub levels: Vec<(f64, f64)>,
    /// `sup |u_{k+1} - u_k|` on the common nodes.
    pub increments: Vec<f64>,
    /// `min (u_{k+1} - u_k)` on the common nodes; nonnegative when the
    /// sequence is monotone.
    pub min_steps: Vec<f64>,
    pub monotone: bool,
    pub bound: UniversalBound,
    /// `max u_k / (K·F(·, t + τ))` over all iterates and nodes.
    pub bound_ratio: f64,
    /// `sup |u_last - u|` against the kernel solution on the last domain.
    pub kernel_gap: f64,
}

/// Nested annulus solutions on `(r_k, R_k)` sharing the lattice
/// `η ∈ h·ℤ` with `h = ln 2 / points_per_octave`, so that each domain's
/// nodes contain the previous one's. `dt ≤ h²` keeps the scheme monotone.
pub fn nested_annulus_limit(
    u0: &InitialDatum,
    schedule: &[(f64, f64)],
    points_per_octave: usize,
    dt: f64,
    t: f64,
    tau: f64,
) -> Result<(RadialField, NestingReport)> {
    if schedule.is_empty() {
        return Err(Error::domain("nesting schedule is empty"));
    }
    let h = std::f64::consts::LN_2 / points_per_octave as f64;
    if dt > h * h * (1.0 + 1e-12) {
        return Err(Error::domain(format!("dt = {dt} exceeds h² = {}", h * h)));
    }
    let snapped: Vec<(i64, i64)> = schedule
        .iter()
        .map(|&(r, big_r)| ((r.ln() / h).round() as i64, (big_r.ln() / h).round() as i64))
        .collect();
    for w in snapped.windows(2) {
        if w[1].0 > w[0].0 || w[1].1 < w[0].1 {
            return Err(Error::domain("schedule domains must be nested"));
        }
    }
    let bound = UniversalBound::for_datum(u0, tau)?;
    let mut fields: Vec<(i64, RadialField)> = Vec::with_capacity(snapped.len());
    let mut levels = Vec::with_capacity(snapped.len());
    let mut bound_ratio: f64 = 0.0;
    for &(i_lo, i_hi) in &snapped {
        let r = (i_lo as f64 * h).exp();
        let big_r = (i_hi as f64 * h).exp();
        levels.push((r, big_r));
        let p = AnnulusProblem::new(r, big_r, u0.clone(), (i_hi - i_lo + 1) as usize, dt)?;
        let traj = annulus_solve(&p, &[t])?;
        let field = traj.snapshots[0].to_radial(u0.dim)?;
        for (rad, v) in field.radii().iter().zip(field.values()) {
            let b = bound.eval(*rad, t, u0.dim);
            if *v > 0.0 {
                bound_ratio = bound_ratio.max(v / b);
            }
        }
        fields.push((i_lo, field));
    }
    let mut increments = Vec::new();
    let mut min_steps = Vec::new();
    for w in fields.windows(2) {
        let (lo_prev, prev) = &w[0];
        let (lo_next, next) = &w[1];
        let offset = (lo_prev - lo_next) as usize;
        let mut sup: f64 = 0.0;
        let mut min = f64::INFINITY;
        for (j, v) in prev.values().iter().enumerate() {
            let d = next.values()[j + offset] - v;
            sup = sup.max(d.abs());
            min = min.min(d);
        }
        increments.push(sup);
        min_steps.push(min);
    }
    let monotone = min_steps.iter().all(|&m| m >= -1e-8);
    let last = fields.pop().unwrap().1;
    let exact = solve_radial(u0, t, last.radii().to_vec())?;
    let kernel_gap = last
        .values()
        .iter()
        .zip(exact.values())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok((
        last,
        NestingReport {
            levels,
            increments,
            min_steps,
            monotone,
            bound,
            bound_ratio,
            kernel_gap,
        },
    ))
}

/// `sup |u_CN - u_kernel|` at time `t` over the annulus nodes.
pub fn annulus_error_vs_kernel(p: &AnnulusProblem, t: f64) -> Result<f64> {
    let traj = annulus_solve(p, &[t])?;
    let field = traj.snapshots[0].to_radial(p.dim)?;
    let exact = solve_radial(&p.u0, t, field.radii().to_vec())?;
    Ok(field
        .values()
        .iter()
        .zip(exact.values())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

/// The default schedule `r_k = r₀·2^{-k}`, `R_k = R₀·2^k`.
pub fn doubling_schedule(r0: f64, big_r0: f64, levels: usize) -> Vec<(f64, f64)> {
    (0..levels)
        .map(|k| {
            let s = 2f64.powi(k as i32);
            (r0 / s, big_r0 * s)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    const D3: Dimension = Dimension::THREE;

    #[test]
    fn validation() {
        let u0 = InitialDatum::annulus_indicator(1.0, E, 1.0, D3).unwrap();
        assert!(AnnulusProblem::new(0.5, 8.0, u0.clone(), 200, 1e-3).is_ok());
        assert!(AnnulusProblem::new(1.0, 8.0, u0.clone(), 200, 1e-3).is_err());
        assert!(AnnulusProblem::new(0.5, 8.0, u0.clone(), 8, 1e-3).is_err());
        let narrow = InitialDatum::annulus_indicator(1.0, 1.3, 1.0, D3).unwrap();
        assert!(AnnulusProblem::new(0.5, 8.0, narrow, 17, 1e-3).is_err());
        let step = InitialDatum::step_to_k(1.0, 1.0, 2.0, D3).unwrap();
        assert!(AnnulusProblem::new(0.5, 8.0, step, 200, 1e-3).is_err());
        let one = InitialDatum::annulus_indicator(1.0, E, 1.0, Dimension::ONE).unwrap();
        assert!(AnnulusProblem::new(0.5, 8.0, one, 200, 1e-3).is_err());
    }

    #[test]
    fn zero_datum_stays_zero() {
        let u0 = InitialDatum::annulus_indicator(1.0, E, 0.0, D3).unwrap();
        let p = AnnulusProblem::new(0.5, 8.0, u0, 64, 1e-3).unwrap();
        let traj = annulus_solve(&p, &[0.1, 0.5]).unwrap();
        assert_eq!(traj.max_value(), 0.0);
        assert_eq!(traj.min_value(), 0.0);
    }

    #[test]
    fn maximum_principle_with_small_steps() {
        let u0 = InitialDatum::annulus_indicator(1.0, E, 1.0, D3).unwrap();
        let h = (16.0f64).ln() / 199.0;
        let p = AnnulusProblem::new(0.5, 8.0, u0, 200, h * h).unwrap();
        let traj = annulus_solve(&p, &[0.05, 0.2, 1.0]).unwrap();
        assert!(traj.min_value() >= 0.0);
        assert!(traj.max_value() <= 1.0 + 1e-10);
    }

    #[test]
    fn matches_kernel_solution_before_the_boundary_matters() {
        let u0 = InitialDatum::gaussian_bump(0.0, 0.4, 1.0, D3).unwrap();
        let p = AnnulusProblem::new((-8.0f64).exp(), 8.0f64.exp(), u0, 1601, 0.005).unwrap();
        let err = annulus_error_vs_kernel(&p, 0.5).unwrap();
        assert!(err < 1e-3, "err = {err}");
    }

    #[test]
    fn one_level_schedule_is_a_plain_solve() {
        let u0 = InitialDatum::annulus_indicator(1.0, E, 1.0, D3).unwrap();
        let h = std::f64::consts::LN_2 / 16.0;
        let (field, report) = nested_annulus_limit(&u0, &[(0.5, 4.0)], 16, h * h, 0.3, 1.0).unwrap();
        assert!(report.increments.is_empty());
        let p = AnnulusProblem::new(0.5, 4.0, u0, field.len(), h * h).unwrap();
        let plain = annulus_solve(&p, &[0.3]).unwrap();
        for (a, b) in field.values().iter().zip(plain.snapshots[0].values()) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
