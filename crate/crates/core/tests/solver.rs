use std::f64::consts::E;

use cdh::profiles::{erfc, profile_f};
use cdh::solver::{flow_mass, heat1d_solve, kernel_trajectory, solve_radial, GridPolicy, HeatFlow};
use cdh::transforms::{uniform_grid, weighted_mass, InitialDatum, LineDatum};
use cdh::Dimension;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn semigroup(center in -1.0f64..1.0, width in 0.3f64..1.0, t1 in 0.1f64..1.0, t2 in 0.1f64..1.0) {
        let u0 = InitialDatum::gaussian_bump(center, width, 1.0, Dimension::THREE).unwrap();
        let w = 12.0 * (t1.sqrt() + width);
        let mid = heat1d_solve(&u0, t1, uniform_grid(center - w, center + w, 2401)).unwrap();
        prop_assert_eq!(LineDatum::time(&mid), t1);
        let two_step = HeatFlow::new(&mid).unwrap();
        let direct = HeatFlow::new(&u0).unwrap();
        for y in [center - 1.0, center, center + 0.7, center + 2.5] {
            let a = two_step.eval(y, t2).0;
            let b = direct.eval(y, t1 + t2).0;
            prop_assert!((a - b).abs() < 1e-7, "y = {y}: {a} vs {b}");
        }
    }

    #[test]
    fn maximum_principle(r1 in 0.1f64..2.0, ratio in 1.2f64..10.0, height in 0.1f64..3.0, t in 0.01f64..100.0) {
        let u0 = InitialDatum::annulus_indicator(r1, r1 * ratio, height, Dimension::THREE).unwrap();
        let u = solve_radial(&u0, t, uniform_grid(-6.0, 6.0, 121).into_iter().map(f64::exp).collect()).unwrap();
        prop_assert!(u.min_value() >= -1e-14);
        prop_assert!(u.max_value() <= height * (1.0 + 1e-12));
    }

    #[test]
    fn weighted_mass_is_conserved(dim in 3u32..=6, center in -1.0f64..1.0, t in 0.1f64..50.0) {
        let u0 = InitialDatum::gaussian_bump(center, 0.5, 1.0, Dimension::new(dim).unwrap()).unwrap();
        let m0 = weighted_mass(&u0).value().unwrap();
        let m = flow_mass(&u0, t).unwrap();
        prop_assert!((m - m0).abs() < 1e-9 * m0, "{m} vs {m0}");
    }
}

#[test]
fn annulus_flow_approaches_mass_times_f() {
    let d3 = Dimension::THREE;
    let u0 = InitialDatum::annulus_indicator(1.0, E, 1.0, d3).unwrap();
    let mass = weighted_mass(&u0).value().unwrap() / d3.sphere_area();
    let mut last = f64::INFINITY;
    for t in [10.0f64, 100.0, 300.0] {
        let w = 12.0 * t.sqrt();
        let radii: Vec<f64> = uniform_grid(-t - w, -t + w + 1.0, 2001).into_iter().map(f64::exp).collect();
        let u = solve_radial(&u0, t, radii).unwrap();
        let err = u
            .radii()
            .iter()
            .zip(u.values())
            .map(|(r, v)| (v - mass * profile_f(*r, t, d3).unwrap()).abs())
            .fold(0.0, f64::max)
            * t.sqrt();
        assert!(err < last, "t = {t}: {err}");
        last = err;
    }
}

#[test]
fn trajectory_is_bounded_and_certified() {
    let u0 = InitialDatum::gaussian_bump(0.0, 0.5, 2.0, Dimension::THREE).unwrap();
    let traj = kernel_trajectory(&u0, &[0.5, 5.0], &GridPolicy::around(&u0, 12.0, 512)).unwrap();
    assert_eq!(traj.times(), vec![0.5, 5.0]);
    assert!(traj.max_value() <= 2.0);
    assert!(traj.error_bound < 1e-10);
}

/// Data whose `ψ₀ = -v₀'` matches the profile's first two moments and
/// differs at third order: `ψ₀ = K(G_τ - τG_τ'') + γG_τ'''`.
struct MomentCancelled {
    k: f64,
    tau: f64,
    gamma: f64,
}

impl MomentCancelled {
    fn g(&self, y: f64) -> f64 {
        (-y * y / (4.0 * self.tau)).exp() / (4.0 * std::f64::consts::PI * self.tau).sqrt()
    }
}

impl LineDatum for MomentCancelled {
    fn value(&self, y: f64) -> f64 {
        let tau = self.tau;
        let g = self.g(y);
        let g1 = -y / (2.0 * tau) * g;
        let g2 = (y * y / (4.0 * tau * tau) - 1.0 / (2.0 * tau)) * g;
        0.5 * self.k * erfc(y / (2.0 * tau.sqrt())) + self.k * tau * g1 - self.gamma * g2
    }

    fn tails(&self) -> (f64, f64) {
        (self.k, 0.0)
    }

    fn split_point(&self) -> f64 {
        0.0
    }

    fn core(&self) -> cdh::transforms::Core {
        let l = 60.0 * self.tau.sqrt();
        cdh::transforms::Core {
            lo: -l,
            hi: l,
            left: cdh::transforms::Envelope::EXACT,
            right: cdh::transforms::Envelope::EXACT,
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        vec![0.0]
    }

    fn feature_scale(&self) -> f64 {
        self.tau.sqrt()
    }
}

#[test]
fn cancelled_moments_give_three_halves_rate() {
    use cdh::analysis::{fit_rate, geometric_times, ErrorSeries};
    let datum = MomentCancelled { k: 1.0, tau: 1.0, gamma: 1.0 };
    let flow = HeatFlow::new(&datum).unwrap();
    let samples = geometric_times(10.0, 1e4, 8)
        .into_iter()
        .map(|t| {
            let w = 12.0 * t.sqrt();
            let err = uniform_grid(-w, w, 2001)
                .into_iter()
                .map(|y| (flow.eval(y, t).0 - 0.5 * erfc(y / (2.0 * t.sqrt()))).abs())
                .fold(0.0, f64::max);
            (t, err)
        })
        .collect();
    let fit = fit_rate(&ErrorSeries::new(samples, 0.0).unwrap()).unwrap();
    assert!((fit.exponent + 1.5).abs() < 0.05, "exponent {}", fit.exponent);
}
