//! The experiment registry.

use std::f64::consts::{E, LN_2, TAU};
use std::path::PathBuf;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::config::{default_family, ExperimentConfig, GridSpec, TimesSpec};
use super::output::{Curve, Plot, SeriesRow, SummaryRow, ValueKind};
use crate::analysis::acceptance::{
    contraction_times, dominating_datum, pair_policy, random_datum, SEED,
};
use crate::analysis::{
    comparison_check, contraction_check, convergence_error, counterexample_gap, counterexample_gap_exact,
    fit_rate, positivity_check, profile_hotspot, solution_hotspot, two_branch_convergence_error,
    ErrorSeries, Target,
};
use crate::error::{Error, Result};
use crate::profiles::{profile_e, profile_f, profile_f1, AngularRange, Dimension};
use crate::solver::{doubling_schedule, kernel_trajectory, nested_annulus_limit};
use crate::transforms::{self_map, uniform_grid, DatumFamily, InitialDatum, LineDatum, RadialField, TwoBranchDatum};

/// What one experiment produces.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Artifacts {
    pub series: Vec<SeriesRow>,
    pub summary: Vec<SummaryRow>,
    pub plot: Option<String>,
}

impl Artifacts {
    pub fn passed(&self) -> bool {
        self.summary.iter().all(|r| r.pass)
    }
}

pub struct Experiment {
    pub name: &'static str,
    pub description: &'static str,
    defaults: fn(&mut ExperimentConfig),
    run: fn(&ExperimentConfig) -> Result<Artifacts>,
}

impl Experiment {
    pub fn default_config(&self) -> ExperimentConfig {
        let mut c = base_config(self.name);
        (self.defaults)(&mut c);
        c
    }

    pub fn run(&self, cfg: &ExperimentConfig) -> Result<Artifacts> {
        (self.run)(cfg)
    }
}

fn base_config(name: &str) -> ExperimentConfig {
    ExperimentConfig {
        experiment: name.to_string(),
        dim: 3,
        datum: default_family("annulus_indicator").unwrap(),
        times: TimesSpec::List(vec![1.0, 10.0, 100.0]),
        grid: GridSpec { points: 4096 },
        output_dir: PathBuf::from("cdh-output"),
        seed: SEED,
    }
}

fn list(v: &[f64]) -> TimesSpec {
    TimesSpec::List(v.to_vec())
}

pub const REGISTRY: [Experiment; 12] = [
    Experiment {
        name: "thm1_radial_F",
        description: "t^{1/2}-scaled sup error against M·F for data vanishing at 0 and ∞",
        defaults: |c| c.times = list(&[1.0, 10.0, 100.0, 1000.0]),
        run: thm1_radial_f,
    },
    Experiment {
        name: "thm3a_rate_E",
        description: "decay rate of sup|u - (K/2)E| for data tending to K at the origin",
        defaults: |c| {
            c.datum = default_family("step_to_K").unwrap();
            c.times = TimesSpec::Geometric { from: 10.0, to: 1e4, count: 8 };
        },
        run: rate_e,
    },
    Experiment {
        name: "thm3b_rate_E",
        description: "decay rate of sup|u - (K/2)E| for smooth erfc-like data",
        defaults: |c| {
            c.datum = default_family("smooth_erfc_like").unwrap();
            c.times = TimesSpec::Geometric { from: 10.0, to: 1e4, count: 8 };
        },
        run: rate_e,
    },
    Experiment {
        name: "contraction",
        description: "L¹₂ positive-part series for seeded random pairs (10 pairs)",
        defaults: |c| c.times = list(&contraction_times(Dimension::THREE)),
        run: contraction,
    },
    Experiment {
        name: "comparison",
        description: "ordering of solutions from the datum and seeded dominating data (10 pairs)",
        defaults: |c| c.times = list(&contraction_times(Dimension::THREE)),
        run: comparison,
    },
    Experiment {
        name: "counterexample_gap",
        description: "distance of θ·F from radial multiples of F, θ ∈ [0, 2π]",
        defaults: |_| {},
        run: gap,
    },
    Experiment {
        name: "hotspot",
        description: "grid maximum of F and of the flow of a centred bump against log r = -(N-2)t",
        defaults: |c| c.datum = default_family("gaussian_bump_in_y").unwrap(),
        run: hotspot,
    },
    Experiment {
        name: "figure1_profiles",
        description: "profiles E and F against r at several times",
        defaults: |c| {
            c.times = list(&[0.5, 1.0, 2.0, 4.0]);
            c.grid.points = 400;
        },
        run: figure1,
    },
    Experiment {
        name: "figure2_profiles_n1",
        description: "profiles E and F₁ (branch weight 1/4) on the line, N = 1",
        defaults: |c| {
            c.dim = 1;
            c.times = list(&[0.5, 1.0, 2.0, 4.0]);
            c.grid.points = 401;
        },
        run: figure2,
    },
    Experiment {
        name: "annulus_nesting",
        description: "nested Dirichlet annulus solutions (grid.points = nodes per ln 2) at the last time",
        defaults: |c| {
            c.datum = DatumFamily::GaussianBumpInY { center: 0.5, width: 0.25, height: 1.0 };
            c.times = list(&[1.0]);
            c.grid.points = 32;
        },
        run: annulus_nesting,
    },
    Experiment {
        name: "positivity_origin",
        description: "positivity away from the origin and u(0, t) = 0 for data vanishing near 0",
        defaults: |c| c.times = list(&[0.1, 1.0, 10.0]),
        run: positivity,
    },
    Experiment {
        name: "selfmap_dims",
        description: "the dimension self-map carries F in dimension N to F in N + 1 and N + 2",
        defaults: |c| c.times = list(&[0.5, 1.0, 2.0]),
        run: selfmap,
    },
];

pub fn find(name: &str) -> Option<&'static Experiment> {
    REGISTRY.iter().find(|e| e.name == name)
}

pub fn default_config(name: &str) -> Option<ExperimentConfig> {
    find(name).map(|e| e.default_config())
}

fn series_rows(name: &str, s: &ErrorSeries) -> Vec<SeriesRow> {
    s.samples
        .iter()
        .map(|&(t, e)| SeriesRow {
            experiment: name.to_string(),
            t,
            y_or_r: None,
            kind: ValueKind::Error,
            value: e,
        })
        .collect()
}

fn error_plot(title: &str, s: &ErrorSeries) -> String {
    Plot {
        title: title.to_string(),
        x_label: "t".into(),
        y_label: if s.scaling_exponent == 0.0 {
            "sup error".into()
        } else {
            format!("t^{} · sup error", s.scaling_exponent)
        },
        log_x: true,
        log_y: true,
        curves: vec![Curve {
            label: "e(t)".into(),
            points: s.samples.clone(),
            dashed: false,
        }],
    }
    .to_svg()
}

fn thm1_radial_f(c: &ExperimentConfig) -> Result<Artifacts> {
    let u0 = c.initial_datum()?;
    let s = convergence_error(&u0, Target::F, &c.times.values(), 0.5)?;
    let name = &c.experiment;
    let ratio = s.final_ratio();
    let mut summary = vec![
        SummaryRow::new(name, "strictly_decreasing", f64::from(u8::from(s.is_strictly_decreasing())), "1", s.is_strictly_decreasing()),
        SummaryRow::new(name, "final_over_initial", ratio, "<0.05", ratio < 0.05),
    ];
    if let Ok(fit) = fit_rate(&s) {
        summary.push(SummaryRow::info(name, "fitted_exponent", fit.exponent));
    }
    Ok(Artifacts {
        series: series_rows(name, &s),
        summary,
        plot: Some(error_plot("convergence to the F profile", &s)),
    })
}

fn rate_e(c: &ExperimentConfig) -> Result<Artifacts> {
    let u0 = c.initial_datum()?;
    let s = convergence_error(&u0, Target::E, &c.times.values(), 0.0)?;
    let fit = fit_rate(&s)?;
    let (lo, hi) = if c.experiment == "thm3b_rate_E" { (-1.7, -1.3) } else { (-0.65, -0.45) };
    let name = &c.experiment;
    Ok(Artifacts {
        series: series_rows(name, &s),
        summary: vec![
            SummaryRow::new(
                name,
                "fitted_exponent",
                fit.exponent,
                format!("[{lo},{hi}]"),
                (lo..=hi).contains(&fit.exponent),
            ),
            SummaryRow::new(name, "r_squared", fit.r_squared, ">=0.98", fit.r_squared >= 0.98),
        ],
        plot: Some(error_plot("convergence to the E profile", &s)),
    })
}

fn pairs_rng(c: &ExperimentConfig) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(c.seed)
}

fn contraction(c: &ExperimentConfig) -> Result<Artifacts> {
    let dim = c.dimension()?;
    let mut rng = pairs_rng(c);
    let times = c.times.values();
    let mut a = Artifacts::default();
    let mut worst = f64::NEG_INFINITY;
    for k in 0..10 {
        let d1 = random_datum(&mut rng, dim)?;
        let d2 = random_datum(&mut rng, dim)?;
        let policy = pair_policy(&d1, &d2, c.grid.points);
        let series = contraction_check(&kernel_trajectory(&d1, &times, &policy)?, &kernel_trajectory(&d2, &times, &policy)?)?;
        worst = worst.max(series.max_increase);
        for (t, v) in series.times.iter().zip(&series.values) {
            a.series.push(SeriesRow {
                experiment: format!("{}/pair{k}", c.experiment),
                t: *t,
                y_or_r: None,
                kind: ValueKind::Solution,
                value: *v,
            });
        }
    }
    a.summary.push(SummaryRow::new(&c.experiment, "max_increase", worst, "<=1e-8", worst <= 1e-8));
    Ok(a)
}

fn comparison(c: &ExperimentConfig) -> Result<Artifacts> {
    let u0 = c.initial_datum()?;
    let mut rng = pairs_rng(c);
    let times = c.times.values();
    let mut worst = f64::NEG_INFINITY;
    let mut a = Artifacts::default();
    for k in 0..10 {
        let upper = dominating_datum(&mut rng, &u0)?;
        let policy = pair_policy(&u0, &upper, c.grid.points);
        let report = comparison_check(&kernel_trajectory(&u0, &times, &policy)?, &kernel_trajectory(&upper, &times, &policy)?)?;
        worst = worst.max(report.max_violation);
        a.series.push(SeriesRow {
            experiment: format!("{}/pair{k}", c.experiment),
            t: *times.last().unwrap(),
            y_or_r: None,
            kind: ValueKind::Error,
            value: report.max_violation,
        });
    }
    a.summary.push(SummaryRow::new(&c.experiment, "max_violation", worst, "<=1e-10", worst <= 1e-10));
    Ok(a)
}

fn gap(c: &ExperimentConfig) -> Result<Artifacts> {
    let dim = c.dimension()?;
    let range = AngularRange::new(0.0, TAU)?;
    let exact = counterexample_gap_exact(&range);
    let mut a = Artifacts::default();
    let mut worst: f64 = 0.0;
    for t in c.times.values() {
        let g = counterexample_gap(t, dim, &range)?;
        worst = worst.max((g - exact).abs() / exact);
        a.series.push(SeriesRow {
            experiment: c.experiment.clone(),
            t,
            y_or_r: None,
            kind: ValueKind::Error,
            value: g,
        });
    }
    a.summary.push(SummaryRow::info(&c.experiment, "analytic_gap", exact));
    a.summary.push(SummaryRow::new(&c.experiment, "max_relative_deviation", worst, "<0.01", worst < 0.01));
    Ok(a)
}

fn hotspot(c: &ExperimentConfig) -> Result<Artifacts> {
    let u0 = c.initial_datum()?;
    let mut a = Artifacts::default();
    let mut worst_cells: f64 = 0.0;
    for t in c.times.values() {
        for (curve, row) in [("F", profile_hotspot(t, u0.dim)), ("solution", solution_hotspot(&u0, t)?)] {
            a.series.push(SeriesRow {
                experiment: format!("{}/{curve}", c.experiment),
                t,
                y_or_r: Some(row.argmax_log_r),
                kind: if curve == "F" { ValueKind::Profile } else { ValueKind::Solution },
                value: row.max_value,
            });
            if t >= 10.0 || curve == "F" {
                worst_cells = worst_cells.max((row.argmax_log_r - row.expected_log_r).abs() / row.cell);
            }
        }
    }
    a.summary.push(SummaryRow::new(
        &c.experiment,
        "max_argmax_offset_cells",
        worst_cells,
        "<=1",
        worst_cells <= 1.0,
    ));
    Ok(a)
}

fn figure1(c: &ExperimentConfig) -> Result<Artifacts> {
    let dim = c.dimension()?;
    let radii = uniform_grid(0.0, 3.0, c.grid.points);
    let mut a = Artifacts::default();
    let mut curves = Vec::new();
    for t in c.times.values() {
        for (label, dashed) in [("E", false), ("F", true)] {
            let points: Vec<(f64, f64)> = radii
                .iter()
                .map(|&r| {
                    let v = if label == "E" { profile_e(r, t, dim, 2.0)? } else { profile_f(r, t, dim)? };
                    Ok((r, v))
                })
                .collect::<Result<_>>()?;
            for &(r, v) in &points {
                a.series.push(SeriesRow {
                    experiment: format!("{}/{label}", c.experiment),
                    t,
                    y_or_r: Some(r),
                    kind: ValueKind::Profile,
                    value: v,
                });
            }
            curves.push(Curve {
                label: format!("{label}, t = {t}"),
                points,
                dashed,
            });
        }
    }
    a.plot = Some(
        Plot {
            title: format!("Profiles E and F, N = {}", dim.n()),
            x_label: "r".into(),
            y_label: "value".into(),
            log_x: false,
            log_y: false,
            curves,
        }
        .to_svg(),
    );
    a.summary.push(SummaryRow::info(&c.experiment, "curves", 2.0 * c.times.values().len() as f64));
    Ok(a)
}

/// Branch weight of the `N = 1` figure.
pub const FIGURE2_ALPHA: f64 = 0.25;

fn figure2(c: &ExperimentConfig) -> Result<Artifacts> {
    if c.dim != 1 {
        return Err(Error::config(0, "dim", "figure2_profiles_n1 is drawn in dimension 1"));
    }
    let xs = uniform_grid(-4.0, 4.0, c.grid.points);
    let mut a = Artifacts::default();
    let mut curves = Vec::new();
    for t in c.times.values() {
        for (label, dashed) in [("E", false), ("F1", true)] {
            let points: Vec<(f64, f64)> = xs
                .iter()
                .map(|&x| {
                    let v = if label == "E" {
                        profile_e(x.abs(), t, Dimension::ONE, 2.0)?
                    } else {
                        profile_f1(x, t, FIGURE2_ALPHA)?
                    };
                    Ok((x, v))
                })
                .collect::<Result<_>>()?;
            for &(x, v) in &points {
                a.series.push(SeriesRow {
                    experiment: format!("{}/{label}", c.experiment),
                    t,
                    y_or_r: Some(x),
                    kind: ValueKind::Profile,
                    value: v,
                });
            }
            curves.push(Curve {
                label: format!("{label}, t = {t}"),
                points,
                dashed,
            });
        }
    }
    let branch = TwoBranchDatum::new(
        InitialDatum::annulus_indicator(1.0, E, FIGURE2_ALPHA, Dimension::ONE)?,
        InitialDatum::annulus_indicator(1.0, E, 1.0 - FIGURE2_ALPHA, Dimension::ONE)?,
    )?;
    let s = two_branch_convergence_error(&branch, FIGURE2_ALPHA, &c.times.values(), 0.5)?;
    for &(t, e) in &s.samples {
        a.series.push(SeriesRow {
            experiment: format!("{}/two_branch", c.experiment),
            t,
            y_or_r: None,
            kind: ValueKind::Error,
            value: e,
        });
    }
    a.plot = Some(
        Plot {
            title: "Profiles E and F₁, N = 1".into(),
            x_label: "x".into(),
            y_label: "value".into(),
            log_x: false,
            log_y: false,
            curves,
        }
        .to_svg(),
    );
    a.summary.push(SummaryRow::info(&c.experiment, "branch_weight", FIGURE2_ALPHA));
    Ok(a)
}

fn annulus_nesting(c: &ExperimentConfig) -> Result<Artifacts> {
    let u0 = c.initial_datum()?;
    let m = c.grid.points;
    let h = LN_2 / m as f64;
    let t = *c.times.values().last().unwrap();
    let (field, report) = nested_annulus_limit(&u0, &doubling_schedule(1.0 / 16.0, 16.0, 4), m, h * h, t, 0.0625)?;
    let mut a = Artifacts::default();
    for (r, v) in field.radii().iter().zip(field.values()) {
        a.series.push(SeriesRow {
            experiment: c.experiment.clone(),
            t,
            y_or_r: Some(*r),
            kind: ValueKind::Solution,
            value: *v,
        });
        a.series.push(SeriesRow {
            experiment: format!("{}/bound", c.experiment),
            t,
            y_or_r: Some(*r),
            kind: ValueKind::Profile,
            value: report.bound.eval(*r, t, u0.dim),
        });
    }
    let min_step = report.min_steps.iter().cloned().fold(f64::INFINITY, f64::min);
    let name = &c.experiment;
    a.summary = vec![
        SummaryRow::new(name, "min_step", min_step, ">=-1e-8", report.monotone),
        SummaryRow::new(name, "bound_ratio", report.bound_ratio, "<=1", report.bound_ratio <= 1.0),
        SummaryRow::info(name, "bound_k", report.bound.k),
        SummaryRow::info(name, "kernel_gap", report.kernel_gap),
    ];
    for (k, inc) in report.increments.iter().enumerate() {
        a.summary.push(SummaryRow::info(name, &format!("increment_{k}"), *inc));
    }
    Ok(a)
}

fn positivity(c: &ExperimentConfig) -> Result<Artifacts> {
    let u0 = c.initial_datum()?;
    let r0 = u0.core().lo.exp();
    let report = positivity_check(&u0, r0, &c.times.values())?;
    let mut a = Artifacts::default();
    for row in &report.rows {
        a.series.push(SeriesRow {
            experiment: c.experiment.clone(),
            t: row.t,
            y_or_r: Some(r0 / 2.0),
            kind: ValueKind::Solution,
            value: row.inside_value,
        });
    }
    let min = report.rows.iter().map(|r| r.min_value).fold(f64::INFINITY, f64::min);
    a.summary.push(SummaryRow::info(&c.experiment, "min_value", min));
    a.summary.push(SummaryRow::new(
        &c.experiment,
        "passed",
        f64::from(u8::from(report.passed)),
        "1",
        report.passed,
    ));
    Ok(a)
}

fn selfmap(c: &ExperimentConfig) -> Result<Artifacts> {
    let dim = c.dimension()?;
    let radii: Vec<f64> = uniform_grid(-8.0, 4.0, c.grid.points.min(2001)).into_iter().map(f64::exp).collect();
    let mut a = Artifacts::default();
    let mut worst: f64 = 0.0;
    for t in c.times.values() {
        let u = RadialField::from_fn(radii.clone(), t, dim, (0.0, 0.0), |r| profile_f(r, t, dim).unwrap_or(f64::NAN))?;
        for target in [dim.n() + 1, dim.n() + 2] {
            let target = Dimension::new(target)?;
            let mapped = self_map(&u, target)?;
            let err = mapped
                .radii()
                .iter()
                .zip(mapped.values())
                .map(|(r, v)| Ok((v - profile_f(*r, t, target)?).abs()))
                .collect::<Result<Vec<f64>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            worst = worst.max(err);
            a.series.push(SeriesRow {
                experiment: format!("{}/N{}", c.experiment, target.n()),
                t,
                y_or_r: None,
                kind: ValueKind::Error,
                value: err,
            });
        }
    }
    a.summary.push(SummaryRow::new(&c.experiment, "max_error", worst, "<=1e-12", worst <= 1e-12));
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_names_are_unique_and_defaults_parse() {
        let mut names: Vec<_> = REGISTRY.iter().map(|e| e.name).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), 12);
        for e in &REGISTRY {
            let cfg = e.default_config();
            let text = cfg.serialize();
            assert_eq!(ExperimentConfig::parse(&text).unwrap(), cfg, "{}", e.name);
        }
    }

    #[test]
    fn cheap_experiments_pass() {
        for name in ["counterexample_gap", "selfmap_dims", "positivity_origin", "figure1_profiles"] {
            let cfg = default_config(name).unwrap();
            let a = find(name).unwrap().run(&cfg).unwrap();
            assert!(a.passed(), "{name}: {:?}", a.summary);
        }
    }
}
