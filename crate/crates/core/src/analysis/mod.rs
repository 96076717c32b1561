//! Convergence series, rate fits and the qualitative checks (conservation,
//! contraction, comparison, positivity, hotspots) run against solver output.

pub mod acceptance;
mod checks;
mod series;

pub use checks::{
    comparison_check, conservation_drift, contraction_check, counterexample_gap, counterexample_gap_exact,
    grid_hotspot, l12_positive_part_data, positivity_check, profile_hotspot, solution_hotspot, ComparisonReport,
    ContractionSeries, HotspotRow, PositivityReport, PositivityRow, COMPARISON_TOL, CONTRACTION_TOL, GAP_ANGLES,
    GAP_CANDIDATES,
};
pub use series::{
    convergence_error, fit_rate, geometric_times, sup_grid, two_branch_convergence_error, ErrorSeries, RateFit,
    Target, SUP_POINTS, SUP_WINDOW,
};
