//! Numerical solution of the singular equation.
//!
//! Radial problems are solved in `y = log r + (N-2)t`, where the equation
//! is the heat equation and the singular coefficient never appears. The
//! [`kernel`] path convolves with the heat kernel; the [`annulus`] path
//! discretizes the Dirichlet problem on `B_{r,R}` with Crank–Nicolson and
//! builds the nested limit of the existence proof.

pub mod annulus;
pub mod kernel;
pub mod residual;

pub use annulus::{
    annulus_error_vs_kernel, annulus_solve, doubling_schedule, nested_annulus_limit, AnnulusProblem, NestingReport,
    UniversalBound,
};
pub use kernel::{
    flow_mass, heat1d_solve, kernel_trajectory, solve_radial, solve_two_branch, GridPolicy, HalfLineSolution,
    HeatFlow, Scheme, Snapshot, SolutionTrajectory,
};
pub use residual::{inversion_coefficients, line_residual, pde_residual, Sampler};
