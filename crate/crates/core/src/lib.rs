//! Heat equation in nonhomogeneous media with critical singular density,
//!
//! ```text
//! |x|^{-2} ∂_t u = Δu,   (x, t) ∈ ℝ^N × (0, ∞).
//! ```
//!
//! Radially symmetric solutions map through `y = log|x| + (N-2)t` onto the
//! one-dimensional heat equation `v_t = v_yy`. The crate builds on that map:
//!
//! - [`profiles`]: closed-form solutions and asymptotic profiles (`F`, `E`,
//!   the angular counterexample `F_N`, the two-branch `N = 1` profile),
//!   hotspots and decay descriptors, plus an `erfc` accurate to ~1 ulp.
//! - [`transforms`]: log-coordinate and inversion maps, the dimension
//!   self-map, initial-datum families and the weighted integrals
//!   (`M_{u0}`, the `L¹₂` norm, `I₁`, `I₂`, moments of `ψ = -v_y`).
//! - [`solver`]: heat-kernel convolution in log coordinates, Crank–Nicolson
//!   on approximating annulus Dirichlet problems, and a finite-difference
//!   residual of the singular equation.
//! - [`analysis`]: scaled sup-norm convergence series, log–log rate fits,
//!   conservation, contraction, comparison and positivity checks, and the
//!   acceptance criteria.
//! - [`cli`]: the `cdh` experiment runner (config parsing, CSV and SVG).

pub mod analysis;
pub mod cli;
pub mod error;
pub mod profiles;
pub mod quadrature;
pub mod solver;
pub mod transforms;
mod tridiag;

pub use error::{Error, Result};
pub use profiles::Dimension;
