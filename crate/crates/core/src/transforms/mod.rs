//! Coordinate maps between the singular equation and the heat equation,
//! initial-datum families, and the weighted integrals that appear in the
//! convergence hypotheses.

mod datum;
mod fields;
mod integrals;
mod maps;

pub use datum::{Core, DatumFamily, Envelope, InitialDatum, LineDatum, Tabulated, TwoBranchDatum};
pub use fields::{uniform_grid, LineField, RadialField};
pub use integrals::{
    condition_i1, condition_i2, l12_norm, l12_norm_field, psi_moments, psi_rho, weighted_mass,
    weighted_mass_field, weighted_mass_radial, PsiMoments,
};
pub use maps::{field_to_log_coords, from_log_coords, inversion_inverse, inversion_transform, self_map, to_log_coords};
