//! Shift representations on `l^2(Z[1/m])` and finite-dimensional solenoid
//! representations.

pub mod affine;
pub mod residuals;
pub mod solenoid;

pub use affine::{coincidence_points, monomial_affine_map, window_indices, Coincidence, PartialAffineMap, Variant};
pub use residuals::{relation_residuals, ResidualReport};
pub use solenoid::{solenoid_periodic_points, solenoid_rep_check, LaurentMonomial, SolenoidPeriodicPoint, ZPhase};
