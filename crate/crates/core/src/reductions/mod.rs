//! Constructions that encode number-theoretic problems as orbit questions.

mod positivity;
mod h10;
mod pseudo;

pub use positivity::{build_positivity, verify_positivity_identity, PositivityInstance};
pub use h10::{
    build_h10, count_hyperplane_hits, unipotent_coefficients, witness_product, H10Instance,
};
pub use pseudo::{max_norm, pseudo_orbit, PseudoTrajectory, Steering};
