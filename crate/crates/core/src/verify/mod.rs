//! Independent checkers for certificates produced elsewhere in the crate.
//!
//! Checkers rebuild everything they need from the input instance and share
//! only the exact-arithmetic kernel with the procedures that emit the
//! certificates.

mod farkas;
mod zeros;

pub use farkas::{check_invariant_certificate, verify_invariant_certificate};
pub use zeros::{check_decomposition, polynomial_sequence, verify_certificate, REPLAY_LIMIT};
