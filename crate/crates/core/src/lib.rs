//! Exact-arithmetic analysis of linear dynamical systems and linear
//! recurrence sequences.

pub mod budget;
pub mod error;
pub mod invariants;
pub mod kernel;
pub mod logic;
pub mod lrs;
pub mod orbit;
pub mod reductions;
pub mod verify;
pub mod zeroset;

pub use budget::Budget;
pub use error::{Error, Result};
