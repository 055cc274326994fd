//! Results that decide connectivity and solvability without search.

pub mod formula;
pub mod patching;
pub mod solvability;
