//! Brute-force oracles shared by the test suites. Nothing here calls into the
//! code paths it is used to check.

pub mod dd;
pub mod finite_diff;
pub mod floyd;
