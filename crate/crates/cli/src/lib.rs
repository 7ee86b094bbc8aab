//! Front end for `rewire-lab`: sweep config files, bundled presets, run
//! manifests and SVG plots.

pub mod commands;
pub mod config;
pub mod manifest;
pub mod plot;

pub use commands::{ConfigSource, SweepOutputs, SweepRequest};
pub use config::{parse_config, SweepMode, SweepPlan};
pub use manifest::RunManifest;
