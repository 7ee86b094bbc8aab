//! Seeded ensemble sweeps, their aggregated records, and the small-world verdict.

mod records;
mod seed;
mod sweep;
mod verdict;

pub use records::{
    format_value, read_csv, sort_records, to_csv_string, write_csv, Statistic, SweepRecord, CSV_HEADER,
    NOT_APPLICABLE,
};
pub use seed::{derive_task_seed, splitmix64};
pub use sweep::{
    run_metric_sweep, run_scenario_matrix, run_train_sweep, CaseOutcome, Disagreement, MetricSweepConfig,
    ScenarioCase, ScenarioMatrixConfig, ScenarioOutcome, TrainSweepConfig, TrainSweepOutcome,
};
pub use verdict::{small_world_verdict, SmallWorldVerdict, Verdict, PREMISE_FRACTION, THRESHOLD_FRACTION};
