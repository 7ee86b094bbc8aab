//! Seeded ensemble sweeps over rewire counts.
//!
//! A sweep is a grid of independent cells, `(k, sample)` for metric sweeps
//! and `(k, test)` for training sweeps. Cells run on a rayon pool of the
//! requested size, take their seeds from [`derive_task_seed`], and are
//! collected back in grid order before aggregation, so the output does not
//! depend on the worker count.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::records::{mean_std, mean_std_extended, Statistic, SweepRecord};
use super::seed::derive_task_seed;
use crate::error::{Error, Result};
use crate::learning::{generate_patterns, init_weights, train, TrainingConfig, TrainingResult, DEFAULT_INIT_RANGE};
use crate::metrics::{global_efficiency, local_efficiency, EfficiencyReport, SubgraphDefinition};
use crate::topology::{build_layered_fnn, rewire, LayeredShape};

// seed streams inside a training sweep
const STREAM_PATTERNS: u64 = 1;
const STREAM_CONNECTIVITY: u64 = 2;
const STREAM_WEIGHTS: u64 = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct MetricSweepConfig {
    pub network: String,
    pub shape: LayeredShape,
    pub rewire_counts: Vec<usize>,
    pub samples_per_count: usize,
    pub definitions: Vec<SubgraphDefinition>,
    pub master_seed: u64,
}

impl MetricSweepConfig {
    pub fn validate(&self) -> Result<()> {
        validate_grid(&self.rewire_counts, self.shape)?;
        if self.samples_per_count == 0 {
            return Err(Error::config("samples", "must be at least 1"));
        }
        if self.definitions.is_empty() {
            return Err(Error::config("definitions", "at least one definition is required"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainSweepConfig {
    pub network: String,
    pub shape: LayeredShape,
    pub rewire_counts: Vec<usize>,
    pub pattern_count: usize,
    pub learning_rate: f64,
    pub iterations: usize,
    pub checkpoints: Vec<usize>,
    pub n_tests: usize,
    pub init_range: f64,
    /// Draw a fresh connectivity for every test; otherwise one per rewire count.
    pub resample_connectivity_per_test: bool,
    /// Pins the training set; derived from the master seed when absent.
    pub training_set_seed: Option<u64>,
    /// Pins the connectivity stream; derived from the master seed when absent.
    pub connectivity_seed: Option<u64>,
    pub master_seed: u64,
}

impl TrainSweepConfig {
    pub fn new(network: impl Into<String>, shape: LayeredShape, master_seed: u64) -> Self {
        Self {
            network: network.into(),
            shape,
            rewire_counts: vec![0],
            pattern_count: 10,
            learning_rate: 0.05,
            iterations: 1000,
            checkpoints: vec![1000],
            n_tests: 1,
            init_range: DEFAULT_INIT_RANGE,
            resample_connectivity_per_test: true,
            training_set_seed: None,
            connectivity_seed: None,
            master_seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        validate_grid(&self.rewire_counts, self.shape)?;
        if self.pattern_count == 0 {
            return Err(Error::config("patterns", "must be at least 1"));
        }
        if self.n_tests == 0 {
            return Err(Error::config("tests", "must be at least 1"));
        }
        self.training_config(0).validate()
    }

    fn training_config(&self, seed: u64) -> TrainingConfig {
        TrainingConfig {
            learning_rate: self.learning_rate,
            iterations: self.iterations,
            checkpoints: self.checkpoints.clone(),
            init_range: self.init_range,
            seed,
        }
    }
}

/// One training-set / connectivity pairing of a scenario matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScenarioCase {
    pub training_set_seed: u64,
    pub connectivity_seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioMatrixConfig {
    pub network: String,
    pub shape: LayeredShape,
    pub rewire_counts: Vec<usize>,
    pub pattern_count: usize,
    pub cases: Vec<ScenarioCase>,
    pub learning_rate: f64,
    pub iterations: usize,
    pub checkpoints: Vec<usize>,
    pub n_tests: usize,
    pub init_range: f64,
    pub master_seed: u64,
}

impl ScenarioMatrixConfig {
    pub fn validate(&self) -> Result<()> {
        if self.cases.is_empty() {
            return Err(Error::config("cases", "at least one case is required"));
        }
        self.case_config(&self.cases[0]).validate()
    }

    /// The training sweep a case runs: its own training set and one pinned
    /// connectivity per rewire count.
    pub fn case_config(&self, case: &ScenarioCase) -> TrainSweepConfig {
        TrainSweepConfig {
            network: format!(
                "{}:set{}:conn{}",
                self.network, case.training_set_seed, case.connectivity_seed
            ),
            shape: self.shape,
            rewire_counts: self.rewire_counts.clone(),
            pattern_count: self.pattern_count,
            learning_rate: self.learning_rate,
            iterations: self.iterations,
            checkpoints: self.checkpoints.clone(),
            n_tests: self.n_tests,
            init_range: self.init_range,
            resample_connectivity_per_test: false,
            training_set_seed: Some(case.training_set_seed),
            connectivity_seed: Some(case.connectivity_seed),
            master_seed: self.master_seed,
        }
    }
}

fn validate_grid(counts: &[usize], shape: LayeredShape) -> Result<()> {
    if counts.is_empty() {
        return Err(Error::config("rewire_counts", "grid is empty"));
    }
    if counts.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::config("rewire_counts", "must be strictly ascending"));
    }
    let limit = shape.baseline_edge_count();
    if let Some(&k) = counts.iter().find(|&&k| k > limit) {
        return Err(Error::config(
            "rewire_counts",
            format!("{k} exceeds the {limit} edges of a {}x{} network", shape.neurons_per_layer(), shape.layers()),
        ));
    }
    Ok(())
}

/// Runs `count` cells on a pool of `workers` threads (0 lets rayon choose)
/// and returns their results in cell order.
fn run_cells<T, F>(count: usize, workers: usize, cell: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::config("workers", e.to_string()))?;
    pool.install(|| (0..count).into_par_iter().map(cell).collect())
}

pub fn run_metric_sweep(cfg: &MetricSweepConfig, workers: usize) -> Result<Vec<SweepRecord>> {
    cfg.validate()?;
    let baseline = build_layered_fnn(cfg.shape);
    let samples = cfg.samples_per_count;

    let cells = run_cells(cfg.rewire_counts.len() * samples, workers, |cell| {
        let k = cfg.rewire_counts[cell / samples];
        let j = cell % samples;
        let graph = rewire(&baseline, k, derive_task_seed(cfg.master_seed, &[k as u64, j as u64]))?;
        let e_global = global_efficiency(&graph);
        Ok(cfg
            .definitions
            .iter()
            .map(|&def| EfficiencyReport::from_efficiencies(e_global, local_efficiency(&graph, def), def))
            .collect::<Vec<_>>())
    })?;

    let mut records = Vec::new();
    for (ki, &k) in cfg.rewire_counts.iter().enumerate() {
        let reports = &cells[ki * samples..(ki + 1) * samples];
        for (di, &def) in cfg.definitions.iter().enumerate() {
            let column = |f: fn(&EfficiencyReport) -> f64| reports.iter().map(|r| f(&r[di])).collect::<Vec<_>>();
            let (mean_eg, std_eg) = mean_std(&column(|r| r.e_global));
            let (mean_el, std_el) = mean_std(&column(|r| r.e_local));
            let (mean_dg, std_dg) = mean_std_extended(&column(|r| r.d_global));
            let (mean_dl, std_dl) = mean_std_extended(&column(|r| r.d_local));
            for (statistic, value) in [
                (Statistic::MeanEGlobal, mean_eg),
                (Statistic::StdEGlobal, std_eg),
                (Statistic::MeanELocal, mean_el),
                (Statistic::StdELocal, std_el),
                (Statistic::MeanDGlobal, mean_dg),
                (Statistic::StdDGlobal, std_dg),
                (Statistic::MeanDLocal, mean_dl),
                (Statistic::StdDLocal, std_dl),
            ] {
                records.push(SweepRecord {
                    network: cfg.network.clone(),
                    definition: Some(def),
                    n_rewire: k,
                    statistic,
                    checkpoint: None,
                    value,
                    sample_count: samples,
                    master_seed: cfg.master_seed,
                });
            }
        }
    }
    Ok(records)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainSweepOutcome {
    pub records: Vec<SweepRecord>,
    /// Rewire count with the smallest mean MAE, per checkpoint. Ties go to
    /// the smaller count.
    pub argmin_mean_mae: BTreeMap<usize, usize>,
}

pub fn run_train_sweep(cfg: &TrainSweepConfig, workers: usize) -> Result<TrainSweepOutcome> {
    cfg.validate()?;
    let baseline = build_layered_fnn(cfg.shape);
    let set_seed = cfg
        .training_set_seed
        .unwrap_or_else(|| derive_task_seed(cfg.master_seed, &[STREAM_PATTERNS]));
    let set = generate_patterns(cfg.shape.neurons_per_layer(), cfg.pattern_count, set_seed)?;
    let connectivity_base = cfg
        .connectivity_seed
        .unwrap_or_else(|| derive_task_seed(cfg.master_seed, &[STREAM_CONNECTIVITY]));
    let tests = cfg.n_tests;

    let results: Vec<TrainingResult> = run_cells(cfg.rewire_counts.len() * tests, workers, |cell| {
        let k = cfg.rewire_counts[cell / tests] as u64;
        let t = (cell % tests) as u64;
        let connectivity_seed = if cfg.resample_connectivity_per_test {
            derive_task_seed(connectivity_base, &[k, t])
        } else {
            derive_task_seed(connectivity_base, &[k])
        };
        let graph = rewire(&baseline, k as usize, connectivity_seed)?;
        let weight_seed = derive_task_seed(cfg.master_seed, &[STREAM_WEIGHTS, k, t]);
        let mut net = init_weights(graph, cfg.init_range, weight_seed)?;
        train(&mut net, &set, &cfg.training_config(weight_seed))
    })?;

    let mut records = Vec::new();
    let mut best: BTreeMap<usize, (usize, f64)> = BTreeMap::new();
    for (ki, &k) in cfg.rewire_counts.iter().enumerate() {
        let runs = &results[ki * tests..(ki + 1) * tests];
        for &checkpoint in &cfg.checkpoints {
            let maes: Vec<f64> = runs.iter().map(|r| r.mae_at_checkpoint[&checkpoint]).collect();
            let min = maes.iter().copied().fold(f64::INFINITY, f64::min);
            let (mean, std) = mean_std(&maes);
            for (statistic, value) in [
                (Statistic::MinMae, min),
                (Statistic::MeanMae, mean),
                (Statistic::StdMae, std),
            ] {
                records.push(SweepRecord {
                    network: cfg.network.clone(),
                    definition: None,
                    n_rewire: k,
                    statistic,
                    checkpoint: Some(checkpoint),
                    value,
                    sample_count: tests,
                    master_seed: cfg.master_seed,
                });
            }
            let entry = best.entry(checkpoint).or_insert((k, mean));
            if mean < entry.1 {
                *entry = (k, mean);
            }
        }
    }
    Ok(TrainSweepOutcome {
        records,
        argmin_mean_mae: best.into_iter().map(|(c, (k, _))| (c, k)).collect(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseOutcome {
    pub case: ScenarioCase,
    pub outcome: TrainSweepOutcome,
}

/// Per-checkpoint comparison of the best rewire count across cases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Disagreement {
    pub checkpoint: usize,
    /// One argmin per case, in case order.
    pub argmins: Vec<usize>,
    pub coincide: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioOutcome {
    pub cases: Vec<CaseOutcome>,
    pub disagreement: Vec<Disagreement>,
}

impl ScenarioOutcome {
    pub fn records(&self) -> Vec<SweepRecord> {
        self.cases.iter().flat_map(|c| c.outcome.records.iter().cloned()).collect()
    }
}

pub fn run_scenario_matrix(cfg: &ScenarioMatrixConfig, workers: usize) -> Result<ScenarioOutcome> {
    cfg.validate()?;
    let cases = cfg
        .cases
        .iter()
        .map(|case| {
            Ok(CaseOutcome {
                case: *case,
                outcome: run_train_sweep(&cfg.case_config(case), workers)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let disagreement = cfg
        .checkpoints
        .iter()
        .map(|&checkpoint| {
            let argmins: Vec<usize> = cases
                .iter()
                .map(|c| c.outcome.argmin_mean_mae[&checkpoint])
                .collect();
            let coincide = argmins.windows(2).all(|w| w[0] == w[1]);
            Disagreement {
                checkpoint,
                argmins,
                coincide,
            }
        })
        .collect();
    Ok(ScenarioOutcome { cases, disagreement })
}
