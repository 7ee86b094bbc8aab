//! Sweep configuration files.
//!
//! A config is a flat, line-oriented `key = value` file split into sections.
//! Each `[metrics]`, `[train]` or `[scenarios]` header starts one sweep; `#`
//! starts a comment. Lists are comma separated.
//!
//! ```text
//! [metrics]
//! network = A
//! neurons = 5
//! layers = 5
//! rewire_counts = 0, 5, 10, 20, 40, 80, 100
//! samples = 100
//! definitions = corrected, same_layer_augmented
//! master_seed = 2007
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rewire_lab::harness::{MetricSweepConfig, ScenarioCase, ScenarioMatrixConfig, TrainSweepConfig};
use rewire_lab::learning::DEFAULT_INIT_RANGE;
use rewire_lab::{Error, LayeredShape, Result, SubgraphDefinition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SweepMode {
    Metrics,
    Train,
    Scenarios,
}

impl SweepMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepMode::Metrics => "metrics",
            SweepMode::Train => "train",
            SweepMode::Scenarios => "scenarios",
        }
    }
}

impl fmt::Display for SweepMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "metrics" => Ok(SweepMode::Metrics),
            "train" => Ok(SweepMode::Train),
            "scenarios" => Ok(SweepMode::Scenarios),
            other => Err(Error::Config {
                field: "mode".into(),
                message: format!("unknown sweep mode `{other}` (expected metrics, train or scenarios)"),
            }),
        }
    }
}

/// Every sweep declared in one config file, in file order per mode.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepPlan {
    pub metrics: Vec<MetricSweepConfig>,
    pub train: Vec<TrainSweepConfig>,
    pub scenarios: Vec<ScenarioMatrixConfig>,
}

impl SweepPlan {
    pub fn modes(&self) -> Vec<SweepMode> {
        let mut modes = Vec::new();
        if !self.metrics.is_empty() {
            modes.push(SweepMode::Metrics);
        }
        if !self.train.is_empty() {
            modes.push(SweepMode::Train);
        }
        if !self.scenarios.is_empty() {
            modes.push(SweepMode::Scenarios);
        }
        modes
    }

    /// Replaces the master seed of every sweep.
    pub fn override_seed(&mut self, seed: u64) {
        self.metrics.iter_mut().for_each(|c| c.master_seed = seed);
        self.train.iter_mut().for_each(|c| c.master_seed = seed);
        self.scenarios.iter_mut().for_each(|c| c.master_seed = seed);
    }

    pub fn master_seeds(&self, mode: SweepMode) -> Vec<u64> {
        match mode {
            SweepMode::Metrics => self.metrics.iter().map(|c| c.master_seed).collect(),
            SweepMode::Train => self.train.iter().map(|c| c.master_seed).collect(),
            SweepMode::Scenarios => self.scenarios.iter().map(|c| c.master_seed).collect(),
        }
    }
}

struct Section {
    mode: SweepMode,
    header_line: usize,
    /// key -> (line, raw value)
    entries: BTreeMap<String, (usize, String)>,
}

impl Section {
    fn take(&mut self, key: &str) -> Option<(usize, String)> {
        self.entries.remove(key)
    }

    fn required<T: FromStr>(&mut self, key: &str) -> Result<T> {
        let (line, raw) = self.take(key).ok_or_else(|| Error::Parse {
            line: self.header_line,
            message: format!("[{}] section is missing required field `{key}`", self.mode),
        })?;
        parse_value(key, line, &raw)
    }

    fn optional<T: FromStr>(&mut self, key: &str) -> Result<Option<T>> {
        self.take(key).map(|(line, raw)| parse_value(key, line, &raw)).transpose()
    }

    fn list<T: FromStr>(&mut self, key: &str) -> Result<Vec<T>> {
        let (line, raw) = self.take(key).ok_or_else(|| Error::Parse {
            line: self.header_line,
            message: format!("[{}] section is missing required field `{key}`", self.mode),
        })?;
        parse_list(key, line, &raw)
    }

    fn optional_list<T: FromStr>(&mut self, key: &str) -> Result<Option<Vec<T>>> {
        self.take(key).map(|(line, raw)| parse_list(key, line, &raw)).transpose()
    }

    fn shape(&mut self) -> Result<LayeredShape> {
        let line = self.entries.get("neurons").map_or(self.header_line, |e| e.0);
        let neurons = self.required("neurons")?;
        let layers = self.required("layers")?;
        LayeredShape::new(neurons, layers).map_err(|e| Error::Parse {
            line,
            message: format!("`neurons`/`layers`: {e}"),
        })
    }

    fn finish(self) -> Result<()> {
        match self.entries.into_iter().next() {
            None => Ok(()),
            Some((key, (line, _))) => Err(Error::Parse {
                line,
                message: format!("unknown field `{key}` in [{}] section", self.mode),
            }),
        }
    }
}

fn parse_value<T: FromStr>(key: &str, line: usize, raw: &str) -> Result<T> {
    raw.parse().map_err(|_| Error::Parse {
        line,
        message: format!("invalid value for `{key}`: `{raw}`"),
    })
}

fn parse_list<T: FromStr>(key: &str, line: usize, raw: &str) -> Result<Vec<T>> {
    raw.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|item| parse_value(key, line, item))
        .collect()
}

fn parse_bool(key: &str, line: usize, raw: &str) -> Result<bool> {
    match raw {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(Error::Parse {
            line,
            message: format!("invalid value for `{key}`: `{raw}` (expected true or false)"),
        }),
    }
}

fn split_sections(text: &str) -> Result<Vec<Section>> {
    let mut sections: Vec<Section> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or_default().trim();
        if content.is_empty() {
            continue;
        }
        if let Some(name) = content.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            let mode = name.trim().parse().map_err(|_| Error::Parse {
                line,
                message: format!("unknown section `[{name}]` (expected [metrics], [train] or [scenarios])"),
            })?;
            sections.push(Section {
                mode,
                header_line: line,
                entries: BTreeMap::new(),
            });
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| Error::Parse {
            line,
            message: format!("expected `key = value`, got `{content}`"),
        })?;
        let section = sections.last_mut().ok_or_else(|| Error::Parse {
            line,
            message: "field appears before any section header".into(),
        })?;
        let key = key.trim().to_string();
        if section.entries.contains_key(&key) {
            return Err(Error::Parse {
                line,
                message: format!("duplicate field `{key}`"),
            });
        }
        section.entries.insert(key, (line, value.trim().to_string()));
    }
    Ok(sections)
}

fn metric_section(mut s: Section) -> Result<MetricSweepConfig> {
    let cfg = MetricSweepConfig {
        network: s.required("network")?,
        shape: s.shape()?,
        rewire_counts: s.list("rewire_counts")?,
        samples_per_count: s.optional("samples")?.unwrap_or(100),
        definitions: s
            .optional_list("definitions")?
            .unwrap_or_else(|| SubgraphDefinition::ALL.to_vec()),
        master_seed: s.required("master_seed")?,
    };
    s.finish()?;
    Ok(cfg)
}

fn train_section(mut s: Section) -> Result<TrainSweepConfig> {
    let network: String = s.required("network")?;
    let shape = s.shape()?;
    let master_seed = s.required("master_seed")?;
    let iterations = s.required("iterations")?;
    let resample = match s.take("resample_connectivity") {
        Some((line, raw)) => parse_bool("resample_connectivity", line, &raw)?,
        None => true,
    };
    let cfg = TrainSweepConfig {
        rewire_counts: s.list("rewire_counts")?,
        pattern_count: s.required("patterns")?,
        learning_rate: s.required("learning_rate")?,
        iterations,
        checkpoints: s.optional_list("checkpoints")?.unwrap_or_else(|| vec![iterations]),
        n_tests: s.required("tests")?,
        init_range: s.optional("init_range")?.unwrap_or(DEFAULT_INIT_RANGE),
        resample_connectivity_per_test: resample,
        training_set_seed: s.optional("training_set_seed")?,
        connectivity_seed: s.optional("connectivity_seed")?,
        ..TrainSweepConfig::new(network, shape, master_seed)
    };
    s.finish()?;
    Ok(cfg)
}

fn scenario_section(mut s: Section) -> Result<ScenarioMatrixConfig> {
    let iterations = s.required("iterations")?;
    let cases_line = s.entries.get("cases").map_or(s.header_line, |e| e.0);
    let cases = s
        .list::<String>("cases")?
        .iter()
        .map(|case| {
            let parsed = case
                .split_once(':')
                .and_then(|(t, c)| Some((t.trim().parse().ok()?, c.trim().parse().ok()?)));
            parsed
                .map(|(training_set_seed, connectivity_seed)| ScenarioCase {
                    training_set_seed,
                    connectivity_seed,
                })
                .ok_or_else(|| Error::Parse {
                    line: cases_line,
                    message: format!("invalid value for `cases`: `{case}` (expected set_seed:connectivity_seed)"),
                })
        })
        .collect::<Result<Vec<_>>>()?;
    let cfg = ScenarioMatrixConfig {
        network: s.required("network")?,
        shape: s.shape()?,
        rewire_counts: s.list("rewire_counts")?,
        pattern_count: s.required("patterns")?,
        cases,
        learning_rate: s.required("learning_rate")?,
        iterations,
        checkpoints: s.optional_list("checkpoints")?.unwrap_or_else(|| vec![iterations]),
        n_tests: s.required("tests")?,
        init_range: s.optional("init_range")?.unwrap_or(DEFAULT_INIT_RANGE),
        master_seed: s.required("master_seed")?,
    };
    s.finish()?;
    Ok(cfg)
}

/// Parses and validates every section of a config file.
pub fn parse_config(text: &str) -> Result<SweepPlan> {
    let mut plan = SweepPlan::default();
    for section in split_sections(text)? {
        match section.mode {
            SweepMode::Metrics => {
                let cfg = metric_section(section)?;
                cfg.validate()?;
                plan.metrics.push(cfg);
            }
            SweepMode::Train => {
                let cfg = train_section(section)?;
                cfg.validate()?;
                plan.train.push(cfg);
            }
            SweepMode::Scenarios => {
                let cfg = scenario_section(section)?;
                cfg.validate()?;
                plan.scenarios.push(cfg);
            }
        }
    }
    if plan.modes().is_empty() {
        return Err(Error::Parse {
            line: 1,
            message: "config declares no [metrics], [train] or [scenarios] section".into(),
        });
    }
    Ok(plan)
}

/// Bundled configs: full-size figure presets
/// plus small desk-scale variants.
pub const PRESETS: &[(&str, &str)] = &[
    ("figure1-a", include_str!("../presets/figure1-a.cfg")),
    ("figure1-b", include_str!("../presets/figure1-b.cfg")),
    ("figure1-c", include_str!("../presets/figure1-c.cfg")),
    ("figure1-d", include_str!("../presets/figure1-d.cfg")),
    ("figure2", include_str!("../presets/figure2.cfg")),
    ("figure3", include_str!("../presets/figure3.cfg")),
    ("figure4", include_str!("../presets/figure4.cfg")),
    ("figure5", include_str!("../presets/figure5.cfg")),
    ("desk-metrics", include_str!("../presets/desk-metrics.cfg")),
    ("desk-train", include_str!("../presets/desk-train.cfg")),
    ("desk-scenarios", include_str!("../presets/desk-scenarios.cfg")),
];

pub fn preset(name: &str) -> Option<&'static str> {
    let name = name.strip_suffix(".cfg").unwrap_or(name);
    PRESETS.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}
