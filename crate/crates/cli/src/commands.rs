use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use rewire_lab::harness::{
    run_metric_sweep, run_scenario_matrix, run_train_sweep, small_world_verdict, write_csv, TrainSweepOutcome,
};
use rewire_lab::metrics::efficiency_report;
use rewire_lab::topology::{build_layered_fnn, rewire};
use rewire_lab::{LayeredShape, RewiredGraph, SubgraphDefinition, SweepRecord};

use crate::config::{parse_config, preset, SweepMode, SweepPlan};
use crate::manifest::{unix_now, RunManifest};
use crate::plot::plot_records;

/// Reference best rewire counts for networks B, C and D, reported next to ours.
const REFERENCE_ARGMIN: [(&str, usize); 3] = [("B", 90), ("C", 1100), ("D", 750)];

pub fn generate_graph(neurons: usize, layers: usize, n_rewire: usize, seed: u64) -> Result<RewiredGraph> {
    let shape = LayeredShape::new(neurons, layers)?;
    Ok(rewire(&build_layered_fnn(shape), n_rewire, seed)?)
}

pub fn default_graph_file_name(neurons: usize, layers: usize, n_rewire: usize, seed: u64) -> String {
    format!("graph-n{neurons}-l{layers}-k{n_rewire}-s{seed}.txt")
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn read_graph(path: &Path) -> Result<RewiredGraph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    RewiredGraph::parse_edge_list(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Efficiency report as `key=value` lines plus any topology warnings.
pub fn metrics_report(graph: &RewiredGraph, definition: SubgraphDefinition) -> (String, Vec<String>) {
    let warnings = graph.validate().iter().map(|v| format!("warning: {v}")).collect();
    let r = efficiency_report(graph, definition);
    let fmt = rewire_lab::harness::format_value;
    let text = format!(
        "definition={}\ne_global={}\ne_local={}\nd_global={}\nd_local={}\n",
        r.definition,
        fmt(r.e_global),
        fmt(r.e_local),
        fmt(r.d_global),
        fmt(r.d_local)
    );
    (text, warnings)
}

/// Where a sweep config comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConfigSource {
    File(PathBuf),
    Preset(String),
}

impl ConfigSource {
    pub fn load(&self) -> Result<(String, String)> {
        match self {
            ConfigSource::File(path) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                let stem = path.file_stem().map_or("sweep".into(), |s| s.to_string_lossy().into_owned());
                Ok((stem, text))
            }
            ConfigSource::Preset(name) => match preset(name) {
                Some(text) => Ok((name.trim_end_matches(".cfg").to_string(), text.to_string())),
                None => bail!(
                    "unknown preset `{name}`; available presets: {}",
                    crate::config::PRESETS.iter().map(|p| p.0).collect::<Vec<_>>().join(", ")
                ),
            },
        }
    }

    pub fn describe(&self) -> String {
        match self {
            ConfigSource::File(path) => path.display().to_string(),
            ConfigSource::Preset(name) => format!("preset:{name}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepRequest {
    pub source: ConfigSource,
    pub mode: Option<SweepMode>,
    pub out_dir: PathBuf,
    pub seed: Option<u64>,
    pub workers: usize,
    pub command_line: String,
}

/// Files written by one sweep mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepOutputs {
    pub mode: SweepMode,
    pub csv: PathBuf,
    pub summary: PathBuf,
    pub manifest: PathBuf,
    pub summary_text: String,
}

fn argmin_lines(out: &mut String, network: &str, outcome: &TrainSweepOutcome) {
    for (checkpoint, k) in &outcome.argmin_mean_mae {
        let _ = writeln!(out, "argmin_mean_mae network={network} checkpoint={checkpoint} n_rewire={k}");
    }
}

fn reference_argmin(out: &mut String, network: &str) {
    if let Some((_, k)) = REFERENCE_ARGMIN.iter().find(|(n, _)| *n == network) {
        let _ = writeln!(out, "reference_argmin network={network} n_rewire={k}");
    }
}

/// Runs one mode of the plan and returns its records and summary text.
pub fn execute_mode(plan: &SweepPlan, mode: SweepMode, workers: usize) -> Result<(Vec<SweepRecord>, String)> {
    let mut records = Vec::new();
    let mut summary = String::new();
    match mode {
        SweepMode::Metrics => {
            for cfg in &plan.metrics {
                let rows = run_metric_sweep(cfg, workers)?;
                match small_world_verdict(&rows) {
                    Ok(verdicts) => {
                        for v in verdicts {
                            let qualifying: Vec<String> = v.qualifying.iter().map(usize::to_string).collect();
                            let _ = writeln!(
                                summary,
                                "small_world network={} definition={} verdict={} e_local_unrewired={} max_e_local={} max_e_global={} qualifying={}",
                                v.network,
                                v.definition,
                                v.verdict,
                                v.e_local_unrewired,
                                v.max_e_local,
                                v.max_e_global,
                                if qualifying.is_empty() { "-".into() } else { qualifying.join(",") }
                            );
                        }
                    }
                    Err(e) => {
                        let _ = writeln!(summary, "small_world network={} verdict=unavailable reason={e}", cfg.network);
                    }
                }
                records.extend(rows);
            }
        }
        SweepMode::Train => {
            for cfg in &plan.train {
                let outcome = run_train_sweep(cfg, workers)?;
                argmin_lines(&mut summary, &cfg.network, &outcome);
                reference_argmin(&mut summary, &cfg.network);
                records.extend(outcome.records);
            }
        }
        SweepMode::Scenarios => {
            for cfg in &plan.scenarios {
                let outcome = run_scenario_matrix(cfg, workers)?;
                for case in &outcome.cases {
                    let label = cfg.case_config(&case.case).network;
                    argmin_lines(&mut summary, &label, &case.outcome);
                }
                for d in &outcome.disagreement {
                    let argmins: Vec<String> = d.argmins.iter().map(usize::to_string).collect();
                    let _ = writeln!(
                        summary,
                        "disagreement network={} checkpoint={} argmins={} coincide={}",
                        cfg.network,
                        d.checkpoint,
                        argmins.join(","),
                        d.coincide
                    );
                }
                reference_argmin(&mut summary, &cfg.network);
                records.extend(outcome.records());
            }
        }
    }
    Ok((records, summary))
}

fn write_mode_outputs(
    req: &SweepRequest,
    plan: &SweepPlan,
    mode: SweepMode,
    stem: &str,
    written: &mut Vec<PathBuf>,
) -> Result<SweepOutputs> {
    let mut manifest = RunManifest::new(
        &req.command_line,
        mode.as_str(),
        &req.source.describe(),
        plan.master_seeds(mode),
        &req.out_dir,
    );
    let (records, summary_text) = execute_mode(plan, mode, req.workers)?;

    let csv = req.out_dir.join(format!("{stem}.csv"));
    written.push(csv.clone());
    let file = fs::File::create(&csv).with_context(|| format!("creating {}", csv.display()))?;
    write_csv(&records, std::io::BufWriter::new(file))?;

    let summary = req.out_dir.join(format!("{stem}.summary.txt"));
    written.push(summary.clone());
    write_text(&summary, &summary_text)?;

    let manifest_path = req.out_dir.join(format!("{stem}.manifest.txt"));
    manifest.outputs = vec![csv.clone(), summary.clone(), manifest_path.clone()];
    manifest.finished_unix = unix_now();
    written.push(manifest_path.clone());
    write_text(&manifest_path, &manifest.render())?;

    Ok(SweepOutputs {
        mode,
        csv,
        summary,
        manifest: manifest_path,
        summary_text,
    })
}

/// Runs the requested sweeps. On failure every file this call created is
/// removed again.
pub fn run_sweep(req: &SweepRequest) -> Result<Vec<SweepOutputs>> {
    let (name, text) = req.source.load()?;
    let mut plan = parse_config(&text).with_context(|| format!("invalid config {}", req.source.describe()))?;
    if let Some(seed) = req.seed {
        plan.override_seed(seed);
    }
    let available = plan.modes();
    let modes = match req.mode {
        Some(mode) if available.contains(&mode) => vec![mode],
        Some(mode) => bail!(
            "config {} has no [{mode}] section (found: {})",
            req.source.describe(),
            available.iter().map(|m| m.as_str()).collect::<Vec<_>>().join(", ")
        ),
        None => available,
    };
    fs::create_dir_all(&req.out_dir).with_context(|| format!("creating {}", req.out_dir.display()))?;

    let mut written = Vec::new();
    let mut outputs = Vec::new();
    for &mode in &modes {
        let stem = if modes.len() == 1 { name.clone() } else { format!("{name}-{mode}") };
        match write_mode_outputs(req, &plan, mode, &stem, &mut written) {
            Ok(out) => outputs.push(out),
            Err(e) => {
                for path in &written {
                    let _ = fs::remove_file(path);
                }
                return Err(e);
            }
        }
    }
    Ok(outputs)
}

pub fn run_plot(csv_files: &[PathBuf], series: &[String], out_dir: &Path) -> Result<Vec<PathBuf>> {
    let mut records = Vec::new();
    for path in csv_files {
        let file = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
        records.extend(rewire_lab::harness::read_csv(file).with_context(|| format!("reading {}", path.display()))?);
    }
    plot_records(&records, series, out_dir)
}
