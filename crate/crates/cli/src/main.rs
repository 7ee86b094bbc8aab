use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand};
use rewire_lab::SubgraphDefinition;
use rewire_lab_cli::commands::{
    default_graph_file_name, generate_graph, metrics_report, read_graph, run_plot, run_sweep, write_text,
};
use rewire_lab_cli::{ConfigSource, SweepMode, SweepRequest};

#[derive(Parser)]
#[command(name = "rewire-lab", version, about = "Rewired layered feed-forward networks: graphs, efficiency metrics and learning sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a baseline network, rewire it and write the edge list.
    Generate {
        #[arg(long)]
        neurons: usize,
        #[arg(long)]
        layers: usize,
        #[arg(long, default_value_t = 0)]
        rewire: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file. Defaults to a file in $REWIRE_LAB_OUT, or stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print efficiencies and connectivity lengths of an edge-list file.
    Metrics {
        graph: PathBuf,
        #[arg(long, default_value = "corrected")]
        definition: SubgraphDefinition,
    },
    /// Run the sweeps of a config file or bundled preset.
    Sweep {
        config: Option<PathBuf>,
        #[arg(long, conflicts_with = "config")]
        preset: Option<String>,
        #[arg(long)]
        mode: Option<SweepMode>,
        #[arg(long, env = "REWIRE_LAB_OUT", default_value = ".")]
        out: PathBuf,
        /// Overrides master_seed of every section.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads; 0 uses one per core.
        #[arg(long, default_value_t = 0)]
        workers: usize,
    },
    /// Render sweep CSVs as SVG charts.
    Plot {
        #[arg(required = true)]
        csv: Vec<PathBuf>,
        #[arg(long, env = "REWIRE_LAB_OUT", default_value = ".")]
        out: PathBuf,
        /// Statistics to draw, e.g. mean_d_local,mean_d_global.
        #[arg(long, value_delimiter = ',')]
        series: Vec<String>,
    },
    /// List the bundled presets.
    Presets,
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate { neurons, layers, rewire, seed, out } => {
            let graph = generate_graph(neurons, layers, rewire, seed)?;
            let text = graph.to_edge_list();
            let target = out.or_else(|| {
                std::env::var_os("REWIRE_LAB_OUT")
                    .map(|dir| PathBuf::from(dir).join(default_graph_file_name(neurons, layers, rewire, seed)))
            });
            match target {
                Some(path) => {
                    write_text(&path, &text)?;
                    eprintln!("wrote {}", path.display());
                }
                None => std::io::stdout().lock().write_all(text.as_bytes())?,
            }
        }
        Command::Metrics { graph, definition } => {
            let graph = read_graph(&graph)?;
            let (text, warnings) = metrics_report(&graph, definition);
            for w in warnings {
                eprintln!("{w}");
            }
            print!("{text}");
        }
        Command::Sweep { config, preset, mode, out, seed, workers } => {
            let source = match (config, preset) {
                (Some(path), None) => ConfigSource::File(path),
                (None, Some(name)) => ConfigSource::Preset(name),
                _ => bail!("give either a config file or --preset NAME"),
            };
            let request = SweepRequest {
                source,
                mode,
                out_dir: out,
                seed,
                workers,
                command_line: std::env::args().collect::<Vec<_>>().join(" "),
            };
            for o in run_sweep(&request)? {
                print!("{}", o.summary_text);
                println!("wrote {} {} {}", o.csv.display(), o.summary.display(), o.manifest.display());
            }
        }
        Command::Plot { csv, out, series } => {
            for path in run_plot(&csv, &series, &out)? {
                println!("wrote {}", path.display());
            }
        }
        Command::Presets => {
            for (name, _) in rewire_lab_cli::config::PRESETS {
                println!("{name}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
