use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

/// Record of one `sweep` invocation, written next to its outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub command: String,
    pub mode: String,
    pub config: String,
    pub master_seeds: Vec<u64>,
    pub out_dir: PathBuf,
    pub version: &'static str,
    pub started_unix: u64,
    pub finished_unix: u64,
    pub outputs: Vec<PathBuf>,
}

pub fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs())
}

impl RunManifest {
    pub fn new(command: &str, mode: &str, config: &str, master_seeds: Vec<u64>, out_dir: &Path) -> Self {
        Self {
            command: command.to_string(),
            mode: mode.to_string(),
            config: config.to_string(),
            master_seeds,
            out_dir: out_dir.to_path_buf(),
            version: env!("CARGO_PKG_VERSION"),
            started_unix: unix_now(),
            finished_unix: 0,
            outputs: Vec::new(),
        }
    }

    pub fn render(&self) -> String {
        let seeds: Vec<String> = self.master_seeds.iter().map(u64::to_string).collect();
        let outputs: Vec<String> = self.outputs.iter().map(|p| p.display().to_string()).collect();
        let mut s = String::new();
        let _ = writeln!(s, "command={}", self.command);
        let _ = writeln!(s, "mode={}", self.mode);
        let _ = writeln!(s, "config={}", self.config);
        let _ = writeln!(s, "master_seed={}", seeds.join(","));
        let _ = writeln!(s, "out_dir={}", self.out_dir.display());
        let _ = writeln!(s, "version={}", self.version);
        let _ = writeln!(s, "started_unix={}", self.started_unix);
        let _ = writeln!(s, "finished_unix={}", self.finished_unix);
        let _ = writeln!(s, "outputs={}", outputs.join(","));
        s
    }
}
