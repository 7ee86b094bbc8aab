//! End-to-end checks of the `rewire-lab` binary.

use std::path::Path;
use std::process::{Command, Output};

use rewire_lab::topology::{build_layered_fnn, LayeredShape};
use rewire_lab::RewiredGraph;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_rewire-lab"));
    cmd.env_remove("REWIRE_LAB_OUT");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(key)?.strip_prefix('='))
        .unwrap_or_else(|| panic!("no `{key}` in {text}"))
}

#[test]
fn generate_unrewired_network_a() {
    let out = run(&["generate", "--neurons", "5", "--layers", "5", "--rewire", "0", "--seed", "1"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let g = RewiredGraph::parse_edge_list(&stdout(&out)).unwrap();
    assert_eq!(g.edges().len(), 100);
    assert_eq!(g.edges(), build_layered_fnn(LayeredShape::new(5, 5).unwrap()).edges());
    assert_eq!(g.seed(), 1);
}

#[test]
fn generate_network_d_with_750_rewirings() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.txt");
    let out = run(&[
        "generate", "--neurons", "10", "--layers", "10", "--rewire", "750", "--seed", "7", "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let g = RewiredGraph::parse_edge_list(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let base = build_layered_fnn(g.shape());
    assert_eq!(g.edges().len(), 900);
    assert_eq!(g.edges().iter().filter(|e| !base.contains_edge(e)).count(), 750);
    assert!(g.validate().is_empty());
}

#[test]
fn generate_rejects_rewire_beyond_edge_count() {
    let out = run(&["generate", "--neurons", "10", "--layers", "10", "--rewire", "901", "--seed", "7"]);
    assert!(!out.status.success());
    assert!(stdout(&out).is_empty());
    assert!(stderr(&out).contains("901"), "{}", stderr(&out));
}

#[test]
fn generate_defaults_to_output_directory_from_env() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["generate", "--neurons", "2", "--layers", "3", "--rewire", "1", "--seed", "4"])
        .env("REWIRE_LAB_OUT", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(dir.path().join("graph-n2-l3-k1-s4.txt").exists());
}

fn write_unrewired_a(dir: &Path) -> String {
    let path = dir.join("a.txt");
    std::fs::write(&path, build_layered_fnn(LayeredShape::new(5, 5).unwrap()).to_edge_list()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn metrics_on_unrewired_network_a() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_unrewired_a(dir.path());
    let out = run(&["metrics", &path, "--definition", "corrected"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert_eq!(field(&text, "e_local"), "0");
    assert_eq!(field(&text, "d_local"), "inf");

    let out = run(&["metrics", &path, "--definition", "same_layer_augmented"]);
    let text = stdout(&out);
    assert!(field(&text, "e_local").parse::<f64>().unwrap() > 0.0);
    assert_eq!(field(&text, "definition"), "same_layer_augmented");
}

#[test]
fn metrics_on_complete_graph_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("complete.txt");
    // 1x4 chain plus every skip edge: the complete graph on four nodes
    std::fs::write(&path, "layers=4 neurons=1 n_rewire=0 seed=0\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n").unwrap();
    let out = run(&["metrics", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(field(&stdout(&out), "e_global"), "1");
    assert!(stderr(&out).contains("warning"), "edge count differs from baseline");
}

#[test]
fn metrics_reports_malformed_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, "layers=2 neurons=1 n_rewire=0 seed=0\n0 x\n").unwrap();
    let out = run(&["metrics", path.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("line 2"), "{}", stderr(&out));
}

#[test]
fn sweep_writes_csv_summary_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["sweep", "--preset", "desk-metrics", "--out", dir.path().to_str().unwrap(), "--seed", "11"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = std::fs::read_to_string(dir.path().join("desk-metrics.csv")).unwrap();
    // 2 definitions x 7 rewire counts x 8 statistics
    assert_eq!(csv.lines().count(), 1 + 2 * 7 * 8);
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",20,11")));
    let manifest = std::fs::read_to_string(dir.path().join("desk-metrics.manifest.txt")).unwrap();
    assert!(manifest.contains("master_seed=11\n"));
    assert!(manifest.contains("mode=metrics\n"));
    let summary = std::fs::read_to_string(dir.path().join("desk-metrics.summary.txt")).unwrap();
    assert!(summary.contains("definition=corrected verdict=absent"));
}

#[test]
fn sweep_config_errors_name_the_field_and_leave_no_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "[train]\nnetwork = A\nneurons = 5\nlayers = 5\nrewire_counts = 0\npatterns = 4\nlearning_rate = -1\niterations = 10\ntests = 1\nmaster_seed = 1\n").unwrap();
    let out_dir = dir.path().join("out");
    let out = run(&["sweep", cfg.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("learning_rate"), "{}", stderr(&out));
    assert!(!out_dir.exists() || std::fs::read_dir(&out_dir).unwrap().next().is_none());

    let out = run(&["sweep", "--preset", "figure9"]);
    assert!(stderr(&out).contains("figure1-a"), "{}", stderr(&out));
}

#[test]
fn sweep_mode_must_match_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "sweep", "--preset", "desk-metrics", "--mode", "train", "--out", dir.path().to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("no [train] section"), "{}", stderr(&out));
}

#[test]
fn train_sweep_rows_carry_checkpoints() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("tiny.cfg");
    std::fs::write(
        &cfg,
        "[train]\nnetwork = T\nneurons = 3\nlayers = 3\nrewire_counts = 0, 3, 6\npatterns = 4\nlearning_rate = 0.1\niterations = 200\ncheckpoints = 100, 200\ntests = 2\nmaster_seed = 5\n",
    )
    .unwrap();
    let out = run(&["sweep", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = std::fs::read_to_string(dir.path().join("tiny.csv")).unwrap();
    for stat in ["min_mae", "mean_mae", "std_mae"] {
        for cp in ["100", "200"] {
            assert!(csv.lines().any(|l| l.starts_with("T,-,3,") && l.contains(&format!(",{stat},{cp},"))), "{stat} {cp}");
        }
    }
    let summary = stdout(&out);
    assert!(summary.contains("argmin_mean_mae network=T checkpoint=200"));
}

#[test]
fn plot_renders_both_chart_kinds_and_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    assert!(run(&["sweep", "--preset", "desk-metrics", "--out", d]).status.success());
    let cfg = dir.path().join("t.cfg");
    std::fs::write(
        &cfg,
        "[train]\nnetwork = T\nneurons = 2\nlayers = 3\nrewire_counts = 0, 2\npatterns = 2\nlearning_rate = 0.1\niterations = 50\ntests = 2\nmaster_seed = 5\n",
    )
    .unwrap();
    assert!(run(&["sweep", cfg.to_str().unwrap(), "--out", d]).status.success());

    let plots = dir.path().join("plots");
    let p = plots.to_str().unwrap();
    let metrics_csv = dir.path().join("desk-metrics.csv");
    let out = run(&["plot", metrics_csv.to_str().unwrap(), dir.path().join("t.csv").to_str().unwrap(), "--out", p]);
    assert!(out.status.success(), "{}", stderr(&out));
    let connectivity = std::fs::read_to_string(plots.join("A-connectivity.svg")).unwrap();
    assert!(connectivity.starts_with("<svg"));
    assert!(connectivity.contains("mean_d_local (corrected)") && connectivity.contains("mean_d_global (corrected)"));
    assert!(connectivity.contains("∞"));
    let mae = std::fs::read_to_string(plots.join("T-mae-50.svg")).unwrap();
    assert!(mae.contains("min_mae") && mae.contains("mean_mae") && mae.contains(r#"fill="white""#));

    let out = run(&["plot", metrics_csv.to_str().unwrap(), "--series", "min_mae", "--out", p]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("available series: mean_d_global"), "{}", stderr(&out));

    let empty = dir.path().join("empty.csv");
    std::fs::write(&empty, "network,definition,n_rewire,statistic,checkpoint,value,sample_count,master_seed\n").unwrap();
    let empty_out = dir.path().join("empty-plots");
    let out = run(&["plot", empty.to_str().unwrap(), "--out", empty_out.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(!empty_out.exists());
}
