//! SVG rendering of sweep CSVs.
//!
//! Metric statistics become one `<network>-connectivity.svg` per network
//! with a line per (definition, statistic). MAE statistics become one
//! `<network>-mae-<checkpoint>.svg` per checkpoint, min drawn as open
//! squares and mean as filled squares. Infinite values are pinned above the
//! plot area and marked with an arrow and a `∞` label.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use rewire_lab::{Statistic, SweepRecord};

pub const DEFAULT_METRIC_SERIES: [&str; 2] = ["mean_d_local", "mean_d_global"];
pub const DEFAULT_MAE_SERIES: [&str; 2] = ["min_mae", "mean_mae"];

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 190.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 55.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Marker {
    Line,
    OpenSquare,
    FilledSquare,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub marker: Marker,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    pub file_name: String,
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

/// Keeps ASCII alphanumerics, `-`, `_` and `.`; everything else becomes `_`.
pub fn sanitize_file_name(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.') { c } else { '_' })
        .collect()
}

fn is_mae(stat: Statistic) -> bool {
    matches!(stat, Statistic::MinMae | Statistic::MeanMae | Statistic::StdMae)
}

/// Builds the charts for `records`. With no explicit `series`, metric
/// records use [`DEFAULT_METRIC_SERIES`] and MAE records
/// [`DEFAULT_MAE_SERIES`].
pub fn build_charts(records: &[SweepRecord], series: &[String]) -> Result<Vec<Chart>> {
    if records.is_empty() {
        bail!("no records to plot: the CSV input is empty");
    }
    let available: BTreeSet<&str> = records.iter().map(|r| r.statistic.as_str()).collect();
    let requested: Vec<Statistic> = if series.is_empty() {
        let mut defaults = Vec::new();
        if records.iter().any(|r| !is_mae(r.statistic)) {
            defaults.extend(DEFAULT_METRIC_SERIES);
        }
        if records.iter().any(|r| is_mae(r.statistic)) {
            defaults.extend(DEFAULT_MAE_SERIES);
        }
        defaults.into_iter().map(|s| s.parse().unwrap()).collect()
    } else {
        series
            .iter()
            .map(|s| s.parse::<Statistic>().ok().filter(|st| available.contains(st.as_str())).ok_or(s))
            .collect::<std::result::Result<_, _>>()
            .map_err(|s| {
                anyhow::anyhow!(
                    "series `{s}` not found; available series: {}",
                    available.iter().copied().collect::<Vec<_>>().join(", ")
                )
            })?
    };
    for stat in &requested {
        if !available.contains(stat.as_str()) {
            bail!(
                "series `{stat}` not found; available series: {}",
                available.iter().copied().collect::<Vec<_>>().join(", ")
            );
        }
    }

    let mut metric: BTreeMap<&str, BTreeMap<(String, usize), Vec<(f64, f64)>>> = BTreeMap::new();
    let mut mae: BTreeMap<(&str, usize), BTreeMap<usize, Vec<(f64, f64)>>> = BTreeMap::new();
    for r in records {
        let Some(slot) = requested.iter().position(|s| *s == r.statistic) else { continue };
        let point = (r.n_rewire as f64, r.value);
        if is_mae(r.statistic) {
            let checkpoint = r.checkpoint.unwrap_or(0);
            mae.entry((&r.network, checkpoint))
                .or_default()
                .entry(slot)
                .or_default()
                .push(point);
        } else {
            let def = r.definition.map_or("-", |d| d.as_str()).to_string();
            metric
                .entry(&r.network)
                .or_default()
                .entry((def, slot))
                .or_default()
                .push(point);
        }
    }

    let mut charts = Vec::new();
    for (network, lines) in metric {
        charts.push(Chart {
            file_name: sanitize_file_name(&format!("{network}-connectivity.svg")),
            title: format!("Network {network}"),
            x_label: "n_rewire".into(),
            y_label: "value".into(),
            series: lines
                .into_iter()
                .map(|((def, slot), points)| Series {
                    label: format!("{} ({def})", requested[slot]),
                    marker: Marker::Line,
                    points,
                })
                .collect(),
        });
    }
    for ((network, checkpoint), groups) in mae {
        charts.push(Chart {
            file_name: sanitize_file_name(&format!("{network}-mae-{checkpoint}.svg")),
            title: format!("Network {network}, {checkpoint} iterations"),
            x_label: "n_rewire".into(),
            y_label: "MAE".into(),
            series: groups
                .into_iter()
                .map(|(slot, points)| {
                    let stat = requested[slot];
                    Series {
                        label: stat.to_string(),
                        marker: match stat {
                            Statistic::MinMae => Marker::OpenSquare,
                            Statistic::MeanMae => Marker::FilledSquare,
                            _ => Marker::Line,
                        },
                        points,
                    }
                })
                .collect(),
        });
    }
    Ok(charts)
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.to_string() }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn square(out: &mut String, x: f64, y: f64, color: &str, filled: bool) {
    let fill = if filled { color } else { "white" };
    let _ = writeln!(
        out,
        r#"<rect x="{:.2}" y="{:.2}" width="8" height="8" fill="{fill}" stroke="{color}" stroke-width="1.5"/>"#,
        x - 4.0,
        y - 4.0
    );
}

pub fn render_svg(chart: &Chart) -> String {
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let all = || chart.series.iter().flat_map(|s| s.points.iter());
    let (mut x_min, mut x_max) = all().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.0), b.max(p.0)));
    let finite_y = || all().map(|p| p.1).filter(|y| y.is_finite());
    let (mut y_min, mut y_max) = finite_y().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), y| (a.min(y), b.max(y)));
    if !x_min.is_finite() {
        (x_min, x_max) = (0.0, 1.0);
    }
    if !y_min.is_finite() {
        (y_min, y_max) = (0.0, 1.0);
    }
    y_min = y_min.min(0.0);
    if x_max == x_min {
        x_max = x_min + 1.0;
    }
    if y_max == y_min {
        y_max = y_min + 1.0;
    }
    let y_span = y_max - y_min;
    y_max += 0.05 * y_span;
    // infinite values sit on a capped band above the finite range
    let cap_y = TOP - 14.0;
    let sx = |x: f64| LEFT + (x - x_min) / (x_max - x_min) * plot_w;
    let sy = |y: f64| if y.is_finite() { TOP + (y_max - y) / (y_max - y_min) * plot_h } else { cap_y };

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="16" text-anchor="middle" font-size="14">{}</text>"#,
        LEFT + plot_w / 2.0,
        escape(&chart.title)
    );
    let _ = writeln!(
        out,
        r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );
    for i in 0..=5 {
        let f = f64::from(i) / 5.0;
        let xv = x_min + f * (x_max - x_min);
        let yv = y_min + f * (y_max - y_min);
        let (px, py) = (sx(xv), sy(yv));
        let _ = writeln!(
            out,
            r#"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            TOP + plot_h,
            TOP + plot_h + 5.0,
            TOP + plot_h + 18.0,
            tick_label(xv)
        );
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{py:.2}" x2="{LEFT}" y2="{py:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 5.0,
            LEFT - 8.0,
            py + 4.0,
            tick_label(yv)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 12.0,
        escape(&chart.x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0,
        escape(&chart.y_label)
    );

    for (i, series) in chart.series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut points = series.points.clone();
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        let _ = writeln!(out, r#"<g class="series" data-label="{}">"#, escape(&series.label));
        if series.marker == Marker::Line {
            let path: Vec<String> = points.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
            let _ = writeln!(
                out,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
                path.join(" ")
            );
        }
        for &(x, y) in &points {
            let (px, py) = (sx(x), sy(y));
            if !y.is_finite() {
                let _ = writeln!(
                    out,
                    r#"<path class="capped" d="M {:.2} {:.2} L {:.2} {:.2} L {px:.2} {:.2} Z" fill="{color}"/><text x="{px:.2}" y="{:.2}" text-anchor="middle" fill="{color}">∞</text>"#,
                    px - 4.0,
                    py + 3.0,
                    px + 4.0,
                    py + 3.0,
                    py - 4.0,
                    py - 6.0
                );
                continue;
            }
            match series.marker {
                Marker::Line => {
                    let _ = writeln!(out, r#"<circle cx="{px:.2}" cy="{py:.2}" r="2.5" fill="{color}"/>"#);
                }
                Marker::OpenSquare => square(&mut out, px, py, color, false),
                Marker::FilledSquare => square(&mut out, px, py, color, true),
            }
        }
        let ly = TOP + 10.0 + 18.0 * i as f64;
        let lx = WIDTH - RIGHT + 14.0;
        match series.marker {
            Marker::Line => {
                let _ = writeln!(
                    out,
                    r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="1.5"/>"#,
                    lx + 16.0
                );
            }
            m => square(&mut out, lx + 8.0, ly, color, m == Marker::FilledSquare),
        }
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}">{}</text></g>"#,
            lx + 22.0,
            ly + 4.0,
            escape(&series.label)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Renders every chart into `out_dir`. Nothing is written unless all
/// charts could be built.
pub fn plot_records(records: &[SweepRecord], series: &[String], out_dir: &Path) -> Result<Vec<PathBuf>> {
    let charts = build_charts(records, series)?;
    std::fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let mut written = Vec::new();
    for chart in &charts {
        let path = out_dir.join(&chart.file_name);
        std::fs::write(&path, render_svg(chart)).with_context(|| format!("writing {}", path.display()))?;
        written.push(path);
    }
    Ok(written)
}
