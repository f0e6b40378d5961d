//! Artifact emission: CSV tables, a structured JSON report, and
//! self-contained SVG pattern plots. The CLI only formats numbers produced
//! by the library; it never re-derives them.

use crate::config::Scenario;
use serde::Serialize;
use std::io::Write;
use std::path::{Path, PathBuf};
use tma_core::pattern::PatternGrid;
use tma_core::{EfficiencyReport64, Error, PatternMetrics64, Result};

/// Offsets whose peak falls below this (dB re the global peak) are omitted
/// from the CSV and the per-offset plots to bound file sizes.
pub const CSV_PEAK_FLOOR_DB: f64 = -60.0;
/// Plot floor, matching the usual presentation of such patterns.
pub const PLOT_FLOOR_DB: f64 = -40.0;

#[derive(Debug, Serialize)]
pub struct OffsetMetricsJson {
    pub offset: i64,
    pub peak_db: f64,
    pub peak_theta_deg: f64,
    pub sll_db: f64,
    pub hpbw_deg: Option<f64>,
}

impl From<&PatternMetrics64> for OffsetMetricsJson {
    fn from(m: &PatternMetrics64) -> Self {
        Self {
            offset: m.offset,
            peak_db: m.peak_db,
            peak_theta_deg: m.peak_theta_deg,
            sll_db: m.sll_db,
            hpbw_deg: m.hpbw_deg,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct EfficiencyJson {
    pub eta_tma: f64,
    pub eta_bfn: f64,
    pub eta_total: f64,
    pub eta_total_db: f64,
    pub p_input: f64,
    pub p_radiated: f64,
    pub p_useful: f64,
}

impl From<&EfficiencyReport64> for EfficiencyJson {
    fn from(r: &EfficiencyReport64) -> Self {
        Self {
            eta_tma: r.eta_tma,
            eta_bfn: r.eta_bfn,
            eta_total: r.eta_total,
            eta_total_db: 10.0 * r.eta_total.log10(),
            p_input: r.p_input,
            p_radiated: r.p_radiated,
            p_useful: r.p_useful,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct OptimizerJson {
    pub duties: Vec<f64>,
    pub achieved_sll_db: f64,
    pub achieved_harmonic_max_db: f64,
    pub best_cost: f64,
    pub seed_used: u64,
    pub evaluations: usize,
    pub accepted_moves: usize,
}

#[derive(Debug, Serialize)]
pub struct SweepRowJson {
    pub scan_deg: f64,
    pub peak_theta_deg: f64,
    pub sll_db: f64,
    pub unwanted_db: f64,
    pub hpbw_deg: Option<f64>,
}

/// The structured report written as `metrics.json`; echoes the scenario so a
/// run can be repeated from its own output.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub tool_version: String,
    pub scenario: Scenario,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub pattern_metrics: Vec<OffsetMetricsJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub efficiency: Option<EfficiencyJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub optimizer: Option<OptimizerJson>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub sweep: Vec<SweepRowJson>,
    pub artifacts: Vec<String>,
}

impl RunReport {
    pub fn new(scenario: &Scenario) -> Self {
        Self {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            scenario: scenario.clone(),
            seed: None,
            pattern_metrics: Vec::new(),
            efficiency: None,
            optimizer: None,
            sweep: Vec::new(),
            artifacts: Vec::new(),
        }
    }

    /// Write `metrics.json` plus `scenario.toml`, the fully resolved
    /// configuration the run actually used (feed it back in to repeat the run).
    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        write_file(dir.join("scenario.toml").as_path(), self.scenario.to_toml().as_bytes())?;
        let path = dir.join("metrics.json");
        let json = serde_json::to_string_pretty(self)
            .map_err(|e| Error::Domain(format!("report serialization failed: {e}")))?;
        write_file(&path, json.as_bytes())?;
        Ok(path)
    }
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes)
        .map_err(|e| Error::Validation(format!("cannot write {}: {e}", path.display())))
}

/// Offsets loud enough to keep in artifacts, ascending.
fn kept_offsets(grid: &PatternGrid<f64>) -> Vec<usize> {
    (0..grid.offsets.len())
        .filter(|&i| {
            let peak = grid.power[i].iter().copied().fold(0.0, f64::max);
            grid.power_db(peak) >= CSV_PEAK_FLOOR_DB
        })
        .collect()
}

/// `pattern.csv` with one `theta_deg,offset,power_db` row per kept offset and
/// grid angle.
pub fn write_pattern_csv(dir: &Path, grid: &PatternGrid<f64>) -> Result<PathBuf> {
    let path = dir.join("pattern.csv");
    let mut out = String::from("theta_deg,offset,power_db\n");
    for &i in &kept_offsets(grid) {
        for (j, &theta) in grid.theta_deg.iter().enumerate() {
            out.push_str(&format!(
                "{theta:.4},{},{:.4}\n",
                grid.offsets[i],
                grid.power_db(grid.power[i][j])
            ));
        }
    }
    write_file(&path, out.as_bytes())?;
    Ok(path)
}

const SVG_W: f64 = 900.0;
const SVG_H: f64 = 540.0;
const MARGIN_L: f64 = 60.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 20.0;
const MARGIN_B: f64 = 45.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

fn x_of(theta: f64) -> f64 {
    MARGIN_L + (theta / 180.0) * (SVG_W - MARGIN_L - MARGIN_R)
}

fn y_of(db: f64) -> f64 {
    let clamped = db.max(PLOT_FLOOR_DB).min(0.0);
    MARGIN_T + (-clamped / -PLOT_FLOOR_DB) * (SVG_H - MARGIN_T - MARGIN_B)
}

fn svg_header(title: &str) -> String {
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SVG_W}\" height=\"{SVG_H}\" \
         viewBox=\"0 0 {SVG_W} {SVG_H}\" font-family=\"sans-serif\" font-size=\"12\">\n\
         <rect width=\"{SVG_W}\" height=\"{SVG_H}\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"14\" text-anchor=\"middle\">{title}</text>\n",
        SVG_W / 2.0
    );
    // axes and grid lines
    for tick in (0..=180).step_by(30) {
        let x = x_of(tick as f64);
        s.push_str(&format!(
            "<line x1=\"{x}\" y1=\"{MARGIN_T}\" x2=\"{x}\" y2=\"{}\" stroke=\"#ddd\"/>\n\
             <text x=\"{x}\" y=\"{}\" text-anchor=\"middle\">{tick}</text>\n",
            SVG_H - MARGIN_B,
            SVG_H - MARGIN_B + 18.0
        ));
    }
    let mut db = 0.0;
    while db >= PLOT_FLOOR_DB {
        let y = y_of(db);
        s.push_str(&format!(
            "<line x1=\"{MARGIN_L}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\" stroke=\"#ddd\"/>\n\
             <text x=\"{}\" y=\"{}\" text-anchor=\"end\">{db}</text>\n",
            SVG_W - MARGIN_R,
            MARGIN_L - 6.0,
            y + 4.0
        ));
        db -= 10.0;
    }
    s.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">theta (deg)</text>\n\
         <text x=\"14\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 14 {})\">power (dB)</text>\n",
        SVG_W / 2.0,
        SVG_H - 6.0,
        SVG_H / 2.0,
        SVG_H / 2.0
    ));
    s
}

fn polyline(grid: &PatternGrid<f64>, row: usize, color: &str) -> String {
    let pts: Vec<String> = grid
        .theta_deg
        .iter()
        .enumerate()
        .map(|(j, &theta)| {
            format!("{:.2},{:.2}", x_of(theta), y_of(grid.power_db(grid.power[row][j])))
        })
        .collect();
    format!(
        "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.2\" points=\"{}\"/>\n",
        pts.join(" ")
    )
}

/// One SVG per kept offset plus a combined overlay (`pattern.svg`).
pub fn write_pattern_svgs(dir: &Path, grid: &PatternGrid<f64>) -> Result<Vec<PathBuf>> {
    let kept = kept_offsets(grid);
    let mut paths = Vec::new();
    let mut overlay = svg_header("harmonic patterns");
    for (rank, &i) in kept.iter().enumerate() {
        let offset = grid.offsets[i];
        let color = PALETTE[rank % PALETTE.len()];
        overlay.push_str(&polyline(grid, i, color));
        overlay.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" fill=\"{color}\">m = {offset:+}</text>\n",
            SVG_W - MARGIN_R - 70.0,
            MARGIN_T + 16.0 * (rank as f64 + 1.0)
        ));
        let mut single = svg_header(&format!("pattern at offset m = {offset:+}"));
        single.push_str(&polyline(grid, i, PALETTE[0]));
        single.push_str("</svg>\n");
        let sign = if offset < 0 { "m" } else { "p" };
        let path = dir.join(format!("pattern_{sign}{}.svg", offset.abs()));
        write_file(&path, single.as_bytes())?;
        paths.push(path);
    }
    overlay.push_str("</svg>\n");
    let path = dir.join("pattern.svg");
    write_file(&path, overlay.as_bytes())?;
    paths.push(path);
    Ok(paths)
}

pub fn write_csv_rows(
    dir: &Path,
    name: &str,
    header: &str,
    rows: impl IntoIterator<Item = String>,
) -> Result<PathBuf> {
    let path = dir.join(name);
    let mut buf = Vec::new();
    writeln!(buf, "{header}").unwrap();
    for row in rows {
        writeln!(buf, "{row}").unwrap();
    }
    write_file(&path, &buf)?;
    Ok(path)
}
