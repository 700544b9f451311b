// SPDX-License-Identifier: Apache-2.0

//! Baseline-versus-preprocessed experiment driver.
//!
//! For every `(k, seed)` the generated circuit is measured twice: after
//! `optimize` alone (baseline) and after `optimize ∘ rec_branch_expand` for
//! each requested depth limit (preprocessed). Metrics are averaged over
//! seeds, then turned into a percentage decrease.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::circuit::Circuit;
use crate::expand::{rec_branch_expand, ExpandConfig, ExpandError};
use crate::pathmetrics::{enumerate_paths, metrics, path_gate_count, MetricsError, MetricsReport};
use crate::peephole::{optimize, optimize_pipeline};
use crate::randgen::{
    gen_pattern1, gen_pattern2, shor_qec_demo, GenConfig, GenError, DEFAULT_P_CX,
};
use crate::simverify::{equivalent, SimError};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid experiment config: {0}")]
    InvalidConfig(String),
    #[error("generation failed at k={k}, seed={seed}: {source}")]
    Generate {
        k: usize,
        seed: u64,
        source: GenError,
    },
    #[error("expansion failed at k={k}, seed={seed}: {source}")]
    Expand {
        k: usize,
        seed: u64,
        source: ExpandError,
    },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("csv error on {path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Pattern {
    #[serde(rename = "1")]
    Shallow,
    #[serde(rename = "2")]
    Nested,
}

impl Pattern {
    pub fn number(self) -> u8 {
        match self {
            Pattern::Shallow => 1,
            Pattern::Nested => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    MaxPDepth,
    MinPDepth,
    MaxPGateCount,
    MinPGateCount,
}

impl Metric {
    pub const ALL: [Metric; 4] = [
        Metric::MaxPDepth,
        Metric::MinPDepth,
        Metric::MaxPGateCount,
        Metric::MinPGateCount,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::MaxPDepth => "max_p_depth",
            Metric::MinPDepth => "min_p_depth",
            Metric::MaxPGateCount => "max_p_gate_count",
            Metric::MinPGateCount => "min_p_gate_count",
        }
    }

    pub fn family(self) -> &'static str {
        match self {
            Metric::MaxPDepth | Metric::MinPDepth => "depth",
            Metric::MaxPGateCount | Metric::MinPGateCount => "gate_count",
        }
    }

    pub fn of(self, r: &MetricsReport) -> usize {
        match self {
            Metric::MaxPDepth => r.max_p_depth,
            Metric::MinPDepth => r.min_p_depth,
            Metric::MaxPGateCount => r.max_p_gate_count,
            Metric::MinPGateCount => r.min_p_gate_count,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub pattern: Pattern,
    pub n: usize,
    pub d_s: usize,
    pub k_values: Vec<usize>,
    pub seeds_per_point: usize,
    /// Seeds used are `seed_base .. seed_base + seeds_per_point`.
    pub seed_base: u64,
    pub depth_limits: Vec<u32>,
    /// Nesting depth for pattern 2.
    pub nesting_d: usize,
    pub p_cx: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            pattern: Pattern::Shallow,
            n: 3,
            d_s: 5,
            k_values: (1..=20).collect(),
            seeds_per_point: 25,
            seed_base: 0,
            depth_limits: vec![1],
            nesting_d: 4,
            p_cx: DEFAULT_P_CX,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: &str| Err(HarnessError::InvalidConfig(m.to_string()));
        if self.k_values.is_empty() {
            return bad("k_values must be nonempty");
        }
        if self.k_values.windows(2).any(|w| w[0] >= w[1]) {
            return bad("k_values must be strictly ascending");
        }
        if self.seeds_per_point < 1 {
            return bad("seeds_per_point must be at least 1");
        }
        if self.depth_limits.is_empty() {
            return bad("depth_limits must be nonempty");
        }
        Ok(())
    }

    fn gen_config(&self, k: usize, seed: u64) -> GenConfig {
        GenConfig {
            n: self.n,
            d_s: self.d_s,
            k,
            d: match self.pattern {
                Pattern::Shallow => 1,
                Pattern::Nested => self.nesting_d,
            },
            seed,
            p_cx: self.p_cx,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub pattern: Pattern,
    pub k: usize,
    pub depth_limit: u32,
    pub metric: Metric,
    pub baseline_mean: f64,
    pub preprocessed_mean: f64,
    pub pct_decrease: f64,
}

/// Per-circuit measurements. `depth_limit` is `None` for the baseline.
#[derive(Debug, Clone, PartialEq)]
pub struct RawRecord {
    pub k: usize,
    pub seed: u64,
    pub depth_limit: Option<u32>,
    pub report: MetricsReport,
}

#[derive(Serialize)]
struct RawCsvRow<'a> {
    pattern: Pattern,
    k: usize,
    seed: u64,
    setting: &'a str,
    max_p_depth: usize,
    min_p_depth: usize,
    max_p_gate_count: usize,
    min_p_gate_count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutcome {
    pub rows: Vec<ExperimentRow>,
    pub raw: Vec<RawRecord>,
}

pub fn pct_decrease(baseline: f64, preprocessed: f64) -> f64 {
    if baseline > 0.0 {
        100.0 * (baseline - preprocessed) / baseline
    } else {
        0.0
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRow>, HarnessError> {
    Ok(run_experiment_raw(cfg)?.rows)
}

/// Runs the experiment and keeps the per-seed measurements.
pub fn run_experiment_raw(cfg: &ExperimentConfig) -> Result<ExperimentOutcome, HarnessError> {
    cfg.validate()?;
    let items: Vec<(usize, u64)> = cfg
        .k_values
        .iter()
        .flat_map(|&k| (0..cfg.seeds_per_point as u64).map(move |s| (k, cfg.seed_base + s)))
        .collect();

    let per_item: Vec<Vec<RawRecord>> = items
        .par_iter()
        .map(|&(k, seed)| measure_instance(cfg, k, seed))
        .collect::<Result<_, _>>()?;
    let raw: Vec<RawRecord> = per_item.into_iter().flatten().collect();

    let mut rows = Vec::new();
    for &k in &cfg.k_values {
        let at_k: Vec<&RawRecord> = raw.iter().filter(|r| r.k == k).collect();
        for &dl in &cfg.depth_limits {
            for metric in Metric::ALL {
                let mean = |setting: Option<u32>| {
                    let vals: Vec<f64> = at_k
                        .iter()
                        .filter(|r| r.depth_limit == setting)
                        .map(|r| metric.of(&r.report) as f64)
                        .collect();
                    vals.iter().sum::<f64>() / vals.len() as f64
                };
                let baseline_mean = mean(None);
                let preprocessed_mean = mean(Some(dl));
                rows.push(ExperimentRow {
                    pattern: cfg.pattern,
                    k,
                    depth_limit: dl,
                    metric,
                    baseline_mean,
                    preprocessed_mean,
                    pct_decrease: pct_decrease(baseline_mean, preprocessed_mean),
                });
            }
        }
    }
    rows.sort_by(|a, b| {
        (a.pattern, a.metric, a.k, a.depth_limit).cmp(&(b.pattern, b.metric, b.k, b.depth_limit))
    });
    Ok(ExperimentOutcome { rows, raw })
}

fn measure_instance(
    cfg: &ExperimentConfig,
    k: usize,
    seed: u64,
) -> Result<Vec<RawRecord>, HarnessError> {
    let gcfg = cfg.gen_config(k, seed);
    let circuit = match cfg.pattern {
        Pattern::Shallow => gen_pattern1(&gcfg),
        Pattern::Nested => gen_pattern2(&gcfg),
    }
    .map_err(|source| HarnessError::Generate { k, seed, source })?;

    let mut out = vec![RawRecord {
        k,
        seed,
        depth_limit: None,
        report: metrics(&optimize(&circuit)),
    }];
    for &dl in &cfg.depth_limits {
        let expanded = rec_branch_expand(&circuit, ExpandConfig::new(dl))
            .map_err(|source| HarnessError::Expand { k, seed, source })?;
        out.push(RawRecord {
            k,
            seed,
            depth_limit: Some(dl),
            report: metrics(&optimize(&expanded)),
        });
    }
    Ok(out)
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>, HarnessError> {
    csv::Writer::from_path(path).map_err(|source| HarnessError::Csv {
        path: path.to_path_buf(),
        source,
    })
}

pub fn rows_to_csv(rows: &[ExperimentRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("in-memory csv write");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv flush")).expect("csv output is utf-8")
}

pub fn write_csv(rows: &[ExperimentRow], path: &Path) -> Result<(), HarnessError> {
    if rows.is_empty() {
        return Err(HarnessError::InvalidConfig("no rows to write".into()));
    }
    fs::write(path, rows_to_csv(rows)).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_raw_csv(pattern: Pattern, raw: &[RawRecord], path: &Path) -> Result<(), HarnessError> {
    let mut w = csv_writer(path)?;
    let csv_err = |source| HarnessError::Csv {
        path: path.to_path_buf(),
        source,
    };
    for r in raw {
        let setting = match r.depth_limit {
            None => "baseline".to_string(),
            Some(dl) => format!("dl{dl}"),
        };
        w.serialize(RawCsvRow {
            pattern,
            k: r.k,
            seed: r.seed,
            setting: &setting,
            max_p_depth: r.report.max_p_depth,
            min_p_depth: r.report.min_p_depth,
            max_p_gate_count: r.report.max_p_gate_count,
            min_p_gate_count: r.report.min_p_gate_count,
        })
        .map_err(csv_err)?;
    }
    w.flush().map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 190.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 60.0;
const COLORS: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

/// Axis range of the plotted data: `(x_min, x_max, y_min, y_max)`.
pub fn plot_bounds(rows: &[&ExperimentRow]) -> (f64, f64, f64, f64) {
    let x_min = rows.iter().map(|r| r.k).min().unwrap_or(0) as f64;
    let x_max = rows.iter().map(|r| r.k).max().unwrap_or(1) as f64;
    let y_lo = rows.iter().map(|r| r.pct_decrease).fold(0.0, f64::min);
    let y_hi = rows.iter().map(|r| r.pct_decrease).fold(0.0, f64::max);
    let y_min = (y_lo / 10.0).floor() * 10.0;
    let mut y_max = (y_hi / 10.0).ceil() * 10.0;
    if y_max <= y_min {
        y_max = y_min + 10.0;
    }
    (x_min, x_max, y_min, y_max)
}

/// One chart of percentage decrease against block count, one polyline per
/// (metric, depth limit) pair.
pub fn render_svg(title: &str, rows: &[&ExperimentRow]) -> String {
    let (x_min, x_max, y_min, y_max) = plot_bounds(rows);
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = |x: f64| {
        let span = if x_max > x_min { x_max - x_min } else { 1.0 };
        MARGIN_LEFT + (x - x_min) / span * plot_w
    };
    let sy = |y: f64| MARGIN_TOP + (y_max - y) / (y_max - y_min) * plot_h;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        s,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        title
    );

    // Axes and ticks.
    let (x0, y0) = (MARGIN_LEFT, MARGIN_TOP + plot_h);
    let _ = writeln!(
        s,
        r#"<line x1="{x0}" y1="{y0}" x2="{}" y2="{y0}" stroke="black"/>"#,
        x0 + plot_w
    );
    let _ = writeln!(
        s,
        r#"<line x1="{x0}" y1="{MARGIN_TOP}" x2="{x0}" y2="{y0}" stroke="black"/>"#
    );
    let x_ticks = 10usize.min((x_max - x_min) as usize).max(1);
    for i in 0..=x_ticks {
        let x = x_min + (x_max - x_min) * i as f64 / x_ticks as f64;
        let px = sx(x);
        let _ = writeln!(
            s,
            r#"<line x1="{px:.2}" y1="{y0}" x2="{px:.2}" y2="{}" stroke="black"/><text x="{px:.2}" y="{}" text-anchor="middle">{}</text>"#,
            y0 + 5.0,
            y0 + 20.0,
            fmt_tick(x)
        );
    }
    for i in 0..=5 {
        let y = y_min + (y_max - y_min) * i as f64 / 5.0;
        let py = sy(y);
        let _ = writeln!(
            s,
            r##"<line x1="{}" y1="{py:.2}" x2="{}" y2="{py:.2}" stroke="#dddddd"/><text x="{}" y="{:.2}" text-anchor="end">{}</text>"##,
            x0,
            x0 + plot_w,
            x0 - 8.0,
            py + 4.0,
            fmt_tick(y)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">Number of blocks</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        s,
        r#"<text x="18" y="{}" text-anchor="middle" transform="rotate(-90 18 {})">Percentage decrease</text>"#,
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    );

    let mut series: Vec<(Metric, u32)> = rows.iter().map(|r| (r.metric, r.depth_limit)).collect();
    series.sort();
    series.dedup();
    for (i, (metric, dl)) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let mut pts: Vec<&&ExperimentRow> = rows
            .iter()
            .filter(|r| r.metric == *metric && r.depth_limit == *dl)
            .collect();
        pts.sort_by_key(|r| r.k);
        let coords: Vec<String> = pts
            .iter()
            .map(|r| format!("{:.2},{:.2}", sx(r.k as f64), sy(r.pct_decrease)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            coords.join(" ")
        );
        let ly = MARGIN_TOP + 10.0 + 20.0 * i as f64;
        let lx = WIDTH - MARGIN_RIGHT + 15.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}">{} (depth_limit={dl})</text>"#,
            lx + 20.0,
            lx + 25.0,
            ly + 4.0,
            metric.name()
        );
    }
    s.push_str("</svg>\n");
    s
}

fn fmt_tick(v: f64) -> String {
    if (v - v.round()).abs() < 1e-9 {
        format!("{}", v.round() as i64)
    } else {
        format!("{v:.1}")
    }
}

/// Writes one SVG per (pattern, metric family) into `dir` and returns the
/// paths written.
pub fn plot_svg(rows: &[ExperimentRow], dir: &Path) -> Result<Vec<PathBuf>, HarnessError> {
    if rows.is_empty() {
        return Err(HarnessError::InvalidConfig("no rows to plot".into()));
    }
    let mut groups: Vec<(Pattern, &str)> = rows
        .iter()
        .map(|r| (r.pattern, r.metric.family()))
        .collect();
    groups.sort();
    groups.dedup();
    let mut written = Vec::new();
    for (pattern, family) in groups {
        let subset: Vec<&ExperimentRow> = rows
            .iter()
            .filter(|r| r.pattern == pattern && r.metric.family() == family)
            .collect();
        let title = format!(
            "Pattern {}: percentage decrease in {}",
            pattern.number(),
            family.replace('_', " ")
        );
        let path = dir.join(format!("pattern{}_{}.svg", pattern.number(), family));
        fs::write(&path, render_svg(&title, &subset)).map_err(|source| HarnessError::Io {
            path: path.clone(),
            source,
        })?;
        written.push(path);
    }
    Ok(written)
}

/// Path gate counts of the QEC demo before and after expansion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QecReport {
    pub baseline_if_gate_count: usize,
    pub baseline_else_gate_count: usize,
    pub pipeline_if_gate_count: usize,
    pub pipeline_else_gate_count: usize,
    pub equivalent: bool,
    #[serde(skip)]
    pub baseline: Circuit,
    #[serde(skip)]
    pub pipeline: Circuit,
}

#[derive(Debug, Error)]
pub enum QecError {
    #[error(transparent)]
    Expand(#[from] ExpandError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("optimized circuit lost its correction branch")]
    MissingBranch,
}

fn single_branch_counts(c: &Circuit) -> Result<(usize, usize), QecError> {
    let paths = enumerate_paths(c)?;
    let count = |taken: bool| {
        paths
            .iter()
            .find(|p| p.outcome == [taken])
            .map(|p| path_gate_count(&p.ops))
            .ok_or(QecError::MissingBranch)
    };
    Ok((count(true)?, count(false)?))
}

/// Runs baseline and depth-1 pipeline on [`shor_qec_demo`].
pub fn run_qec_demo(tol: f64) -> Result<QecReport, QecError> {
    let original = shor_qec_demo();
    let baseline = optimize(&original);
    let pipeline = optimize_pipeline(&original, ExpandConfig::new(1))?;
    let (baseline_if, baseline_else) = single_branch_counts(&baseline)?;
    let (pipeline_if, pipeline_else) = single_branch_counts(&pipeline)?;
    let equivalent =
        equivalent(&original, &pipeline, tol)? && equivalent(&original, &baseline, tol)?;
    Ok(QecReport {
        baseline_if_gate_count: baseline_if,
        baseline_else_gate_count: baseline_else,
        pipeline_if_gate_count: pipeline_if,
        pipeline_else_gate_count: pipeline_else,
        equivalent,
        baseline,
        pipeline,
    })
}
