//! Parameter sweeps, convergence studies, and figure artifacts.
//!
//! The harness turns the pointwise machinery of the lower modules into
//! reproducible batch workflows: winding/index sweeps over parameter grids
//! with CSV output, domain-length and tolerance convergence tables, and
//! self-contained SVG renderings of contour images and real-axis traces.
//!
//! Determinism contract: a sweep re-run with an identical config produces a
//! byte-identical CSV. Wall times are kept on the in-memory records for
//! logging but never serialized into the CSV.

use crate::contour::{semicircle, winding_number};
use crate::evans::{EvansEvaluator, ShotConfig, Variant};
use crate::profile::{LayerParams, Side};
use crate::stability::stability_index;
use crate::{Error, Result};
use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

type C64 = Complex<f64>;

// ---------------------------------------------------------------------------
// Shared policy helpers
// ---------------------------------------------------------------------------

/// Contour indent policy: variants with a structural origin root (`D(0)=0`)
/// must be evaluated on an indented contour so the root is excluded from the
/// winding count; the finite-layer inflow variant has no origin root and runs
/// on the plain semicircle.
pub fn needs_indent(variant: Variant) -> bool {
    variant.zero_at_origin()
}

fn default_radius() -> f64 {
    10.0
}
fn default_points() -> usize {
    60
}
fn default_indent() -> f64 {
    1e-4
}
fn default_l() -> f64 {
    ShotConfig::default().l
}
fn default_abs_tol() -> f64 {
    ShotConfig::default().abs_tol
}
fn default_rel_tol() -> f64 {
    ShotConfig::default().rel_tol
}

/// Evaluate `D` with the pointwise gauge at each of `points`.
fn field_on(
    points: &[C64],
    params: &LayerParams,
    variant: Variant,
    shot: &ShotConfig,
) -> Result<Vec<C64>> {
    let mut ev = EvansEvaluator::pointwise(params, variant, shot)?;
    points.iter().map(|&l| ev.eval(l).map(|s| s.d)).collect()
}

/// `max_j |a_j − b_j| / |b_j|` over paired samples (`b` is the baseline).
fn max_rel_err(a: &[C64], b: &[C64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm() / y.norm())
        .fold(0.0, f64::max)
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

/// Grid specification for a winding/index sweep. Deserializable from a JSON
/// document; unknown keys are rejected so config typos fail loudly.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Which half-line family to sweep.
    pub side: Side,
    pub gamma_list: Vec<f64>,
    pub v0_list: Vec<f64>,
    /// Endstate list; the value `0` selects the strong-layer limiting system.
    pub v_plus_list: Vec<f64>,
    #[serde(default = "default_radius")]
    pub radius: f64,
    #[serde(default = "default_points")]
    pub points: usize,
    /// Indent radius used when the variant's contour must avoid the origin.
    #[serde(default = "default_indent")]
    pub indent: f64,
    /// Domain truncation for the shooting integrations.
    #[serde(default = "default_l")]
    pub l: f64,
    #[serde(default = "default_abs_tol")]
    pub abs_tol: f64,
    #[serde(default = "default_rel_tol")]
    pub rel_tol: f64,
    /// Maximum concurrent workers; `None` uses the global thread pool.
    #[serde(default)]
    pub workers: Option<usize>,
    /// Directory receiving `sweep.csv`; `None` keeps results in memory only.
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
}

impl SweepConfig {
    /// Minimal sweep over explicit lists with default numerics and no file
    /// output.
    pub fn new(side: Side, gamma_list: Vec<f64>, v0_list: Vec<f64>, v_plus_list: Vec<f64>) -> Self {
        SweepConfig {
            side,
            gamma_list,
            v0_list,
            v_plus_list,
            radius: default_radius(),
            points: default_points(),
            indent: default_indent(),
            l: default_l(),
            abs_tol: default_abs_tol(),
            rel_tol: default_rel_tol(),
            workers: None,
            out_dir: None,
        }
    }

    /// Load a config from a JSON file.
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("sweep config {}: {e}", path.display())))
    }

    pub fn shot_config(&self) -> ShotConfig {
        ShotConfig {
            l: self.l,
            abs_tol: self.abs_tol,
            rel_tol: self.rel_tol,
        }
    }

    fn validate(&self) -> Result<()> {
        self.shot_config().validate()?;
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return Err(Error::Config(format!(
                "sweep radius must be positive, got {}",
                self.radius
            )));
        }
        if self.points < 8 {
            return Err(Error::Config(format!(
                "sweep contours need at least 8 points, got {}",
                self.points
            )));
        }
        if !(self.indent.is_finite() && self.indent >= 0.0 && self.indent < self.radius) {
            return Err(Error::Config(format!(
                "indent must lie in [0, radius), got {}",
                self.indent
            )));
        }
        if self.workers == Some(0) {
            return Err(Error::Config("worker count must be nonzero".into()));
        }
        Ok(())
    }
}

/// Outcome of one grid point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SweepStatus {
    /// Winding and index computed.
    Ok,
    /// Parameter triple inadmissible (e.g. violates the compressive
    /// ordering); carries the reason. Skipped triples are logged in the
    /// record list but excluded from the CSV.
    Skipped(String),
    /// Admissible triple whose evaluation failed numerically.
    Error(String),
}

impl SweepStatus {
    /// Single-cell CSV label (commas and line breaks sanitized).
    fn csv_cell(&self) -> String {
        let raw = match self {
            SweepStatus::Ok => return "ok".into(),
            SweepStatus::Skipped(r) => format!("skipped: {r}"),
            SweepStatus::Error(r) => format!("error: {r}"),
        };
        raw.replace([',', '\n', '\r'], ";")
    }
}

/// One sweep grid point: the raw parameter triple, the computed winding and
/// parity data when available, and timing for performance logs.
#[derive(Debug, Clone)]
pub struct SweepRecord {
    pub gamma: f64,
    pub v_plus: f64,
    pub v0: f64,
    pub side: Side,
    /// Winding of `D` over the (policy-indented) semicircle; present iff ok.
    pub winding: Option<i64>,
    /// Sign of `D(0)·D(R)` (or the slope variant at origin roots); present
    /// iff ok.
    pub stability_index: Option<i32>,
    /// Largest argument step between consecutive refined contour samples.
    pub max_arg_step: Option<f64>,
    /// Wall-clock cost of this record (log-only; not in the CSV).
    pub wall_time: Duration,
    pub status: SweepStatus,
}

/// Sweep results in config order.
#[derive(Debug, Clone)]
pub struct Sweep {
    pub records: Vec<SweepRecord>,
}

impl Sweep {
    /// Admissible records (everything that was actually evaluated).
    pub fn admissible(&self) -> impl Iterator<Item = &SweepRecord> {
        self.records
            .iter()
            .filter(|r| !matches!(r.status, SweepStatus::Skipped(_)))
    }

    /// Write the sweep CSV: header plus one row per admissible triple, in
    /// config order. Floating-point cells use shortest round-trip formatting,
    /// so identical configs yield byte-identical files.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(
            w,
            "gamma,v_plus,v0,side,winding,stability_index,max_arg_step,status"
        )?;
        for r in self.admissible() {
            let winding = r.winding.map_or(String::new(), |v| v.to_string());
            let index = r.stability_index.map_or(String::new(), |v| v.to_string());
            let arg = r.max_arg_step.map_or(String::new(), |v| format!("{v:.6e}"));
            writeln!(
                w,
                "{},{},{},{},{winding},{index},{arg},{}",
                r.gamma,
                r.v_plus,
                r.v0,
                r.side,
                r.status.csv_cell()
            )?;
        }
        Ok(())
    }

    /// The CSV as a string.
    pub fn csv(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Config(format!("non-UTF8 CSV: {e}")))
    }
}

fn sweep_point(cfg: &SweepConfig, gamma: f64, v0: f64, v_plus: f64) -> SweepRecord {
    let started = Instant::now();
    let mut record = SweepRecord {
        gamma,
        v_plus,
        v0,
        side: cfg.side,
        winding: None,
        stability_index: None,
        max_arg_step: None,
        wall_time: Duration::ZERO,
        status: SweepStatus::Ok,
    };
    match LayerParams::new(gamma, v_plus, v0, cfg.side) {
        Err(e) => record.status = SweepStatus::Skipped(e.to_string()),
        Ok(params) => {
            let variant = Variant::for_params(&params);
            let outcome = (|| -> Result<(i64, f64, i32)> {
                let shot = cfg.shot_config();
                let indent = if needs_indent(variant) { cfg.indent } else { 0.0 };
                let contour = semicircle(cfg.radius, cfg.points, indent)?;
                let mut ev = EvansEvaluator::contoured(
                    &params,
                    variant,
                    &shot,
                    contour.distinct_points(),
                    0,
                    true,
                )?;
                let report = winding_number(|l| ev.eval(l).map(|s| s.d), &contour)?;
                let mut pointwise = EvansEvaluator::pointwise(&params, variant, &shot)?;
                let index = stability_index(
                    |l| pointwise.eval(l).map(|s| s.d),
                    variant,
                    cfg.radius,
                )?;
                Ok((report.winding, report.max_arg_step, index))
            })();
            match outcome {
                Ok((winding, max_arg_step, index)) => {
                    record.winding = Some(winding);
                    record.max_arg_step = Some(max_arg_step);
                    record.stability_index = Some(index);
                }
                Err(e) => record.status = SweepStatus::Error(e.to_string()),
            }
        }
    }
    record.wall_time = started.elapsed();
    record
}

/// Run a winding/index sweep over the config's parameter grid.
///
/// Grid points are independent and evaluated in parallel (bounded by
/// `workers` when set), but the record list and CSV rows always follow config
/// order: `gamma_list` outermost, then `v0_list`, then `v_plus_list`.
/// Inadmissible triples are recorded as skipped; per-point numerical failures
/// are recorded as errors; neither aborts the sweep. When `out_dir` is set,
/// the CSV is also written to `<out_dir>/sweep.csv`.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Sweep> {
    cfg.validate()?;
    let mut triples = Vec::new();
    for &gamma in &cfg.gamma_list {
        for &v0 in &cfg.v0_list {
            for &v_plus in &cfg.v_plus_list {
                triples.push((gamma, v0, v_plus));
            }
        }
    }
    let eval_all = || -> Vec<SweepRecord> {
        triples
            .par_iter()
            .map(|&(gamma, v0, v_plus)| sweep_point(cfg, gamma, v0, v_plus))
            .collect()
    };
    let records = match cfg.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(format!("worker pool: {e}")))?
            .install(eval_all),
        None => eval_all(),
    };
    let sweep = Sweep { records };
    if let Some(dir) = &cfg.out_dir {
        std::fs::create_dir_all(dir)?;
        let path = dir.join("sweep.csv");
        let file = std::fs::File::create(&path)?;
        sweep.write_csv(std::io::BufWriter::new(file))?;
    }
    Ok(sweep)
}

// ---------------------------------------------------------------------------
// Convergence study
// ---------------------------------------------------------------------------

fn default_l_grid() -> Vec<f64> {
    vec![8.0, 10.0, 12.0, 14.0, 16.0, 18.0, 20.0]
}

fn default_tol_grid() -> Vec<(f64, f64)> {
    vec![
        (1e-3, 1e-5),
        (1e-4, 1e-6),
        (1e-5, 1e-7),
        (1e-6, 1e-8),
        (1e-7, 1e-9),
    ]
}

/// Configuration for a convergence study. The layer itself is pinned to the
/// reference point `v₊ = 1e−4`, `v₀ = 0.6`; the adiabatic exponent and side
/// vary. Grids list *all* runs; each reported row compares one level against
/// the next (finer) one, so `n` levels yield `n − 1` error rows.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergenceConfig {
    pub gamma: f64,
    pub side: Side,
    #[serde(default = "default_radius")]
    pub radius: f64,
    #[serde(default = "default_points")]
    pub points: usize,
    #[serde(default = "default_indent")]
    pub indent: f64,
    /// Domain-truncation levels, increasing; the last is the baseline.
    #[serde(default = "default_l_grid")]
    pub l_grid: Vec<f64>,
    /// `(abs_tol, rel_tol)` levels, tightening; the last is the baseline.
    #[serde(default = "default_tol_grid")]
    pub tol_grid: Vec<(f64, f64)>,
}

impl ConvergenceConfig {
    pub fn new(gamma: f64, side: Side) -> Self {
        ConvergenceConfig {
            gamma,
            side,
            radius: default_radius(),
            points: default_points(),
            indent: default_indent(),
            l_grid: default_l_grid(),
            tol_grid: default_tol_grid(),
        }
    }
}

/// Successive-level maximum relative errors of `D` over the contour points.
#[derive(Debug, Clone)]
pub struct ConvergenceStudy {
    pub gamma: f64,
    pub side: Side,
    /// Reported domain-length levels (all but the baseline).
    pub l_levels: Vec<f64>,
    /// `max_j |D_L(φ_j) − D_next(φ_j)| / |D_next(φ_j)|` per reported level.
    pub l_errors: Vec<f64>,
    /// Reported `(abs_tol, rel_tol)` levels (all but the baseline).
    pub tol_levels: Vec<(f64, f64)>,
    pub tol_errors: Vec<f64>,
}

impl ConvergenceStudy {
    /// Write the study as CSV rows
    /// `study,level,baseline,max_rel_error`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "study,level,baseline,max_rel_error")?;
        for (i, (l, e)) in self.l_levels.iter().zip(&self.l_errors).enumerate() {
            let baseline = self
                .l_levels
                .get(i + 1)
                .copied()
                .map_or("baseline".to_string(), |b| format!("L={b}"));
            writeln!(w, "domain-length,L={l},{baseline},{e:.3e}")?;
        }
        for (i, ((a, r), e)) in self.tol_levels.iter().zip(&self.tol_errors).enumerate() {
            let baseline = self
                .tol_levels
                .get(i + 1)
                .map_or("baseline".to_string(), |(a, r)| format!("{a:.0e}/{r:.0e}"));
            writeln!(w, "tolerance,{a:.0e}/{r:.0e},{baseline},{e:.3e}")?;
        }
        Ok(())
    }
}

impl fmt::Display for ConvergenceStudy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "convergence study: gamma={}, {} side, v_plus=1e-4, v0=0.6",
            self.gamma, self.side
        )?;
        writeln!(f, "  domain length (error vs next level):")?;
        for (l, e) in self.l_levels.iter().zip(&self.l_errors) {
            writeln!(f, "    L={l:<4}  {e:.3e}")?;
        }
        writeln!(f, "  integrator tolerances (error vs next level):")?;
        for ((a, r), e) in self.tol_levels.iter().zip(&self.tol_errors) {
            writeln!(f, "    {a:.0e}/{r:.0e}  {e:.3e}")?;
        }
        Ok(())
    }
}

/// Run the domain-length and tolerance convergence study at the reference
/// layer `v₊ = 1e−4`, `v₀ = 0.6`.
///
/// Every run evaluates `D` with the pointwise gauge at the same contour
/// points, so levels are directly comparable: the seeding rule depends only
/// on the endstate matrices, not on `L` or the tolerances, and the
/// exponential-growth rescaling cancels the domain-length dependence of the
/// seed magnitude. Each reported row is the maximum relative error against
/// the next (finer) level.
pub fn convergence_study(cfg: &ConvergenceConfig) -> Result<ConvergenceStudy> {
    if cfg.l_grid.len() < 2 || cfg.tol_grid.len() < 2 {
        return Err(Error::Config(
            "convergence grids need at least two levels (last is the baseline)".into(),
        ));
    }
    if cfg.l_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config(
            "domain-length grid must be strictly increasing".into(),
        ));
    }
    let params = LayerParams::new(cfg.gamma, 1e-4, 0.6, cfg.side)?;
    let variant = Variant::for_params(&params);
    let indent = if needs_indent(variant) { cfg.indent } else { 0.0 };
    let contour = semicircle(cfg.radius, cfg.points, indent)?;
    let points = contour.distinct_points();

    let l_fields: Vec<Vec<C64>> = cfg
        .l_grid
        .par_iter()
        .map(|&l| {
            let shot = ShotConfig {
                l,
                ..ShotConfig::default()
            };
            field_on(points, &params, variant, &shot)
        })
        .collect::<Result<_>>()?;
    let l_errors: Vec<f64> = l_fields
        .windows(2)
        .map(|w| max_rel_err(&w[0], &w[1]))
        .collect();

    let tol_fields: Vec<Vec<C64>> = cfg
        .tol_grid
        .par_iter()
        .map(|&(abs_tol, rel_tol)| {
            let shot = ShotConfig {
                abs_tol,
                rel_tol,
                ..ShotConfig::default()
            };
            field_on(points, &params, variant, &shot)
        })
        .collect::<Result<_>>()?;
    let tol_errors: Vec<f64> = tol_fields
        .windows(2)
        .map(|w| max_rel_err(&w[0], &w[1]))
        .collect();

    Ok(ConvergenceStudy {
        gamma: cfg.gamma,
        side: cfg.side,
        l_levels: cfg.l_grid[..cfg.l_grid.len() - 1].to_vec(),
        l_errors,
        tol_levels: cfg.tol_grid[..cfg.tol_grid.len() - 1].to_vec(),
        tol_errors,
    })
}

// ---------------------------------------------------------------------------
// SVG plots
// ---------------------------------------------------------------------------

/// One labeled curve for [`emit_plot`]: points are `(x, y)` in data space —
/// `(Re D, Im D)` for contour images, `(λ, D)` for real-axis traces.
#[derive(Debug, Clone)]
pub struct PlotSeries {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

/// Render curves to a self-contained SVG file.
///
/// `closed` joins each curve back to its first point (contour images);
/// real-axis traces use `closed = false`. The origin is always inside the
/// viewport and marked with a crosshair, so the winding of a contour image
/// around zero can be read off the figure. `title` (parameters, etc.) is
/// embedded both as the SVG `<title>` element and as a visible header.
pub fn emit_plot(title: &str, series: &[PlotSeries], closed: bool, path: &Path) -> Result<()> {
    if series.is_empty() || series.iter().all(|s| s.points.is_empty()) {
        return Err(Error::Domain("emit_plot requires nonempty samples".into()));
    }
    let (width, height) = (800.0_f64, 600.0_f64);
    let margin = 64.0_f64;

    // Data bounds, always including the origin.
    let (mut x_min, mut x_max, mut y_min, mut y_max) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    for s in series {
        for &(x, y) in &s.points {
            if !(x.is_finite() && y.is_finite()) {
                return Err(Error::Domain("emit_plot samples must be finite".into()));
            }
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
    }
    let pad = |lo: f64, hi: f64| {
        let span = (hi - lo).max(1e-12);
        (lo - 0.05 * span, hi + 0.05 * span)
    };
    let (x_min, x_max) = pad(x_min, x_max);
    let (y_min, y_max) = pad(y_min, y_max);
    let sx = (width - 2.0 * margin) / (x_max - x_min);
    let sy = (height - 2.0 * margin) / (y_max - y_min);
    let tx = |x: f64| margin + (x - x_min) * sx;
    let ty = |y: f64| height - margin - (y - y_min) * sy;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">\n"
    ));
    svg.push_str(&format!("  <title>{}</title>\n", xml_escape(title)));
    svg.push_str("  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "  <text x=\"{}\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"15\">{}</text>\n",
        width / 2.0,
        xml_escape(title)
    ));
    // Frame and corner labels.
    svg.push_str(&format!(
        "  <rect x=\"{margin}\" y=\"{margin}\" width=\"{}\" height=\"{}\" fill=\"none\" \
         stroke=\"#333\" stroke-width=\"1\"/>\n",
        width - 2.0 * margin,
        height - 2.0 * margin
    ));
    for (x, y, anchor, label) in [
        (margin, height - margin + 16.0, "middle", format!("{x_min:.3}")),
        (
            width - margin,
            height - margin + 16.0,
            "middle",
            format!("{x_max:.3}"),
        ),
        (margin - 6.0, height - margin, "end", format!("{y_min:.3}")),
        (margin - 6.0, margin + 4.0, "end", format!("{y_max:.3}")),
    ] {
        svg.push_str(&format!(
            "  <text x=\"{x}\" y=\"{y}\" text-anchor=\"{anchor}\" font-family=\"sans-serif\" \
             font-size=\"11\">{label}</text>\n"
        ));
    }
    // Zero axes (when inside the viewport) and the origin crosshair marker.
    if x_min < 0.0 && x_max > 0.0 {
        svg.push_str(&format!(
            "  <line x1=\"{0}\" y1=\"{margin}\" x2=\"{0}\" y2=\"{1}\" stroke=\"#bbb\" \
             stroke-width=\"0.8\"/>\n",
            tx(0.0),
            height - margin
        ));
    }
    if y_min < 0.0 && y_max > 0.0 {
        svg.push_str(&format!(
            "  <line x1=\"{margin}\" y1=\"{0}\" x2=\"{1}\" y2=\"{0}\" stroke=\"#bbb\" \
             stroke-width=\"0.8\"/>\n",
            ty(0.0),
            width - margin
        ));
    }
    svg.push_str(&format!(
        "  <g id=\"origin-marker\" stroke=\"#000\" stroke-width=\"1.2\">\n    \
         <circle cx=\"{0}\" cy=\"{1}\" r=\"4\" fill=\"none\"/>\n    \
         <line x1=\"{2}\" y1=\"{1}\" x2=\"{3}\" y2=\"{1}\"/>\n    \
         <line x1=\"{0}\" y1=\"{4}\" x2=\"{0}\" y2=\"{5}\"/>\n  </g>\n",
        tx(0.0),
        ty(0.0),
        tx(0.0) - 7.0,
        tx(0.0) + 7.0,
        ty(0.0) - 7.0,
        ty(0.0) + 7.0,
    ));
    // Curves.
    for (i, s) in series.iter().enumerate() {
        if s.points.is_empty() {
            continue;
        }
        let color = PALETTE[i % PALETTE.len()];
        let mut d = String::new();
        for (j, &(x, y)) in s.points.iter().enumerate() {
            let cmd = if j == 0 { 'M' } else { 'L' };
            d.push_str(&format!("{cmd}{:.3} {:.3} ", tx(x), ty(y)));
        }
        if closed {
            d.push('Z');
        }
        svg.push_str(&format!(
            "  <path d=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.4\"/>\n",
            d.trim_end()
        ));
    }
    // Legend, top right inside the frame.
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let y = margin + 18.0 + 18.0 * i as f64;
        svg.push_str(&format!(
            "  <line x1=\"{0}\" y1=\"{y}\" x2=\"{1}\" y2=\"{y}\" stroke=\"{color}\" \
             stroke-width=\"2\"/>\n  <text x=\"{2}\" y=\"{3}\" font-family=\"sans-serif\" \
             font-size=\"12\">{4}</text>\n",
            width - margin - 150.0,
            width - margin - 126.0,
            width - margin - 120.0,
            y + 4.0,
            xml_escape(&s.label)
        ));
    }
    svg.push_str("</svg>\n");
    std::fs::write(path, svg)?;
    Ok(())
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
