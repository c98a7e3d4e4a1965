//! Command-line interface for the boundary-layer spectral-stability toolkit.
//!
//! Subcommands cover the pipeline end to end: `profile` (boundary-layer ODE
//! solve), `evans` (Evans-function samples on the counting contour),
//! `winding` (root count by argument principle), `index` (real-axis parity
//! sign), `scan` (real-axis trace), `sweep` (parameter-grid winding/index
//! sweeps), and `converge` (domain-length and tolerance error tables).
//!
//! Every subcommand accepts `--config <file>` naming a single JSON document
//! plus flag overrides; flags win over file fields. Exit status: 0 on
//! success, 2 on configuration errors, 3 on numerical or I/O failure. See
//! the repository README for the config schema and CSV formats.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use evansbl::contour::{semicircle, winding_number, Contour};
use evansbl::evans::{write_samples_csv, EvansEvaluator, EvansSample, ShotConfig, Variant};
use evansbl::harness::{
    convergence_study, emit_plot, needs_indent, run_sweep, ConvergenceConfig, PlotSeries,
    SweepConfig, SweepStatus,
};
use evansbl::profile::{limiting_profile, solve_profile, LayerParams, Side};
use evansbl::stability::{real_axis_scan, stability_index};

// ---------------------------------------------------------------------------
// Argument surface
// ---------------------------------------------------------------------------

#[derive(Parser)]
#[command(
    name = "evansbl",
    version,
    about = "Spectral stability of compressive inflow/outflow boundary layers",
    long_about = "Computes boundary-layer profiles of the isentropic compressible \
Navier-Stokes equations, evaluates their Evans functions by one-sided shooting \
with analytically continued eigenbases, and counts unstable eigenvalues by \
winding numbers over a semicircular contour."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the boundary-layer profile; export CSV `x,vhat,dvhat`.
    Profile(CommonArgs),
    /// Evaluate the Evans function on the semicircular contour; export CSV
    /// `re_lambda,im_lambda,re_D,im_D,variant`.
    Evans(CommonArgs),
    /// Count roots inside the contour by the winding of the Evans image
    /// (indented around the known origin root per variant policy).
    Winding(CommonArgs),
    /// Parity index: sign of D(0)*D(R), slope-based at an origin root.
    Index(CommonArgs),
    /// Sample D along the unstable real axis [0, R]; export CSV `lambda,D`.
    Scan(CommonArgs),
    /// Winding/index sweep over (gamma, v0, v_plus) grids; export record CSV.
    Sweep(CommonArgs),
    /// Domain-length and tolerance convergence tables at the reference layer.
    Converge(CommonArgs),
}

impl Command {
    fn args(&self) -> &CommonArgs {
        match self {
            Command::Profile(a)
            | Command::Evans(a)
            | Command::Winding(a)
            | Command::Index(a)
            | Command::Scan(a)
            | Command::Sweep(a)
            | Command::Converge(a) => a,
        }
    }
}

#[derive(Args, Clone, Default)]
struct CommonArgs {
    /// JSON configuration document; flags override its fields.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Adiabatic exponent (>= 1).
    #[arg(long)]
    gamma: Option<f64>,
    /// Downstream endstate in (0, v0); 0 selects the strong-layer limit.
    #[arg(long = "v-plus")]
    v_plus: Option<f64>,
    /// Boundary value at x = 0, in (0, 1).
    #[arg(long)]
    v0: Option<f64>,
    /// Which half-line family: inflow | outflow.
    #[arg(long, value_parser = parse_side)]
    side: Option<Side>,
    /// Contour radius (evans/winding/sweep/converge, default 10); real-axis
    /// endpoint R (index/scan, default 15).
    #[arg(long)]
    radius: Option<f64>,
    /// Contour sample count (default 60); real-axis sample count for scan
    /// (default 50).
    #[arg(long)]
    points: Option<usize>,
    /// Origin indent radius; defaults to 1e-4 for variants with a structural
    /// origin root and 0 otherwise.
    #[arg(long)]
    indent: Option<f64>,
    /// Domain truncation length for the shooting integrations (default 18).
    #[arg(long = "L", value_name = "LEN")]
    l: Option<f64>,
    /// Integrator absolute tolerance (default 1e-6).
    #[arg(long = "abs-tol")]
    abs_tol: Option<f64>,
    /// Integrator relative tolerance (default 1e-8).
    #[arg(long = "rel-tol")]
    rel_tol: Option<f64>,
    /// Output directory for CSV/SVG artifacts; without it the primary CSV
    /// goes to stdout.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

fn parse_side(s: &str) -> Result<Side, String> {
    match s.to_ascii_lowercase().as_str() {
        "inflow" | "in" => Ok(Side::Inflow),
        "outflow" | "out" => Ok(Side::Outflow),
        other => Err(format!("expected 'inflow' or 'outflow', got '{other}'")),
    }
}

// ---------------------------------------------------------------------------
// Config document
// ---------------------------------------------------------------------------

/// The JSON config document. Every field is optional; unknown keys are
/// rejected so typos fail loudly. Scalar fields mirror the flags; the list
/// fields drive `sweep`; the grid fields drive `converge`.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    gamma: Option<f64>,
    v_plus: Option<f64>,
    v0: Option<f64>,
    side: Option<Side>,
    radius: Option<f64>,
    points: Option<usize>,
    indent: Option<f64>,
    l: Option<f64>,
    abs_tol: Option<f64>,
    rel_tol: Option<f64>,
    out: Option<PathBuf>,
    gamma_list: Option<Vec<f64>>,
    v0_list: Option<Vec<f64>>,
    v_plus_list: Option<Vec<f64>>,
    workers: Option<usize>,
    l_grid: Option<Vec<f64>>,
    tol_grid: Option<Vec<(f64, f64)>>,
}

// ---------------------------------------------------------------------------
// Failure plumbing (exit codes 2 and 3)
// ---------------------------------------------------------------------------

enum Failure {
    /// Bad or missing configuration: exit 2.
    Config(String),
    /// Numerical or I/O failure during an admissible run: exit 3.
    Run(String),
}

type CliResult<T> = Result<T, Failure>;

impl From<evansbl::Error> for Failure {
    fn from(e: evansbl::Error) -> Self {
        if e.is_config() {
            Failure::Config(e.to_string())
        } else {
            Failure::Run(e.to_string())
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Run(e.to_string())
    }
}

fn missing(key: &str, flag: &str) -> Failure {
    Failure::Config(format!(
        "missing required setting '{key}': set it in the config document or pass {flag}"
    ))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("config error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let settings = Settings::load(cli.command.args().clone())?;
    match cli.command {
        Command::Profile(_) => cmd_profile(&settings),
        Command::Evans(_) => cmd_evans(&settings),
        Command::Winding(_) => cmd_winding(&settings),
        Command::Index(_) => cmd_index(&settings),
        Command::Scan(_) => cmd_scan(&settings),
        Command::Sweep(_) => cmd_sweep(&settings),
        Command::Converge(_) => cmd_converge(&settings),
    }
}

// ---------------------------------------------------------------------------
// Merged settings
// ---------------------------------------------------------------------------

struct Settings {
    file: FileConfig,
    flags: CommonArgs,
}

impl Settings {
    fn load(flags: CommonArgs) -> CliResult<Self> {
        let file = match &flags.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    Failure::Config(format!("cannot read config {}: {e}", path.display()))
                })?;
                serde_json::from_str(&text)
                    .map_err(|e| Failure::Config(format!("config {}: {e}", path.display())))?
            }
            None => FileConfig::default(),
        };
        Ok(Settings { file, flags })
    }

    fn gamma(&self) -> Option<f64> {
        self.flags.gamma.or(self.file.gamma)
    }
    fn v_plus(&self) -> Option<f64> {
        self.flags.v_plus.or(self.file.v_plus)
    }
    fn v0(&self) -> Option<f64> {
        self.flags.v0.or(self.file.v0)
    }
    fn side(&self) -> Option<Side> {
        self.flags.side.or(self.file.side)
    }
    fn radius(&self) -> Option<f64> {
        self.flags.radius.or(self.file.radius)
    }
    fn points(&self) -> Option<usize> {
        self.flags.points.or(self.file.points)
    }
    fn indent(&self) -> Option<f64> {
        self.flags.indent.or(self.file.indent)
    }
    fn out(&self) -> Option<PathBuf> {
        self.flags.out.clone().or_else(|| self.file.out.clone())
    }

    fn shot_config(&self) -> CliResult<ShotConfig> {
        let d = ShotConfig::default();
        let cfg = ShotConfig {
            l: self.flags.l.or(self.file.l).unwrap_or(d.l),
            abs_tol: self.flags.abs_tol.or(self.file.abs_tol).unwrap_or(d.abs_tol),
            rel_tol: self.flags.rel_tol.or(self.file.rel_tol).unwrap_or(d.rel_tol),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Layer parameters for the pointwise subcommands; every piece required.
    fn params(&self) -> CliResult<LayerParams> {
        let gamma = self.gamma().ok_or_else(|| missing("gamma", "--gamma"))?;
        let v_plus = self.v_plus().ok_or_else(|| missing("v_plus", "--v-plus"))?;
        let v0 = self.v0().ok_or_else(|| missing("v0", "--v0"))?;
        let side = self.side().ok_or_else(|| missing("side", "--side"))?;
        Ok(LayerParams::new(gamma, v_plus, v0, side)?)
    }

    /// Counting contour for `variant`, applying the origin-indent policy
    /// unless an explicit indent overrides it.
    fn contour(&self, variant: Variant) -> CliResult<Contour> {
        let indent = self
            .indent()
            .unwrap_or(if needs_indent(variant) { 1e-4 } else { 0.0 });
        Ok(semicircle(
            self.radius().unwrap_or(10.0),
            self.points().unwrap_or(60),
            indent,
        )?)
    }
}

// ---------------------------------------------------------------------------
// Artifact helpers
// ---------------------------------------------------------------------------

/// Write one artifact under `dir` (created if needed) and return its path.
fn write_artifact(
    dir: &Path,
    name: &str,
    write: impl FnOnce(&mut dyn Write) -> evansbl::Result<()>,
) -> CliResult<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    let file = std::fs::File::create(&path)?;
    let mut buf = std::io::BufWriter::new(file);
    write(&mut buf)?;
    buf.flush()?;
    Ok(path)
}

/// Emit the primary CSV: to `<dir>/<name>` when an output directory is
/// configured (reporting the path on stdout), to stdout otherwise.
fn emit_csv(
    out: Option<&Path>,
    name: &str,
    write: impl FnOnce(&mut dyn Write) -> evansbl::Result<()>,
) -> CliResult<()> {
    match out {
        Some(dir) => {
            let path = write_artifact(dir, name, write)?;
            println!("wrote {}", path.display());
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock)?;
            lock.flush()?;
        }
    }
    Ok(())
}

/// One-line run description shared by the summary lines and SVG titles.
fn describe(params: &LayerParams, cfg: &ShotConfig) -> String {
    format!(
        "side={} gamma={} v0={} v_plus={} L={} abs_tol={:e} rel_tol={:e}",
        params.side, params.gamma, params.v0, params.v_plus, cfg.l, cfg.abs_tol, cfg.rel_tol
    )
}

/// Headline summary: stdout when artifacts go to files, stderr when the
/// primary CSV occupies stdout.
fn summarize(out: Option<&Path>, line: &str) {
    match out {
        Some(_) => println!("{line}"),
        None => eprintln!("{line}"),
    }
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

fn cmd_profile(s: &Settings) -> CliResult<()> {
    let params = s.params()?;
    let cfg = s.shot_config()?;
    let profile = if params.is_limiting() {
        limiting_profile(params.gamma, params.v0, params.side, cfg.l)?
    } else {
        solve_profile(&params, cfg.l, cfg.abs_tol, cfg.rel_tol)?
    };
    let (x0, x1) = profile.domain();
    let (far, near) = match params.side {
        Side::Inflow => (x1, x0),
        Side::Outflow => (x0, x1),
    };
    let out = s.out();
    summarize(
        out.as_deref(),
        &format!(
            "profile: {} samples={} domain=[{x0},{x1}] vhat({near})={:.6} vhat({far})={:.6e}",
            describe(&params, &cfg),
            profile.grid().len(),
            profile.vhat_at(near),
            profile.vhat_at(far),
        ),
    );
    emit_csv(out.as_deref(), "profile.csv", |w| profile.to_csv(w))
}

/// Contour-gauged Evans samples at the distinct contour points.
fn contour_samples(
    s: &Settings,
) -> CliResult<(LayerParams, ShotConfig, Contour, EvansEvaluator, Vec<EvansSample>)> {
    let params = s.params()?;
    let variant = Variant::for_params(&params);
    let cfg = s.shot_config()?;
    let contour = s.contour(variant)?;
    let mut ev = EvansEvaluator::contoured(&params, variant, &cfg, contour.distinct_points(), 0, true)?;
    let samples: Vec<EvansSample> = contour
        .distinct_points()
        .iter()
        .map(|&l| ev.eval(l))
        .collect::<evansbl::Result<_>>()?;
    Ok((params, cfg, contour, ev, samples))
}

fn cmd_evans(s: &Settings) -> CliResult<()> {
    let (params, cfg, contour, ev, samples) = contour_samples(s)?;
    let max_abs = samples.iter().map(|x| x.d.norm()).fold(0.0, f64::max);
    let min_abs = samples.iter().map(|x| x.d.norm()).fold(f64::INFINITY, f64::min);
    let out = s.out();
    let mut line = format!(
        "evans: variant={} {} contour: radius={} points={} indent={:e}; |D| in [{min_abs:.3e}, {max_abs:.3e}]",
        ev.variant(),
        describe(&params, &cfg),
        contour.radius,
        contour.n_distinct(),
        contour.indent,
    );
    if let Some(defect) = ev.monodromy_defect() {
        line.push_str(&format!("; gauge monodromy defect {defect:.1e}"));
    }
    summarize(out.as_deref(), &line);
    emit_csv(out.as_deref(), "evans.csv", |w| write_samples_csv(&samples, w))
}

fn cmd_winding(s: &Settings) -> CliResult<()> {
    let (params, cfg, contour, mut ev, _samples) = contour_samples(s)?;
    let report = winding_number(|l| ev.eval(l).map(|x| x.d), &contour)?;
    println!("winding: {}", report.winding);
    println!(
        "  {} variant={} contour: radius={} points={} indent={:e}",
        describe(&params, &cfg),
        ev.variant(),
        contour.radius,
        contour.n_distinct(),
        contour.indent,
    );
    println!(
        "  max_arg_step={:.4} rad over {} final points (refined: {}), cr_residual={:.2e}, |D| in [{:.3e}, {:.3e}]",
        report.max_arg_step,
        report.n_points_final,
        report.refined,
        report.cr_residual,
        report.min_abs,
        report.max_abs,
    );
    if let Some(defect) = ev.monodromy_defect() {
        println!("  gauge monodromy defect {defect:.1e}");
    }
    if let Some(dir) = s.out() {
        let path = write_artifact(&dir, "winding.csv", |w| {
            writeln!(w, "re_lambda,im_lambda,re_D,im_D,variant")?;
            for (lambda, d) in &report.samples {
                writeln!(w, "{},{},{},{},{}", lambda.re, lambda.im, d.re, d.im, ev.variant())?;
            }
            Ok(())
        })?;
        println!("wrote {}", path.display());
        let series = [PlotSeries {
            label: format!("D({}) image", ev.variant()),
            points: report.samples.iter().map(|(_, d)| (d.re, d.im)).collect(),
        }];
        let svg = dir.join("winding.svg");
        emit_plot(
            &format!("evans image: {} winding={}", describe(&params, &cfg), report.winding),
            &series,
            true,
            &svg,
        )?;
        println!("wrote {}", svg.display());
    }
    Ok(())
}

fn cmd_index(s: &Settings) -> CliResult<()> {
    let params = s.params()?;
    let variant = Variant::for_params(&params);
    let cfg = s.shot_config()?;
    let r = s.radius().unwrap_or(15.0);
    let mut ev = EvansEvaluator::pointwise(&params, variant, &cfg)?;
    let sign = stability_index(|l| ev.eval(l).map(|x| x.d), variant, r)?;
    println!("stability_index: {sign:+}");
    println!("  {} variant={variant} R={r}", describe(&params, &cfg));
    println!(
        "  origin datum: {}",
        if variant.zero_at_origin() {
            "transversal slope D'(0) (structural origin root)"
        } else {
            "D(0)"
        }
    );
    Ok(())
}

fn cmd_scan(s: &Settings) -> CliResult<()> {
    let params = s.params()?;
    let variant = Variant::for_params(&params);
    let cfg = s.shot_config()?;
    let r = s.radius().unwrap_or(15.0);
    let n = s.points().unwrap_or(50);
    let mut ev = EvansEvaluator::pointwise(&params, variant, &cfg)?;
    let scan = real_axis_scan(|l| ev.eval(l).map(|x| x.d), variant, r, n)?;
    let out = s.out();
    let slope = scan
        .transversal_slope
        .map_or("none".to_string(), |m| format!("{m:.6e}"));
    summarize(
        out.as_deref(),
        &format!(
            "scan: {} variant={variant} R={r} samples={} zero_at_origin={} transversal_slope={slope} sign_changes={} no_interior_root={}",
            describe(&params, &cfg),
            scan.lambdas.len(),
            scan.zero_at_origin,
            scan.sign_changes,
            scan.no_interior_root(),
        ),
    );
    emit_csv(out.as_deref(), "scan.csv", |w| scan.write_csv(w))?;
    if let Some(dir) = s.out() {
        let series = [PlotSeries {
            label: format!("D on [0,{r}]"),
            points: scan.lambdas.iter().copied().zip(scan.values.iter().copied()).collect(),
        }];
        let svg = dir.join("scan.svg");
        emit_plot(
            &format!("real-axis trace: {} variant={variant}", describe(&params, &cfg)),
            &series,
            false,
            &svg,
        )?;
        println!("wrote {}", svg.display());
    }
    Ok(())
}

fn cmd_sweep(s: &Settings) -> CliResult<()> {
    let side = s.side().ok_or_else(|| missing("side", "--side"))?;
    // A scalar flag collapses the corresponding grid axis to one value.
    let gamma_list = match (s.flags.gamma, &s.file.gamma_list, s.file.gamma) {
        (Some(g), _, _) => vec![g],
        (None, Some(list), _) => list.clone(),
        (None, None, Some(g)) => vec![g],
        (None, None, None) => return Err(missing("gamma_list", "--gamma")),
    };
    let v0_list = match (s.flags.v0, &s.file.v0_list, s.file.v0) {
        (Some(v), _, _) => vec![v],
        (None, Some(list), _) => list.clone(),
        (None, None, Some(v)) => vec![v],
        (None, None, None) => return Err(missing("v0_list", "--v0")),
    };
    let v_plus_list = match (s.flags.v_plus, &s.file.v_plus_list, s.file.v_plus) {
        (Some(v), _, _) => vec![v],
        (None, Some(list), _) => list.clone(),
        (None, None, Some(v)) => vec![v],
        (None, None, None) => return Err(missing("v_plus_list", "--v-plus")),
    };
    let shot = s.shot_config()?;
    let mut cfg = SweepConfig::new(side, gamma_list, v0_list, v_plus_list);
    cfg.radius = s.radius().unwrap_or(cfg.radius);
    cfg.points = s.points().unwrap_or(cfg.points);
    cfg.indent = s.indent().unwrap_or(cfg.indent);
    cfg.l = shot.l;
    cfg.abs_tol = shot.abs_tol;
    cfg.rel_tol = shot.rel_tol;
    cfg.workers = s.file.workers;
    cfg.out_dir = s.out();

    let sweep = run_sweep(&cfg)?;
    let mut ok = 0usize;
    let mut skipped = 0usize;
    let mut errored = 0usize;
    let mut windings: BTreeMap<i64, usize> = BTreeMap::new();
    let mut indices: BTreeMap<i32, usize> = BTreeMap::new();
    for rec in &sweep.records {
        match &rec.status {
            SweepStatus::Ok => {
                ok += 1;
                if let Some(w) = rec.winding {
                    *windings.entry(w).or_default() += 1;
                }
                if let Some(p) = rec.stability_index {
                    *indices.entry(p).or_default() += 1;
                }
            }
            SweepStatus::Skipped(_) => skipped += 1,
            SweepStatus::Error(_) => errored += 1,
        }
    }
    let out = cfg.out_dir.as_deref();
    summarize(
        out,
        &format!(
            "sweep: side={side} {} triples: ok={ok} skipped={skipped} error={errored}",
            sweep.records.len()
        ),
    );
    fn hist<K: std::fmt::Display>(m: &BTreeMap<K, usize>) -> String {
        m.iter()
            .map(|(k, n)| format!("{k}x{n}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
    summarize(
        out,
        &format!("  windings: {}  indices: {}", hist(&windings), hist(&indices)),
    );
    for rec in &sweep.records {
        if let SweepStatus::Error(reason) = &rec.status {
            summarize(
                out,
                &format!(
                    "  error at gamma={} v0={} v_plus={}: {reason}",
                    rec.gamma, rec.v0, rec.v_plus
                ),
            );
        }
    }
    match out {
        // run_sweep has already serialized the CSV in config order.
        Some(dir) => println!("wrote {}", dir.join("sweep.csv").display()),
        None => print!("{}", sweep.csv()?),
    }
    if errored > 0 {
        return Err(Failure::Run(format!(
            "{errored} sweep record(s) failed numerically (see listing above)"
        )));
    }
    Ok(())
}

fn cmd_converge(s: &Settings) -> CliResult<()> {
    let gamma = s.gamma().ok_or_else(|| missing("gamma", "--gamma"))?;
    let side = s.side().ok_or_else(|| missing("side", "--side"))?;
    let mut cfg = ConvergenceConfig::new(gamma, side);
    cfg.radius = s.radius().unwrap_or(cfg.radius);
    cfg.points = s.points().unwrap_or(cfg.points);
    cfg.indent = s.indent().unwrap_or(cfg.indent);
    if let Some(grid) = &s.file.l_grid {
        cfg.l_grid = grid.clone();
    }
    if let Some(grid) = &s.file.tol_grid {
        cfg.tol_grid = grid.clone();
    }
    let study = convergence_study(&cfg)?;
    print!("{study}");
    if let Some(dir) = s.out() {
        let path = write_artifact(&dir, "converge.csv", |w| study.write_csv(w))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn side_parser_accepts_both_spellings() {
        assert_eq!(parse_side("inflow").unwrap(), Side::Inflow);
        assert_eq!(parse_side("OUT").unwrap(), Side::Outflow);
        assert!(parse_side("sideways").is_err());
    }

    #[test]
    fn flags_override_config_fields() {
        let file: FileConfig =
            serde_json::from_str(r#"{"gamma": 1.4, "v0": 0.3, "side": "outflow"}"#).unwrap();
        let flags = CommonArgs {
            gamma: Some(3.0),
            ..CommonArgs::default()
        };
        let s = Settings { file, flags };
        assert_eq!(s.gamma(), Some(3.0));
        assert_eq!(s.v0(), Some(0.3));
        assert_eq!(s.side(), Some(Side::Outflow));
    }

    #[test]
    fn config_document_rejects_unknown_keys() {
        let err = serde_json::from_str::<FileConfig>(r#"{"gamm": 1.4}"#).unwrap_err();
        assert!(err.to_string().contains("gamm"));
    }

    #[test]
    fn missing_setting_is_a_config_failure() {
        let s = Settings {
            file: FileConfig::default(),
            flags: CommonArgs::default(),
        };
        match s.params() {
            Err(Failure::Config(msg)) => assert!(msg.contains("--gamma")),
            _ => panic!("expected a config failure"),
        }
    }

    #[test]
    fn cli_declares_all_specified_flags() {
        use clap::CommandFactory;
        let cmd = Cli::command();
        for sub in cmd.get_subcommands() {
            let longs: Vec<String> = sub
                .get_arguments()
                .filter_map(|a| a.get_long().map(str::to_string))
                .collect();
            for flag in [
                "config", "gamma", "v-plus", "v0", "side", "radius", "points", "indent", "L",
                "abs-tol", "rel-tol", "out",
            ] {
                assert!(longs.contains(&flag.to_string()), "{} lacks --{flag}", sub.get_name());
            }
        }
    }
}
