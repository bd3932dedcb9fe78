//! Command-line front end.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, ValueEnum};
use num_complex::Complex64;
use thiserror::Error;

use crate::dynamics::{
    classify_orbit, slowest_convergence, CycleVerdict, EscapeConfig, OrbitKind,
    DEFAULT_DYN_MAX_ITER, DEFAULT_ESC, DEFAULT_PARAM_MAX_ITER,
};
use crate::operators::{closed_form_criticals, instantiate, FamilyId, FamilyKind, OperatorError};
use crate::render::{
    dynamical_targets, render_capture_plane, render_dynamical_plane, render_parameter_plane,
    render_stability_map, Palette, ParamGrid, RasterImage, RenderError, StabilityClass,
    SweepOptions, Window,
};

const DEFAULT_RES: (usize, usize) = (1000, 1000);
const DYN_WINDOW: [f64; 4] = [-3.0, 3.0, -3.0, 3.0];
const PROGRAM: &str = "newton-planes";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Joint parameter plane of all free critical orbits.
    Param,
    /// Parameter plane separating capture and disjoint parameters.
    Capture,
    /// Dynamical plane of one operator.
    Dyn,
    /// Stability of the fixed point 1 over the parameter plane.
    Stability,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Param => "param",
            Mode::Capture => "capture",
            Mode::Dyn => "dyn",
            Mode::Stability => "stability",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Bounds([f64; 4]);

#[derive(Debug, Clone, Copy, PartialEq)]
struct Resolution(usize, usize);

/// Parameter and dynamical planes of Newton-like operators on quadratics.
#[derive(Debug, Parser)]
#[command(name = PROGRAM, version)]
struct Args {
    #[arg(long, value_enum)]
    mode: Mode,
    /// kim, cheby, ermakov or sixth.
    #[arg(long, value_parser = parse_family)]
    family: FamilyKind,
    /// Axis bounds xmin,xmax,ymin,ymax.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_bounds)]
    window: Option<Bounds>,
    /// Raster size WxH.
    #[arg(long, value_parser = parse_resolution)]
    res: Option<Resolution>,
    /// Iteration cap per orbit (default 500, or 2000 in dyn mode).
    #[arg(long = "max-iter", value_parser = clap::value_parser!(u32).range(1..))]
    max_iter: Option<u32>,
    /// Escape radius; orbits below 1/esc count as converged to 0.
    #[arg(long, value_parser = parse_esc)]
    esc: Option<f64>,
    /// Operator parameter re,im (dyn mode).
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    param: Option<Complex64>,
    /// Color cells where all but one orbit converge with the gradient.
    #[arg(long)]
    shift: bool,
    /// Output image (binary PPM).
    #[arg(long)]
    out: Option<PathBuf>,
    /// CSV classification grid (param and capture modes).
    #[arg(long = "grid-out")]
    grid_out: Option<PathBuf>,
    /// Worker threads, 0 for one per core.
    #[arg(long)]
    threads: Option<usize>,
    /// Re-derive critical points with the generic solver on 1% of pixels.
    #[arg(long = "oracle-check")]
    oracle_check: bool,
}

fn parse_family(s: &str) -> Result<FamilyKind, String> {
    s.parse()
}

fn parse_floats(s: &str, n: usize) -> Result<Vec<f64>, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("'{t}': {e}")))
        .collect::<Result<_, _>>()?;
    if v.len() != n {
        return Err(format!(
            "expected {n} comma-separated numbers, got {}",
            v.len()
        ));
    }
    if !v.iter().all(|x| x.is_finite()) {
        return Err("values must be finite".into());
    }
    Ok(v)
}

fn parse_bounds(s: &str) -> Result<Bounds, String> {
    let v = parse_floats(s, 4)?;
    Ok(Bounds([v[0], v[1], v[2], v[3]]))
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let v = parse_floats(s, 2)?;
    Ok(Complex64::new(v[0], v[1]))
}

fn parse_resolution(s: &str) -> Result<Resolution, String> {
    let (w, h) = s
        .split_once('x')
        .ok_or_else(|| format!("expected WxH, got '{s}'"))?;
    let w: usize = w.parse().map_err(|e| format!("width '{w}': {e}"))?;
    let h: usize = h.parse().map_err(|e| format!("height '{h}': {e}"))?;
    if w == 0 || h == 0 {
        return Err("width and height must be positive".into());
    }
    Ok(Resolution(w, h))
}

fn parse_esc(s: &str) -> Result<f64, String> {
    let e: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if !(e.is_finite() && e > 1.0) {
        return Err(format!(
            "escape radius must be finite and greater than 1, got {e}"
        ));
    }
    Ok(e)
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("ValidationError: {0}")]
    Validation(String),
    /// `--help` or `--version`; the text goes to stdout.
    #[error("{0}")]
    Info(String),
}

/// A fully validated render request.
#[derive(Debug, Clone, PartialEq)]
pub struct RenderJob {
    pub mode: Mode,
    pub family: FamilyKind,
    /// Operator parameter, dyn mode only.
    pub param: Option<Complex64>,
    pub window: Window,
    pub cfg: EscapeConfig,
    pub palette: Palette,
    pub shift: bool,
    pub out: PathBuf,
    pub grid_out: Option<PathBuf>,
    /// 0 means one worker per core.
    pub workers: usize,
    pub oracle_check: bool,
}

/// Parses the arguments after the program name.
pub fn parse_args<I, T>(argv: I) -> Result<RenderJob, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let full = std::iter::once(OsString::from(PROGRAM)).chain(argv.into_iter().map(Into::into));
    let args = Args::try_parse_from(full).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
            CliError::Info(e.to_string())
        }
        _ => CliError::Usage(e.to_string()),
    })?;
    validate(args)
}

fn validate(args: Args) -> Result<RenderJob, CliError> {
    let invalid = |m: String| Err(CliError::Validation(m));
    let mode = args.mode;
    if mode == Mode::Dyn && args.param.is_none() {
        return invalid("--mode dyn requires --param re,im".into());
    }
    if mode != Mode::Dyn && args.param.is_some() {
        return invalid(format!(
            "--param only applies to --mode dyn, not {}",
            mode.name()
        ));
    }
    if mode == Mode::Capture && args.family.free_critical_count() != 2 {
        return invalid(format!(
            "--mode capture needs a family with exactly two critical representatives; {} has {}",
            args.family,
            args.family.free_critical_count()
        ));
    }
    if args.shift && mode != Mode::Param {
        return invalid("--shift only applies to --mode param".into());
    }
    let grid_modes = matches!(mode, Mode::Param | Mode::Capture);
    if args.grid_out.is_some() && !grid_modes {
        return invalid("--grid-out only applies to --mode param or capture".into());
    }
    if args.oracle_check && !grid_modes {
        return invalid("--oracle-check only applies to --mode param or capture".into());
    }
    let Some(out) = args.out else {
        return invalid("--out PATH is required".into());
    };

    let bounds = match (args.window, mode) {
        (Some(Bounds(b)), _) => b,
        (None, Mode::Dyn) => DYN_WINDOW,
        (None, _) => args.family.default_parameter_window(),
    };
    let Resolution(w, h) = args.res.unwrap_or(Resolution(DEFAULT_RES.0, DEFAULT_RES.1));
    let window =
        Window::new(bounds, w, h).map_err(|e| CliError::Usage(format!("--window: {e}")))?;
    let default_iter = if mode == Mode::Dyn {
        DEFAULT_DYN_MAX_ITER
    } else {
        DEFAULT_PARAM_MAX_ITER
    };
    let cfg = EscapeConfig::new(
        args.esc.unwrap_or(DEFAULT_ESC),
        args.max_iter.unwrap_or(default_iter),
    );

    Ok(RenderJob {
        mode,
        family: args.family,
        param: args.param,
        window,
        cfg,
        palette: Palette::default(),
        shift: args.shift,
        out,
        grid_out: args.grid_out,
        workers: args.threads.unwrap_or(0),
        oracle_check: args.oracle_check,
    })
}

/// Binary PPM: the `P6` header followed by the raw rows, top first.
pub fn write_ppm(img: &RasterImage, path: &Path) -> io::Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    write!(f, "P6\n{} {}\n255\n", img.width, img.height)?;
    f.write_all(&img.pixels)?;
    f.flush()
}

fn verdict_name(v: Option<CycleVerdict>) -> &'static str {
    match v {
        Some(CycleVerdict::Capture) => "capture",
        Some(CycleVerdict::Disjoint) => "disjoint",
        Some(CycleVerdict::Inconclusive) | None => "none",
    }
}

/// One row per cell in raster order. Degenerate cells leave the count
/// columns empty.
pub fn write_grid_csv(grid: &ParamGrid, path: &Path) -> io::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)?;
    w.write_record([
        "re",
        "im",
        "n_free",
        "n_converged",
        "slowest_iters",
        "verdict",
        "degenerate",
    ])?;
    for c in &grid.cells {
        let (re, im) = (format!("{:.16e}", c.a.re), format!("{:.16e}", c.a.im));
        if c.degenerate {
            w.write_record([re.as_str(), &im, "", "", "", "none", "true"])?;
        } else {
            w.write_record([
                re,
                im,
                c.n_free.to_string(),
                c.n_converged.to_string(),
                c.slowest_iters.to_string(),
                verdict_name(c.verdict).to_string(),
                "false".to_string(),
            ])?;
        }
    }
    w.flush()
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("setup: {0}")]
    Setup(#[from] OperatorError),
    #[error("render: {0}")]
    Render(#[from] RenderError),
    #[error("write {path}: {source}")]
    Write { path: PathBuf, source: io::Error },
}

/// What a finished run reports: a summary line plus mode-specific detail.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub summary: String,
    pub details: Vec<String>,
}

fn write_to<F: FnOnce(&Path) -> io::Result<()>>(path: &Path, f: F) -> Result<(), RunError> {
    f(path).map_err(|source| RunError::Write {
        path: path.to_path_buf(),
        source,
    })
}

fn format_complex(z: Complex64) -> String {
    format!("{}{:+}i", z.re + 0.0, z.im + 0.0)
}

pub fn run(job: &RenderJob) -> Result<RunReport, RunError> {
    let start = Instant::now();
    let opts = SweepOptions {
        workers: job.workers,
        oracle_check: job.oracle_check,
        use_partners: false,
    };
    let mut details = Vec::new();
    let (image, converged) = match job.mode {
        Mode::Param | Mode::Capture => {
            let (grid, img) = if job.mode == Mode::Param {
                render_parameter_plane(
                    job.family,
                    &job.window,
                    &job.cfg,
                    &job.palette,
                    job.shift,
                    &opts,
                )?
            } else {
                render_capture_plane(job.family, &job.window, &job.cfg, &job.palette, &opts)?
            };
            if let Some(path) = &job.grid_out {
                write_to(path, |p| write_grid_csv(&grid, p))?;
            }
            if job.oracle_check {
                details.push(format!(
                    "oracle check: {} of {} sampled pixels disagree",
                    grid.oracle_mismatches, grid.oracle_samples
                ));
            }
            (img, grid.converged_fraction())
        }
        Mode::Dyn => {
            let a = job.param.expect("dyn jobs carry a parameter");
            let fam = FamilyId::new(job.family, a);
            let op = instantiate(fam)?;
            let criticals = closed_form_criticals(fam)?;
            let targets = dynamical_targets(job.family);
            let outcomes: Vec<_> = criticals
                .representatives
                .iter()
                .map(|&c| classify_orbit(&op, c, &job.cfg, &targets))
                .collect();
            for (k, (c, o)) in criticals.representatives.iter().zip(&outcomes).enumerate() {
                let dest = match o.kind {
                    OrbitKind::ToZero => "root 0".to_string(),
                    OrbitKind::ToInfinity => "root inf".to_string(),
                    OrbitKind::ToTarget(t) => {
                        format!("target {}", format_complex(targets[t].point))
                    }
                    OrbitKind::NonConverged => "none".to_string(),
                };
                details.push(format!(
                    "critical {} at {}: {} after {} iterations",
                    k + 1,
                    format_complex(*c),
                    dest,
                    o.iterations
                ));
            }
            let s = slowest_convergence(&outcomes);
            details.push(format!(
                "roots: {} of {} critical representatives converge",
                s.count_converged,
                outcomes.len()
            ));
            let (pixels, img) = render_dynamical_plane(
                &op,
                &job.window,
                &job.cfg,
                &job.palette,
                &targets,
                &criticals,
                job.workers,
            )?;
            let hit = pixels.iter().filter(|o| o.converged_to_root()).count();
            (img, hit as f64 / pixels.len() as f64)
        }
        Mode::Stability => {
            let (classes, img) =
                render_stability_map(job.family, &job.window, &job.palette, job.workers)?;
            let stable = classes
                .iter()
                .filter(|c| **c == StabilityClass::Stable)
                .count();
            (img, stable as f64 / classes.len() as f64)
        }
    };
    write_to(&job.out, |p| write_ppm(&image, p))?;

    let label = if job.mode == Mode::Stability {
        "stable"
    } else {
        "converged"
    };
    let summary = format!(
        "{} {} {}x{}: {} pixels in {:.3} s, {:.2}% {}",
        job.mode.name(),
        job.family,
        job.window.width,
        job.window.height,
        job.window.pixel_count(),
        start.elapsed().as_secs_f64(),
        100.0 * converged,
        label
    );
    Ok(RunReport { summary, details })
}

/// Entry point for the binary: parses `args` (program name first), runs the
/// job and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let job = match parse_args(args.into_iter().skip(1)) {
        Ok(job) => job,
        Err(CliError::Info(text)) => {
            print!("{text}");
            return 0;
        }
        Err(e) => {
            eprintln!("{PROGRAM}: {e}");
            return 1;
        }
    };
    match run(&job) {
        Ok(report) => {
            for line in &report.details {
                println!("{line}");
            }
            println!("{}", report.summary);
            0
        }
        Err(e) => {
            eprintln!("{PROGRAM}: {e}");
            2
        }
    }
}
