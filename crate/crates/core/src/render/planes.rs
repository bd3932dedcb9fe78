use num_complex::Complex64;

use super::{colormap, gradient_position, sweep, Palette, RasterImage, RenderError, Rgb, Window};
use crate::dynamics::{
    classify_orbit, classify_points, same_cycle, slowest_convergence, CycleVerdict, EscapeConfig,
    OrbitKind, OrbitOutcome, SpherePoint, Target,
};
use crate::operators::{
    closed_form_criticals, critical_points, instantiate, CriticalSet, FamilyId, FamilyKind,
    NewtonLikeOperator,
};

/// Fraction of pixels whose closed-form critical points are re-derived with
/// the generic solver when oracle checking is on.
const ORACLE_STRIDE: usize = 100;
const ORACLE_TOL: f64 = 1e-6;
/// Capture radius of the parabolic point `-1` in Ermakov dynamical planes.
const PARABOLIC_TARGET_TOL: f64 = 1e-3;
const MARKER_HALF: i64 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SweepOptions {
    /// Worker threads; 0 uses every core.
    pub workers: usize,
    /// Compare the closed forms with the generic solver on every
    /// hundredth pixel.
    pub oracle_check: bool,
    /// Seed each orbit at `1/c` instead of the representative `c`.
    pub use_partners: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ParamCell {
    pub a: Complex64,
    /// Number of critical representatives, one per pair `{c, 1/c}`.
    pub n_free: usize,
    pub n_converged: usize,
    pub slowest_iters: u32,
    pub verdict: Option<CycleVerdict>,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParamGrid {
    pub family: FamilyKind,
    pub window: Window,
    /// Row-major, row 0 at the top.
    pub cells: Vec<ParamCell>,
    pub oracle_samples: usize,
    pub oracle_mismatches: usize,
}

impl ParamGrid {
    pub fn cell(&self, i: usize, j: usize) -> &ParamCell {
        &self.cells[j * self.window.width + i]
    }

    /// Share of non-degenerate cells whose critical orbits all reach a root.
    pub fn converged_fraction(&self) -> f64 {
        let live: Vec<_> = self.cells.iter().filter(|c| !c.degenerate).collect();
        if live.is_empty() {
            return 0.0;
        }
        live.iter().filter(|c| c.n_converged == c.n_free).count() as f64 / live.len() as f64
    }
}

fn param_cell(
    kind: FamilyKind,
    a: Complex64,
    cfg: &EscapeConfig,
    capture: bool,
    partners: bool,
) -> ParamCell {
    let fam = FamilyId::new(kind, a);
    let degenerate = ParamCell {
        a,
        n_free: kind.free_critical_count(),
        degenerate: true,
        ..ParamCell::default()
    };
    let (Ok(op), Ok(set)) = (instantiate(fam), closed_form_criticals(fam)) else {
        return degenerate;
    };
    if !set.representatives.iter().all(|c| c.is_finite()) {
        return degenerate;
    }
    let seeds: Vec<SpherePoint> = set
        .representatives
        .iter()
        .map(|&c| {
            let p = SpherePoint::new(c);
            if partners {
                p.inverse()
            } else {
                p
            }
        })
        .collect();
    let outcomes = classify_points(&op, &seeds, cfg, &[]);
    let summary = slowest_convergence(&outcomes);
    let verdict = (capture && summary.count_converged == 0)
        .then(|| same_cycle(&op, set.representatives[0], set.representatives[1]));
    ParamCell {
        a,
        n_free: set.len(),
        n_converged: summary.count_converged,
        slowest_iters: summary.slowest_iters,
        verdict,
        degenerate: false,
    }
}

/// `Some(agrees)` when the closed forms at `a` could be checked.
fn oracle_agrees(kind: FamilyKind, a: Complex64) -> Option<bool> {
    let fam = FamilyId::new(kind, a);
    let closed = closed_form_criticals(fam).ok()?;
    let generic = critical_points(fam).ok()?;
    let scale = 1.0
        + closed
            .representatives
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
    Some(closed.distance(&generic) <= ORACLE_TOL * scale)
}

fn param_sweep(
    kind: FamilyKind,
    window: &Window,
    cfg: &EscapeConfig,
    palette: &Palette,
    capture: bool,
    shift: bool,
    opts: &SweepOptions,
) -> Result<(ParamGrid, RasterImage), RenderError> {
    let results = sweep(window, opts.workers, |i, j| {
        let a = window.point(i, j);
        let cell = param_cell(kind, a, cfg, capture, opts.use_partners);
        let check = (opts.oracle_check && (j * window.width + i).is_multiple_of(ORACLE_STRIDE))
            .then(|| oracle_agrees(kind, a))
            .flatten();
        (cell, check)
    })?;
    let colors: Vec<Rgb> = results
        .iter()
        .map(|(c, _)| colormap(c, palette, cfg, shift))
        .collect();
    let checks: Vec<bool> = results.iter().filter_map(|r| r.1).collect();
    let grid = ParamGrid {
        family: kind,
        window: *window,
        cells: results.into_iter().map(|r| r.0).collect(),
        oracle_samples: checks.len(),
        oracle_mismatches: checks.iter().filter(|ok| !**ok).count(),
    };
    Ok((
        grid,
        RasterImage::from_colors(window.width, window.height, &colors),
    ))
}

/// Joint parameter plane: every critical representative of `O_a` is
/// iterated and the pixel is colored by how many reach a root.
pub fn render_parameter_plane(
    kind: FamilyKind,
    window: &Window,
    cfg: &EscapeConfig,
    palette: &Palette,
    shift: bool,
    opts: &SweepOptions,
) -> Result<(ParamGrid, RasterImage), RenderError> {
    param_sweep(kind, window, cfg, palette, false, shift, opts)
}

/// Parameter plane that also separates capture from disjoint parameters
/// where neither critical orbit reaches a root.
pub fn render_capture_plane(
    kind: FamilyKind,
    window: &Window,
    cfg: &EscapeConfig,
    palette: &Palette,
    opts: &SweepOptions,
) -> Result<(ParamGrid, RasterImage), RenderError> {
    let count = kind.free_critical_count();
    if count != 2 {
        return Err(RenderError::RepresentativeCount {
            family: kind,
            count,
        });
    }
    param_sweep(kind, window, cfg, palette, true, false, opts)
}

/// Extra attractors watched in dynamical planes: the fixed point 1, and for
/// the Ermakov family also the parabolic point -1.
pub fn dynamical_targets(kind: FamilyKind) -> Vec<Target> {
    let mut t = vec![Target::new(Complex64::new(1.0, 0.0))];
    if kind == FamilyKind::ErmakovKalitkin {
        t.push(Target::with_tol(
            Complex64::new(-1.0, 0.0),
            PARABOLIC_TARGET_TOL,
        ));
    }
    t
}

/// Basins of the roots (gradient), of the targets (target color) and the
/// rest (black), with white squares on the critical points.
pub fn render_dynamical_plane(
    op: &NewtonLikeOperator,
    window: &Window,
    cfg: &EscapeConfig,
    palette: &Palette,
    targets: &[Target],
    criticals: &CriticalSet,
    workers: usize,
) -> Result<(Vec<OrbitOutcome>, RasterImage), RenderError> {
    let outcomes: Vec<OrbitOutcome> = sweep(window, workers, |i, j| {
        Some(classify_orbit(op, window.point(i, j), cfg, targets))
    })?
    .into_iter()
    .flatten()
    .collect();
    let colors: Vec<Rgb> = outcomes
        .iter()
        .map(|o| match o.kind {
            OrbitKind::ToZero | OrbitKind::ToInfinity => {
                palette.gradient_at(gradient_position(o.iterations, cfg.max_iter))
            }
            OrbitKind::ToTarget(_) => palette.target_basin,
            OrbitKind::NonConverged => palette.unresolved,
        })
        .collect();
    let mut img = RasterImage::from_colors(window.width, window.height, &colors);
    for &c in &criticals.full {
        draw_marker(&mut img, window, c, palette.marker);
    }
    Ok((outcomes, img))
}

fn draw_marker(img: &mut RasterImage, window: &Window, z: Complex64, rgb: Rgb) {
    let Some((ci, cj)) = window.pixel_of(z) else {
        return;
    };
    for dj in -MARKER_HALF..=MARKER_HALF {
        for di in -MARKER_HALF..=MARKER_HALF {
            let (i, j) = (ci as i64 + di, cj as i64 + dj);
            if i >= 0 && j >= 0 && (i as usize) < img.width && (j as usize) < img.height {
                img.set(i as usize, j as usize, rgb);
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum StabilityClass {
    /// `|O'(1)| < 1`.
    Stable,
    /// A strange fixed point other than 1 attracts (checked for the
    /// Chebyshev family only).
    StrangeAttracting,
    #[default]
    Unstable,
    Degenerate,
}

/// Stability of the fixed point 1 of `O_a`.
pub fn stability_class(kind: FamilyKind, a: Complex64) -> StabilityClass {
    let Ok(op) = instantiate(FamilyId::new(kind, a)) else {
        return StabilityClass::Degenerate;
    };
    let one = Complex64::new(1.0, 0.0);
    if op.derivative(one).norm() < 1.0 {
        return StabilityClass::Stable;
    }
    if kind == FamilyKind::ChebyshevMultipoint && strange_pair_attracts(&op) {
        return StabilityClass::StrangeAttracting;
    }
    StabilityClass::Unstable
}

fn strange_pair_attracts(op: &NewtonLikeOperator) -> bool {
    let fixed = op.fixed_point_polynomial();
    let Ok((quartic, _)) = fixed.div_rem(&crate::poly::Polynomial::from_real(&[-1.0, 1.0])) else {
        return false;
    };
    let Ok(zs) = crate::poly::roots(&quartic) else {
        return false;
    };
    zs.iter()
        .map(|&z| op.derivative(z).norm())
        .fold(f64::INFINITY, f64::min)
        < 1.0
}

pub fn render_stability_map(
    kind: FamilyKind,
    window: &Window,
    palette: &Palette,
    workers: usize,
) -> Result<(Vec<StabilityClass>, RasterImage), RenderError> {
    let classes = sweep(window, workers, |i, j| {
        stability_class(kind, window.point(i, j))
    })?;
    let colors: Vec<Rgb> = classes
        .iter()
        .map(|c| match c {
            StabilityClass::Stable => palette.stable,
            StabilityClass::StrangeAttracting => palette.strange_attracting,
            StabilityClass::Unstable => palette.unstable,
            StabilityClass::Degenerate => palette.degenerate,
        })
        .collect();
    Ok((
        classes,
        RasterImage::from_colors(window.width, window.height, &colors),
    ))
}
