//! Pixel sweeps over parameter and dynamical planes.

mod planes;

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::dynamics::{CycleVerdict, EscapeConfig};
use crate::operators::OperatorError;

pub use planes::{
    dynamical_targets, render_capture_plane, render_dynamical_plane, render_parameter_plane,
    render_stability_map, stability_class, ParamCell, ParamGrid, StabilityClass, SweepOptions,
};

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("capture planes need exactly two critical representatives, {family} has {count}")]
    RepresentativeCount {
        family: crate::operators::FamilyKind,
        count: usize,
    },
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error("could not start worker pool: {0}")]
    ThreadPool(#[from] rayon::ThreadPoolBuildError),
}

/// Axis-aligned rectangle sampled at pixel centers; row 0 is the top edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
    pub width: usize,
    pub height: usize,
}

impl Window {
    pub fn new(bounds: [f64; 4], width: usize, height: usize) -> Result<Self, RenderError> {
        let [xmin, xmax, ymin, ymax] = bounds;
        if !bounds.iter().all(|v| v.is_finite()) {
            return Err(RenderError::InvalidWindow("bounds must be finite".into()));
        }
        if !(xmin < xmax && ymin < ymax) {
            return Err(RenderError::InvalidWindow(format!(
                "need xmin < xmax and ymin < ymax, got {xmin},{xmax},{ymin},{ymax}"
            )));
        }
        if width == 0 || height == 0 {
            return Err(RenderError::InvalidWindow(format!(
                "empty raster {width}x{height}"
            )));
        }
        Ok(Self {
            xmin,
            xmax,
            ymin,
            ymax,
            width,
            height,
        })
    }

    pub fn pixel_width(&self) -> f64 {
        (self.xmax - self.xmin) / self.width as f64
    }

    pub fn pixel_height(&self) -> f64 {
        (self.ymax - self.ymin) / self.height as f64
    }

    /// Center of pixel `(i, j)`, column `i` and row `j`.
    pub fn point(&self, i: usize, j: usize) -> Complex64 {
        Complex64::new(
            self.xmin + (i as f64 + 0.5) * self.pixel_width(),
            self.ymax - (j as f64 + 0.5) * self.pixel_height(),
        )
    }

    /// The pixel containing `z`, if it lies in the window.
    pub fn pixel_of(&self, z: Complex64) -> Option<(usize, usize)> {
        if !z.is_finite() {
            return None;
        }
        let fi = ((z.re - self.xmin) / self.pixel_width()).floor();
        let fj = ((self.ymax - z.im) / self.pixel_height()).floor();
        if fi < 0.0 || fj < 0.0 || fi >= self.width as f64 || fj >= self.height as f64 {
            return None;
        }
        Some((fi as usize, fj as usize))
    }

    pub fn pixel_count(&self) -> usize {
        self.width * self.height
    }
}

pub type Rgb = [u8; 3];

pub const BLACK: Rgb = [0, 0, 0];
pub const WHITE: Rgb = [255, 255, 255];
pub const RED: Rgb = [255, 0, 0];
pub const MAGENTA: Rgb = [255, 0, 255];

#[derive(Debug, Clone, PartialEq)]
pub struct Palette {
    /// Anchors of the escape-time gradient, evenly spaced over `[0, 1]`.
    pub gradient: Vec<Rgb>,
    /// Color for `k` converged orbits; the last entry covers all larger `k`.
    pub counts: Vec<Rgb>,
    pub degenerate: Rgb,
    pub target_basin: Rgb,
    pub unresolved: Rgb,
    pub disjoint: Rgb,
    pub marker: Rgb,
    pub stable: Rgb,
    pub strange_attracting: Rgb,
    pub unstable: Rgb,
}

impl Default for Palette {
    fn default() -> Self {
        let dark_green = [0, 100, 0];
        Self {
            gradient: vec![RED, [255, 255, 0], [152, 251, 152], [0, 0, 255], WHITE],
            counts: vec![
                BLACK,
                [255, 192, 203],
                dark_green,
                [255, 165, 0],
                [128, 128, 128],
            ],
            degenerate: MAGENTA,
            target_basin: dark_green,
            unresolved: BLACK,
            disjoint: [0, 0, 255],
            marker: WHITE,
            stable: [0, 170, 0],
            strange_attracting: RED,
            unstable: WHITE,
        }
    }
}

impl Palette {
    /// Piecewise-linear lookup; `t` is clamped to `[0, 1]`.
    pub fn gradient_at(&self, t: f64) -> Rgb {
        let g = &self.gradient;
        if g.len() == 1 {
            return g[0];
        }
        let t = if t.is_nan() { 0.0 } else { t.clamp(0.0, 1.0) };
        let x = t * (g.len() - 1) as f64;
        let k = (x.floor() as usize).min(g.len() - 2);
        let f = x - k as f64;
        let mut out = [0u8; 3];
        for c in 0..3 {
            let (lo, hi) = (g[k][c] as f64, g[k + 1][c] as f64);
            out[c] = (lo + (hi - lo) * f).round() as u8;
        }
        out
    }

    pub fn count_color(&self, converged: usize) -> Rgb {
        self.counts[converged.min(self.counts.len() - 1)]
    }
}

/// Position in the gradient for an orbit that needed `iters` steps.
pub fn gradient_position(iters: u32, max_iter: u32) -> f64 {
    if max_iter == 0 {
        return 0.0;
    }
    ((1.0 + iters as f64).ln() / (1.0 + max_iter as f64).ln()).clamp(0.0, 1.0)
}

/// Color of one parameter-plane cell. With `shift`, cells where all but one
/// orbit reach the roots also get the gradient.
pub fn colormap(cell: &ParamCell, palette: &Palette, cfg: &EscapeConfig, shift: bool) -> Rgb {
    if cell.degenerate {
        return palette.degenerate;
    }
    let gradient_from = if shift {
        cell.n_free.saturating_sub(1).max(1)
    } else {
        cell.n_free
    };
    if cell.n_converged >= gradient_from && cell.n_converged > 0 {
        return palette.gradient_at(gradient_position(cell.slowest_iters, cfg.max_iter));
    }
    if cell.n_converged == 0 {
        return match cell.verdict {
            Some(CycleVerdict::Disjoint) => palette.disjoint,
            _ => palette.count_color(0),
        };
    }
    palette.count_color(cell.n_converged)
}

/// Row-major RGB8 raster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RasterImage {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

impl RasterImage {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            pixels: vec![0; width * height * 3],
        }
    }

    pub fn from_colors(width: usize, height: usize, colors: &[Rgb]) -> Self {
        assert_eq!(colors.len(), width * height);
        Self {
            width,
            height,
            pixels: colors.iter().flatten().copied().collect(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Rgb {
        let k = 3 * (j * self.width + i);
        [self.pixels[k], self.pixels[k + 1], self.pixels[k + 2]]
    }

    pub fn set(&mut self, i: usize, j: usize, rgb: Rgb) {
        let k = 3 * (j * self.width + i);
        self.pixels[k..k + 3].copy_from_slice(&rgb);
    }
}

/// Evaluates `f` at every pixel in row-major order on a pool of `workers`
/// threads (0 picks the core count). Each pixel lands in its own slot, so
/// the result does not depend on scheduling.
pub fn sweep<T, F>(window: &Window, workers: usize, f: F) -> Result<Vec<T>, RenderError>
where
    T: Send + Clone + Default,
    F: Fn(usize, usize) -> T + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()?;
    let mut out = vec![T::default(); window.pixel_count()];
    pool.install(|| {
        out.par_chunks_mut(window.width)
            .enumerate()
            .for_each(|(j, row)| {
                for (i, slot) in row.iter_mut().enumerate() {
                    *slot = f(i, j);
                }
            })
    });
    Ok(out)
}
