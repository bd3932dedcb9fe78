//! Orbit iteration on the Riemann sphere with the symmetric stop rule.
//!
//! Points are stored as `w` with `|w| <= 1` plus a flag saying whether the
//! point is `w` or `1/w`. Because `O(1/w) = 1/O(w)`, one step only ever
//! evaluates `O` inside the closed unit disk, and the orbit of `1/z` is the
//! orbit of `z` with the flag flipped, bit for bit.

use num_complex::Complex64;

use crate::operators::{is_infinite, NewtonLikeOperator};

pub const DEFAULT_ESC: f64 = 1e4;
pub const DEFAULT_PARAM_MAX_ITER: u32 = 500;
pub const DEFAULT_DYN_MAX_ITER: u32 = 2000;
pub const DEFAULT_TARGET_TOL: f64 = 1e-6;

pub const DEFAULT_REFINE: u32 = 10_000;
pub const DEFAULT_WINDOW: usize = 100;
pub const DEFAULT_CYCLE_TOL: f64 = 1e-6;

/// Escape radius and iteration budget. The small radius is always `1/esc`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EscapeConfig {
    esc: f64,
    pub max_iter: u32,
    pub target_tol: f64,
}

impl EscapeConfig {
    /// Panics unless `esc > 1` and finite.
    pub fn new(esc: f64, max_iter: u32) -> Self {
        assert!(
            esc.is_finite() && esc > 1.0,
            "escape radius must be finite and > 1, got {esc}"
        );
        Self {
            esc,
            max_iter,
            target_tol: DEFAULT_TARGET_TOL,
        }
    }

    pub fn parameter_plane() -> Self {
        Self::new(DEFAULT_ESC, DEFAULT_PARAM_MAX_ITER)
    }

    pub fn dynamical_plane() -> Self {
        Self::new(DEFAULT_ESC, DEFAULT_DYN_MAX_ITER)
    }

    pub fn with_target_tol(mut self, tol: f64) -> Self {
        self.target_tol = tol;
        self
    }

    pub fn esc(&self) -> f64 {
        self.esc
    }

    pub fn eps(&self) -> f64 {
        1.0 / self.esc
    }
}

impl Default for EscapeConfig {
    fn default() -> Self {
        Self::parameter_plane()
    }
}

/// A point of the extended plane: `w` when `inverted` is false, else `1/w`.
/// `|w| <= 1` always holds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint {
    w: Complex64,
    inverted: bool,
}

impl SpherePoint {
    /// Non-finite `z` is the point at infinity.
    pub fn new(z: Complex64) -> Self {
        if is_infinite(z) || z.is_nan() {
            return Self {
                w: Complex64::new(0.0, 0.0),
                inverted: true,
            };
        }
        if z.norm() <= 1.0 {
            Self {
                w: z,
                inverted: false,
            }
        } else {
            Self {
                w: z.inv(),
                inverted: true,
            }
        }
    }

    /// The point `1/z`, exactly.
    pub fn inverse(self) -> Self {
        Self {
            w: self.w,
            inverted: !self.inverted,
        }
    }

    pub fn is_inverted(self) -> bool {
        self.inverted
    }

    pub fn chart_value(self) -> Complex64 {
        self.w
    }

    /// The point as a complex number; infinity is returned as a non-finite value.
    pub fn to_complex(self) -> Complex64 {
        if !self.inverted {
            self.w
        } else if self.w.norm() == 0.0 {
            crate::operators::infinity()
        } else {
            self.w.inv()
        }
    }

    /// One application of `O`. The image is `p/q` on the current side,
    /// kept if `|p| <= |q|` and otherwise stored as `q/p` on the other
    /// side. `q = 0` is a pole and lands exactly on 0 of the other side.
    #[inline]
    fn step(self, op: &NewtonLikeOperator) -> Self {
        let (p, q) = op.eval_parts(self.w);
        let (pn, qn) = (p.norm_sqr(), q.norm_sqr());
        if pn <= qn && qn > 0.0 {
            Self {
                w: p * q.conj() / qn,
                inverted: self.inverted,
            }
        } else if pn > qn && pn.is_finite() {
            Self {
                w: q * p.conj() / pn,
                inverted: !self.inverted,
            }
        } else {
            Self {
                w: Complex64::new(0.0, 0.0),
                inverted: !self.inverted,
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrbitKind {
    ToZero,
    ToInfinity,
    /// Index into the target list.
    ToTarget(usize),
    NonConverged,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OrbitOutcome {
    pub kind: OrbitKind,
    /// Steps taken before the stop condition first held.
    pub iterations: u32,
}

impl OrbitOutcome {
    pub fn converged_to_root(&self) -> bool {
        matches!(self.kind, OrbitKind::ToZero | OrbitKind::ToInfinity)
    }
}

/// A point that attracts orbits in addition to the two roots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Target {
    pub point: Complex64,
    /// Absolute capture radius; `None` uses the config's `target_tol`.
    pub tol: Option<f64>,
}

impl Target {
    pub fn new(point: Complex64) -> Self {
        Self { point, tol: None }
    }

    pub fn with_tol(point: Complex64, tol: f64) -> Self {
        Self {
            point,
            tol: Some(tol),
        }
    }
}

/// Iterates `z0` under `op`. Before each step the checks run in the order
/// `|z| < eps`, `|z| > esc`, then the targets in list order.
pub fn classify_orbit(
    op: &NewtonLikeOperator,
    z0: Complex64,
    cfg: &EscapeConfig,
    targets: &[Target],
) -> OrbitOutcome {
    classify_point(op, SpherePoint::new(z0), cfg, targets)
}

/// [`classify_orbit`] for a seed already in sphere form.
pub fn classify_point(
    op: &NewtonLikeOperator,
    seed: SpherePoint,
    cfg: &EscapeConfig,
    targets: &[Target],
) -> OrbitOutcome {
    classify_points(op, &[seed], cfg, targets)[0]
}

/// [`classify_point`] for several seeds at once. The orbits advance in
/// lockstep, which lets independent evaluations overlap; each outcome is
/// the one its seed gets on its own.
pub fn classify_points(
    op: &NewtonLikeOperator,
    seeds: &[SpherePoint],
    cfg: &EscapeConfig,
    targets: &[Target],
) -> Vec<OrbitOutcome> {
    let eps2 = cfg.eps() * cfg.eps();
    let mut pts = seeds.to_vec();
    let mut out: Vec<Option<OrbitOutcome>> = vec![None; seeds.len()];
    let mut active = seeds.len();
    for i in 0..=cfg.max_iter {
        for (p, slot) in pts.iter().zip(out.iter_mut()) {
            if slot.is_none() {
                *slot = stop_check(*p, i, eps2, cfg, targets);
                active -= slot.is_some() as usize;
            }
        }
        if active == 0 || i == cfg.max_iter {
            break;
        }
        for (p, slot) in pts.iter_mut().zip(&out) {
            if slot.is_none() {
                *p = p.step(op);
            }
        }
    }
    let unresolved = OrbitOutcome {
        kind: OrbitKind::NonConverged,
        iterations: cfg.max_iter,
    };
    out.into_iter().map(|o| o.unwrap_or(unresolved)).collect()
}

#[inline]
fn stop_check(
    p: SpherePoint,
    i: u32,
    eps2: f64,
    cfg: &EscapeConfig,
    targets: &[Target],
) -> Option<OrbitOutcome> {
    // |z| > esc on the inverted side is |w| < 1/esc = eps
    if p.w.norm_sqr() < eps2 {
        let kind = if p.inverted {
            OrbitKind::ToInfinity
        } else {
            OrbitKind::ToZero
        };
        return Some(OrbitOutcome {
            kind,
            iterations: i,
        });
    }
    if !targets.is_empty() {
        let z = p.to_complex();
        for (t, target) in targets.iter().enumerate() {
            if (z - target.point).norm() < target.tol.unwrap_or(cfg.target_tol) {
                return Some(OrbitOutcome {
                    kind: OrbitKind::ToTarget(t),
                    iterations: i,
                });
            }
        }
    }
    None
}

/// Root-convergence summary of a set of critical orbits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConvergenceSummary {
    pub all_converged: bool,
    pub count_converged: usize,
    /// Largest iteration count among the root-converging orbits, 0 if none.
    pub slowest_iters: u32,
}

/// Only convergence to 0 or infinity counts; targets do not.
pub fn slowest_convergence(outcomes: &[OrbitOutcome]) -> ConvergenceSummary {
    let converged = outcomes.iter().filter(|o| o.converged_to_root());
    ConvergenceSummary {
        all_converged: outcomes.iter().all(OrbitOutcome::converged_to_root),
        count_converged: converged.clone().count(),
        slowest_iters: converged.map(|o| o.iterations).max().unwrap_or(0),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CycleVerdict {
    /// Both orbits end on the same cycle or on a cycle and its mirror image.
    Capture,
    /// The orbits end on different, non-symmetric cycles.
    Disjoint,
    /// Some refined orbit left the finite plane.
    Inconclusive,
}

/// Comparison parameters for [`same_cycle_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleProbe {
    pub refine: u32,
    pub window: usize,
    pub tol: f64,
}

impl Default for CycleProbe {
    fn default() -> Self {
        Self {
            refine: DEFAULT_REFINE,
            window: DEFAULT_WINDOW,
            tol: DEFAULT_CYCLE_TOL,
        }
    }
}

/// [`same_cycle_with`] using the default probe.
pub fn same_cycle(op: &NewtonLikeOperator, c1: Complex64, c3: Complex64) -> CycleVerdict {
    same_cycle_with(op, c1, c3, &CycleProbe::default())
}

/// Refines both orbits, records `window` iterates of the `c1` orbit and of
/// the `1/c1` orbit, and looks for the refined `c3` among them. Only cycles
/// of period below `window` are recognized.
pub fn same_cycle_with(
    op: &NewtonLikeOperator,
    c1: Complex64,
    c3: Complex64,
    probe: &CycleProbe,
) -> CycleVerdict {
    let refine = |mut p: SpherePoint| {
        for _ in 0..probe.refine {
            p = p.step(op);
        }
        p
    };
    let p1 = SpherePoint::new(c1);
    let p2 = p1.inverse();
    let z3 = refine(SpherePoint::new(c3)).to_complex();
    if !z3.is_finite() {
        return CycleVerdict::Inconclusive;
    }

    let mut best = f64::INFINITY;
    for start in [p1, p2] {
        let mut p = refine(start);
        for _ in 0..probe.window {
            let z = p.to_complex();
            if !z.is_finite() {
                return CycleVerdict::Inconclusive;
            }
            best = best.min((z - z3).norm());
            p = p.step(op);
        }
    }
    if best < probe.tol {
        CycleVerdict::Capture
    } else {
        CycleVerdict::Disjoint
    }
}
