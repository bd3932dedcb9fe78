use std::cmp::Ordering;
use std::f64::consts::TAU;

use num_complex::Complex64;

use super::{PolyError, Polynomial, ZERO_THRESHOLD};

const ORACLE_MAX_SWEEPS: usize = 1000;
const ORACLE_STEP_TOL: f64 = 1e-13;
const ORACLE_RESIDUAL_TOL: f64 = 1e-8;

/// Sorts lexicographically by (real part, imaginary part).
pub fn sort_roots(roots: &mut [Complex64]) {
    roots.sort_by(|a, b| match a.re.total_cmp(&b.re) {
        Ordering::Equal => a.im.total_cmp(&b.im),
        o => o,
    });
}

fn check_leading(lead: Complex64, all: &[Complex64]) -> Result<(), PolyError> {
    let max = all.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if lead.norm() <= ZERO_THRESHOLD * max || max == 0.0 {
        return Err(PolyError::DegenerateLeading);
    }
    Ok(())
}

/// Both roots of `a2 x^2 + a1 x + a0`, computing the larger root first with
/// the sign that avoids cancellation and the smaller one from the product.
pub fn solve_quadratic(
    a2: Complex64,
    a1: Complex64,
    a0: Complex64,
) -> Result<Vec<Complex64>, PolyError> {
    check_leading(a2, &[a2, a1, a0])?;
    let mut disc = (a1 * a1 - a2 * a0 * 4.0).sqrt();
    if (a1.conj() * disc).re < 0.0 {
        disc = -disc;
    }
    let q = -(a1 + disc) * 0.5;
    let mut out = if q.norm() == 0.0 {
        vec![Complex64::new(0.0, 0.0); 2]
    } else {
        vec![q / a2, a0 / q]
    };
    sort_roots(&mut out);
    Ok(out)
}

/// Cardano's formula in complex arithmetic, followed by a guarded Newton
/// polish on the original coefficients.
pub fn solve_cubic(
    a3: Complex64,
    a2: Complex64,
    a1: Complex64,
    a0: Complex64,
) -> Result<Vec<Complex64>, PolyError> {
    check_leading(a3, &[a3, a2, a1, a0])?;
    let b = a2 / a3;
    let c = a1 / a3;
    let d = a0 / a3;
    let p = c - b * b / 3.0;
    let q = b * b * b * (2.0 / 27.0) - b * c / 3.0 + d;
    let s = (q * q / 4.0 + p * p * p / 27.0).sqrt();
    let plus = -q / 2.0 + s;
    let minus = -q / 2.0 - s;
    let u3 = if plus.norm() >= minus.norm() {
        plus
    } else {
        minus
    };

    let shift = b / 3.0;
    let mut out = Vec::with_capacity(3);
    if u3.norm() == 0.0 {
        out.extend(std::iter::repeat_n(-shift, 3));
    } else {
        let u = u3.cbrt();
        let omega = Complex64::from_polar(1.0, TAU / 3.0);
        let mut w = Complex64::new(1.0, 0.0);
        for _ in 0..3 {
            let uk = w * u;
            out.push(uk - p / (uk * 3.0) - shift);
            w *= omega;
        }
    }

    let poly = Polynomial::new(vec![a0, a1, a2, a3]);
    for x in out.iter_mut() {
        *x = polish(&poly, *x, 4);
    }
    sort_roots(&mut out);
    Ok(out)
}

/// Newton steps accepted only while they reduce `|p|`.
fn polish(p: &Polynomial, mut x: Complex64, steps: usize) -> Complex64 {
    let mut fx = p.eval(x).norm();
    for _ in 0..steps {
        if fx == 0.0 {
            break;
        }
        let (v, dv) = p.eval_with_derivative(x);
        if dv.norm() == 0.0 {
            break;
        }
        let next = x - v / dv;
        let fn_ = p.eval(next).norm();
        if !(fn_ < fx) {
            break;
        }
        x = next;
        fx = fn_;
    }
    x
}

/// Residual scaled so it is comparable for roots inside and outside the
/// unit disk: `|p(z)| / (max|c_i| * max(1,|z|)^n)`.
pub(crate) fn scaled_residual(p: &Polynomial, z: Complex64) -> f64 {
    let n = p.len() as i32 - 1;
    p.eval(z).norm() / (p.max_magnitude() * z.norm().max(1.0).powi(n))
}

/// Result of a simultaneous-iteration run.
#[derive(Debug, Clone)]
pub(crate) struct OracleReport {
    pub roots: Vec<Complex64>,
    pub sweeps: usize,
    pub step_converged: bool,
}

fn aberth(p: &Polynomial) -> OracleReport {
    let n = p.len() - 1;
    let lead = p.coeffs()[n];
    let c0 = p.coeffs()[0];
    let radius = if c0.norm() > 0.0 {
        (c0.norm() / lead.norm()).powf(1.0 / n as f64)
    } else {
        1.0
    };
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let r = radius * (1.0 + 0.01 * k as f64 / n as f64);
            Complex64::from_polar(r, TAU * k as f64 / n as f64 + 0.7)
        })
        .collect();

    let mut sweeps = 0;
    let mut step_converged = false;
    while sweeps < ORACLE_MAX_SWEEPS {
        sweeps += 1;
        let mut done = true;
        for k in 0..n {
            let (v, dv) = p.eval_with_derivative(z[k]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / dv;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let mut step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.is_finite() {
                // coincident iterates or a critical point of p: nudge
                step = Complex64::from_polar(1e-3 * (1.0 + z[k].norm()), 1.0 + k as f64);
            }
            z[k] -= step;
            if step.norm() > ORACLE_STEP_TOL * (1.0 + z[k].norm()) {
                done = false;
            }
        }
        if done {
            step_converged = true;
            break;
        }
    }
    sort_roots(&mut z);
    OracleReport {
        roots: z,
        sweeps,
        step_converged,
    }
}

pub(crate) fn oracle_report(p: &Polynomial) -> Result<OracleReport, PolyError> {
    let p = p.trimmed();
    if p.len() < 2 {
        return Err(PolyError::ConstantPolynomial);
    }
    Ok(aberth(&p))
}

/// All roots (with multiplicity) by Aberth–Ehrlich simultaneous iteration.
///
/// Independent of the closed-form solvers; used to validate them. Fails with
/// [`PolyError::NoConvergence`] only when the sweep budget is exhausted and
/// some scaled residual is still above `1e-8`.
pub fn solve_poly_oracle(p: &Polynomial) -> Result<Vec<Complex64>, PolyError> {
    let trimmed = p.trimmed();
    let report = oracle_report(&trimmed)?;
    if !report.step_converged {
        let residuals: Vec<f64> = report
            .roots
            .iter()
            .map(|&z| scaled_residual(&trimmed, z))
            .collect();
        let worst = residuals.iter().copied().fold(0.0, f64::max);
        if !(worst < ORACLE_RESIDUAL_TOL) {
            return Err(PolyError::NoConvergence {
                sweeps: report.sweeps,
                worst,
                residuals,
            });
        }
    }
    Ok(report.roots)
}

/// Roots of a trimmed polynomial: closed forms up to degree three, the
/// oracle beyond.
pub fn roots(p: &Polynomial) -> Result<Vec<Complex64>, PolyError> {
    let t = p.trimmed();
    let c = t.coeffs();
    match c.len() {
        1 => Err(PolyError::ConstantPolynomial),
        2 => Ok(vec![-c[0] / c[1]]),
        3 => solve_quadratic(c[2], c[1], c[0]),
        4 => solve_cubic(c[3], c[2], c[1], c[0]),
        _ => solve_poly_oracle(&t),
    }
}

/// Largest distance in a one-to-one pairing of two root multisets, built by
/// repeatedly taking the closest remaining pair. Returns infinity when the
/// sizes differ.
pub fn match_root_sets(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut left: Vec<Complex64> = a.to_vec();
    let mut right: Vec<Complex64> = b.to_vec();
    let mut worst: f64 = 0.0;
    while !left.is_empty() {
        let mut best = (0, 0, f64::INFINITY);
        for (i, x) in left.iter().enumerate() {
            for (j, y) in right.iter().enumerate() {
                let d = (x - y).norm();
                if d < best.2 {
                    best = (i, j, d);
                }
            }
        }
        worst = worst.max(best.2);
        left.swap_remove(best.0);
        right.swap_remove(best.1);
    }
    worst
}
