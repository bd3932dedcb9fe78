use num_complex::Complex64;

use super::family::{instantiate, FamilyId, FamilyKind};
use super::{NewtonLikeOperator, OperatorError};
use crate::poly::{
    lift_root, reduce_palindromic, roots, solve_cubic, symmetry_representative, PolyError,
    Polynomial,
};

const DEFLATION_TOL: f64 = 1e-8;
const PALINDROMIC_TOL: f64 = 1e-8;

/// Free critical points grouped into symmetry pairs `{c, 1/c}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalSet {
    /// One member per pair (larger modulus, or nonnegative imaginary part on
    /// the unit circle), sorted by real then imaginary part.
    pub representatives: Vec<Complex64>,
    /// Every free critical point; `full[2i]` is `representatives[i]` and
    /// `full[2i + 1]` its partner.
    pub full: Vec<Complex64>,
}

impl CriticalSet {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Complex64, Complex64)>) -> Self {
        let mut pairs: Vec<(Complex64, Complex64)> = pairs
            .into_iter()
            .map(|(c, d)| symmetry_representative(c, d))
            .collect();
        pairs.sort_by(|p, q| p.0.re.total_cmp(&q.0.re).then(p.0.im.total_cmp(&q.0.im)));
        Self {
            representatives: pairs.iter().map(|p| p.0).collect(),
            full: pairs.iter().flat_map(|p| [p.0, p.1]).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    /// Largest distance between matched pairs of the two sets, where a
    /// representative may match either member of the other set's pair.
    pub fn distance(&self, other: &CriticalSet) -> f64 {
        if self.len() != other.len() {
            return f64::INFINITY;
        }
        let mut left: Vec<Complex64> = self.representatives.clone();
        let mut right: Vec<(Complex64, Complex64)> =
            other.full.chunks(2).map(|p| (p[0], p[1])).collect();
        let mut worst: f64 = 0.0;
        while !left.is_empty() {
            let mut best = (0, 0, f64::INFINITY);
            for (i, c) in left.iter().enumerate() {
                for (j, (r, p)) in right.iter().enumerate() {
                    let d = (c - r).norm().min((c - p).norm());
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
}

/// Roots of the derivative numerator of `op` after dividing out
/// `known_factors`, found through the `z + 1/z` reduction.
pub fn free_critical_points(
    op: &NewtonLikeOperator,
    known_factors: &[Polynomial],
) -> Result<CriticalSet, OperatorError> {
    let mut b = op.derivative_numerator();
    for f in known_factors {
        let (q, r) = b.div_rem(f)?;
        let residual = r.max_magnitude() / b.max_magnitude();
        if !(residual < DEFLATION_TOL) {
            return Err(OperatorError::DeflationResidual { residual });
        }
        b = q;
    }
    let b = b.trimmed();
    let defect = b.symmetry_defect(1.0);
    if defect > PALINDROMIC_TOL {
        return Err(PolyError::NotPalindromic { residual: defect }.into());
    }

    let mut pairs = Vec::new();
    let even = if (b.len() - 1) % 2 == 1 {
        // odd palindromic: -1 is a root
        let minus_one = Complex64::new(-1.0, 0.0);
        pairs.push((minus_one, minus_one));
        b.div_rem(&Polynomial::from_real(&[1.0, 1.0]))?.0
    } else {
        b
    };
    let q = reduce_palindromic(&even)?;
    if q.trimmed().len() >= 2 {
        pairs.extend(roots(&q)?.into_iter().map(lift_root));
    }
    Ok(CriticalSet::from_pairs(pairs))
}

/// [`free_critical_points`] of a catalog family with its known factors.
pub fn critical_points(family: FamilyId) -> Result<CriticalSet, OperatorError> {
    let op = instantiate(family)?;
    free_critical_points(&op, &family.kind.known_factors(family.a))
}

/// Free critical points from the explicit radical formulas (Kim,
/// Chebyshev, Ermakov) or the published reduced cubic (sixth order).
pub fn closed_form_criticals(family: FamilyId) -> Result<CriticalSet, OperatorError> {
    // reject the same parameters the operator constructor rejects
    instantiate(family)?;
    let a = family.a;
    let [c1, c2, c3, c4] = match family.kind {
        FamilyKind::Kim4 => kim(a),
        FamilyKind::ChebyshevMultipoint => chebyshev(a),
        FamilyKind::ErmakovKalitkin => ermakov(a),
        FamilyKind::SixthOrder => return sixth_order(family),
    };
    if ![c1, c2, c3, c4].iter().all(|c| c.is_finite()) {
        return Err(family.degenerate_error());
    }
    Ok(CriticalSet::from_pairs([(c1, c2), (c3, c4)]))
}

fn kim(a: Complex64) -> [Complex64; 4] {
    let s = (a * (a + 4.0) * 5.0).sqrt();
    let base = a + 4.0;
    let t = a * (-a + 6.0) * 10.0;
    let r1 = (t - base * s * 2.0).sqrt();
    let r3 = (t + base * s * 2.0).sqrt();
    let d = (a - 1.0) * 4.0;
    [
        (base - s - r1) / d,
        (base - s + r1) / d,
        (base + s - r3) / d,
        (base + s + r3) / d,
    ]
}

fn chebyshev(a: Complex64) -> [Complex64; 4] {
    let a2 = a * a;
    let s = (a * 36.0 - a2 * 12.0 + 1.0).sqrt();
    let base = a2 * 6.0 - a * 11.0 + 6.0;
    let t = a2 * a * 12.0 - a2 * 48.0 + a * 25.0 + 6.0;
    let r1 = (a * 2.0 * (t - base * s)).sqrt();
    let r3 = (a * 2.0 * (t + base * s)).sqrt();
    let d = (a * 2.0 - 1.0) * 6.0;
    let (m1, m3) = (base - a * s, base + a * s);
    [(m1 - r1) / d, (m1 + r1) / d, (m3 - r3) / d, (m3 + r3) / d]
}

fn ermakov(a: Complex64) -> [Complex64; 4] {
    let a2 = a * a;
    let one_minus = -a + 1.0;
    let s = (one_minus * 2.0 * (a2 * 3.0 - a * 26.0 + 26.0)).sqrt();
    let quad = a2 + a * 6.0 - 6.0;
    let u = a2 * a2 * 3.0 + a2 * a * 38.0 + a2 * 154.0 - a * 384.0 + 192.0;
    let base = one_minus * quad * 4.0;
    let d = (a - 1.0) * (a2 + a * 2.0 - 2.0) * 12.0;
    let r1 = a * (one_minus * 2.0 * (u - quad * s * 4.0)).sqrt();
    let r3 = a * (one_minus * 2.0 * (u + quad * s * 4.0)).sqrt();
    let (m1, m3) = (base - a2 * s, base + a2 * s);
    [(m1 - r1) / d, (m1 + r1) / d, (m3 - r3) / d, (m3 + r3) / d]
}

fn sixth_order(family: FamilyId) -> Result<CriticalSet, OperatorError> {
    let [c0, c1, c2, c3] = FamilyKind::sixth_order_reduced_cubic(family.a);
    let xs = solve_cubic(c3, c2, c1, c0).map_err(|e| match e {
        PolyError::DegenerateLeading => family.degenerate_error(),
        other => other.into(),
    })?;
    Ok(CriticalSet::from_pairs(xs.into_iter().map(lift_root)))
}
