//! Rational operators `O(z) = z^n num(z) / den(z)` where `num` is the
//! coefficient reversal of `den`.
//!
//! Such maps commute with `z -> 1/z` (`O(1/z) = 1/O(z)`), which drives
//! everything here: evaluation outside the unit disk goes through the
//! inverted side, critical points come in pairs `{c, 1/c}`, and the point at
//! infinity behaves exactly like the origin.

mod critical;
mod family;

use num_complex::Complex64;
use thiserror::Error;

use crate::poly::{solve_poly_oracle, PolyError, Polynomial};

pub use critical::{closed_form_criticals, critical_points, free_critical_points, CriticalSet};
pub use family::{instantiate, FamilyId, FamilyKind};

/// `|den(z)|` below this counts as a pole.
const POLE_EPS: f64 = 1e-300;
const FIXED_TOL: f64 = 1e-8;
const CLUSTER_RADIUS: f64 = 1e-4;
const SUPERATTRACTING_TOL: f64 = 1e-10;
const INDIFFERENT_BAND: f64 = 1e-8;
const RATIONAL_TOL: f64 = 1e-8;
const RATIONAL_MAX_DENOM: u32 = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OperatorError {
    #[error("DegenerateParameter: {family} at a = {a} drops the operator degree")]
    DegenerateParameter { family: FamilyKind, a: Complex64 },
    #[error("denominator has a vanishing leading or constant coefficient")]
    DegenerateDenominator,
    #[error("exponent n must be at least 1")]
    ZeroExponent,
    #[error("{z} is not a fixed point (|O(z) - z| = {residual:.3e})")]
    NotFixed { z: Complex64, residual: f64 },
    #[error(
        "known factor does not divide the derivative numerator (relative remainder {residual:.3e})"
    )]
    DeflationResidual { residual: f64 },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// The point at infinity of the extended plane.
pub fn infinity() -> Complex64 {
    Complex64::new(f64::INFINITY, 0.0)
}

/// True for the point at infinity, including any non-finite value.
pub fn is_infinite(z: Complex64) -> bool {
    !z.is_finite()
}

#[derive(Clone, Debug, PartialEq)]
pub struct NewtonLikeOperator {
    n: u32,
    den: Polynomial,
    num: Polynomial,
}

impl NewtonLikeOperator {
    /// Builds `z^n reverse(den)(z) / den(z)`. Both the constant and the top
    /// coefficient of `den` must be nonzero (relative to its largest one).
    pub fn new(n: u32, den: Polynomial) -> Result<Self, OperatorError> {
        if n == 0 {
            return Err(OperatorError::ZeroExponent);
        }
        let max = den.max_magnitude();
        let c = den.coeffs();
        let cut = crate::poly::ZERO_THRESHOLD * max;
        if max == 0.0 || c[0].norm() <= cut || c[c.len() - 1].norm() <= cut {
            return Err(OperatorError::DegenerateDenominator);
        }
        let num = den.reciprocal();
        Ok(Self { n, den, num })
    }

    pub fn exponent(&self) -> u32 {
        self.n
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    /// `k`, the degree of numerator and denominator.
    pub fn k(&self) -> usize {
        self.den.len() - 1
    }

    /// `z^n num(z) / den(z)` straight from the formula, one pass over the
    /// denominator coefficients. Meant for `|z| <= 1`; a zero denominator
    /// yields a non-finite value.
    #[inline]
    pub fn eval_direct(&self, z: Complex64) -> Complex64 {
        let (p, q) = self.eval_parts(z);
        p / q
    }

    /// `(z^n num(z), den(z))`, the two halves of [`Self::eval_direct`].
    #[inline]
    pub fn eval_parts(&self, z: Complex64) -> (Complex64, Complex64) {
        let d = self.den.coeffs();
        let mut dv = Complex64::new(0.0, 0.0);
        let mut nv = Complex64::new(0.0, 0.0);
        for (hi, lo) in d.iter().rev().zip(d) {
            dv = dv * z + hi;
            nv = nv * z + lo;
        }
        (z.powu(self.n) * nv, dv)
    }

    /// `O(z)` on the extended plane. Points outside the unit disk are
    /// evaluated as `1 / O(1/z)`; poles and infinity map to [`infinity`].
    pub fn eval(&self, z: Complex64) -> Complex64 {
        if is_infinite(z) || z.is_nan() {
            return infinity();
        }
        if z.norm() <= 1.0 {
            self.eval_inner(z)
        } else {
            let w = self.eval_inner(z.inv());
            if is_infinite(w) {
                Complex64::new(0.0, 0.0)
            } else if w.norm() == 0.0 {
                infinity()
            } else {
                w.inv()
            }
        }
    }

    fn eval_inner(&self, z: Complex64) -> Complex64 {
        let den = self.den.eval(z);
        if den.norm() < POLE_EPS {
            return infinity();
        }
        z.powu(self.n) * self.num.eval(z) / den
    }

    /// `B(z) = n num den + z (num' den - num den')`, so that
    /// `O'(z) = z^(n-1) B(z) / den(z)^2`.
    pub fn derivative_numerator(&self) -> Polynomial {
        let nd = &self.num * &self.den;
        let bracket = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        let nd = nd.scale(Complex64::new(self.n as f64, 0.0));
        let b = &nd + &bracket.shift(1);
        // the shifted bracket never exceeds degree 2k; drop its padding
        Polynomial::new(b.coeffs()[..nd.len()].to_vec())
    }

    /// `O'(z)` for finite `z`, using the inverted side when `|z| > 1`.
    pub fn derivative(&self, z: Complex64) -> Complex64 {
        if z.norm() <= 1.0 {
            self.derivative_inner(z)
        } else {
            // O(z) = 1/O(w), w = 1/z  =>  O'(z) = O'(w) w^2 / O(w)^2
            let w = z.inv();
            let ow = self.eval_inner(w);
            self.derivative_inner(w) * w * w / (ow * ow)
        }
    }

    fn derivative_inner(&self, z: Complex64) -> Complex64 {
        let den = self.den.eval(z);
        let b = self.derivative_numerator().eval(z);
        let zn1 = if self.n == 1 {
            Complex64::new(1.0, 0.0)
        } else {
            z.powu(self.n - 1)
        };
        zn1 * b / (den * den)
    }

    /// Multiplier `O'(z0)` at a fixed point. At infinity the map is
    /// conjugated by `z -> 1/z`, which turns it back into `O` at the origin.
    pub fn multiplier(&self, z0: Complex64) -> Result<Complex64, OperatorError> {
        if is_infinite(z0) {
            return Ok(self.derivative(Complex64::new(0.0, 0.0)));
        }
        let residual = if z0.norm() <= 1.0 {
            (self.eval(z0) - z0).norm()
        } else {
            (self.eval(z0.inv()) - z0.inv()).norm()
        };
        if !(residual < FIXED_TOL) {
            return Err(OperatorError::NotFixed { z: z0, residual });
        }
        Ok(self.derivative(z0))
    }

    /// `z^(n-1) num(z) - den(z)`: its roots are the fixed points other
    /// than 0 and infinity. Always antipalindromic.
    pub fn fixed_point_polynomial(&self) -> Polynomial {
        &self.num.shift(self.n as usize - 1) - &self.den
    }

    /// Every fixed point with its multiplier: 0 and infinity first, then the
    /// strange fixed points sorted. Numerically coincident roots are merged
    /// and reported with their multiplicity.
    pub fn fixed_points(&self) -> Result<Vec<FixedPointInfo>, OperatorError> {
        let mut out = Vec::new();
        for z in [Complex64::new(0.0, 0.0), infinity()] {
            let lambda = self.multiplier(z)?;
            out.push(FixedPointInfo::new(z, lambda, 1));
        }
        let roots = solve_poly_oracle(&self.fixed_point_polynomial())?;
        for (z, mult) in cluster(&roots, CLUSTER_RADIUS) {
            out.push(FixedPointInfo::new(z, self.multiplier(z)?, mult));
        }
        Ok(out)
    }
}

fn cluster(roots: &[Complex64], radius: f64) -> Vec<(Complex64, usize)> {
    let mut groups: Vec<Vec<Complex64>> = Vec::new();
    for &r in roots {
        match groups.iter_mut().find(|g| (g[0] - r).norm() < radius) {
            Some(g) => g.push(r),
            None => groups.push(vec![r]),
        }
    }
    groups
        .into_iter()
        .map(|g| {
            let n = g.len();
            (g.iter().sum::<Complex64>() / n as f64, n)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixedPointClass {
    Superattracting,
    Attracting,
    Repelling,
    Parabolic,
    IrrationallyIndifferent,
}

impl FixedPointClass {
    pub fn from_multiplier(lambda: Complex64) -> Self {
        let m = lambda.norm();
        if m < SUPERATTRACTING_TOL {
            Self::Superattracting
        } else if m < 1.0 - INDIFFERENT_BAND {
            Self::Attracting
        } else if m > 1.0 + INDIFFERENT_BAND {
            Self::Repelling
        } else {
            let turns = lambda.arg() / std::f64::consts::TAU;
            let rational = (1..=RATIONAL_MAX_DENOM).any(|s| {
                let s = s as f64;
                (turns - (turns * s).round() / s).abs() < RATIONAL_TOL
            });
            if rational {
                Self::Parabolic
            } else {
                Self::IrrationallyIndifferent
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointInfo {
    pub location: Complex64,
    pub multiplier: Complex64,
    pub class: FixedPointClass,
    /// Multiplicity as a root of the fixed-point equation.
    pub multiplicity: usize,
}

impl FixedPointInfo {
    fn new(location: Complex64, multiplier: Complex64, multiplicity: usize) -> Self {
        Self {
            location,
            multiplier,
            class: FixedPointClass::from_multiplier(multiplier),
            multiplicity,
        }
    }

    /// Anything other than the roots 0 and infinity.
    pub fn is_strange(&self) -> bool {
        !is_infinite(self.location) && self.location.norm() != 0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn kim(a: Complex64) -> NewtonLikeOperator {
        instantiate(FamilyId::new(FamilyKind::Kim4, a)).unwrap()
    }

    #[test]
    fn rejects_degenerate_denominators() {
        assert_eq!(
            NewtonLikeOperator::new(2, Polynomial::from_real(&[0., 1.])),
            Err(OperatorError::DegenerateDenominator)
        );
        assert_eq!(
            NewtonLikeOperator::new(2, Polynomial::from_real(&[1., 1., 0.])),
            Err(OperatorError::DegenerateDenominator)
        );
        assert_eq!(
            NewtonLikeOperator::new(0, Polynomial::from_real(&[1., 1.])),
            Err(OperatorError::ZeroExponent)
        );
    }

    #[test]
    fn eval_fixed_landmarks() {
        let op = kim(c(-2.0, 3.0));
        assert!((op.eval(c(1.0, 0.0)) - 1.0).norm() < 1e-14);
        assert_eq!(op.eval(c(0.0, 0.0)), c(0.0, 0.0));
        assert!(is_infinite(op.eval(infinity())));
        // z = -1 is a preimage of 1 when n + k is even
        assert!((op.eval(c(-1.0, 0.0)) - 1.0).norm() < 1e-12);
    }

    #[test]
    fn eval_outside_matches_direct_formula() {
        let op = kim(c(5.0, -1.0));
        let z = c(3.0, 2.0);
        let direct = op.eval_direct(z);
        assert!((op.eval(z) - direct).norm() < 1e-10 * direct.norm());
    }

    #[test]
    fn eval_pole_is_infinity() {
        // den = 1 + 2z, num = 2 + z: pole at -1/2, zero at -2
        let op = NewtonLikeOperator::new(1, Polynomial::from_real(&[1., 2.])).unwrap();
        assert!(is_infinite(op.eval(c(-0.5, 0.0))));
        assert_eq!(op.eval(c(-2.0, 0.0)), c(0.0, 0.0));
    }

    #[test]
    fn derivative_numerator_of_equal_num_den() {
        let op = NewtonLikeOperator::new(2, Polynomial::from_real(&[1., 1.])).unwrap();
        assert_eq!(
            op.derivative_numerator(),
            Polynomial::from_real(&[2., 4., 2.])
        );
    }

    #[test]
    fn kim_derivative_numerator_factors_through_printed_quartic() {
        let a = c(-2.0, 0.0);
        let b = kim(a).derivative_numerator();
        let (q, r) = b
            .div_rem(&Polynomial::from_real(&[4., 16., 24., 16., 4.]))
            .unwrap();
        assert!(r.max_magnitude() < 1e-10 * b.max_magnitude());
        // B = -4 (1+z)^4 P with P = [-3,-2,-8,-2,-3]
        let p = Polynomial::from_real(&[-3., -2., -8., -2., -3.]);
        for (x, y) in q.coeffs().iter().zip(p.coeffs()) {
            assert!((x + y).norm() < 1e-10, "{q:?}");
        }
    }

    #[test]
    fn multiplier_at_roots_and_kim_one() {
        let op = kim(c(84.0, 0.0));
        assert_eq!(op.multiplier(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert_eq!(op.multiplier(infinity()).unwrap(), c(0.0, 0.0));
        let lambda = op.multiplier(c(1.0, 0.0)).unwrap();
        assert!((lambda - c(-64.0 / 68.0, 0.0)).norm() < 1e-12);
        assert!(matches!(
            op.multiplier(c(0.5, 0.0)),
            Err(OperatorError::NotFixed { .. })
        ));
    }

    #[test]
    fn classify_multipliers() {
        use FixedPointClass::*;
        assert_eq!(
            FixedPointClass::from_multiplier(c(0.0, 0.0)),
            Superattracting
        );
        assert_eq!(FixedPointClass::from_multiplier(c(0.5, 0.5)), Attracting);
        assert_eq!(FixedPointClass::from_multiplier(c(2.0, 0.0)), Repelling);
        assert_eq!(FixedPointClass::from_multiplier(c(1.0, 0.0)), Parabolic);
        assert_eq!(
            FixedPointClass::from_multiplier(Complex64::from_polar(
                1.0,
                std::f64::consts::TAU * 3.0 / 7.0
            )),
            Parabolic
        );
        let golden = (5f64.sqrt() - 1.0) / 2.0;
        assert_eq!(
            FixedPointClass::from_multiplier(Complex64::from_polar(
                1.0,
                std::f64::consts::TAU * golden
            )),
            IrrationallyIndifferent
        );
    }

    #[test]
    fn fixed_point_polynomial_is_antipalindromic() {
        let op = kim(c(3.0, 1.0));
        assert!(op.fixed_point_polynomial().is_antipalindromic(1e-14));
    }

    #[test]
    fn kim_fixed_points_match_printed_sextic() {
        let a = c(7.0, -2.0);
        let fps = kim(a).fixed_points().unwrap();
        let strange: Vec<_> = fps.iter().filter(|f| f.is_strange()).collect();
        assert_eq!(strange.len(), 7);
        let sextic = Polynomial::new(vec![
            c(1., 0.),
            c(5., 0.),
            c(11., 0.),
            a + 14.0,
            c(11., 0.),
            c(5., 0.),
            c(1., 0.),
        ]);
        for f in strange {
            let z = f.location;
            if (z - 1.0).norm() > 1e-8 {
                assert!(
                    sextic.eval(z).norm()
                        < 1e-8 * sextic.max_magnitude() * z.norm().max(1.0).powi(6)
                );
            }
        }
    }
}
