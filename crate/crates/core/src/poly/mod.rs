//! Dense complex polynomials in ascending-degree order, their palindromic
//! structure, and the root solvers built on top of them.

mod palindromic;
mod solve;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use thiserror::Error;

pub use palindromic::{
    classify_palindromic_roots, lift_root, reduce_palindromic, symmetry_representative, RootClass,
    RootClassification,
};
pub use solve::{
    match_root_sets, roots, solve_cubic, solve_poly_oracle, solve_quadratic, sort_roots,
};

/// Relative threshold below which a coefficient counts as zero when
/// computing degrees.
pub const ZERO_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolyError {
    #[error("polynomial is not palindromic (relative residual {residual:.3e})")]
    NotPalindromic { residual: f64 },
    #[error("palindromic reduction needs an even degree, got {0}")]
    OddDegree(usize),
    #[error("leading coefficient vanishes")]
    DegenerateLeading,
    #[error("polynomial has degree 0; nothing to solve")]
    ConstantPolynomial,
    #[error("coefficients are not real (max relative imaginary part {max_imag:.3e})")]
    NonRealCoefficients { max_imag: f64 },
    #[error(
        "root iteration did not converge after {sweeps} sweeps (worst scaled residual {worst:.3e})"
    )]
    NoConvergence {
        sweeps: usize,
        worst: f64,
        residuals: Vec<f64>,
    },
    #[error("division by a zero polynomial")]
    ZeroDivisor,
}

/// A polynomial `c[0] + c[1] z + ... + c[n] z^n` with complex coefficients.
///
/// The raw coefficient vector is kept as given (trailing zeros included) so
/// that coefficient reversal is an exact involution; degree queries trim
/// relative to the largest coefficient magnitude.
#[derive(Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    /// Builds a polynomial from ascending coefficients. An empty vector is
    /// treated as the zero polynomial `[0]`.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        if coeffs.is_empty() {
            return Self {
                coeffs: vec![Complex64::new(0.0, 0.0)],
            };
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn constant(c: Complex64) -> Self {
        Self { coeffs: vec![c] }
    }

    /// `z - root`
    pub fn linear_factor(root: Complex64) -> Self {
        Self::new(vec![-root, Complex64::new(1.0, 0.0)])
    }

    /// `(z - r_0)(z - r_1)...`
    pub fn from_roots(roots: &[Complex64]) -> Self {
        roots
            .iter()
            .fold(Self::constant(Complex64::new(1.0, 0.0)), |acc, &r| {
                &acc * &Self::linear_factor(r)
            })
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Length of the raw coefficient vector.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn max_magnitude(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.max_magnitude() == 0.0
    }

    /// Degree after discarding trailing coefficients below
    /// [`ZERO_THRESHOLD`] times the largest magnitude.
    pub fn degree(&self) -> usize {
        self.degree_with(ZERO_THRESHOLD)
    }

    pub fn degree_with(&self, rel_tol: f64) -> usize {
        let cut = rel_tol * self.max_magnitude();
        self.coeffs
            .iter()
            .rposition(|c| c.norm() > cut)
            .unwrap_or(0)
    }

    pub fn trimmed(&self) -> Self {
        Self {
            coeffs: self.coeffs[..=self.degree()].to_vec(),
        }
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs[self.degree()]
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Value and first derivative in one Horner pass.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        let mut p = zero;
        let mut dp = zero;
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// Coefficient vector reversed. Works on the raw vector, so applying it
    /// twice is the identity.
    pub fn reciprocal(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().rev().copied().collect(),
        }
    }

    /// `|c[i] - c[n-i]| <= tol * maxmag` for every `i`, with `n` the raw
    /// vector length minus one.
    pub fn is_palindromic(&self, tol: f64) -> bool {
        self.symmetry_defect(1.0) <= tol
    }

    /// `|c[i] + c[n-i]| <= tol * maxmag` for every `i`.
    pub fn is_antipalindromic(&self, tol: f64) -> bool {
        self.symmetry_defect(-1.0) <= tol
    }

    /// Largest `|c[i] - sign * c[n-i]|`, relative to the largest magnitude.
    pub fn symmetry_defect(&self, sign: f64) -> f64 {
        let max = self.max_magnitude();
        if max == 0.0 {
            return 0.0;
        }
        let n = self.coeffs.len() - 1;
        (0..=n / 2)
            .map(|i| (self.coeffs[i] - self.coeffs[n - i] * sign).norm())
            .fold(0.0, f64::max)
            / max
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::constant(Complex64::new(0.0, 0.0));
        }
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect(),
        }
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&c| c * k).collect(),
        }
    }

    /// Multiplies by `z^k`.
    pub fn shift(&self, k: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k];
        coeffs.extend_from_slice(&self.coeffs);
        Self { coeffs }
    }

    /// Long division by `divisor` (trimmed). Returns `(quotient, remainder)`.
    pub fn div_rem(&self, divisor: &Polynomial) -> Result<(Polynomial, Polynomial), PolyError> {
        if divisor.is_zero() {
            return Err(PolyError::ZeroDivisor);
        }
        let d = divisor.trimmed();
        let dd = d.coeffs.len() - 1;
        let mut rem = self.trimmed().coeffs;
        if rem.len() <= dd {
            return Ok((Self::constant(Complex64::new(0.0, 0.0)), Self::new(rem)));
        }
        let lead = d.coeffs[dd];
        let qlen = rem.len() - dd;
        let mut quot = vec![Complex64::new(0.0, 0.0); qlen];
        for k in (0..qlen).rev() {
            let q = rem[k + dd] / lead;
            quot[k] = q;
            for (j, &dc) in d.coeffs.iter().enumerate() {
                rem[k + j] -= q * dc;
            }
        }
        rem.truncate(dd.max(1));
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Largest `|Im c|` relative to the largest coefficient magnitude.
    pub fn max_relative_imag(&self) -> f64 {
        let max = self.max_magnitude();
        if max == 0.0 {
            return 0.0;
        }
        self.coeffs.iter().map(|c| c.im.abs()).fold(0.0, f64::max) / max
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}

impl From<Vec<Complex64>> for Polynomial {
    fn from(coeffs: Vec<Complex64>) -> Self {
        Self::new(coeffs)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial { coeffs: out }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Complex64::new(0.0, 0.0);
        Polynomial {
            coeffs: (0..n)
                .map(|i| {
                    self.coeffs.get(i).copied().unwrap_or(zero)
                        + rhs.coeffs.get(i).copied().unwrap_or(zero)
                })
                .collect(),
        }
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|&c| -c).collect(),
        }
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

/// Convolution of coefficient vectors.
pub fn poly_mul(p: &Polynomial, q: &Polynomial) -> Polynomial {
    p * q
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn reciprocal_reverses_raw_vector() {
        let a = c(3.0, -1.0);
        let kim = Polynomial::new(vec![
            c(1., 0.),
            c(4., 0.),
            c(6., 0.),
            c(4., 0.),
            c(1.0, 0.0) - a,
        ]);
        assert_eq!(
            kim.reciprocal().coeffs(),
            &[c(1.0, 0.0) - a, c(4., 0.), c(6., 0.), c(4., 0.), c(1., 0.)]
        );
        assert_eq!(
            Polynomial::from_real(&[1.0]).reciprocal(),
            Polynomial::from_real(&[1.0])
        );
        let p = Polynomial::new(vec![c(2.0, 0.0), c(0.0, 3.0)]);
        assert_eq!(p.reciprocal().coeffs(), &[c(0.0, 3.0), c(2.0, 0.0)]);
        let padded = Polynomial::from_real(&[1.0, 2.0, 0.0]);
        assert_eq!(padded.reciprocal().reciprocal(), padded);
    }

    #[test]
    fn palindromic_predicates() {
        assert!(Polynomial::from_real(&[1., 2., 3., 2., 1.]).is_palindromic(0.0));
        assert!(!Polynomial::from_real(&[1., 2., 3., 2., 1.]).is_antipalindromic(1e-12));
        assert!(!Polynomial::from_real(&[1., 2., -2., -1.]).is_palindromic(1e-12));
        assert!(Polynomial::from_real(&[1., 2., -2., -1.]).is_antipalindromic(0.0));
        assert!(Polynomial::from_real(&[1., 0., -1.]).is_antipalindromic(0.0));
        for a in [c(0.3, 0.0), c(-2.0, 5.0), c(17.0, -3.5)] {
            let one = c(1.0, 0.0);
            let kim3 = Polynomial::new(vec![a - one, -a - 4.0, a - 6.0, -a - 4.0, a - one]);
            assert!(kim3.is_palindromic(1e-15));
        }
    }

    #[test]
    fn multiplication_and_derivative() {
        let p = Polynomial::from_real(&[1., 1.]);
        assert_eq!(
            (&p * &p).coeffs(),
            Polynomial::from_real(&[1., 2., 1.]).coeffs()
        );
        let shift = Polynomial::from_real(&[0., 1.]);
        let q = Polynomial::new(vec![c(2.0, 1.0), c(-1.0, 4.0)]);
        assert_eq!(
            (&shift * &q).coeffs(),
            &[c(0., 0.), c(2.0, 1.0), c(-1.0, 4.0)]
        );

        assert_eq!(
            Polynomial::from_real(&[5.]).derivative(),
            Polynomial::from_real(&[0.])
        );
        assert_eq!(
            Polynomial::from_real(&[1., 4., 6., 4., 1.]).derivative(),
            Polynomial::from_real(&[4., 12., 12., 4.])
        );
        assert_eq!(
            Polynomial::from_real(&[0., 0., 1.]).derivative(),
            Polynomial::from_real(&[0., 2.])
        );
    }

    #[test]
    fn degree_is_relative() {
        let p = Polynomial::from_real(&[1e6, 2.0, 1e-7]);
        assert_eq!(p.degree(), 1);
        assert_eq!(Polynomial::from_real(&[1e-20, 1e-20]).degree(), 1);
        assert_eq!(Polynomial::from_real(&[0.0]).degree(), 0);
    }

    #[test]
    fn division_recovers_factor() {
        let f = Polynomial::from_real(&[1., 4., 6., 4., 1.]);
        let g = Polynomial::from_real(&[-3., -2., -8., -2., -3.]);
        let (q, r) = (&f * &g).div_rem(&f).unwrap();
        assert!(r.max_magnitude() < 1e-12);
        for (a, b) in q.coeffs().iter().zip(g.coeffs()) {
            assert!((a - b).norm() < 1e-12);
        }
        let (q, r) = Polynomial::from_real(&[1., 0., 1.])
            .div_rem(&Polynomial::from_real(&[1., 1.]))
            .unwrap();
        assert_eq!(q, Polynomial::from_real(&[-1., 1.]));
        assert_eq!(r, Polynomial::from_real(&[2.]));
        assert_eq!(
            Polynomial::from_real(&[1.]).div_rem(&Polynomial::from_real(&[0.])),
            Err(PolyError::ZeroDivisor)
        );
    }
}
