use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use super::{NewtonLikeOperator, OperatorError};
use crate::poly::Polynomial;

/// The four one-parameter operator families in the catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    /// Fourth-order methods from the Kim family; `n = 4`, `k = 4`.
    Kim4,
    /// Multipoint variant of Chebyshev's method; `n = 3`, `k = 3`.
    ChebyshevMultipoint,
    /// Ermakov–Kalitkin type methods; `n = 3`, `k = 2`.
    ErmakovKalitkin,
    /// Sixth-order scheme with three free critical orbits; `n = 6`, `k = 6`.
    SixthOrder,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 4] = [
        Self::Kim4,
        Self::ChebyshevMultipoint,
        Self::ErmakovKalitkin,
        Self::SixthOrder,
    ];

    pub fn cli_name(self) -> &'static str {
        match self {
            Self::Kim4 => "kim",
            Self::ChebyshevMultipoint => "cheby",
            Self::ErmakovKalitkin => "ermakov",
            Self::SixthOrder => "sixth",
        }
    }

    pub fn exponent(self) -> u32 {
        match self {
            Self::Kim4 => 4,
            Self::ChebyshevMultipoint | Self::ErmakovKalitkin => 3,
            Self::SixthOrder => 6,
        }
    }

    /// Number of free critical points up to the `c <-> 1/c` symmetry.
    pub fn free_critical_count(self) -> usize {
        match self {
            Self::SixthOrder => 3,
            _ => 2,
        }
    }

    /// Denominator coefficients `d_0..d_k` at parameter `a`.
    pub fn denominator(self, a: Complex64) -> Vec<Complex64> {
        let one = Complex64::new(1.0, 0.0);
        let a2 = a * a;
        match self {
            Self::Kim4 => vec![one, one * 4.0, one * 6.0, one * 4.0, one - a],
            Self::ChebyshevMultipoint => {
                vec![
                    one,
                    one * 4.0 - a * 4.0,
                    a2 * 4.0 - a * 8.0 + 5.0,
                    one * 2.0 - a * 4.0,
                ]
            }
            Self::ErmakovKalitkin => vec![(a - 1.0) * 2.0, (a - 1.0) * 4.0, a2 + a * 2.0 - 2.0],
            Self::SixthOrder => vec![
                one,
                one * 8.0 - a * 2.0,
                a2 - a * 12.0 + 28.0,
                a2 * 4.0 - a * 30.0 + 56.0,
                a2 * 6.0 - a * 40.0 + 69.0,
                a2 * 4.0 - a * 28.0 + 48.0,
                one * 10.0 - a * 4.0,
            ],
        }
    }

    /// Factors of the derivative numerator whose roots are preimages of
    /// `z = 1` rather than free critical points.
    pub fn known_factors(self, a: Complex64) -> Vec<Polynomial> {
        let one = Complex64::new(1.0, 0.0);
        let plus_one_4 = Polynomial::from_real(&[1., 4., 6., 4., 1.]);
        match self {
            Self::Kim4 => vec![plus_one_4],
            Self::ChebyshevMultipoint => vec![Polynomial::new(vec![one, one * 2.0 - a * 2.0, one])],
            Self::ErmakovKalitkin => Vec::new(),
            Self::SixthOrder => vec![plus_one_4, Polynomial::new(vec![-one, a - 2.0, -one])],
        }
    }

    /// The palindromic polynomial whose roots are the free critical points,
    /// with the coefficients as published for each family.
    pub fn critical_polynomial(self, a: Complex64) -> Polynomial {
        let a2 = a * a;
        let a3 = a2 * a;
        let c = match self {
            Self::Kim4 => {
                let (e, m) = (a - 1.0, -a - 4.0);
                vec![e, m, a - 6.0, m, e]
            }
            Self::ChebyshevMultipoint => {
                let e = a * 6.0 - 3.0;
                let m = a * 22.0 - a2 * 12.0 - 12.0;
                vec![e, m, a3 * 8.0 - a2 * 24.0 + a * 32.0 - 18.0, m, e]
            }
            Self::ErmakovKalitkin => {
                let e = (a - 1.0) * (a2 + a * 2.0 - 2.0) * 6.0;
                let m = (a - 1.0) * (a2 + a * 6.0 - 6.0) * 8.0;
                vec![
                    e,
                    m,
                    a2 * a2 + a3 * 4.0 + a2 * 68.0 - a * 144.0 + 72.0,
                    m,
                    e,
                ]
            }
            Self::SixthOrder => {
                let e = a * 6.0 - 15.0;
                let m1 = a * 63.0 - a2 * 11.0 - 94.0;
                let m2 = a3 * 5.0 - a2 * 49.0 + a * 170.0 - 205.0;
                vec![
                    e,
                    m1,
                    m2,
                    a3 * 5.0 - a2 * 56.0 + a * 206.0 - 252.0,
                    m2,
                    m1,
                    e,
                ]
            }
        };
        Polynomial::new(c)
    }

    /// Coefficients (ascending) of the published cubic in `x = z + 1/z` for
    /// the sixth-order family.
    pub fn sixth_order_reduced_cubic(a: Complex64) -> [Complex64; 4] {
        let a2 = a * a;
        let a3 = a2 * a;
        [
            a3 * 5.0 - a2 * 34.0 + a * 80.0 - 64.0,
            a3 * 5.0 - a2 * 49.0 + a * 152.0 - 160.0,
            a * 63.0 - a2 * 11.0 - 94.0,
            a * 6.0 - 15.0,
        ]
    }

    /// Parameter window of the published joint parameter plane.
    pub fn default_parameter_window(self) -> [f64; 4] {
        match self {
            Self::Kim4 => [-55.0, 85.0, -70.0, 70.0],
            Self::ChebyshevMultipoint => [-1.5, 3.9, -4.5, 4.5],
            Self::ErmakovKalitkin => [-27.0, 13.0, -20.0, 20.0],
            Self::SixthOrder => [3.4, 4.6, -0.6, 0.6],
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.cli_name())
    }
}

impl FromStr for FamilyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.cli_name() == s)
            .ok_or_else(|| format!("unknown family '{s}' (expected kim, cheby, ermakov or sixth)"))
    }
}

/// A family together with a parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyId {
    pub kind: FamilyKind,
    pub a: Complex64,
}

impl FamilyId {
    pub fn new(kind: FamilyKind, a: Complex64) -> Self {
        Self { kind, a }
    }

    pub fn degenerate_error(&self) -> OperatorError {
        OperatorError::DegenerateParameter {
            family: self.kind,
            a: self.a,
        }
    }
}

/// The operator of `family` at its parameter. Parameters where the constant
/// or top denominator coefficient vanishes are rejected.
pub fn instantiate(family: FamilyId) -> Result<NewtonLikeOperator, OperatorError> {
    let den = Polynomial::new(family.kind.denominator(family.a));
    NewtonLikeOperator::new(family.kind.exponent(), den).map_err(|e| match e {
        OperatorError::DegenerateDenominator => family.degenerate_error(),
        other => other,
    })
}
