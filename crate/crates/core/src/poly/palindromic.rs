//! The `x = z + 1/z` substitution for palindromic polynomials.
//!
//! A palindromic polynomial of degree `2m` equals `z^m q(z + 1/z)` for a
//! polynomial `q` of degree `m`, so its roots come from solving `q` and
//! lifting each root `x` back through `z^2 - x z + 1 = 0`.

use num_complex::Complex64;

use super::{roots, PolyError, Polynomial};

const PEEL_RESIDUAL_TOL: f64 = 1e-10;
const REAL_COEFF_TOL: f64 = 1e-10;
const CLASSIFY_TOL: f64 = 1e-8;
/// Relative modulus difference below which `c` and `1/c` count as a tie.
const TIE_TOL: f64 = 1e-9;

/// Returns `q` with `z^m q(z + 1/z) = p(z)`, where `2m` is the degree of `p`.
///
/// Peels coefficients from the top against `z^(m-j) (z^2 + 1)^j`; whatever
/// is left over must be numerically zero or `p` was not palindromic.
pub fn reduce_palindromic(p: &Polynomial) -> Result<Polynomial, PolyError> {
    let p = p.trimmed();
    let deg = p.len() - 1;
    if deg % 2 == 1 {
        return Err(PolyError::OddDegree(deg));
    }
    let m = deg / 2;
    let scale = p.max_magnitude();
    let mut rem: Vec<Complex64> = p.coeffs().to_vec();
    let mut q = vec![Complex64::new(0.0, 0.0); m + 1];

    for j in (0..=m).rev() {
        let qj = rem[m + j];
        q[j] = qj;
        // z^(m-j) (z^2+1)^j = sum_i C(j,i) z^(m-j+2i)
        let mut binom = 1.0;
        for i in 0..=j {
            rem[m - j + 2 * i] -= qj * binom;
            binom = binom * (j - i) as f64 / (i + 1) as f64;
        }
    }

    let residual = if scale == 0.0 {
        0.0
    } else {
        rem.iter().map(|c| c.norm()).fold(0.0, f64::max) / scale
    };
    if residual > PEEL_RESIDUAL_TOL {
        return Err(PolyError::NotPalindromic { residual });
    }
    Ok(Polynomial::new(q))
}

/// Orders the symmetric pair `{c, partner}`: the member of larger modulus
/// first, and on the unit circle the one with nonnegative imaginary part.
pub fn symmetry_representative(c: Complex64, partner: Complex64) -> (Complex64, Complex64) {
    let (mc, mp) = (c.norm(), partner.norm());
    if (mc - mp).abs() <= TIE_TOL * mc.max(mp) {
        if c.im >= partner.im {
            (c, partner)
        } else {
            (partner, c)
        }
    } else if mc > mp {
        (c, partner)
    } else {
        (partner, c)
    }
}

/// The two solutions `(z, 1/z)` of `z^2 - x z + 1 = 0`, representative
/// first. `x = ±2` gives the double root `±1` twice.
pub fn lift_root(x: Complex64) -> (Complex64, Complex64) {
    let mut disc = (x * x - 4.0).sqrt();
    if (x.conj() * disc).re < 0.0 {
        disc = -disc;
    }
    let big = (x + disc) * 0.5;
    symmetry_representative(big, big.inv())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootClass {
    /// `{r, 1/r}` with `r` real.
    InverseRealPair,
    /// `{w, conj(w)}` with `|w| = 1`.
    UnitCircleConjugatePair,
    /// `{w, 1/w, conj(w), 1/conj(w)}`.
    QuarticQuadruple,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootClassification {
    pub kind: RootClass,
    pub roots: Vec<Complex64>,
}

/// Groups the roots of a real palindromic polynomial of even degree by how
/// they sit relative to the real axis and the unit circle.
pub fn classify_palindromic_roots(p: &Polynomial) -> Result<Vec<RootClassification>, PolyError> {
    let max_imag = p.max_relative_imag();
    if max_imag > REAL_COEFF_TOL {
        return Err(PolyError::NonRealCoefficients { max_imag });
    }
    let q = reduce_palindromic(p)?;
    if q.trimmed().len() < 2 {
        return Ok(Vec::new());
    }
    let xs = roots(&q)?;

    let mut out = Vec::new();
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for x in xs {
        if x.im.abs() <= CLASSIFY_TOL * x.norm().max(1.0) {
            let xr = Complex64::new(x.re, 0.0);
            let (z, w) = lift_root(xr);
            let kind = if x.re.abs() >= 2.0 {
                RootClass::InverseRealPair
            } else {
                RootClass::UnitCircleConjugatePair
            };
            out.push(RootClassification {
                kind,
                roots: vec![z, w],
            });
        } else if x.im > 0.0 {
            upper.push(x);
        } else {
            lower.push(x);
        }
    }

    for x in upper {
        let partner = lower
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - x.conj()).norm().total_cmp(&(b.1 - x.conj()).norm()))
            .map(|(i, _)| i);
        let xb = match partner {
            Some(i) => lower.swap_remove(i),
            None => x.conj(),
        };
        let (z1, w1) = lift_root(x);
        let (z2, w2) = lift_root(xb);
        out.push(RootClassification {
            kind: RootClass::QuarticQuadruple,
            roots: vec![z1, w1, z2, w2],
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::{match_root_sets, solve_poly_oracle, solve_quadratic};
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn reduce_generic_quartic() {
        let (b, cc) = (c(1.5, -0.5), c(-3.0, 2.0));
        let one = c(1.0, 0.0);
        let q = reduce_palindromic(&Polynomial::new(vec![one, b, cc, b, one])).unwrap();
        assert_eq!(q.coeffs(), &[cc - 2.0, b, one]);
    }

    #[test]
    fn reduce_kim_quartic_matches_printed_quadratic() {
        let a = c(-7.3, 2.1);
        let one = c(1.0, 0.0);
        let p = Polynomial::new(vec![a - one, -a - 4.0, a - 6.0, -a - 4.0, a - one]);
        let q = reduce_palindromic(&p).unwrap();
        let ours = solve_quadratic(q.coeffs()[2], q.coeffs()[1], q.coeffs()[0]).unwrap();
        let printed = solve_quadratic(one - a, a + 4.0, a + 4.0).unwrap();
        assert!(match_root_sets(&ours, &printed) < 1e-12);
    }

    #[test]
    fn reduce_rejects_bad_input() {
        assert_eq!(
            reduce_palindromic(&Polynomial::from_real(&[1., 2., 3., 4.])),
            Err(PolyError::OddDegree(3))
        );
        assert!(matches!(
            reduce_palindromic(&Polynomial::from_real(&[1., 2., 3., 4., 5.])),
            Err(PolyError::NotPalindromic { .. })
        ));
    }

    #[test]
    fn lift_examples() {
        assert_eq!(lift_root(c(2.0, 0.0)), (c(1.0, 0.0), c(1.0, 0.0)));
        let (z, w) = lift_root(c(0.0, 0.0));
        assert!((z - c(0.0, 1.0)).norm() < 1e-15 && (w - c(0.0, -1.0)).norm() < 1e-15);

        // Kim a = -2 reduces to 3x^2 + 2x + 2
        let x = c(-1.0, 5f64.sqrt()) / 3.0;
        assert!((c(3., 0.) * x * x + x * 2.0 + 2.0).norm() < 1e-14);
        let (z, w) = lift_root(x);
        assert!((z + z.inv() - x).norm() < 1e-12);
        assert!((z * w - 1.0).norm() < 1e-12);
        assert!(z.norm() >= 1.0);
    }

    #[test]
    fn classify_examples() {
        let g = classify_palindromic_roots(&Polynomial::from_real(&[1., 3., 1.])).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].kind, RootClass::InverseRealPair);
        assert!(g[0].roots.iter().all(|z| z.im.abs() < 1e-12));

        let g = classify_palindromic_roots(&Polynomial::from_real(&[1., 1., 1.])).unwrap();
        assert_eq!(g[0].kind, RootClass::UnitCircleConjugatePair);
        assert!(g[0].roots.iter().all(|z| (z.norm() - 1.0).abs() < 1e-12));
        assert!((g[0].roots[0] - g[0].roots[1].conj()).norm() < 1e-12);

        let p = Polynomial::from_real(&[1., 1., 3., 1., 1.]);
        let g = classify_palindromic_roots(&p).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].kind, RootClass::QuarticQuadruple);
        let oracle = solve_poly_oracle(&p).unwrap();
        assert!(match_root_sets(&g[0].roots, &oracle) < 1e-10);
        for z in &g[0].roots {
            assert!(g[0].roots.iter().any(|w| (w - z.inv()).norm() < 1e-8));
            assert!(g[0].roots.iter().any(|w| (w - z.conj()).norm() < 1e-8));
        }
    }

    #[test]
    fn classify_rejects_complex_coefficients() {
        let p = Polynomial::new(vec![c(1., 0.), c(0., 1.), c(1., 0.)]);
        assert!(matches!(
            classify_palindromic_roots(&p),
            Err(PolyError::NonRealCoefficients { .. })
        ));
    }
}
