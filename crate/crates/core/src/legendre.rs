//! Shifted Legendre polynomials as exact integer polynomials.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exactnum::{binomial, Rational};

/// Dense polynomial with integer coefficients; `coeffs[k]` multiplies `x^k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    /// Builds a polynomial, dropping trailing zero coefficients.
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Exact Horner evaluation.
    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + Rational::from_integer(c.clone()))
    }

    /// Horner evaluation in f64. Adequate for the small degrees used by the
    /// quadrature oracles; the exact path is [`IntPolynomial::eval`].
    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// The polynomial q(x) = p(1 − x), expanded exactly.
    pub fn reflect(&self) -> Self {
        // (1 - x)^k expanded with binomials, accumulated term by term
        let n = self.coeffs.len();
        let mut out = vec![BigInt::zero(); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            for (j, slot) in out.iter_mut().enumerate().take(k + 1) {
                let b = binomial(k as u64, j as u64) * c;
                if j % 2 == 0 {
                    *slot += b;
                } else {
                    *slot -= b;
                }
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Sum of absolute values of the coefficients.
    pub fn l1_norm(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }
}

impl fmt::Display for IntPolynomial {
    /// Space-separated coefficients in increasing degree, e.g. `1 -6 6`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Coefficient of x^k in P_n: (−1)^k C(n,k) C(n+k,n).
pub fn legendre_coefficient(n: u64, k: u64) -> BigInt {
    let mag = binomial(n, k) * binomial(n + k, n);
    if k.is_multiple_of(2) {
        mag
    } else {
        -mag
    }
}

/// The shifted Legendre polynomial P_n(x) = (1/n!) dⁿ/dxⁿ [xⁿ(1−x)ⁿ], built
/// from its integer-coefficient expansion.
pub fn shifted_legendre(n: u64) -> IntPolynomial {
    // C(n,k) and C(n+k,n) both update by a single rational factor per step
    let mut coeffs = Vec::with_capacity(n as usize + 1);
    let mut c_nk = BigInt::one();
    let mut c_nkn = BigInt::one();
    for k in 0..=n {
        if k > 0 {
            c_nk = c_nk * (n - k + 1) / k;
            c_nkn = c_nkn * (n + k) / k;
        }
        let mag = &c_nk * &c_nkn;
        coeffs.push(if k % 2 == 0 { mag } else { -mag });
    }
    IntPolynomial::new(coeffs)
}

pub fn eval_poly(p: &IntPolynomial, x: &Rational) -> Rational {
    p.eval(x)
}

/// C_n = Σ_{k=0}^{n} C(n,k)·C(n+k,n), the bound |P_n(x)| ≤ C_n on [0, 1].
pub fn coeff_bound_c(n: u64) -> BigInt {
    (0..=n).map(|k| binomial(n, k) * binomial(n + k, n)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| int(x)).collect()
    }

    /// Oracle: expand xⁿ(1−x)ⁿ, differentiate n times term by term, divide by n!.
    fn legendre_by_derivative(n: u64) -> IntPolynomial {
        let base: Vec<BigInt> = (0..=2 * n)
            .map(|j| {
                if j < n {
                    BigInt::zero()
                } else {
                    let i = j - n;
                    let b = binomial(n, i);
                    if i.is_multiple_of(2) { b } else { -b }
                }
            })
            .collect();
        let mut fact = BigInt::one();
        for i in 1..=n {
            fact *= i;
        }
        let mut out = Vec::new();
        for k in 0..=n {
            // d^n/dx^n x^(k+n) = (k+n)!/k! x^k
            let mut falling = BigInt::one();
            for t in (k + 1)..=(k + n) {
                falling *= t;
            }
            out.push(&base[(k + n) as usize] * falling / &fact);
        }
        IntPolynomial::new(out)
    }

    #[test]
    fn small_cases() {
        assert_eq!(shifted_legendre(0).coeffs(), ints(&[1]).as_slice());
        assert_eq!(shifted_legendre(1).coeffs(), ints(&[1, -2]).as_slice());
        assert_eq!(shifted_legendre(2).coeffs(), ints(&[1, -6, 6]).as_slice());
        assert_eq!(shifted_legendre(2).to_string(), "1 -6 6");
    }

    #[test]
    fn matches_derivative_definition() {
        for n in 0..=25 {
            assert_eq!(shifted_legendre(n), legendre_by_derivative(n), "n={n}");
        }
    }

    #[test]
    fn closed_form_coefficients() {
        for n in 0..=20u64 {
            let p = shifted_legendre(n);
            assert_eq!(p.degree(), Some(n as usize));
            for k in 0..=n {
                assert_eq!(p.coeffs()[k as usize], legendre_coefficient(n, k));
            }
        }
    }

    #[test]
    fn evaluations() {
        let p1 = shifted_legendre(1);
        assert_eq!(eval_poly(&p1, &rat(0, 1)), rat(1, 1));
        assert_eq!(eval_poly(&p1, &rat(1, 2)), rat(0, 1));
        assert_eq!(eval_poly(&shifted_legendre(2), &rat(1, 1)), rat(1, 1));
    }

    #[test]
    fn bound_values() {
        assert_eq!(coeff_bound_c(0), int(1));
        assert_eq!(coeff_bound_c(1), int(3));
        assert_eq!(coeff_bound_c(2), int(13));
    }

    #[test]
    fn l1_norm_equals_bound() {
        for n in 0..=50 {
            assert_eq!(shifted_legendre(n).l1_norm(), coeff_bound_c(n), "n={n}");
        }
    }

    #[test]
    fn endpoint_values() {
        for n in 0..=50u64 {
            let p = shifted_legendre(n);
            assert_eq!(p.eval(&rat(0, 1)), rat(1, 1));
            let sign = if n % 2 == 0 { 1 } else { -1 };
            assert_eq!(p.eval(&rat(1, 1)), rat(sign, 1));
        }
    }

    #[test]
    fn reflection_symmetry() {
        for n in 0..=30u64 {
            let p = shifted_legendre(n);
            let expected = if n % 2 == 0 { p.clone() } else { p.scale(&int(-1)) };
            assert_eq!(p.reflect(), expected, "n={n}");
        }
    }

    #[test]
    fn zero_polynomial_normalizes() {
        let z = IntPolynomial::new(ints(&[0, 0]));
        assert!(z.is_zero());
        assert_eq!(z.degree(), None);
        assert_eq!(IntPolynomial::new(ints(&[3, 0])).degree(), Some(0));
    }

    #[test]
    fn bounded_by_c_on_unit_interval() {
        for n in [1u64, 3, 7, 12, 20] {
            let p = shifted_legendre(n);
            let c = Rational::from_integer(coeff_bound_c(n));
            for i in 1..40 {
                let v = p.eval(&rat(i, 40));
                assert!(v.abs() <= c);
                assert!(v.abs() <= rat(1, 1));
            }
        }
    }
}
