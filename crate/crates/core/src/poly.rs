use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_traits::Zero;

use crate::exact::{falling_factorial, format_rational, int, Rational};
use crate::series::PowerSeries;

/// Dense univariate polynomial over the rationals; index `k` holds the
/// coefficient of `x^k`. Trailing zeros are always stripped.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PolyQ {
    coeffs: Vec<Rational>,
}

impl PolyQ {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        PolyQ { coeffs }
    }

    pub fn zero() -> Self {
        PolyQ::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// `k`-th derivative.
    pub fn derivative(&self, k: usize) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(k)
                .map(|(j, c)| c * falling_factorial(&int(j as i64), k))
                .collect(),
        )
    }

    /// `integral_a^b p(x) dx`.
    pub fn integrate(&self, a: &Rational, b: &Rational) -> Rational {
        let anti = Self::new(
            std::iter::once(Rational::zero())
                .chain(
                    self.coeffs
                        .iter()
                        .enumerate()
                        .map(|(j, c)| c / int(j as i64 + 1)),
                )
                .collect(),
        );
        anti.eval(b) - anti.eval(a)
    }

    /// The polynomial as a power series truncated at `order`.
    pub fn to_series(&self, order: usize) -> PowerSeries {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, Rational::zero());
        coeffs.truncate(order + 1);
        PowerSeries::from_coeffs(coeffs)
    }

    /// Substitutes a series (no constant term required) for `x`.
    pub fn compose_series(&self, inner: &PowerSeries) -> PowerSeries {
        let order = inner.order();
        let mut acc = PowerSeries::zero(order);
        for c in self.coeffs.iter().rev() {
            acc = &acc * inner;
            acc = &acc + &PowerSeries::constant(c.clone(), order);
        }
        acc
    }
}

impl<'a> Add<&'a PolyQ> for &'a PolyQ {
    type Output = PolyQ;
    fn add(self, rhs: &PolyQ) -> PolyQ {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolyQ::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<'a> Sub<&'a PolyQ> for &'a PolyQ {
    type Output = PolyQ;
    fn sub(self, rhs: &PolyQ) -> PolyQ {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolyQ::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<'a> Mul<&'a PolyQ> for &'a PolyQ {
    type Output = PolyQ;
    fn mul(self, rhs: &PolyQ) -> PolyQ {
        if self.is_zero() || rhs.is_zero() {
            return PolyQ::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        PolyQ::new(coeffs)
    }
}

impl fmt::Display for PolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format_rational(c),
                1 => format!("({})*x", format_rational(c)),
                _ => format!("({})*x^{k}", format_rational(c)),
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn p(cs: &[i64]) -> PolyQ {
        PolyQ::new(cs.iter().map(|&c| int(c)).collect())
    }

    #[test]
    fn normalization() {
        assert_eq!(p(&[1, 2, 0, 0]), p(&[1, 2]));
        assert_eq!(p(&[0, 0]).degree(), None);
        assert!(p(&[0]).is_zero());
        assert_eq!(p(&[3, 0, 1]).degree(), Some(2));
    }

    #[test]
    fn arithmetic_and_eval() {
        let a = p(&[1, 1]);
        let b = p(&[-1, 1]);
        assert_eq!(&a * &b, p(&[-1, 0, 1]));
        assert_eq!(&a - &a, PolyQ::zero());
        assert_eq!((&a + &b).eval(&rat(3, 2)), int(3));
        assert_eq!(p(&[1, 3, 1]).eval(&int(2)), int(11));
    }

    #[test]
    fn calculus() {
        let q = p(&[5, 0, 3, 2]);
        assert_eq!(q.derivative(1), p(&[0, 6, 6]));
        assert_eq!(q.derivative(2), p(&[6, 12]));
        assert_eq!(q.derivative(4), PolyQ::zero());
        // integral_{-1}^0 x^k dx = (-1)^k / (k + 1)
        assert_eq!(
            PolyQ::monomial(int(1), 3).integrate(&int(-1), &int(0)),
            rat(-1, 4)
        );
        assert_eq!(
            PolyQ::monomial(int(1), 2).integrate(&int(-1), &int(0)),
            rat(1, 3)
        );
    }

    #[test]
    fn series_substitution() {
        // (1 + x)^2 at x = t + t^2
        let inner = PowerSeries::from_coeffs(vec![int(0), int(1), int(1), int(0), int(0)]);
        let s = p(&[1, 2, 1]).compose_series(&inner);
        assert_eq!(s.coeffs(), &[int(1), int(2), int(3), int(2), int(1)]);
    }
}
