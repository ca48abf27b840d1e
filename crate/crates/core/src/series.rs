//! Truncated formal power series with exact rational coefficients.
//!
//! A series of order `N` stores `[t^0], ..., [t^N]`. Binary operations
//! truncate to the smaller operand order. Fractional powers are realized as
//! `exp(c * log(f))` on series with constant term 1, so every coefficient
//! stays rational.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{factorial, int, Rational};
use crate::stirling::HsuShiueParams;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<Rational>,
}

impl PowerSeries {
    /// Builds a series from coefficients; the order is `coeffs.len() - 1`.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a power series needs at least [t^0]");
        PowerSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        PowerSeries {
            coeffs: vec![Rational::zero(); order + 1],
        }
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    /// `c * t^j`, truncated.
    pub fn monomial(c: Rational, j: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if j <= order {
            s.coeffs[j] = c;
        }
        s
    }

    /// The formal variable `t`.
    pub fn variable(order: usize) -> Self {
        Self::monomial(Rational::one(), 1, order)
    }

    /// `1 + c t`.
    pub fn linear(c: Rational, order: usize) -> Self {
        let mut s = Self::one(order);
        if order >= 1 {
            s.coeffs[1] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    /// `[t^j]`, zero beyond the truncation order.
    pub fn coeff(&self, j: usize) -> Rational {
        self.coeffs.get(j).cloned().unwrap_or_else(Rational::zero)
    }

    /// `n! [t^n]`, the value read off an exponential generating function.
    pub fn egf_coeff(&self, n: usize) -> Rational {
        self.coeff(n) * Rational::from_integer(factorial(n))
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs: Vec<Rational> = self.coeffs.iter().take(order + 1).cloned().collect();
        coeffs.resize(order + 1, Rational::zero());
        PowerSeries { coeffs }
    }

    /// Index of the first nonzero coefficient; `None` for the zero series.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        let order = self.order().min(other.order());
        PowerSeries {
            coeffs: (0..=order)
                .map(|i| f(&self.coeffs[i], &other.coeffs[i]))
                .collect(),
        }
    }

    /// Drops the first `v` coefficients (division by `t^v`).
    fn shift_down(&self, v: usize) -> Self {
        PowerSeries {
            coeffs: self.coeffs[v..].to_vec(),
        }
    }

    /// Exact quotient. Both operands are divided by `t^v` first, where `v` is
    /// the valuation of the divisor, so the result has order
    /// `min(order) - v`.
    pub fn divide(&self, divisor: &Self) -> Result<Self> {
        let v = divisor
            .valuation()
            .ok_or_else(|| Error::SeriesDomain("division by the zero series".into()))?;
        let order = self.order().min(divisor.order());
        if v > order {
            return Err(Error::SeriesDomain(
                "divisor valuation exceeds the truncation order".into(),
            ));
        }
        if let Some(va) = self.valuation() {
            if va < v {
                return Err(Error::SeriesDomain(format!(
                    "dividend valuation {va} is below divisor valuation {v}"
                )));
            }
        }
        let a = self.truncate(order).shift_down(v);
        let b = divisor.truncate(order).shift_down(v);
        let lead = b.coeffs[0].recip();
        let mut q: Vec<Rational> = Vec::with_capacity(a.coeffs.len());
        for n in 0..a.coeffs.len() {
            let mut acc = a.coeffs[n].clone();
            for k in 1..=n {
                acc -= &b.coeffs[k] * &q[n - k];
            }
            q.push(acc * &lead);
        }
        Ok(PowerSeries { coeffs: q })
    }

    /// Multiplicative inverse of a series with nonzero constant term.
    pub fn recip(&self) -> Result<Self> {
        if self.coeffs[0].is_zero() {
            return Err(Error::SeriesDomain(
                "reciprocal needs a nonzero constant term".into(),
            ));
        }
        Self::one(self.order()).divide(self)
    }

    /// Formal exponential; requires a zero constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::SeriesDomain("exp needs a zero constant term".into()));
        }
        // b' = a' b  =>  n b_n = sum_{k=1}^n k a_k b_{n-k}
        let mut b = vec![Rational::one()];
        for n in 1..self.coeffs.len() {
            let mut acc = Rational::zero();
            for k in 1..=n {
                acc += &self.coeffs[k] * &b[n - k] * int(k as i64);
            }
            b.push(acc / int(n as i64));
        }
        Ok(PowerSeries { coeffs: b })
    }

    /// Formal logarithm; requires constant term 1.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::SeriesDomain("log needs constant term 1".into()));
        }
        // g' = f'/f  =>  n g_n = n f_n - sum_{k=1}^{n-1} k g_k f_{n-k}
        let mut g = vec![Rational::zero()];
        for n in 1..self.coeffs.len() {
            let mut acc = &self.coeffs[n] * int(n as i64);
            for k in 1..n {
                acc -= &g[k] * &self.coeffs[n - k] * int(k as i64);
            }
            g.push(acc / int(n as i64));
        }
        Ok(PowerSeries { coeffs: g })
    }

    /// `f^c = exp(c log f)` for a series with constant term 1.
    pub fn pow(&self, c: &Rational) -> Result<Self> {
        self.log()?.scale(c).exp()
    }

    pub fn pow_u(&self, e: u32) -> Self {
        let mut acc = Self::one(self.order());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Substitutes `inner` (valuation >= 1) for the variable.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::SeriesDomain(
                "composition needs an inner series without constant term".into(),
            ));
        }
        let order = self.order().min(inner.order());
        let inner = inner.truncate(order);
        let mut acc = Self::zero(order);
        for c in self.coeffs[..=order].iter().rev() {
            acc = &acc * &inner;
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }
}

impl<'a> Add<&'a PowerSeries> for &'a PowerSeries {
    type Output = PowerSeries;
    fn add(self, rhs: &PowerSeries) -> PowerSeries {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl<'a> Sub<&'a PowerSeries> for &'a PowerSeries {
    type Output = PowerSeries;
    fn sub(self, rhs: &PowerSeries) -> PowerSeries {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl<'a> Mul<&'a PowerSeries> for &'a PowerSeries {
    type Output = PowerSeries;
    fn mul(self, rhs: &PowerSeries) -> PowerSeries {
        let order = self.order().min(rhs.order());
        let mut coeffs = vec![Rational::zero(); order + 1];
        for (i, a) in self.coeffs[..=order].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs[..=order - i].iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        PowerSeries { coeffs }
    }
}

impl Neg for &PowerSeries {
    type Output = PowerSeries;
    fn neg(self) -> PowerSeries {
        self.scale(&int(-1))
    }
}

/// `exp(c t)`, coefficients `c^j / j!`.
pub fn exp_linear(c: &Rational, order: usize) -> PowerSeries {
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut term = Rational::one();
    for j in 0..=order {
        if j > 0 {
            term = term * c / int(j as i64);
        }
        coeffs.push(term.clone());
    }
    PowerSeries::from_coeffs(coeffs)
}

/// `log(1 + t)`.
pub fn log1p(order: usize) -> PowerSeries {
    let coeffs = (0..=order)
        .map(|j| match j {
            0 => Rational::zero(),
            _ if j % 2 == 1 => Rational::new(1.into(), (j as i64).into()),
            _ => Rational::new((-1).into(), (j as i64).into()),
        })
        .collect();
    PowerSeries::from_coeffs(coeffs)
}

/// `(1 + alpha t)^(c/alpha)`, or its limit `exp(c t)` when `alpha = 0`.
pub fn binom_deform(alpha: &Rational, c: &Rational, order: usize) -> PowerSeries {
    if alpha.is_zero() {
        return exp_linear(c, order);
    }
    PowerSeries::linear(alpha.clone(), order)
        .pow(&(c / alpha))
        .expect("1 + alpha t has constant term 1")
}

/// `((1 + alpha t)^(beta/alpha) - 1) / beta` with its limits:
/// `(e^(beta t) - 1)/beta` at `alpha = 0`, `log(1 + alpha t)/alpha` at
/// `beta = 0`, and `t` when both vanish.
pub fn deformed_increment(alpha: &Rational, beta: &Rational, order: usize) -> PowerSeries {
    match (alpha.is_zero(), beta.is_zero()) {
        (_, false) => {
            let mut s = binom_deform(alpha, beta, order);
            s.coeffs[0] -= Rational::one();
            s.scale(&beta.recip())
        }
        (false, true) => PowerSeries::linear(alpha.clone(), order)
            .log()
            .expect("constant term 1")
            .scale(&alpha.recip()),
        (true, true) => PowerSeries::variable(order),
    }
}

/// Column `k` of the Stirling generating function,
/// `(1/k!) D(t)^k (1 + alpha t)^(r/alpha)` with `D` from [`deformed_increment`].
pub fn gf_stirling_column(params: &HsuShiueParams, k: usize, order: usize) -> PowerSeries {
    let d = deformed_increment(params.alpha(), params.beta(), order);
    let weight = binom_deform(params.alpha(), params.r(), order);
    let kfact = Rational::from_integer(factorial(k));
    (&d.pow_u(k as u32) * &weight).scale(&kfact.recip())
}

/// Generating function of `w_n^(m)(x)`:
/// `(1 - x((1 + alpha t)^(beta/alpha) - 1))^(-m) (1 + alpha t)^(r/alpha)`.
/// Valid for every integer order `m`, including `m <= 0`.
pub fn gf_w(params: &HsuShiueParams, m: i64, x: &Rational, order: usize) -> PowerSeries {
    let mut inc = binom_deform(params.alpha(), params.beta(), order);
    inc.coeffs[0] -= Rational::one();
    let base = &PowerSeries::one(order) - &inc.scale(x);
    let powered = base.pow(&int(-m)).expect("constant term 1");
    &powered * &binom_deform(params.alpha(), params.r(), order)
}

/// `(2 / ((1 + alpha t)^(1/alpha) + 1))^s (1 + alpha t)^(x/alpha)`, the
/// higher order degenerate Euler generating function. `alpha = 0` gives the
/// classical `(2/(e^t + 1))^s e^(x t)`.
pub fn gf_degenerate_euler(s: u32, alpha: &Rational, x: &Rational, order: usize) -> PowerSeries {
    let mut denom = binom_deform(alpha, &Rational::one(), order);
    denom.coeffs[0] += Rational::one();
    let base = PowerSeries::constant(int(2), order)
        .divide(&denom)
        .expect("constant term 2");
    &base.pow_u(s) * &binom_deform(alpha, x, order)
}

/// `(1 + alpha t)^(1/alpha) - 1` (or `e^t - 1`) at one order above `order`,
/// ready to be divided into a valuation-1 numerator.
fn unit_increment(alpha: &Rational, order: usize) -> PowerSeries {
    let mut s = binom_deform(alpha, &Rational::one(), order + 1);
    s.coeffs[0] -= Rational::one();
    s
}

/// Degenerate Bernoulli polynomials of the second kind:
/// `[(1/alpha) log(1 + alpha t) / ((1 + alpha t)^(1/alpha) - 1)] (1 + alpha t)^(x/alpha)`;
/// `alpha = 0` gives `t e^(x t)/(e^t - 1)`.
pub fn gf_bernoulli2_degenerate(alpha: &Rational, x: &Rational, order: usize) -> PowerSeries {
    let numer = deformed_increment(alpha, &Rational::zero(), order + 1);
    let ratio = numer
        .divide(&unit_increment(alpha, order))
        .expect("both operands have valuation 1");
    &ratio * &binom_deform(alpha, x, order)
}

/// Carlitz degenerate Bernoulli polynomials:
/// `t / ((1 + alpha t)^(1/alpha) - 1) (1 + alpha t)^(x/alpha)`.
pub fn gf_carlitz_beta(alpha: &Rational, x: &Rational, order: usize) -> PowerSeries {
    let ratio = PowerSeries::variable(order + 1)
        .divide(&unit_increment(alpha, order))
        .expect("both operands have valuation 1");
    &ratio * &binom_deform(alpha, x, order)
}

/// Classical Bernoulli numbers `B_0..=B_order` from `t/(e^t - 1)`.
pub fn bernoulli_numbers(order: usize) -> Vec<Rational> {
    let gf = gf_carlitz_beta(&Rational::zero(), &Rational::zero(), order);
    (0..=order).map(|n| gf.egf_coeff(n)).collect()
}
